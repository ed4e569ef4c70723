"""Command-line front end.

Every verb reads one JSON document (``--in``, default stdin) and writes one
JSON document (``--out``, default stdout).  Exit codes: 0 success / property
holds, 1 property fails or input is not a preserver (witness in the output),
2 malformed input or unsupported parameters, 3 internal verification failure
or an inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    DimensionError,
    FieldError,
    InconclusiveError,
    NotPreserverError,
    PreconditionError,
    SingularMatrixError,
    UnsupportedError,
    VerificationError,
)
from .exact_linalg import QQ, Mat, field_from_name
from .fixtures import GenSpec, named_examples, random_zpp_map
from .jordan import decompose_dzp, dzp_gate, jordan_canonical_form, split_jordan
from .linmap import LinMap
from .nilspace import canonicalize_trivial_mult
from .structure import canonicalize_unital_hom, classify_scalar_domain, decompose_zpp, small_codomain_classify
from .verify import (
    Verdict,
    check_idempotent_preserver,
    check_jordan,
    check_ring_hom,
    check_trivial_mult,
    check_zpp,
    fuzz_preserver,
)

EXIT_OK, EXIT_FAIL, EXIT_BAD_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code, message, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _read(path):
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_BAD_INPUT, f"cannot read JSON input: {exc}") from None


def _map(args) -> LinMap:
    return LinMap.from_json(_read(args.inp))


# -- verbs -----------------------------------------------------------------------------

def cmd_check(args):
    phi = _map(args)
    prop = args.property
    if prop == "zpp":
        v = check_zpp(phi)
    elif prop == "dzp":
        if phi.n < 2 or phi.field.char == 2:
            raise UnsupportedError("dzp checks need n >= 2 and characteristic other than 2")
        v = dzp_gate(phi)
        if v.holds:
            v = fuzz_preserver(phi, "dzp", args.trials, args.seed)
    elif prop == "jordan":
        v = check_jordan(phi)
    elif prop == "ring":
        v = check_ring_hom(phi)
    elif prop == "idem":
        v = check_idempotent_preserver(phi, args.seed)
    else:
        v = check_trivial_mult(phi)
    out = v.to_json()
    out["property"] = prop
    return out, EXIT_OK if v.holds else EXIT_FAIL


def cmd_decompose(args):
    phi = _map(args)
    if args.property == "zpp":
        cert = classify_scalar_domain(phi) if phi.n == 1 else decompose_zpp(phi)
    elif args.property == "dzp":
        cert = decompose_dzp(phi, args.seed)
    else:
        cert = jordan_canonical_form(phi)
    out = cert.to_json()
    out["property"] = args.property
    return out, EXIT_OK


def cmd_split_jordan(args):
    return split_jordan(_map(args)).to_json(), EXIT_OK


def cmd_canon_hom(args):
    S1, k = canonicalize_unital_hom(_map(args))
    return {"S1": S1.to_json(), "k": k, "verified": True}, EXIT_OK


def cmd_canon_nilspace(args):
    doc = _read(args.inp)
    try:
        f = field_from_name(doc.get("field", "Q"))
        l = int(doc["l"])
        basis = [Mat.from_json(f, m) for m in doc["basis"]]
    except (KeyError, TypeError) as exc:
        raise CliError(EXIT_BAD_INPUT, f"subspace JSON needs l and basis ({exc})") from None
    if any(m.shape != (l, l) for m in basis):
        raise DimensionError(f"basis matrices must be {l}x{l}")
    return canonicalize_trivial_mult(basis, args.seed).to_json(), EXIT_OK


def cmd_classify_small(args):
    return small_codomain_classify(_map(args)).to_json(), EXIT_OK


def cmd_gen(args):
    doc = _read(args.inp)
    if not isinstance(doc, dict):
        raise CliError(EXIT_BAD_INPUT, "generator spec must be a JSON object")
    try:
        spec = GenSpec.from_json(doc)
    except TypeError as exc:
        raise CliError(EXIT_BAD_INPUT, f"bad generator spec: {exc}") from None
    phi, truth = random_zpp_map(spec)
    return {"spec": spec.to_json(), "map": phi.to_json(), "truth": truth.to_json()}, EXIT_OK


def cmd_fuzz(args):
    phi = _map(args)
    v = fuzz_preserver(phi, args.property, args.trials, args.seed)
    out = v.to_json()
    out["property"] = args.property
    return out, EXIT_OK if v.holds else EXIT_FAIL


def cmd_examples(args):
    f = QQ
    if args.inp is not None:
        doc = _read(args.inp)
        f = field_from_name(doc.get("field", "Q")) if isinstance(doc, dict) else QQ
    return {name: m.to_json() for name, m in named_examples(f).items()}, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zeroprod", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def io(p, inp=True):
        if inp:
            p.add_argument("--in", dest="inp", default="-", help="input JSON path (default: stdin)")
        p.add_argument("--out", default=None, help="output JSON path (default: stdout)")

    p = sub.add_parser("check", help="decide a property of a map")
    p.add_argument("--property", choices=["zpp", "dzp", "jordan", "ring", "idem", "trivial"], default="zpp")
    p.add_argument("--trials", type=int, default=1000, help="fuzzing trials for dzp")
    p.add_argument("--seed", type=int, default=0)
    io(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("decompose", help="certified canonical form")
    p.add_argument("--property", choices=["zpp", "dzp", "jordan"], default="zpp")
    p.add_argument("--seed", type=int, default=0)
    io(p)
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("split-jordan", help="homomorphism + anti-homomorphism split")
    io(p)
    p.set_defaults(run=cmd_split_jordan)

    p = sub.add_parser("canon-hom", help="I_k kron A form of a unital homomorphism")
    io(p)
    p.set_defaults(run=cmd_canon_hom)

    p = sub.add_parser("canon-nilspace", help="block pattern of a trivial-multiplication subspace")
    p.add_argument("--seed", type=int, default=0)
    io(p)
    p.set_defaults(run=cmd_canon_nilspace)

    p = sub.add_parser("classify-small", help="zero-product preservers with r <= n + 1")
    io(p)
    p.set_defaults(run=cmd_classify_small)

    p = sub.add_parser("gen", help="random zero-product preserver from a generator spec")
    io(p)
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("fuzz", help="randomized search for a counterexample")
    p.add_argument("--property", choices=["zpp", "dzp"], default="zpp")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    io(p)
    p.set_defaults(run=cmd_fuzz)

    p = sub.add_parser("examples", help="emit the named example maps")
    p.add_argument("--in", dest="inp", default=None, help='optional {"field": ...} document (default Q)')
    io(p, inp=False)
    p.set_defaults(run=cmd_examples)
    return ap


def _emit(doc, path):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_BAD_INPUT
    if getattr(args, "trials", 1) < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        doc, code = args.run(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.payload is not None:
            _emit(exc.payload, args.out)
        return exc.code
    except NotPreserverError as exc:
        print(f"not a preserver: {exc}", file=sys.stderr)
        verdict = exc.verdict if exc.verdict is not None else Verdict(False)
        _emit({"error": str(exc), "holds": False, "verdict": verdict.to_json()}, args.out)
        return EXIT_FAIL
    except (VerificationError, InconclusiveError) as exc:
        print(f"internal: {exc}", file=sys.stderr)
        _emit({"error": str(exc), "kind": type(exc).__name__}, args.out)
        return EXIT_INTERNAL
    except (UnsupportedError, PreconditionError, DimensionError, FieldError, SingularMatrixError,
            KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": str(exc), "kind": type(exc).__name__}, args.out)
        return EXIT_BAD_INPUT
    _emit(doc, args.out)
    return code


def main():
    sys.exit(run())
