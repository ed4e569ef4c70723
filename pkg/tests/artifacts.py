"""Emit a seeded bundle of certificates and verdicts as one JSON document.

Run twice (in fresh interpreters) and compare the bytes to check determinism.
"""

import json
import sys

from zeroprod.exact_linalg import QQ, PrimeField
from zeroprod.fixtures import GenSpec, named_examples, random_dzp_map, random_jordan_map, random_zpp_map
from zeroprod.jordan import decompose_dzp, jordan_canonical_form, split_jordan
from zeroprod.nilspace import canonicalize_trivial_mult, generate_pattern_subspace
from zeroprod.structure import decompose_zpp
from zeroprod.verify import check_idempotent_preserver, check_zpp, fuzz_preserver, sample_zero_pair


def bundle(seed: int) -> dict:
    out = {}
    for fname, f in (("Q", QQ), ("GF(7)", PrimeField(7))):
        for name, phi in named_examples(f).items():
            out[f"zpp/{fname}/{name}"] = check_zpp(phi).to_json()
            out[f"fuzz/{fname}/{name}"] = fuzz_preserver(phi, "zpp", 50, seed).to_json()
        for i in range(6):
            spec = GenSpec(2 + i % 2, 2 * (i % 3) + 3 + i % 2, i % 3, fname, seed + i, "trivial_mult")
            phi, truth = random_zpp_map(spec)
            out[f"gen/{fname}/{i}"] = {"map": phi.to_json(), "truth": truth.to_json(),
                                       "cert": decompose_zpp(phi).to_json()}
        phi = random_jordan_map(2, 5, 1, 1, f, seed)
        out[f"jordan/{fname}"] = {"split": split_jordan(phi).to_json(), "jcf": jordan_canonical_form(phi).to_json(),
                                  "idem": check_idempotent_preserver(phi, seed).to_json()}
        phi, _, _ = random_dzp_map(2, 4, 1, 1, f, seed)
        out[f"dzp/{fname}"] = decompose_dzp(phi, seed).to_json()
        out[f"pair/{fname}"] = sample_zero_pair(3, f, seed, True).to_json()
    F = PrimeField(11)
    basis = generate_pattern_subspace(6, 2, 2, 1, 2, 3, F, seed, full_support=True)
    out["nilspace"] = canonicalize_trivial_mult(basis, seed).to_json()
    return out


def main():
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    sys.stdout.write(json.dumps(bundle(seed), sort_keys=True, indent=2) + "\n")


if __name__ == "__main__":
    main()
