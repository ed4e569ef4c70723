"""Exact decision procedures and randomized falsifiers for preserver properties.

All the bilinear properties (zero-product preservation for n >= 2, ring and
Jordan homomorphisms, trivial multiplication) reduce to identities between
products of unit images, so they are checked on the n^2 x n^2 grid of unit
pairs in one batched product.  Failures carry a witness that :func:`recheck`
re-evaluates from scratch with plain matrix arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import NotPreserverError, PreconditionError, UnsupportedError, VerificationError
from .exact_linalg import Field, Mat, PrimeField, kernel_basis, rank
from .linmap import LinMap, MatPair

IDEMPOTENT_BUDGET = 10 ** 6
IDEMPOTENT_SAMPLES = 256


# -- witnesses ---------------------------------------------------------------

@dataclass(frozen=True)
class IdentityViolation:
    """A unit-index instance of an identity whose two sides differ.

    ``indices`` are 1-based: (i, j, k, l) for the pair (E_ij, E_kl), or (a, b)
    for basis positions in pairwise checks.
    """

    identity: str
    indices: tuple
    lhs: Mat
    rhs: Mat

    def to_json(self):
        return {
            "type": "identity_violation",
            "identity": self.identity,
            "indices": list(self.indices),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        }


@dataclass(frozen=True)
class PairCounterexample:
    """A zero-product pair whose images do not multiply to zero.

    ``kind`` is "zpp" (AB = 0) or "dzp" (AB = BA = 0).  ``product`` is
    Phi(A)Phi(B), or Phi(B)Phi(A) when ``reversed`` is set.
    """

    A: Mat
    B: Mat
    product: Mat
    kind: str = "zpp"
    reversed: bool = False
    source: IdentityViolation | None = None

    def to_json(self):
        out = {
            "type": "pair",
            "kind": self.kind,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "product": self.product.to_json(),
            "product_order": "Phi(B)Phi(A)" if self.reversed else "Phi(A)Phi(B)",
        }
        if self.source is not None:
            out["source"] = self.source.to_json()
        return out


@dataclass(frozen=True)
class IdempotentCounterexample:
    """An idempotent P with Phi(P)^2 != Phi(P)."""

    P: Mat
    image: Mat

    def to_json(self):
        return {"type": "idempotent", "P": self.P.to_json(), "image": self.image.to_json()}


@dataclass(frozen=True)
class PowerCounterexample:
    """A matrix A and exponent e with Phi(A)^e != 0 where zero was required."""

    A: Mat
    exponent: int
    value: Mat

    def to_json(self):
        return {"type": "power", "A": self.A.to_json(), "exponent": self.exponent, "value": self.value.to_json()}


Witness = Union[IdentityViolation, PairCounterexample, IdempotentCounterexample, PowerCounterexample]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None
    mode: str = "exact"
    trials: int | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.to_json(),
            "mode": self.mode,
            "trials": self.trials,
        }
        if self.details:
            out["details"] = self.details
        return out


# -- batched unit products -----------------------------------------------------

def _units(f: Field, n: int) -> list[Mat]:
    return [Mat.unit(f, n, i, j) for i in range(n) for j in range(n)]


def _pair_products(phi: LinMap):
    """X (n^2, r, r) integer images scaled by d, and P[a, b] = X_a X_b."""
    f = phi.field
    X, d = f.integer_stack(list(m.a for m in phi.images)) if phi.r else (phi.stack(), 1)
    P = f.reduce(np.matmul(X[:, None], X[None, :]))
    return X, d, P


def _delta_grid(n: int):
    """For unit indices a=(i,j), b=(k,l): jk[a, b] = (j == k), il[a, b] = i*n + l."""
    idx = np.arange(n * n)
    i, j = np.divmod(idx, n)
    jk = j[:, None] == i[None, :]
    il = i[:, None] * n + j[None, :]
    return jk, il


def _first(mask: np.ndarray, b_major: bool = False):
    hits = np.argwhere(mask.T if b_major else mask)
    if not len(hits):
        return None
    x, y = (int(v) for v in hits[0])
    return (y, x) if b_major else (x, y)


def _ij(a: int, n: int) -> tuple[int, int]:
    return divmod(a, n)


def _differs(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if lhs.size == 0:
        return np.zeros(lhs.shape[:2], dtype=bool)
    return np.any((lhs != rhs).reshape(lhs.shape[0], lhs.shape[1], -1), axis=2)


# -- ZPP ------------------------------------------------------------------------

def zpp_violations(phi: LinMap) -> np.ndarray:
    """Boolean grid over unit pairs (a, b) where Phi(E_a)Phi(E_b) != Phi(I)Phi(E_a E_b)."""
    n, f = phi.n, phi.field
    X, d, P = _pair_products(phi)
    jk, il = _delta_grid(n)
    XI = f.reduce(sum(X[i * n + i] for i in range(n)))
    IX = f.reduce(np.matmul(XI[None], X))  # Phi(I)Phi(E_c), scaled by d^2
    rhs = IX[il] * jk[:, :, None, None]
    return _differs(P, f.reduce(rhs))


def _unit_products(phi: LinMap, a: int, b: int):
    return phi.images[a] @ phi.images[b]


def _zpp_upgrade(phi: LinMap, i, j, k, l, violation: IdentityViolation) -> PairCounterexample | None:
    """Turn a violated ZPP identity into an explicit pair with AB = 0."""
    f, n = phi.field, phi.n
    E = lambda a, b: Mat.unit(f, n, a, b)
    I = Mat.identity(f, n)
    if j != k:
        cands = [(E(i, j), E(k, l))]
    elif i == j:
        cands = [(I - E(j, j), E(j, l))]
    else:
        F = E(i, i) + E(i, j)
        cands = [(I - F, E(i, l)), (F, E(j, l) - E(i, l)), (E(i, i), E(j, l))]
    for A, B in cands:
        assert (A @ B).is_zero()
        prod = phi.apply(A) @ phi.apply(B)
        if not prod.is_zero():
            return PairCounterexample(A, B, prod, "zpp", False, violation)
    return None


def check_zpp(phi: LinMap) -> Verdict:
    """Exact zero-product-preservation test.

    For n >= 2 the map preserves zero products iff
    Phi(E_ij)Phi(E_kl) = Phi(I)Phi(E_ij E_kl) for every unit pair.  Every linear
    map on M_1 preserves zero products.
    """
    n = phi.n
    if n == 1 or phi.r == 0:
        return Verdict(True, details={"identities": n ** 4})
    bad = zpp_violations(phi)
    hit = _first(bad, b_major=True)
    if hit is None:
        return Verdict(True, details={"identities": n ** 4})
    a, b = hit
    (i, j), (k, l) = _ij(a, n), _ij(b, n)
    lhs = _unit_products(phi, a, b)
    rhs = phi.at_identity() @ (phi.images[i * n + l] if j == k else Mat.zeros(phi.field, phi.r))
    viol = IdentityViolation("zpp", (i + 1, j + 1, k + 1, l + 1), lhs, rhs)
    pair = _zpp_upgrade(phi, i, j, k, l, viol)
    if pair is None:
        raise VerificationError("zero-product identity failed but no explicit pair was found")
    return Verdict(False, pair, details={"violations": int(bad.sum())})


# -- homomorphism-type identities ---------------------------------------------

def check_ring_hom(phi: LinMap) -> Verdict:
    """Phi(E_ij)Phi(E_kl) = delta_jk Phi(E_il) on all unit pairs."""
    n, f = phi.n, phi.field
    if phi.r == 0:
        return Verdict(True)
    X, d, P = _pair_products(phi)
    jk, il = _delta_grid(n)
    rhs = f.reduce(X[il] * jk[:, :, None, None] * d)
    hit = _first(_differs(P, rhs))
    if hit is None:
        return Verdict(True)
    a, b = hit
    (i, j), (k, l) = _ij(a, n), _ij(b, n)
    lhs = _unit_products(phi, a, b)
    rhs_m = phi.images[i * n + l] if j == k else Mat.zeros(f, phi.r)
    return Verdict(False, IdentityViolation("ring_hom", (i + 1, j + 1, k + 1, l + 1), lhs, rhs_m))


def _require_odd_char(f: Field, what: str):
    if f.char == 2:
        raise UnsupportedError(f"{what} requires a field of characteristic other than 2")


def check_jordan(phi: LinMap) -> Verdict:
    """Phi(AB + BA) = Phi(A)Phi(B) + Phi(B)Phi(A) on all unit pairs (char != 2)."""
    _require_odd_char(phi.field, "the Jordan identity check")
    n, f = phi.n, phi.field
    if phi.r == 0:
        return Verdict(True)
    X, d, P = _pair_products(phi)
    jk, il = _delta_grid(n)
    # E_ij E_kl + E_kl E_ij = d_jk E_il + d_li E_kj
    sym = f.reduce(P + P.transpose(1, 0, 2, 3))
    lhs = f.reduce((X[il] * jk[:, :, None, None] + X[il.T] * jk.T[:, :, None, None]) * d)
    hit = _first(_differs(sym, lhs))
    if hit is None:
        return Verdict(True)
    a, b = hit
    (i, j), (k, l) = _ij(a, n), _ij(b, n)
    A, B = Mat.unit(f, n, i, j), Mat.unit(f, n, k, l)
    left = phi.apply(A @ B + B @ A)
    right = phi.apply(A) @ phi.apply(B) + phi.apply(B) @ phi.apply(A)
    return Verdict(False, IdentityViolation("jordan", (i + 1, j + 1, k + 1, l + 1), left, right))


def check_trivial_mult(phi: LinMap) -> Verdict:
    """All products of two range elements vanish: Phi(E_ij)Phi(E_kl) = 0."""
    if phi.r == 0:
        return Verdict(True)
    n = phi.n
    _, _, P = _pair_products(phi)
    hit = _first(_differs(P, np.zeros_like(P)))
    if hit is None:
        return Verdict(True)
    a, b = hit
    (i, j), (k, l) = _ij(a, n), _ij(b, n)
    return Verdict(False, IdentityViolation("trivial_mult", (i + 1, j + 1, k + 1, l + 1),
                                            _unit_products(phi, a, b), Mat.zeros(phi.field, phi.r)))


def check_pairwise_zero(basis: list[Mat]) -> Verdict:
    """B_a B_b = 0 for all ordered pairs, a = b included."""
    for a, A in enumerate(basis):
        for b, B in enumerate(basis):
            prod = A @ B
            if not prod.is_zero():
                return Verdict(False, IdentityViolation("pairwise_zero", (a + 1, b + 1), prod,
                                                        Mat.zeros(A.field, A.rows, B.cols)))
    return Verdict(True)


# -- idempotents ------------------------------------------------------------------

def rank_one_idempotents(f: Field, n: int, rng: random.Random,
                         budget: int = IDEMPOTENT_BUDGET, samples: int = IDEMPOTENT_SAMPLES):
    """Rank-one idempotents x y^t with y^t x = 1.

    Over GF(p) with p^(2n-2) <= budget the whole (deduplicated) family is
    listed, x normalised to have leading entry 1.  Otherwise ``samples``
    random ones are drawn.  Returns ``(list, exhaustive)``.
    """
    if isinstance(f, PrimeField) and f.p ** (2 * n - 2) <= budget:
        p, out = f.p, []
        for lead in range(n):
            for tail in itertools.product(range(p), repeat=n - lead - 1):
                x = [0] * lead + [1] + list(tail)
                for free in itertools.product(range(p), repeat=n - 1):
                    y = list(free[:lead]) + [0] + list(free[lead:])
                    y[lead] = (1 - sum(y[t] * x[t] for t in range(n) if t != lead)) % p
                    out.append(Mat(f, [[xi * yj for yj in y] for xi in x]))
        return out, True
    out = []
    while len(out) < samples:
        x = [f.random(rng) for _ in range(n)]
        y = [f.random(rng) for _ in range(n)]
        s = f(sum(a * b for a, b in zip(x, y)))
        if s == 0:
            continue
        s = f.inv(s)
        out.append(Mat(f, [[f(xi * yj * s) for yj in y] for xi in x]))
    return out, False


def _idempotent_failures(phi: LinMap, idems: list[Mat]):
    for P in idems:
        img = phi.apply(P)
        if img @ img != img:
            yield P, img


def check_idempotent_preserver(phi: LinMap, seed: int = 0, budget: int = IDEMPOTENT_BUDGET,
                               samples: int = IDEMPOTENT_SAMPLES) -> Verdict:
    """Idempotent preservation, decided through the Jordan identity (char != 2).

    Rank-one idempotents (and their complements) are checked as well: they
    must all pass when the Jordan identity holds, and when it fails they often
    supply an explicit idempotent whose image is not idempotent.
    """
    jordan = check_jordan(phi)
    f, n = phi.field, phi.n
    idems, exhaustive = rank_one_idempotents(f, n, random.Random(seed), budget, samples)
    I = Mat.identity(f, n)
    idems = idems + [I] + [I - P for P in idems]
    found = next(_idempotent_failures(phi, idems), None)
    details = {"idempotents_checked": len(idems), "enumeration": "exhaustive" if exhaustive else "sampled"}
    if jordan.holds:
        if found is not None:
            raise VerificationError("Jordan identity holds but an idempotent image is not idempotent")
        return Verdict(True, details=details)
    if found is not None:
        return Verdict(False, IdempotentCounterexample(*found), details=details)
    details["note"] = "no explicit idempotent counterexample among those checked"
    return Verdict(False, jordan.witness, details=details)


def check_rank_one_square_zero(phi: LinMap, seed: int = 0, budget: int = IDEMPOTENT_BUDGET,
                               samples: int = IDEMPOTENT_SAMPLES) -> Verdict:
    """Phi(alpha E)^2 = 0 for rank-one idempotents E and nonzero scalars alpha."""
    rng = random.Random(seed)
    idems, exhaustive = rank_one_idempotents(phi.field, phi.n, rng, budget, samples)
    for E in idems:
        A = E.scale(phi.field.random_nonzero(rng))
        img = phi.apply(A)
        sq = img @ img
        if not sq.is_zero():
            return Verdict(False, PowerCounterexample(A, 2, sq), mode="exact" if exhaustive else "randomized",
                           trials=len(idems))
    return Verdict(True, mode="exact" if exhaustive else "randomized", trials=len(idems))


# -- sampling ---------------------------------------------------------------

def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_matrix(f: Field, rows: int, cols: int, rng: random.Random) -> Mat:
    return Mat(f, [[f.random(rng) for _ in range(cols)] for _ in range(rows)], rows=rows, cols=cols)


def random_full_rank(f: Field, rows: int, cols: int, rng: random.Random) -> Mat:
    while True:
        M = random_matrix(f, rows, cols, rng)
        if rank(M) == min(rows, cols):
            return M


def random_invertible(f: Field, n: int, rng: random.Random) -> Mat:
    return random_full_rank(f, n, n, rng)


def sample_zero_pair(n: int, f: Field, seed, double: bool = False) -> MatPair:
    """A random pair with AB = 0 (and BA = 0 when ``double``).

    rank(A) is uniform on {0, ..., n}, so pairs (invertible, 0) stay in the
    support; A = XY with X, Y of full rank, and B is a uniformly random element
    of the solution space of the linear constraints.
    """
    rng = _rng(seed)
    k = rng.randint(0, n)
    A = random_full_rank(f, n, k, rng) @ random_full_rank(f, k, n, rng) if k else Mat.zeros(f, n)
    rows = []
    # B flattened row-major: b[j*n + l] = B_jl
    for i in range(n):
        for l in range(n):
            row = [f.zero] * (n * n)
            for j in range(n):
                row[j * n + l] = A[i, j]
            rows.append(row)
    if double:
        for i in range(n):
            for l in range(n):
                row = [f.zero] * (n * n)
                for j in range(n):
                    row[i * n + j] = A[j, l]
                rows.append(row)
    basis = kernel_basis(Mat(f, rows))
    vec = Mat.zeros(f, n * n, 1)
    for v in basis:
        vec = vec + v.scale(f.random(rng))
    B = Mat(f, [[vec[j * n + l, 0] for l in range(n)] for j in range(n)])
    pair = MatPair(A, B)
    assert (A @ B).is_zero() and (not double or (B @ A).is_zero())
    return pair


def fuzz_preserver(phi: LinMap, prop: str = "zpp", trials: int = 1000, seed: int = 0) -> Verdict:
    """Randomized falsifier.  ``holds`` only means no counterexample was sampled."""
    if prop not in ("zpp", "dzp"):
        raise PreconditionError(f"unknown property {prop!r} for fuzzing")
    if trials < 1:
        raise PreconditionError("trials must be positive")
    rng = random.Random(seed)
    for t in range(trials):
        pair = sample_zero_pair(phi.n, phi.field, rng, double=(prop == "dzp"))
        fa, fb = phi.apply(pair.A), phi.apply(pair.B)
        prod = fa @ fb
        if not prod.is_zero():
            return Verdict(False, PairCounterexample(pair.A, pair.B, prod, prop), "randomized", t + 1)
        if prop == "dzp":
            prod = fb @ fa
            if not prod.is_zero():
                return Verdict(False, PairCounterexample(pair.A, pair.B, prod, prop, True), "randomized", t + 1)
    return Verdict(True, None, "randomized", trials)


def check_power_products(phi: LinMap, nu: int, tuples: int = 100, seed: int = 0) -> Verdict:
    """Products of nu+1 images of random matrices vanish when Phi is ZPP and Phi(I)^nu = 0."""
    if nu < 0:
        raise PreconditionError("nu must be nonnegative")
    zpp = check_zpp(phi)
    if not zpp.holds:
        raise NotPreserverError("map does not preserve zero products", zpp)
    if not phi.at_identity().power(nu).is_zero():
        raise PreconditionError(f"Phi(I)^{nu} is not zero")
    rng = random.Random(seed)
    f, n = phi.field, phi.n
    for t in range(tuples):
        mats = [random_matrix(f, n, n, rng) for _ in range(nu + 1)]
        prod = Mat.identity(f, phi.r)
        for A in mats:
            prod = prod @ phi.apply(A)
        if not prod.is_zero():
            raise VerificationError(f"product of {nu + 1} images is nonzero for a zero-product preserver")
    return Verdict(True, None, "randomized", tuples, {"nu": nu})


# -- independent re-evaluation ------------------------------------------------------

def recheck(phi: LinMap, w: Witness) -> bool:
    """True iff the witness is a genuine violation for ``phi``."""
    f, n = phi.field, phi.n
    if isinstance(w, PairCounterexample):
        AB, BA = w.A @ w.B, w.B @ w.A
        if not AB.is_zero() or (w.kind == "dzp" and not BA.is_zero()):
            return False
        fa, fb = phi.apply(w.A), phi.apply(w.B)
        prod = fb @ fa if w.reversed else fa @ fb
        return prod == w.product and not prod.is_zero()
    if isinstance(w, IdempotentCounterexample):
        img = phi.apply(w.P)
        return w.P @ w.P == w.P and img == w.image and img @ img != img
    if isinstance(w, PowerCounterexample):
        val = phi.apply(w.A).power(w.exponent)
        return val == w.value and not val.is_zero()
    if isinstance(w, IdentityViolation):
        i, j, k, l = (x - 1 for x in w.indices)
        A, B = Mat.unit(f, n, i, j), Mat.unit(f, n, k, l)
        fa, fb = phi.apply(A), phi.apply(B)
        if w.identity == "zpp":
            lhs, rhs = fa @ fb, phi.at_identity() @ phi.apply(A @ B)
        elif w.identity == "ring_hom":
            lhs, rhs = fa @ fb, phi.apply(A @ B)
        elif w.identity == "jordan":
            lhs, rhs = phi.apply(A @ B + B @ A), fa @ fb + fb @ fa
        elif w.identity == "trivial_mult":
            lhs, rhs = fa @ fb, Mat.zeros(f, phi.r)
        else:
            raise ValueError(f"cannot recheck identity {w.identity!r} against a map")
        return lhs != rhs and lhs == w.lhs and rhs == w.rhs
    raise TypeError(f"unknown witness type {type(w).__name__}")


def recheck_pairwise(basis: list[Mat], w: IdentityViolation) -> bool:
    a, b = (x - 1 for x in w.indices)
    prod = basis[a] @ basis[b]
    return not prod.is_zero() and prod == w.lhs
