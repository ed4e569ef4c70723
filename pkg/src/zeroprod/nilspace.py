"""Matrix subspaces with trivial multiplication.

If every product of two elements of a subspace V of M_l vanishes (and the
field has more than (l+2)/2 elements), one similarity S0 puts all of V into
the block pattern

    [ 0_p  Z12  Z13 ]      Z13 supported in its top-left u x v corner,
    [ 0    0_p  0   ]      Z32 supported in its bottom-right corner,
    [ 0    Z32  0_q ]      2p + q = l, p = max rank over V.

Finding an element of maximal rank is the only search step; the result is
only returned when p is certified maximal (see ``TrivialMultForm.certificate``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import InconclusiveError, NotPreserverError, PreconditionError, UnsupportedError, VerificationError
from .exact_linalg import (
    Mat,
    PrimeField,
    column_basis,
    complete_basis,
    direct_sum,
    hstack,
    inverse,
    kernel_matrix,
    rank,
    row_basis,
    vstack,
)
from .verify import Verdict, check_pairwise_zero, random_matrix

SEARCH_FACTOR = 16
EXHAUSTIVE_BUDGET = 10 ** 6
MAX_CANDIDATES = 8


@dataclass(frozen=True)
class TrivialMultForm:
    """S0 and block sizes (p, q, u, v) of the canonical pattern.

    ``certificate`` says why p is the maximal rank over the span:
    "c_block_zero", "z32_zero" or "z13_zero" (a rank bound read off the
    pattern), "exhaustive" (every element was ranked), or "zero_span".
    """

    S0: Mat
    p: int
    q: int
    u: int
    v: int
    certificate: str

    @property
    def l(self) -> int:
        return self.S0.rows

    def to_json(self) -> dict:
        return {"S0": self.S0.to_json(), "l": self.l, "p": self.p, "q": self.q, "u": self.u, "v": self.v,
                "certificate": self.certificate}


def _blocks(Z: Mat, p: int):
    """3x3 block grid with sizes (p, p, q)."""
    cuts = [0, p, 2 * p, Z.rows]
    return [[Z.block(cuts[a], cuts[a + 1], cuts[b], cuts[b + 1]) for b in range(3)] for a in range(3)]


def matches_pattern(Z: Mat, p: int, q: int, u: int, v: int) -> bool:
    """Whether Z (already conjugated) lies in the canonical pattern."""
    if Z.rows != 2 * p + q:
        return False
    B = _blocks(Z, p)
    zero = [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (2, 2)]
    if any(not B[a][b].is_zero() for a, b in zero):
        return False
    Z13, Z32 = B[0][2], B[2][1]
    if not (Z13.block(u, p, 0, q).is_zero() and Z13.block(0, p, v, q).is_zero()):
        return False
    return Z32.block(0, v, 0, p).is_zero() and Z32.block(0, q, 0, u).is_zero()


def check_field_size(f, l: int):
    """The canonical form needs more than (l+2)/2 field elements."""
    if isinstance(f, PrimeField) and not 2 * f.p > l + 2:
        raise UnsupportedError(f"{f.name} has too few elements for l = {l} (need more than {(l + 2) / 2})")


def reduce_basis(mats: list[Mat]) -> list[Mat]:
    """A linearly independent subset spanning the same space (first-found order)."""
    if not mats:
        return []
    f = mats[0].field
    rows = vstack([Mat(f, [m.tolist_flat()]) for m in mats])
    _, idx = row_basis(rows)
    return [mats[i] for i in idx]


def _combine(basis: list[Mat], coeffs) -> Mat:
    out = basis[0].scale(coeffs[0])
    for c, m in zip(coeffs[1:], basis[1:]):
        out = out + m.scale(c)
    return out


def _y_frame(Y: Mat) -> tuple[Mat, int]:
    """S = [f | g | h] with S^-1 Y S = [[0, I_p, 0], [0, 0, 0], [0, 0, 0_q]]."""
    f = Y.field
    l = Y.rows
    F, piv = column_basis(Y)
    p = len(piv)
    G = hstack([Mat.unit(f, l, c, 0, 1) for c in piv], f, l)
    # extend f to a basis of ker Y using kernel vectors
    K = kernel_matrix(Y)
    full = hstack([F, K], f, l)
    C, idx = column_basis(full)
    H = hstack([C.block(0, l, i, i + 1) for i in range(p, C.cols)], f, l)
    S = hstack([F, G, H], f, l)
    return S, p


def _canonical_y(f, p: int, q: int) -> Mat:
    return _pattern_matrix(f, p, q, Mat.identity(f, p), Mat.zeros(f, 0, 0), Mat.zeros(f, q, p), 0, 0)


def _attempt(Y: Mat, basis: list[Mat], strict: bool = True):
    """Try to reach the pattern from Y.

    Returns ("improve", Y2) when a higher-rank element turns up, ("fail", None)
    when Y cannot be maximal, or ("ok", (S0, p, q, u, v, cert)).
    """
    f, l = Y.field, Y.rows
    S, p = _y_frame(Y)
    q = l - 2 * p
    Si = inverse(S)
    conj = [Si @ Z @ S for Z in basis]
    for Z in conj:
        B = _blocks(Z, p)
        if not (B[0][0].is_zero() and B[1][0].is_zero() and B[2][0].is_zero()
                and B[1][1].is_zero() and B[1][2].is_zero()):
            raise VerificationError("subspace element does not annihilate the chosen maximal element")
    Yc = Si @ Y @ S
    for Z in conj:
        Z33 = _blocks(Z, p)[2][2]
        if not Z33.is_zero():
            # some gamma Y + Z has larger rank; p + 2 distinct scalars suffice
            scalars = range(p + 2) if strict else range(min(p + 2, f.order or p + 2))
            for g in scalars:
                W = Yc.scale(f(g)) + Z
                if rank(W) > p:
                    return "improve", S @ W @ Si
            if strict:
                raise VerificationError("nonzero (3,3) block but no rank increase found")
            raise InconclusiveError("field too small to find a higher-rank element")
    Z13s = [_blocks(Z, p)[0][2] for Z in conj]
    cols, _ = column_basis(hstack(Z13s, f, p))
    rows, _ = row_basis(vstack(Z13s, f, q))
    u, v = cols.cols, rows.rows
    P = complete_basis(cols)
    Q = complete_basis(rows.T).T
    T = direct_sum(P, P, inverse(Q))
    S0 = S @ T
    S0i = inverse(S0)
    final = [S0i @ Z @ S0 for Z in basis]
    if not all(matches_pattern(Z, p, q, u, v) for Z in final):
        return "fail", None
    if S0i @ Y @ S0 != _canonical_y(f, p, q):
        raise VerificationError("maximal element lost its canonical form")
    cert = _rank_certificate(final, p, q, u)
    return "ok", (S0, p, q, u, v, cert)


def _rank_certificate(final: list[Mat], p: int, q: int, u: int) -> str | None:
    """A reason why no element of the pattern span has rank above p."""
    grids = [_blocks(Z, p) for Z in final]
    if all(B[0][1].block(u, p, 0, u).is_zero() for B in grids):
        return "c_block_zero"
    if all(B[2][1].is_zero() for B in grids):
        return "z32_zero"
    if all(B[0][2].is_zero() for B in grids):
        return "z13_zero"
    return None


def exhaustive_max_rank(basis: list[Mat]) -> tuple[int, Mat | None]:
    """Maximum rank over the span by listing projective coefficient vectors (GF(p) only)."""
    f = basis[0].field
    if not isinstance(f, PrimeField):
        raise PreconditionError("exhaustive search needs a finite field")
    best, arg = 0, None
    d = len(basis)
    for lead in range(d):
        for tail in itertools.product(range(f.p), repeat=d - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            Z = _combine(basis, coeffs)
            rk = rank(Z)
            if rk > best:
                best, arg = rk, Z
    return best, arg


def _exhaustive_ok(f, dim: int, budget: int) -> bool:
    return isinstance(f, PrimeField) and f.p ** dim <= budget


def canonicalize_trivial_mult(basis: list[Mat], seed: int = 0, search_factor: int = SEARCH_FACTOR,
                              budget: int = EXHAUSTIVE_BUDGET, strict_field: bool = True) -> TrivialMultForm:
    """Canonical pattern for a subspace with trivial multiplication.

    The existence argument needs more than (l+2)/2 field elements.  With
    ``strict_field=False`` smaller fields are attempted anyway; the output is
    still checked against the pattern, and the search reports inconclusive if
    it runs out of scalars.
    """
    if not basis:
        raise PreconditionError("empty spanning set")
    f, l = basis[0].field, basis[0].rows
    if any(m.shape != (l, l) or m.field != f for m in basis):
        raise PreconditionError("spanning matrices must share size and field")
    if strict_field:
        check_field_size(f, l)
    pz = check_pairwise_zero(basis)
    if not pz.holds:
        raise NotPreserverError("subspace does not have trivial multiplication", pz)
    basis = reduce_basis(basis)
    if not basis:
        return TrivialMultForm(Mat.identity(f, l), 0, l, 0, 0, "zero_span")
    dim = len(basis)
    rng = random.Random(seed)
    trials = search_factor * l * dim
    scored = []
    for _ in range(trials):
        Z = _combine(basis, [f.random(rng) for _ in range(dim)])
        scored.append((rank(Z), Z))
    top = max(rk for rk, _ in scored)
    seen, candidates = set(), []
    for rk, Z in scored:
        if rk == top and Z not in seen:
            seen.add(Z)
            candidates.append(Z)
        if len(candidates) >= MAX_CANDIDATES:
            break

    # (u, v) can depend on the maximal element chosen, so every candidate is
    # tried and the form with the largest corner (u + v) is kept.
    forms = []
    queue = list(candidates)
    while queue:
        Y = queue.pop(0)
        for _ in range(l + 1):
            status, out = _attempt(Y, basis, strict_field)
            if status != "improve":
                break
            Y = out
        if status == "ok":
            forms.append(out)
        rk = rank(Y)
        if rk > top:
            top = rk
            queue.append(Y)
    forms = [fm for fm in forms if fm[1] == top]
    best_key = lambda fm: (fm[3] + fm[4], fm[3])
    certified = [fm for fm in forms if fm[5] is not None]
    if certified:
        S0, p, q, u, v, cert = max(certified, key=best_key)
        return TrivialMultForm(S0, p, q, u, v, cert)

    if not _exhaustive_ok(f, dim, budget):
        raise InconclusiveError(
            f"could not certify a maximal-rank element (best rank {top}); exhaustive search exceeds budget")
    best, Ymax = exhaustive_max_rank(basis)
    if forms and top == best:
        S0, p, q, u, v, _ = max(forms, key=best_key)
        return TrivialMultForm(S0, p, q, u, v, "exhaustive")
    status, out = _attempt(Ymax, basis, strict_field)
    if status != "ok":
        raise VerificationError("pattern construction failed from a maximal-rank element")
    S0, p, q, u, v, _ = out
    return TrivialMultForm(S0, p, q, u, v, "exhaustive")


def verify_form(basis: list[Mat], form: TrivialMultForm) -> Verdict:
    """Pattern predicate on every spanning matrix after conjugation by S0."""
    Si = inverse(form.S0)
    for a, Z in enumerate(basis):
        if not matches_pattern(Si @ Z @ form.S0, form.p, form.q, form.u, form.v):
            return Verdict(False, details={"index": a + 1})
    return Verdict(True)


# -- generator -------------------------------------------------------------------------

def _pattern_matrix(f, p, q, Z12, Z13h, Z32h, u, v) -> Mat:
    l = 2 * p + q
    Z13 = direct_sum(Z13h, Mat.zeros(f, p - u, q - v))
    Z32 = direct_sum(Mat.zeros(f, v, u), Z32h)
    top = hstack([Mat.zeros(f, p), Z12, Z13], f, p)
    mid = Mat.zeros(f, p, l)
    bot = hstack([Mat.zeros(f, q, p), Z32, Mat.zeros(f, q)], f, q)
    return vstack([top, mid, bot], f, l)


def generate_pattern_subspace(l: int, p: int, q: int, u: int, v: int, dim: int, field, seed: int,
                              full_support: bool = False) -> list[Mat]:
    """``dim`` random matrices in the canonical pattern (so all pairwise products vanish).

    With ``full_support`` the sample is arranged so the parameters are
    recoverable: the lower-left u-column slice of Z12 (rows u..p) is zero, the
    first element has invertible Z12 and Z13 = 0 (so it is of maximal rank),
    and the Z13 corners of the remaining elements span full column and row
    spaces.
    """
    f = field
    if 2 * p + q != l or not (0 <= u <= p and 0 <= v <= q) or dim < 1 or p < 0 or q < 0:
        raise PreconditionError("inconsistent pattern parameters")
    if full_support:
        if (u == 0) != (v == 0) or (dim - 1) * min(u, v) < max(u, v):
            raise PreconditionError("full-support corners impossible for these (u, v, dim)")
    rng = random.Random(seed)
    for _ in range(1000):
        out, Z13s = [], []
        for t in range(dim):
            Z12 = random_matrix(f, p, p, rng)
            if full_support:
                a = Z12.a.copy()
                a[u:p, 0:u] = f.zero
                Z12 = Mat._wrap(f, a)
                if t == 0 and rank(Z12) < p:
                    break
            Z13h = random_matrix(f, u, v, rng)
            Z32h = random_matrix(f, q - v, p - u, rng)
            if full_support and t == 0:
                Z13h = Mat.zeros(f, u, v)
            else:
                Z13s.append(Z13h)
            out.append(_pattern_matrix(f, p, q, Z12, Z13h, Z32h, u, v))
        if len(out) < dim:
            continue
        if full_support and u and (rank(hstack(Z13s, f, u)) < u or rank(vstack(Z13s, f, v)) < v):
            continue
        if not check_pairwise_zero(out).holds:
            raise VerificationError("generated pattern matrices do not multiply to zero")
        return out
    raise InconclusiveError("could not draw a full-support pattern sample")
