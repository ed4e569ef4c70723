"""Jordan homomorphisms and double zero product preservers.

In characteristic other than 2 a Jordan homomorphism theta on M_n (n >= 2)
splits as h + g with h a homomorphism, g an anti-homomorphism and
h(A)g(B) = g(B)h(A) = 0.  Up to similarity it is then

    A -> (I_k1 kron A) (+) (I_k2 kron A^t) (+) 0_t

and a double zero product preserver is R-scaled version of this plus a
nilpotent-type remainder phi0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NotPreserverError, UnsupportedError, VerificationError
from .exact_linalg import (
    Mat,
    column_basis,
    direct_sum,
    fitting_decompose,
    hstack,
    inverse,
    kernel_matrix,
    kron,
    nil_index,
    rank,
)
from .exact_linalg.fields import field_from_name
from .linmap import LinMap, conjugate, precompose_transpose
from .structure import canonicalize_unital_hom, extract_tensor_factor
from .verify import (
    IdempotentCounterexample,
    PairCounterexample,
    PowerCounterexample,
    Verdict,
    check_idempotent_preserver,
    check_jordan,
    check_ring_hom,
    check_zpp,
    random_matrix,
)

DZP_IDEMPOTENT_SAMPLES = 64


@dataclass(frozen=True)
class JordanSplit:
    """theta = h + g with h(I) = P, g(I) = Q disjoint idempotents."""

    P: Mat
    Q: Mat
    h: LinMap
    g: LinMap
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "h": self.h.to_json(),
            "g": self.g.to_json(),
            "verified": self.verified,
        }


@dataclass(frozen=True)
class JordanCanonicalForm:
    """theta(E_ij) = S ((I_k1 kron E_ij) (+) (I_k2 kron E_ji) (+) 0_t) S^-1."""

    S: Mat
    k1: int
    k2: int
    t: int
    n: int
    verified: bool = False

    def to_json(self) -> dict:
        return {"S": self.S.to_json(), "k1": self.k1, "k2": self.k2, "t": self.t, "n": self.n,
                "verified": self.verified}


@dataclass(frozen=True)
class DzpCertificate:
    """Phi(E_ij) = S ((R1 kron E_ij) (+) (R2 kron E_ji) (+) phi0(E_ij)) S^-1.

    ``nu`` is the nil index of the nilpotent part of Phi(I); phi0(P)^(nu+1)
    vanished on every idempotent P that was tried.  ``proof`` is "complete"
    when phi0 is zero or vacuous and "reduced_to_phi0" otherwise.
    """

    S: Mat
    k1: int
    k2: int
    R1: Mat
    R2: Mat
    phi0: LinMap
    nu: int
    n: int
    r: int
    proof: str = "reduced_to_phi0"
    idempotents_checked: int = 0
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "S": self.S.to_json(),
            "k1": self.k1,
            "k2": self.k2,
            "R1": self.R1.to_json(),
            "R2": self.R2.to_json(),
            "phi0": self.phi0.to_json() if self.phi0.r else None,
            "nu": self.nu,
            "n": self.n,
            "r": self.r,
            "field": self.S.field.name,
            "proof": self.proof,
            "idempotents_checked": self.idempotents_checked,
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, obj) -> "DzpCertificate":
        f = field_from_name(obj["field"])
        n, r = int(obj["n"]), int(obj["r"])
        phi0 = LinMap.from_json(obj["phi0"]) if obj.get("phi0") else LinMap.zero(f, n, 0)
        return cls(Mat.from_json(f, obj["S"]), int(obj["k1"]), int(obj["k2"]), Mat.from_json(f, obj["R1"]),
                   Mat.from_json(f, obj["R2"]), phi0, int(obj["nu"]), n, r, obj.get("proof", "reduced_to_phi0"),
                   int(obj.get("idempotents_checked", 0)), False)


def _require(theta: LinMap, what: str):
    if theta.field.char == 2:
        raise UnsupportedError(f"{what} requires a field of characteristic other than 2")
    if theta.n < 2:
        raise UnsupportedError(f"{what} requires n >= 2")


def _units(f, n):
    return [(i, j, Mat.unit(f, n, i, j)) for i in range(n) for j in range(n)]


# -- splitting --------------------------------------------------------------------

def split_jordan(theta: LinMap) -> JordanSplit:
    _require(theta, "Jordan splitting")
    v = check_jordan(theta)
    if not v.holds:
        raise NotPreserverError("map is not a Jordan homomorphism", v)
    f, n, r = theta.field, theta.n, theta.r
    himg = {}
    for i in range(n):
        for l in range(n):
            if i != l:
                himg[i, l] = theta.image(i, i) @ theta.image(i, l)
    for i in range(n):
        j = 1 if i == 0 else 0
        himg[i, i] = himg[i, j] @ himg[j, i]
    h = LinMap(f, n, r, [himg[i, j] for i in range(n) for j in range(n)])
    g = theta - h
    P = h.at_identity()
    Q = theta.at_identity() - P
    split = JordanSplit(P, Q, h, g)
    _verify_split(theta, split)
    return JordanSplit(P, Q, h, g, True)


def _verify_split(theta: LinMap, sp: JordanSplit):
    P, Q, h, g = sp.P, sp.Q, sp.h, sp.g
    if h + g != theta:
        raise VerificationError("h + g differs from theta")
    if P @ P != P or Q @ Q != Q or not (P @ Q).is_zero() or not (Q @ P).is_zero():
        raise VerificationError("P, Q are not disjoint idempotents")
    if h.at_identity() != P or g.at_identity() != Q:
        raise VerificationError("h(I), g(I) differ from P, Q")
    if not check_ring_hom(h).holds:
        raise VerificationError("h is not multiplicative")
    if not check_ring_hom(precompose_transpose(g)).holds:
        raise VerificationError("g is not anti-multiplicative")
    for a, m in enumerate(theta.images):
        if P @ m != h.images[a] or m @ P != h.images[a]:
            raise VerificationError("P theta(E) P does not recover h")
        for b in g.images:
            if not (h.images[a] @ b).is_zero() or not (b @ h.images[a]).is_zero():
                raise VerificationError("h and g ranges are not orthogonal")


# -- canonical form -------------------------------------------------------------------

def _reconstruct_jordan(f, n, S, k1, k2, t, left=None, right=None) -> LinMap:
    """S ((L kron A) (+) (R kron A^t) (+) 0_t) S^-1 with L, R defaulting to identities."""
    L = left if left is not None else Mat.identity(f, k1)
    R = right if right is not None else Mat.identity(f, k2)
    Si = inverse(S)
    Z = Mat.zeros(f, t)
    return LinMap(f, n, S.rows, [S @ direct_sum(kron(L, E), kron(R, E.T), Z) @ Si for _, _, E in _units(f, n)])


def jordan_canonical_form(theta: LinMap) -> JordanCanonicalForm:
    _require(theta, "Jordan canonical form")
    v = check_jordan(theta)
    if not v.holds:
        raise NotPreserverError("map is not a Jordan homomorphism", v)
    f, n, r = theta.field, theta.n, theta.r
    e = theta.at_identity()
    if e @ e != e:
        raise VerificationError("theta(I) is not idempotent")
    img, _ = column_basis(e)
    s = img.cols
    Se = hstack([img, kernel_matrix(e)], f, r)
    C = conjugate(theta, Se)
    for m in C.images:
        if not (m.block(0, s, s, r).is_zero() and m.block(s, r, 0, r).is_zero()):
            raise VerificationError("Jordan images are not compressed by theta(I)")
    corner = C.compress(0, s)
    sp = split_jordan(corner)
    bp, bq = column_basis(sp.P)[0], column_basis(sp.Q)[0]
    s1 = bp.cols
    Spq = hstack([bp, bq], f, s)
    if rank(Spq) != s:
        raise VerificationError("P and Q do not decompose the corner")
    h2 = conjugate(sp.h, Spq)
    g2 = conjugate(sp.g, Spq)
    for m in h2.images:
        if not (m.block(s1, s, 0, s).is_zero() and m.block(0, s1, s1, s).is_zero()):
            raise VerificationError("homomorphism part leaks outside its corner")
    for m in g2.images:
        if not (m.block(0, s1, 0, s).is_zero() and m.block(s1, s, 0, s1).is_zero()):
            raise VerificationError("anti-homomorphism part leaks outside its corner")
    try:
        Sh, k1 = canonicalize_unital_hom(h2.compress(0, s1))
        Sg, k2 = canonicalize_unital_hom(precompose_transpose(g2.compress(s1, s)))
    except NotPreserverError as exc:
        raise VerificationError(f"Jordan split parts are not unital (anti-)homomorphisms: {exc}") from None
    t = r - s
    S = Se @ direct_sum(Spq @ direct_sum(Sh, Sg), Mat.identity(f, t))
    if _reconstruct_jordan(f, n, S, k1, k2, t) != theta:
        raise VerificationError("Jordan canonical form does not reconstruct the map")
    if rank(e) != n * (k1 + k2):
        raise VerificationError("rank of theta(I) differs from n(k1 + k2)")
    return JordanCanonicalForm(S, k1, k2, t, n, True)


def check_zpp_jordan_promotion(theta: LinMap) -> Verdict:
    """Jordan and zero-product preserving together must force a homomorphism."""
    jv, zv, hv = check_jordan(theta), check_zpp(theta), check_ring_hom(theta)
    holds = hv.holds or not (jv.holds and zv.holds)
    details = {"jordan": jv.to_json(), "zpp": zv.to_json(), "ring_hom": hv.to_json()}
    return Verdict(holds, None if holds else hv.witness, details=details)


# -- double zero products -----------------------------------------------------------------

def _gate_idempotents(f, n):
    out = []
    for i in range(n):
        out.append(Mat.unit(f, n, i, i))
        for j in range(n):
            if j != i:
                out.append(Mat.unit(f, n, i, i) + Mat.unit(f, n, i, j))
    return out


def _complement_witness(phi: LinMap, P: Mat):
    """Pair (P, I - P), which has PQ = QP = 0, if its images fail to annihilate."""
    f, n = phi.field, phi.n
    Q = Mat.identity(f, n) - P
    fp, fq = phi.apply(P), phi.apply(Q)
    if not (fp @ fq).is_zero():
        return PairCounterexample(P, Q, fp @ fq, "dzp", False)
    if not (fq @ fp).is_zero():
        return PairCounterexample(P, Q, fq @ fp, "dzp", True)
    return None


def dzp_gate(phi: LinMap) -> Verdict:
    """Necessary conditions: Phi(P)Phi(I - P) = Phi(I - P)Phi(P) = 0 on a spanning set of idempotents.

    These imply Phi(I) commutes with every Phi(A).
    """
    for P in _gate_idempotents(phi.field, phi.n):
        w = _complement_witness(phi, P)
        if w is not None:
            return Verdict(False, w)
    e = phi.at_identity()
    for m in phi.images:
        if e @ m != m @ e:
            raise VerificationError("idempotent gate passed but Phi(I) fails to commute with the range")
    return Verdict(True)


def random_idempotent(f, n: int, rng: random.Random) -> Mat:
    """U (W U)^-1 W for random U (n x m), W (m x n) with W U invertible, 1 <= m < n.

    On M_1 the only idempotents are 0 and 1.
    """
    if n == 1:
        return Mat(f, [[rng.choice([f.zero, f.one])]])
    m = rng.randint(1, n - 1)
    while True:
        U = random_matrix(f, n, m, rng)
        W = random_matrix(f, m, n, rng)
        WU = W @ U
        if rank(WU) == m:
            return U @ inverse(WU) @ W


def decompose_dzp(phi: LinMap, seed: int = 0, samples: int = DZP_IDEMPOTENT_SAMPLES) -> DzpCertificate:
    """Certified block form of a (candidate) double zero product preserver.

    A certificate proves the R1/R2 part; the remainder phi0 is only checked on
    sampled idempotents unless it is zero.
    """
    _require(phi, "double zero product decomposition")
    f, n, r = phi.field, phi.n, phi.r
    gate = dzp_gate(phi)
    if not gate.holds:
        raise NotPreserverError("map is not a double zero product preserver", gate)
    fd = fitting_decompose(phi.at_identity())
    s = fd.s
    C = conjugate(phi, fd.S)
    for m in C.images:
        if not (m.block(0, s, s, r).is_zero() and m.block(s, r, 0, s).is_zero()):
            raise VerificationError("conjugated images are not block diagonal")
    psi = C.compress(0, s).right_multiply(inverse(fd.R))
    phi0 = C.compress(s, r)
    jv = check_jordan(psi)
    if not jv.holds:
        iv = check_idempotent_preserver(psi, seed)
        if isinstance(iv.witness, IdempotentCounterexample):
            w = _complement_witness(phi, iv.witness.P)
            if w is not None:
                raise NotPreserverError("map is not a double zero product preserver", Verdict(False, w))
        raise NotPreserverError("map is not a double zero product preserver (normalised part is not Jordan)",
                                Verdict(False, jv.witness, details={"map": "Phi_1 R^-1"}))
    jcf = jordan_canonical_form(psi)
    if jcf.t:
        raise VerificationError("normalised invertible part is not unital")
    k1, k2 = jcf.k1, jcf.k2
    a = n * k1
    Cr = inverse(jcf.S) @ fd.R @ jcf.S
    if not (Cr.block(0, a, a, s).is_zero() and Cr.block(a, s, 0, a).is_zero()):
        raise VerificationError("scaling matrix mixes the homomorphism and anti-homomorphism parts")
    try:
        R1 = extract_tensor_factor(Cr.block(0, a, 0, a), n, k1)
        R2 = extract_tensor_factor(Cr.block(a, s, a, s), n, k2)
    except Exception as exc:
        raise VerificationError(f"scaling matrix is not of tensor form: {exc}") from None
    S = fd.S @ direct_sum(jcf.S, Mat.identity(f, r - s))
    cert = DzpCertificate(S, k1, k2, R1, R2, phi0, fd.nu, n, r)
    if reconstruct_dzp(cert) != phi:
        raise VerificationError("double zero product certificate does not reconstruct the map")
    nu = fd.nu
    rng = random.Random(seed)
    idems = _gate_idempotents(f, n) + [Mat.identity(f, n)]
    idems += [random_idempotent(f, n, rng) for _ in range(samples)]
    for P in idems:
        val = phi0.apply(P).power(nu + 1)
        if not val.is_zero():
            raise NotPreserverError(
                "map is not a double zero product preserver: phi0(P)^(nu+1) != 0",
                Verdict(False, PowerCounterexample(P, nu + 1, val), details={"map": "phi0"}))
    proof = "complete" if phi0.is_zero() else "reduced_to_phi0"
    return DzpCertificate(S, k1, k2, R1, R2, phi0, nu, n, r, proof, len(idems), True)


def reconstruct_dzp(cert: DzpCertificate) -> LinMap:
    f, n = cert.S.field, cert.n
    S, Si = cert.S, inverse(cert.S)
    return LinMap(f, n, cert.r, [S @ direct_sum(kron(cert.R1, E), kron(cert.R2, E.T), cert.phi0.image(i, j)) @ Si
                                 for i, j, E in _units(f, n)])
