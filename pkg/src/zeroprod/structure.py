"""Structure of zero-product preservers.

A zero-product preserver Phi: M_n -> M_r (n >= 2) is, after one similarity S,

    Phi(A) = S ((R1 kron A) (+) Phi0(A)) S^-1

with R1 invertible (k x k), Phi0 a zero-product preserver whose value at I is
nilpotent, and nu the nil index of Phi0(I).  :func:`decompose_zpp` finds such
data and refuses to return it unless it reconstructs Phi exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotPreserverError, PreconditionError, UnsupportedError, VerificationError
from .exact_linalg import (
    Mat,
    column_basis,
    direct_sum,
    fitting_decompose,
    hstack,
    inverse,
    kron,
    nil_index,
    perfect_shuffle,
    rank,
)
from .exact_linalg.fields import field_from_name
from .linmap import LinMap, conjugate
from .verify import check_ring_hom, check_trivial_mult, check_zpp


@dataclass(frozen=True)
class StructureCertificate:
    """Data (S, k, R1, phi0, nu) with Phi(E_ij) = S((R1 kron E_ij) (+) phi0(E_ij))S^-1.

    ``nu`` is 0 when phi0(I) = 0 (vacuous phi0 included), otherwise the least
    e with phi0(I)^e = 0.
    """

    S: Mat
    k: int
    R1: Mat
    phi0: LinMap
    nu: int
    n: int
    r: int
    phi0_trivial_mult: bool = True
    verified: bool = False

    @property
    def t(self) -> int:
        return self.r - self.n * self.k

    def to_json(self) -> dict:
        return {
            "S": self.S.to_json(),
            "k": self.k,
            "R1": self.R1.to_json(),
            "phi0": self.phi0.to_json() if self.phi0.r else None,
            "nu": self.nu,
            "n": self.n,
            "r": self.r,
            "field": self.S.field.name,
            "phi0_trivial_mult": self.phi0_trivial_mult,
            "verified": self.verified,
        }

    @classmethod
    def from_json(cls, obj) -> "StructureCertificate":
        f = field_from_name(obj["field"])
        n, r, k = int(obj["n"]), int(obj["r"]), int(obj["k"])
        phi0 = LinMap.from_json(obj["phi0"]) if obj.get("phi0") else LinMap.zero(f, n, 0)
        return cls(Mat.from_json(f, obj["S"]), k, Mat.from_json(f, obj["R1"]), phi0, int(obj["nu"]),
                   n, r, bool(obj.get("phi0_trivial_mult", True)), False)


@dataclass(frozen=True)
class SmallCodomainForm:
    """``scalar_inner``: Phi(A) = alpha S (A (+) 0) S^-1.  ``trivial_range``: all range products vanish."""

    variant: str
    alpha: object = None
    S: Mat | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"variant": self.variant}
        if self.variant == "scalar_inner":
            out["alpha"] = self.S.field.to_json(self.alpha)
            out["S"] = self.S.to_json()
        return out


def _units(f, n):
    return [(i, j, Mat.unit(f, n, i, j)) for i in range(n) for j in range(n)]


# -- homomorphisms ---------------------------------------------------------------

def canonicalize_unital_hom(psi: LinMap) -> tuple[Mat, int]:
    """S1, k with Psi(A) = S1 (I_k kron A) S1^-1, for a unital ring homomorphism Psi."""
    f, n, s = psi.field, psi.n, psi.r
    if psi.at_identity() != Mat.identity(f, s):
        raise NotPreserverError("input is not a ring homomorphism: Psi(I) is not the identity")
    hom = check_ring_hom(psi)
    if not hom.holds:
        raise NotPreserverError("input is not a ring homomorphism", hom)
    if s == 0:
        return Mat.identity(f, 0), 0
    bases = [column_basis(psi.image(i, i))[0] for i in range(n)]
    k = bases[0].cols
    if any(b.cols != k for b in bases) or n * k != s:
        raise NotPreserverError("input is not a ring homomorphism: unequal diagonal idempotent ranks")
    T = hstack(bases)
    if rank(T) != s:
        raise NotPreserverError("input is not a ring homomorphism: diagonal idempotents overlap")
    Ti = inverse(T)
    blocks = [Mat.identity(f, k)]
    for j in range(1, n):
        B = (Ti @ psi.image(0, j) @ T).block(0, k, j * k, (j + 1) * k)
        if rank(B) != k:
            raise NotPreserverError("input is not a ring homomorphism: singular off-diagonal block")
        blocks.append(B)
    D = direct_sum(*blocks)
    Di = inverse(D)
    Ik = Mat.identity(f, k)
    for i, j, E in _units(f, n):
        if D @ Ti @ psi.image(i, j) @ T @ Di != kron(E, Ik):
            raise NotPreserverError(f"input is not a ring homomorphism: unit ({i + 1},{j + 1}) misplaced")
    S1 = T @ Di @ perfect_shuffle(n, k, f)
    S1i = inverse(S1)
    for i, j, E in _units(f, n):
        if S1 @ kron(Ik, E) @ S1i != psi.image(i, j):
            raise VerificationError(f"homomorphism reconstruction failed at unit ({i + 1},{j + 1})")
    return S1, k


def extract_tensor_factor(C: Mat, n: int, k: int) -> Mat:
    """R1 with C = R1 kron I_n, given that C commutes with every I_k kron E_ij."""
    f = C.field
    if C.shape != (n * k, n * k):
        raise PreconditionError(f"expected a {n * k}x{n * k} matrix, got {C.shape}")
    Ik = Mat.identity(f, k)
    for i, j, E in _units(f, n):
        U = kron(Ik, E)
        if C @ U != U @ C:
            raise PreconditionError(f"matrix does not commute with I_k kron E_{i + 1}{j + 1}")
    R1 = Mat(f, [[C[a * n, b * n] for b in range(k)] for a in range(k)], rows=k, cols=k)
    if kron(R1, Mat.identity(f, n)) != C:
        raise PreconditionError("matrix is not of the form R kron I_n")
    return R1


# -- certificates --------------------------------------------------------------------

def reconstruct(cert: StructureCertificate, n: int | None = None, r: int | None = None) -> LinMap:
    n = cert.n if n is None else n
    r = cert.r if r is None else r
    f = cert.S.field
    if cert.S.shape != (r, r) or cert.R1.shape != (cert.k, cert.k) or cert.phi0.r != r - n * cert.k \
            or cert.phi0.n != n:
        raise PreconditionError("certificate dimensions are inconsistent")
    S, Si = cert.S, inverse(cert.S)
    return LinMap(f, n, r, [S @ direct_sum(kron(cert.R1, E), cert.phi0.image(i, j)) @ Si
                            for i, j, E in _units(f, n)])


def _cert_nu(N: Mat) -> int:
    return 0 if N.is_zero() else nil_index(N)


def _finish(phi: LinMap, S, k, R1, phi0) -> StructureCertificate:
    N = phi0.at_identity()
    try:
        nu = _cert_nu(N)
    except ValueError:
        raise VerificationError("phi0(I) is not nilpotent") from None
    if nu and not N.power(nu).is_zero():
        raise VerificationError("phi0(I)^nu is not zero")
    if not nu and not N.is_zero():
        raise VerificationError("nu = 0 but phi0(I) is not zero")
    if phi0.r and not check_zpp(phi0).holds:
        raise VerificationError("phi0 does not preserve zero products")
    trivial = check_trivial_mult(phi0).holds
    cert = StructureCertificate(S, k, R1, phi0, nu, phi.n, phi.r, trivial, False)
    if reconstruct(cert) != phi:
        raise VerificationError("certificate does not reconstruct the input map")
    return StructureCertificate(S, k, R1, phi0, nu, phi.n, phi.r, trivial, True)


def decompose_zpp(phi: LinMap) -> StructureCertificate:
    """Certified decomposition of a zero-product preserver on M_n, n >= 2."""
    n, r, f = phi.n, phi.r, phi.field
    if n == 1:
        raise UnsupportedError("decompose_zpp needs n >= 2; use classify_scalar_domain for n = 1")
    verdict = check_zpp(phi)
    if not verdict.holds:
        raise NotPreserverError("map does not preserve zero products", verdict)
    fd = fitting_decompose(phi.at_identity())
    s = fd.s
    C = conjugate(phi, fd.S)
    for m in C.images:
        if not (m.block(0, s, s, r).is_zero() and m.block(s, r, 0, s).is_zero()):
            raise VerificationError("conjugated images are not block diagonal")
    psi = C.compress(0, s).left_multiply(inverse(fd.R))
    phi0 = C.compress(s, r)
    if s % n:
        raise VerificationError(f"invertible part has size {s}, not a multiple of {n}")
    try:
        S1, k = canonicalize_unital_hom(psi)
    except NotPreserverError as exc:
        raise VerificationError(f"normalised invertible part is not a unital homomorphism: {exc}") from None
    try:
        R1 = extract_tensor_factor(inverse(S1) @ fd.R @ S1, n, k)
    except PreconditionError as exc:
        raise VerificationError(f"invertible part is not R1 kron I_n: {exc}") from None
    S = fd.S @ direct_sum(S1, Mat.identity(f, r - s))
    return _finish(phi, S, k, R1, phi0)


def classify_scalar_domain(phi: LinMap) -> StructureCertificate:
    """The n = 1 case: Phi(a) = a Phi(1), split by the Fitting decomposition of Phi(1)."""
    if phi.n != 1:
        raise PreconditionError("classify_scalar_domain is for maps on M_1")
    f, r = phi.field, phi.r
    fd = fitting_decompose(phi.images[0])
    phi0 = LinMap(f, 1, r - fd.s, [fd.N])
    return _finish(phi, fd.S, fd.s, fd.R, phi0)


def small_codomain_classify(phi: LinMap) -> SmallCodomainForm:
    """Zero-product preservers M_n -> M_r with r <= n + 1."""
    n, r, f = phi.n, phi.r, phi.field
    if n < 2 or r > n + 1:
        raise PreconditionError(f"small-codomain classification needs n >= 2 and r <= n + 1 (n={n}, r={r})")
    verdict = check_zpp(phi)
    if not verdict.holds:
        raise NotPreserverError("map does not preserve zero products", verdict)
    if rank(phi.at_identity().power(r)) == 0:
        tm = check_trivial_mult(phi)
        if not tm.holds:
            raise VerificationError("nilpotent Phi(I) but the range has nontrivial products")
        return SmallCodomainForm("trivial_range")
    cert = decompose_zpp(phi)
    if cert.k != 1 or not cert.phi0.is_zero():
        raise VerificationError("small codomain: expected k = 1 and phi0 = 0")
    alpha = cert.R1[0, 0]
    S, Si = cert.S, inverse(cert.S)
    Z = Mat.zeros(f, r - n)
    for i, j, E in _units(f, n):
        if (S @ direct_sum(E, Z) @ Si).scale(alpha) != phi.image(i, j):
            raise VerificationError("scalar-inner form does not reconstruct the map")
    return SmallCodomainForm("scalar_inner", alpha, S)
