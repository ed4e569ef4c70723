"""Named example maps and seeded generators of preservers."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field

from .errors import PreconditionError, VerificationError
from .exact_linalg import Field, Mat, direct_sum, field_from_name, inverse, kron
from .linmap import LinMap
from .nilspace import generate_pattern_subspace
from .structure import StructureCertificate, reconstruct
from .verify import check_trivial_mult, check_zpp, random_invertible

PHI0_MODES = ("none", "trivial_mult", "band")


# -- named examples ----------------------------------------------------------------

def example_symmetric_killer(f: Field) -> LinMap:
    """[[a, b], [c, d]] -> [[0, b - c], [0, 0]]."""
    E12 = Mat.unit(f, 2, 0, 1)
    Z = Mat.zeros(f, 2)
    return LinMap(f, 2, 2, [Z, E12, -E12, Z])


def shift_matrix(f: Field, k: int) -> Mat:
    """J_k: ones on the first superdiagonal."""
    a = Mat.zeros(f, k).a.copy()
    for i in range(k - 1):
        a[i, i + 1] = f.one
    return Mat._wrap(f, a)


def example_band_nilpotent(n: int, k: int, f: Field) -> LinMap:
    """A placed on the first block superdiagonal of a k x k grid of n x n blocks."""
    if n < 1 or k < 1:
        raise PreconditionError("band example needs n, k >= 1")
    J = shift_matrix(f, k)
    return LinMap.from_function(f, n, n * k, lambda E: kron(J, E))


def example_ors(n: int, r: int, f: Field) -> LinMap:
    """First row of A along the top row, last column of A down column n+1."""
    if n < 2 or r < n + 2:
        raise PreconditionError("this example needs n >= 2 and r >= n + 2")

    def img(E: Mat) -> Mat:
        a = Mat.zeros(f, r).a.copy()
        for j in range(n):
            a[0, 1 + j] = E.a[0, j]
        for i in range(n):
            a[1 + i, n + 1] = E.a[i, n - 1]
        return Mat._wrap(f, a)

    return LinMap.from_function(f, n, r, img)


def named_examples(f: Field) -> dict[str, LinMap]:
    return {
        "symmetric_killer": example_symmetric_killer(f),
        "band_nilpotent_2_3": example_band_nilpotent(2, 3, f),
        "ors_2_4": example_ors(2, 4, f),
        "identity_2": LinMap.identity(f, 2),
        "transpose_2": LinMap.transpose_map(f, 2),
    }


# -- generators ----------------------------------------------------------------------

@dataclass(frozen=True)
class GenSpec:
    """Parameters of a random zero-product preserver.

    ``phi0_mode``: "none" (r = nk), "trivial_mult" (phi0 ranges in a random
    pattern subspace; ``params`` may fix p, q, u, v and dim), or "band"
    (phi0 is the band example with ``params["k_band"]``, so r - nk = n k_band).
    ``zero_at_identity`` forces phi0(I) = 0 in trivial_mult mode.
    """

    n: int
    r: int
    k: int
    field: str
    seed: int
    phi0_mode: str = "none"
    params: dict = field(default_factory=dict)
    zero_at_identity: bool = False

    def __post_init__(self):
        n, r, k = self.n, self.r, self.k
        field_from_name(self.field)
        if n < 1 or k < 0 or r < n * k:
            raise PreconditionError(f"need n >= 1, k >= 0, r >= nk (n={n}, r={r}, k={k})")
        if self.phi0_mode not in PHI0_MODES:
            raise PreconditionError(f"unknown phi0_mode {self.phi0_mode!r}")
        t = r - n * k
        if self.phi0_mode == "none" and t:
            raise PreconditionError("phi0_mode 'none' needs r = nk")
        if self.phi0_mode == "band":
            kb = self.params.get("k_band")
            if not isinstance(kb, int) or kb < 2 or n * kb != t:
                raise PreconditionError("band mode needs integer k_band >= 2 with r - nk = n k_band")
        if self.phi0_mode == "trivial_mult" and {"p", "q"} <= self.params.keys():
            if 2 * self.params["p"] + self.params["q"] != t:
                raise PreconditionError("pattern parameters must satisfy 2p + q = r - nk")

    @property
    def t(self) -> int:
        return self.r - self.n * self.k

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj) -> "GenSpec":
        known = {"n", "r", "k", "field", "seed", "phi0_mode", "params", "zero_at_identity"}
        extra = set(obj) - known
        if extra:
            raise PreconditionError(f"unknown generator fields: {sorted(extra)}")
        return cls(**obj)


def _trivial_mult_phi0(spec: GenSpec, f: Field, rng: random.Random) -> LinMap:
    n, t = spec.n, spec.t
    if t == 0:
        return LinMap.zero(f, n, 0)
    prm = spec.params
    p = prm.get("p", rng.randint(0, t // 2))
    q = t - 2 * p
    u = prm.get("u", rng.randint(0, p))
    v = prm.get("v", rng.randint(0, q))
    dim = prm.get("dim", rng.randint(1, 3))
    basis = generate_pattern_subspace(t, p, q, u, v, dim, f, rng.randrange(2 ** 32))
    imgs = []
    for _ in range(n * n):
        m = Mat.zeros(f, t)
        for b in basis:
            m = m + b.scale(f.random(rng))
        imgs.append(m)
    if spec.zero_at_identity:
        rest = Mat.zeros(f, t)
        for i in range(n - 1):
            rest = rest + imgs[i * n + i]
        imgs[n * n - 1] = -rest
    return LinMap(f, n, t, imgs)


def random_zpp_map(spec: GenSpec) -> tuple[LinMap, StructureCertificate]:
    """A zero-product preserver S((R1 kron A) (+) phi0(A))S^-1 with its ground truth."""
    f = field_from_name(spec.field)
    rng = random.Random(spec.seed)
    n, r, k = spec.n, spec.r, spec.k
    S = random_invertible(f, r, rng)
    R1 = random_invertible(f, k, rng)
    if spec.phi0_mode == "none":
        phi0 = LinMap.zero(f, n, 0)
        nu = 0
    elif spec.phi0_mode == "band":
        phi0 = example_band_nilpotent(n, spec.params["k_band"], f)
        nu = spec.params["k_band"]
    else:
        phi0 = _trivial_mult_phi0(spec, f, rng)
        nu = 0 if phi0.at_identity().is_zero() else 2
    truth = StructureCertificate(S, k, R1, phi0, nu, n, r, check_trivial_mult(phi0).holds)
    phi = reconstruct(truth)
    if not check_zpp(phi).holds:
        raise VerificationError("generated map does not preserve zero products")
    return phi, truth


def random_jordan_map(n: int, r: int, k1: int, k2: int, f: Field, seed: int) -> LinMap:
    """S((I_k1 kron A) (+) (I_k2 kron A^t) (+) 0_t)S^-1 for a random invertible S."""
    t = r - n * (k1 + k2)
    if n < 1 or k1 < 0 or k2 < 0 or t < 0:
        raise PreconditionError("random_jordan_map needs n(k1 + k2) <= r")
    rng = random.Random(seed)
    S = random_invertible(f, r, rng)
    Si = inverse(S)
    I1, I2, Z = Mat.identity(f, k1), Mat.identity(f, k2), Mat.zeros(f, t)
    return LinMap.from_function(f, n, r, lambda E: S @ direct_sum(kron(I1, E), kron(I2, E.T), Z) @ Si)


def random_dzp_map(n: int, r: int, k1: int, k2: int, f: Field, seed: int) -> tuple[LinMap, Mat, Mat]:
    """S((R1 kron A) (+) (R2 kron A^t) (+) 0_t)S^-1 with random invertible S, R1, R2."""
    t = r - n * (k1 + k2)
    if n < 1 or k1 < 0 or k2 < 0 or t < 0:
        raise PreconditionError("random_dzp_map needs n(k1 + k2) <= r")
    rng = random.Random(seed)
    S = random_invertible(f, r, rng)
    R1, R2 = random_invertible(f, k1, rng), random_invertible(f, k2, rng)
    Si = inverse(S)
    Z = Mat.zeros(f, t)
    phi = LinMap.from_function(f, n, r, lambda E: S @ direct_sum(kron(R1, E), kron(R2, E.T), Z) @ Si)
    return phi, R1, R2
