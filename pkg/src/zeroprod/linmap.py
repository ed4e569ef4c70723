"""Linear maps M_n(F) -> M_r(F), stored by the images of the matrix units."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, FieldError
from .exact_linalg import Field, Mat, field_from_name, inverse, kron
from .exact_linalg import direct_sum as mat_direct_sum


class LinMap:
    """Phi: M_n(F) -> M_r(F) given by ``images[i*n + j] = Phi(E_ij)`` (0-based).

    r may be 0 (the map into the zero algebra), which keeps vacuous summands
    uniform.  Instances are immutable.
    """

    __slots__ = ("field", "n", "r", "images", "_stack")

    def __init__(self, field: Field, n: int, r: int, images):
        images = tuple(images)
        if n < 1 or r < 0:
            raise DimensionError(f"bad dimensions n={n}, r={r}")
        if len(images) != n * n:
            raise DimensionError(f"expected {n * n} unit images, got {len(images)}")
        for m in images:
            if not isinstance(m, Mat):
                raise TypeError("images must be Mat instances")
            if m.field != field:
                raise FieldError(f"image over {m.field}, map over {field}")
            if m.shape != (r, r):
                raise DimensionError(f"image of shape {m.shape}, expected {r}x{r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "_stack", None)

    def __setattr__(self, name, value):
        raise AttributeError("LinMap is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_function(cls, field: Field, n: int, r: int, fn: Callable[[Mat], Mat]) -> "LinMap":
        return cls(field, n, r, [fn(Mat.unit(field, n, i, j)) for i in range(n) for j in range(n)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinMap":
        return cls.from_function(field, n, n, lambda E: E)

    @classmethod
    def transpose_map(cls, field: Field, n: int) -> "LinMap":
        return cls.from_function(field, n, n, lambda E: E.T)

    @classmethod
    def zero(cls, field: Field, n: int, r: int) -> "LinMap":
        Z = Mat.zeros(field, r)
        return cls(field, n, r, [Z] * (n * n))

    # -- evaluation --------------------------------------------------------
    def image(self, i: int, j: int) -> Mat:
        return self.images[i * self.n + j]

    def stack(self) -> np.ndarray:
        """Images as one (n^2, r, r) array in the field's storage dtype."""
        if self._stack is None:
            st = np.stack([m.a for m in self.images]) if self.r else np.empty((self.n ** 2, 0, 0), dtype=self.field.dtype)
            st.flags.writeable = False
            object.__setattr__(self, "_stack", st)
        return self._stack

    def apply(self, A: Mat) -> Mat:
        if A.field != self.field:
            raise FieldError(f"argument over {A.field}, map over {self.field}")
        if A.shape != (self.n, self.n):
            raise DimensionError(f"argument of shape {A.shape}, expected {self.n}x{self.n}")
        if self.r == 0:
            return Mat.zeros(self.field, 0)
        out = np.tensordot(A.a.ravel(), self.stack(), axes=1)
        return Mat._wrap(self.field, self.field.reduce(out))

    __call__ = apply

    def at_identity(self) -> Mat:
        return self.apply(Mat.identity(self.field, self.n))

    # -- algebra -----------------------------------------------------------
    def _check(self, other: "LinMap"):
        if other.field != self.field or other.n != self.n or other.r != self.r:
            raise DimensionError("maps differ in field or dimensions")

    def __add__(self, other: "LinMap") -> "LinMap":
        self._check(other)
        return LinMap(self.field, self.n, self.r, [a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: "LinMap") -> "LinMap":
        self._check(other)
        return LinMap(self.field, self.n, self.r, [a - b for a, b in zip(self.images, other.images)])

    def scale(self, c) -> "LinMap":
        return LinMap(self.field, self.n, self.r, [m.scale(c) for m in self.images])

    def left_multiply(self, M: Mat) -> "LinMap":
        """A -> M Phi(A)."""
        return LinMap(self.field, self.n, M.rows, [M @ m for m in self.images])

    def right_multiply(self, M: Mat) -> "LinMap":
        """A -> Phi(A) M."""
        return LinMap(self.field, self.n, M.cols, [m @ M for m in self.images])

    def compress(self, lo: int, hi: int) -> "LinMap":
        """A -> the diagonal block [lo:hi, lo:hi] of Phi(A)."""
        return LinMap(self.field, self.n, hi - lo, [m.block(lo, hi, lo, hi) for m in self.images])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.images)

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (self.field, self.n, self.r) == (other.field, other.n, other.r) and self.images == other.images

    def __hash__(self):
        return hash((self.field, self.n, self.r, self.images))

    def __repr__(self):
        return f"LinMap[{self.field}](n={self.n}, r={self.r})"

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        n = self.n
        return {
            "field": self.field.name,
            "n": n,
            "r": self.r,
            "images": {f"{i + 1},{j + 1}": self.image(i, j).to_json() for i in range(n) for j in range(n)},
        }

    @classmethod
    def from_json(cls, obj) -> "LinMap":
        try:
            field = field_from_name(obj["field"])
            n, r, imgs = int(obj["n"]), int(obj["r"]), obj["images"]
        except (KeyError, TypeError) as exc:
            raise DimensionError(f"map JSON needs field, n, r and images ({exc})") from None
        keys = {f"{i},{j}" for i in range(1, n + 1) for j in range(1, n + 1)}
        got = {k.replace(" ", "") for k in imgs}
        if got != keys:
            raise DimensionError(f"map JSON must have exactly the keys 'i,j' for 1 <= i,j <= {n}")
        norm = {k.replace(" ", ""): v for k, v in imgs.items()}
        images = [Mat.from_json(field, norm[f"{i},{j}"]) for i in range(1, n + 1) for j in range(1, n + 1)]
        return cls(field, n, r, images)


@dataclass(frozen=True)
class MatPair:
    """Two n x n matrices over one field; usually a zero-product pair."""

    A: Mat
    B: Mat

    def __post_init__(self):
        if self.A.field != self.B.field or self.A.shape != self.B.shape or not self.A.is_square:
            raise DimensionError("pair members must be square, same size, same field")

    def to_json(self) -> dict:
        return {"A": self.A.to_json(), "B": self.B.to_json()}


def make_linmap(field, n: int, r: int, images) -> LinMap:
    """Validated map from unit images.

    ``images`` is a sequence of n^2 matrices in row-major unit order, or a dict
    keyed by 1-based ``(i, j)`` tuples or ``"i,j"`` strings.  Entries may be Mat
    or nested lists.
    """
    field = field_from_name(field)
    if isinstance(images, dict):
        norm = {}
        for k, v in images.items():
            key = tuple(int(x) for x in k.split(",")) if isinstance(k, str) else tuple(k)
            norm[key] = v
        want = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        if set(norm) != set(want):
            raise DimensionError(f"expected keys (i, j) for 1 <= i, j <= {n}")
        images = [norm[k] for k in want]
    images = list(images)
    mats = [m if isinstance(m, Mat) else Mat(field, m, rows=r, cols=r) for m in images]
    return LinMap(field, n, r, mats)


def apply(phi: LinMap, A: Mat) -> Mat:
    return phi.apply(A)


def conjugate(phi: LinMap, S: Mat) -> LinMap:
    """A -> S^-1 Phi(A) S."""
    Si = inverse(S)
    return LinMap(phi.field, phi.n, phi.r, [Si @ m @ S for m in phi.images])


def precompose_transpose(phi: LinMap) -> LinMap:
    """A -> Phi(A^t)."""
    n = phi.n
    return LinMap(phi.field, n, phi.r, [phi.image(j, i) for i in range(n) for j in range(n)])


def direct_sum(phi: LinMap, psi: LinMap) -> LinMap:
    """A -> Phi(A) (+) Psi(A)."""
    if phi.field != psi.field or phi.n != psi.n:
        raise DimensionError("direct_sum needs maps with the same domain")
    return LinMap(phi.field, phi.n, phi.r + psi.r,
                  [mat_direct_sum(a, b) for a, b in zip(phi.images, psi.images)])


def tensor_map(R: Mat, n: int, transpose: bool = False) -> LinMap:
    """A -> R kron A  (or R kron A^t)."""
    f = R.field
    return LinMap.from_function(f, n, R.rows * n, lambda E: kron(R, E.T if transpose else E))
