"""Dense exact matrices and the elimination-based routines built on them."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import DimensionError, FieldError, SingularMatrixError
from .fields import Field, field_from_name


class Mat:
    """Immutable dense matrix over a :class:`Field`.

    The entries live in a read-only numpy array (``int64`` residues for small
    primes, Python objects otherwise).  Indices are 0-based throughout the API.
    """

    __slots__ = ("field", "a")

    def __init__(self, field: Field, data, *, rows: int | None = None, cols: int | None = None):
        if isinstance(data, np.ndarray) and data.ndim == 2:
            arr = field.asarray(data) if data.size else np.empty(data.shape, dtype=field.dtype)
        else:
            data = list(data)
            if not data:
                arr = np.empty((rows or 0, cols or 0), dtype=field.dtype)
            else:
                width = {len(row) for row in data}
                if len(width) != 1:
                    raise DimensionError("ragged matrix rows")
                arr = field.asarray(data) if width != {0} else np.empty((len(data), 0), dtype=field.dtype)
        if rows is not None and arr.shape[0] != rows or cols is not None and arr.shape[1] != cols:
            raise DimensionError(f"expected {rows}x{cols}, got {arr.shape[0]}x{arr.shape[1]}")
        self._init(field, arr)

    def _init(self, field, arr):
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def _wrap(cls, field: Field, arr: np.ndarray) -> "Mat":
        # arr must already be canonical for field and not shared with a caller.
        m = object.__new__(cls)
        m._init(field, arr)
        return m

    # -- constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int | None = None) -> "Mat":
        cols = rows if cols is None else cols
        arr = np.zeros((rows, cols), dtype=field.dtype)
        if field.dtype is object:
            arr[:, :] = field.zero
        return cls._wrap(field, arr)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        arr = cls.zeros(field, n).a.copy()
        for i in range(n):
            arr[i, i] = field.one
        return cls._wrap(field, arr)

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int, cols: int | None = None) -> "Mat":
        """The matrix unit with a single 1 at (i, j)."""
        arr = cls.zeros(field, n, cols).a.copy()
        arr[i, j] = field.one
        return cls._wrap(field, arr)

    @classmethod
    def column(cls, field: Field, values) -> "Mat":
        values = list(values)
        return cls(field, [[v] for v in values], rows=len(values), cols=1)

    # -- shape / access ------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        v = self.a[i, j]
        return v if isinstance(v, Fraction) else int(v)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Mat":
        return Mat._wrap(self.field, self.a[r0:r1, c0:c1].copy())

    def tolist(self) -> list[list]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Mat", same_shape=True):
        if not isinstance(other, Mat):
            raise TypeError(f"expected Mat, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")
        if same_shape and other.shape != self.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat._wrap(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat._wrap(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "Mat":
        return Mat._wrap(self.field, self.field.reduce(-self.a))

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other, same_shape=False)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return Mat._wrap(self.field, self.field.matmul(self.a, other.a))

    def scale(self, c) -> "Mat":
        c = self.field(c)
        return Mat._wrap(self.field, self.field.reduce(self.a * c))

    @property
    def T(self) -> "Mat":
        return Mat._wrap(self.field, self.a.T.copy())

    def power(self, e: int) -> "Mat":
        if not self.is_square:
            raise DimensionError("power of a non-square matrix")
        if e < 0:
            return inverse(self).power(-e)
        out = Mat.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not np.any(self.a != 0) if self.a.size else True

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.tolist_flat())))

    def tolist_flat(self):
        return [v if isinstance(v, Fraction) else int(v) for v in self.a.ravel()]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.tolist())
        return f"Mat[{self.field}]({self.rows}x{self.cols}: {body})"

    # -- serialisation -----------------------------------------------------
    def to_json(self) -> dict:
        f = self.field
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[f.to_json(x) for x in row] for row in self.tolist()],
        }

    @classmethod
    def from_json(cls, field, obj) -> "Mat":
        field = field_from_name(field)
        if not isinstance(obj, dict) or not {"rows", "cols", "entries"} <= obj.keys():
            raise DimensionError("matrix JSON needs rows, cols and entries")
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        if len(entries) != rows or any(len(row) != cols for row in entries):
            raise DimensionError(f"matrix entries do not match declared {rows}x{cols}")
        return cls(field, entries, rows=rows, cols=cols)


def hstack(mats, field: Field | None = None, rows: int | None = None) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zeros(field, rows or 0, 0)
    f = mats[0].field
    for m in mats[1:]:
        mats[0]._check(m, same_shape=False)
    if len({m.rows for m in mats}) != 1:
        raise DimensionError("hstack: row counts differ")
    return Mat._wrap(f, np.concatenate([m.a for m in mats], axis=1))


def vstack(mats, field: Field | None = None, cols: int | None = None) -> Mat:
    mats = list(mats)
    if not mats:
        return Mat.zeros(field, 0, cols or 0)
    for m in mats[1:]:
        mats[0]._check(m, same_shape=False)
    if len({m.cols for m in mats}) != 1:
        raise DimensionError("vstack: column counts differ")
    return Mat._wrap(mats[0].field, np.concatenate([m.a for m in mats], axis=0))


def direct_sum(*mats: Mat) -> Mat:
    """Block-diagonal sum; 0-size blocks are allowed."""
    if not mats:
        raise ValueError("direct_sum needs at least one matrix")
    f = mats[0].field
    out = Mat.zeros(f, sum(m.rows for m in mats), sum(m.cols for m in mats)).a.copy()
    r = c = 0
    for m in mats:
        if m.field != f:
            raise FieldError(f"field mismatch: {f} vs {m.field}")
        out[r:r + m.rows, c:c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Mat._wrap(f, out)


# -- elimination -------------------------------------------------------------

def rref(M: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and pivot columns."""
    arr, piv = M.field.rref(M.a)
    return Mat._wrap(M.field, arr), piv


def rank(M: Mat) -> int:
    if M.a.size == 0:
        return 0
    return len(M.field.rref(M.a)[1])


def kernel_basis(M: Mat) -> list[Mat]:
    """Basis of the right null space, as column vectors."""
    f = M.field
    n = M.cols
    if M.rows == 0:
        return [Mat.unit(f, n, j, 0, 1) for j in range(n)]
    R, piv = f.rref(M.a)
    free = [j for j in range(n) if j not in set(piv)]
    out = []
    for j in free:
        v = Mat.zeros(f, n, 1).a.copy()
        v[j, 0] = f.one
        for i, c in enumerate(piv):
            v[c, 0] = f.neg(R[i, j])
        out.append(Mat._wrap(f, v))
    return out


def kernel_matrix(M: Mat) -> Mat:
    """Kernel basis as the columns of one matrix (possibly with 0 columns)."""
    return hstack(kernel_basis(M), M.field, M.cols)


def column_basis(M: Mat) -> tuple[Mat, list[int]]:
    """The first linearly independent columns of M, in order, with their indices."""
    if M.a.size == 0:
        return Mat.zeros(M.field, M.rows, 0), []
    _, piv = M.field.rref(M.a)
    return Mat._wrap(M.field, M.a[:, piv].copy()), piv


def row_basis(M: Mat) -> tuple[Mat, list[int]]:
    """The first linearly independent rows of M, in order, with their indices."""
    C, piv = column_basis(M.T)
    return C.T, piv


def complete_basis(V: Mat) -> Mat:
    """Extend independent columns V to an invertible matrix using unit vectors."""
    n = V.rows
    aug = hstack([V, Mat.identity(V.field, n)])
    _, piv = V.field.rref(aug.a)
    if piv[: V.cols] != list(range(V.cols)):
        raise SingularMatrixError("columns to complete are linearly dependent")
    return Mat._wrap(V.field, aug.a[:, piv].copy())


def inverse(M: Mat) -> Mat:
    if not M.is_square:
        raise DimensionError(f"cannot invert a {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return M
    aug = hstack([M, Mat.identity(M.field, n)])
    R, piv = M.field.rref(aug.a)
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return Mat._wrap(M.field, R[:, n:].copy())


def is_invertible(M: Mat) -> bool:
    return M.is_square and rank(M) == M.rows


def solve(A: Mat, B: Mat) -> Mat | None:
    """Some X with AX = B, or None when the system is inconsistent."""
    f = A.field
    aug = hstack([A, B])
    R, piv = f.rref(aug.a)
    n = A.cols
    if piv and piv[-1] >= n:
        return None
    X = Mat.zeros(f, n, B.cols).a.copy()
    for i, c in enumerate(piv):
        X[c, :] = R[i, n:]
    return Mat._wrap(f, X)


# -- tensor structure --------------------------------------------------------

def kron(A: Mat, B: Mat) -> Mat:
    """Kronecker product; the (i, j) block is a_ij * B."""
    A._check(B, same_shape=False)
    f = A.field
    out = np.multiply.outer(A.a, B.a).transpose(0, 2, 1, 3).reshape(A.rows * B.rows, A.cols * B.cols)
    return Mat._wrap(f, f.reduce(out))


def perfect_shuffle(n: int, k: int, field: Field) -> Mat:
    """Permutation P with P^T (A kron B) P = B kron A for A n-by-n and B k-by-k."""
    if n < 1 or k < 1:
        raise DimensionError("perfect_shuffle needs n, k >= 1")
    P = Mat.zeros(field, n * k).a.copy()
    for a in range(n):
        for b in range(k):
            P[a * k + b, b * n + a] = field.one
    return Mat._wrap(field, P)
