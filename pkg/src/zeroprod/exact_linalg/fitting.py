"""Core-nilpotent (Fitting) splitting of a square matrix."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DimensionError, VerificationError
from .matrix import Mat, column_basis, direct_sum, hstack, inverse, kernel_matrix, rank


@dataclass(frozen=True)
class FittingDecomposition:
    """``S^-1 A S = R (+) N`` with R invertible (s x s) and N nilpotent.

    ``nu`` is the least e with ``N^e = 0``: 0 when N is vacuous, 1 when N is a
    nonvacuous zero block.
    """

    S: Mat
    s: int
    R: Mat
    N: Mat
    nu: int

    @property
    def size(self) -> int:
        return self.S.rows

    def to_json(self) -> dict:
        return {
            "S": self.S.to_json(),
            "s": self.s,
            "R": self.R.to_json(),
            "N": self.N.to_json(),
            "nu": self.nu,
        }


def nil_index(N: Mat) -> int:
    """Least e >= 0 with N^e = 0.  Raises if N is not nilpotent."""
    if not N.is_square:
        raise DimensionError("nil index of a non-square matrix")
    if N.rows == 0:
        return 0
    P = N
    for e in range(1, N.rows + 1):
        if P.is_zero():
            return e
        P = P @ N
    raise ValueError("matrix is not nilpotent")


def fitting_decompose(A: Mat) -> FittingDecomposition:
    if not A.is_square:
        raise DimensionError(f"Fitting decomposition needs a square matrix, got {A.shape}")
    r = A.rows
    f = A.field
    # A^m with rank(A^m) == rank(A^{m+1}); m <= r.
    P, rk = Mat.identity(f, r), r
    while True:
        Q = P @ A
        rq = rank(Q)
        if rq == rk:
            break
        P, rk = Q, rq
    image, _ = column_basis(P)
    S = hstack([image, kernel_matrix(P)], f, r)
    s = image.cols
    C = inverse(S) @ A @ S
    R = C.block(0, s, 0, s)
    N = C.block(s, r, s, r)
    if not (C.block(0, s, s, r).is_zero() and C.block(s, r, 0, s).is_zero()):
        raise VerificationError("Fitting conjugate is not block diagonal")
    if rank(R) != s:
        raise VerificationError("invertible Fitting block is singular")
    try:
        nu = nil_index(N)
    except ValueError:
        raise VerificationError("nilpotent Fitting block is not nilpotent") from None
    if C != direct_sum(R, N):
        raise VerificationError("Fitting reconstruction failed")
    return FittingDecomposition(S, s, R, N, nu)
