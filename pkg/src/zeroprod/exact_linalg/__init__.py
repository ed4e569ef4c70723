"""Exact scalars and dense matrices over GF(p) and Q."""

from .fields import QQ, Field, PrimeField, Rationals, Scalar, field_from_name, is_prime, scalar_arith
from .fitting import FittingDecomposition, fitting_decompose, nil_index
from .matrix import (
    Mat,
    column_basis,
    complete_basis,
    direct_sum,
    hstack,
    inverse,
    is_invertible,
    kernel_basis,
    kernel_matrix,
    kron,
    perfect_shuffle,
    rank,
    row_basis,
    rref,
    solve,
    vstack,
)

__all__ = [
    "QQ", "Field", "PrimeField", "Rationals", "Scalar", "field_from_name", "is_prime",
    "scalar_arith", "FittingDecomposition", "fitting_decompose", "nil_index", "Mat",
    "column_basis", "complete_basis", "direct_sum", "hstack", "inverse", "is_invertible",
    "kernel_basis", "kernel_matrix", "kron", "perfect_shuffle", "rank", "row_basis", "rref",
    "solve", "vstack",
]
