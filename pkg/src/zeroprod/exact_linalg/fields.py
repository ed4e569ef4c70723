"""Exact scalar fields: GF(p) for prime p, and the rationals.

Scalars are stored as plain Python values (``int`` residues in ``[0, p)`` or
reduced ``Fraction``).  Matrices hold numpy arrays of those values; each field
owns the array kernels (canonicalisation, products, Gauss-Jordan) so the
matrix layer stays field-agnostic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ..errors import FieldError

Value = Union[int, Fraction]

# p*p*inner_dim must stay below 2**63 for int64 products.
_INT64_LIMIT = 1 << 26

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BOUND = 3317044064679887385961981  # bases above are exact below this


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below ~3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_BOUND:
        raise FieldError(f"cannot certify primality of {n}: above deterministic bound")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Shared interface of the supported fields."""

    char: int
    order: int | None
    dtype: object

    zero: Value
    one: Value

    # -- scalars -----------------------------------------------------------
    def __call__(self, x) -> Value:
        raise NotImplementedError

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- arrays ------------------------------------------------------------
    def asarray(self, data) -> np.ndarray:
        raise NotImplementedError

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        raise NotImplementedError

    def integer_stack(self, arrays) -> tuple[np.ndarray, int]:
        """Stack arrays as integers with a shared scale factor.

        Returns ``(X, d)`` with ``X[i] == d * arrays[i]`` exactly (over GF(p),
        ``d == 1``).  Used by the batched identity checks.
        """
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Canonicalise an integer array produced from :meth:`integer_stack` data."""
        return arr

    def random(self, rng) -> Value:
        raise NotImplementedError

    def random_nonzero(self, rng) -> Value:
        while True:
            x = self.random(rng)
            if x != 0:
                return x

    def to_json(self, v):
        raise NotImplementedError

    def from_json(self, x) -> Value:
        return self(x)


@dataclass(frozen=True)
class PrimeField(Field):
    """GF(p), p prime.  Residues are kept in ``[0, p)``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise FieldError(f"prime modulus must be an integer, got {self.p!r}")
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")

    @property
    def char(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_LIMIT else object

    zero = 0
    one = 1

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    def __repr__(self):
        return self.name

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in {self.name}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        if isinstance(x, (bool, float)) or not isinstance(x, (int, np.integer)):
            raise FieldError(f"cannot coerce {x!r} into {self.name}")
        return int(x) % self.p

    def inv(self, a):
        a = self(a)
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, -1, self.p)

    def asarray(self, data) -> np.ndarray:
        if isinstance(data, np.ndarray) and data.dtype != object:
            return np.mod(data.astype(np.int64), self.p).astype(self.dtype)
        rows = [[self(x) for x in row] for row in data]
        return np.array(rows, dtype=self.dtype).reshape(len(rows), -1 if rows else 0)

    def matmul(self, a, b):
        if self.dtype is object:
            return np.dot(a, b) % self.p
        return np.matmul(a, b) % self.p

    def reduce(self, arr):
        return arr % self.p

    def integer_stack(self, arrays):
        return np.stack(arrays).astype(self.dtype), 1

    def rref(self, a):
        p = self.p
        m = a.copy()
        rows, cols = m.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.flatnonzero(m[r:, c])
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                m[[r, i]] = m[[i, r]]
            m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
            factors = m[:, c].copy()
            factors[r] = 0
            m = (m - np.outer(factors, m[r])) % p
            pivots.append(c)
            r += 1
        return m, pivots

    def random(self, rng) -> int:
        return rng.randrange(self.p)

    def to_json(self, v):
        return int(v)


@dataclass(frozen=True)
class Rationals(Field):
    """The rational numbers, with ``Fraction`` entries."""

    char = 0
    order = None
    dtype = object
    zero = Fraction(0)
    one = Fraction(1)

    @property
    def name(self) -> str:
        return "Q"

    def __repr__(self):
        return "Q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (bool, float)):
            raise FieldError(f"refusing inexact or boolean value {x!r} for Q")
        if isinstance(x, (int, np.integer)):
            return Fraction(int(x))
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except ValueError as exc:
                raise FieldError(f"bad rational literal {x!r}") from exc
        raise FieldError(f"cannot coerce {x!r} into Q")

    def inv(self, a):
        a = self(a)
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def asarray(self, data) -> np.ndarray:
        rows = [[self(x) for x in row] for row in data]
        out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
        for i, row in enumerate(rows):
            out[i, :] = row
        return out

    def matmul(self, a, b):
        na, da = _clear_denominators(a)
        nb, db = _clear_denominators(b)
        return _to_fractions(np.dot(na, nb), da * db)

    def integer_stack(self, arrays):
        stacked = np.stack(arrays) if arrays else np.empty((0, 0, 0), dtype=object)
        ints, d = _clear_denominators(stacked)
        return ints, d

    def rref(self, a):
        """Fraction-free Gauss-Jordan on row-scaled integers, normalised at the end."""
        rows, cols = a.shape
        m = np.empty((rows, cols), dtype=object)
        for i in range(rows):
            den = math.lcm(*(x.denominator for x in a[i])) if cols else 1
            m[i, :] = [x.numerator * (den // x.denominator) for x in a[i]]
        pivots: list[int] = []
        prev = 1
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = [i for i in range(r, rows) if m[i, c] != 0]
            if not nz:
                continue
            i = nz[0]
            if i != r:
                m[[r, i]] = m[[i, r]]
            piv = m[r, c]
            keep = m[r].copy()
            # Bareiss update: every quotient below is an exact minor.
            m = (piv * m - np.outer(m[:, c], keep)) // prev
            m[r] = keep
            prev = piv
            pivots.append(c)
            r += 1
        out = np.empty((rows, cols), dtype=object)
        out[:, :] = Fraction(0)
        for i, c in enumerate(pivots):
            lead = m[i, c]
            out[i, :] = [Fraction(x, lead) for x in m[i]]
        return out, pivots

    def random(self, rng) -> Fraction:
        return Fraction(rng.randint(-5, 5), rng.randint(1, 3))

    def to_json(self, v):
        v = self(v)
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _clear_denominators(arr: np.ndarray) -> tuple[np.ndarray, int]:
    flat = arr.ravel()
    den = math.lcm(*(x.denominator for x in flat)) if flat.size else 1
    ints = np.empty(arr.shape, dtype=object)
    ints.ravel()[:] = [x.numerator * (den // x.denominator) for x in flat]
    return ints, den


def _to_fractions(ints: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(ints.shape, dtype=object)
    out.ravel()[:] = [Fraction(int(x), den) for x in ints.ravel()]
    return out


QQ = Rationals()

_GF_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$", re.IGNORECASE)


def field_from_name(name) -> Field:
    """Parse ``"GF(p)"`` or ``"Q"`` (also accepts ``{"p": p}`` and ``{"kind": "Q"}``)."""
    if isinstance(name, Field):
        return name
    if isinstance(name, dict):
        if "p" in name:
            return PrimeField(int(name["p"]))
        if str(name.get("kind", "")).upper() in ("Q", "QQ", "RATIONALS"):
            return QQ
        raise FieldError(f"unrecognised field description {name!r}")
    if isinstance(name, str):
        if name.strip().upper() in ("Q", "QQ", "RATIONALS"):
            return QQ
        m = _GF_RE.match(name)
        if m:
            return PrimeField(int(m.group(1)))
    raise FieldError(f"unrecognised field description {name!r}")


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field.  Arithmetic checks the fields agree."""

    field: Field
    value: Value

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, other) -> Value:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"Scalar({self.field}, {self.field.to_json(self.value)})"


_OPS = {
    "add": Scalar.__add__,
    "sub": Scalar.__sub__,
    "mul": Scalar.__mul__,
    "div": Scalar.__truediv__,
}


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Exact ``a op b`` for op in add/sub/mul/div."""
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)
