"""Exact rational scalars and vectors.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Vectors are plain tuples of fractions, which keeps
them hashable and immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionError

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]


def as_rational(value) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings into a Fraction.

    Floats are refused: they would smuggle binary rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def vec(values: Iterable) -> tuple:
    return tuple(as_rational(v) for v in values)


def zeros(d: int) -> tuple:
    return (Fraction(0),) * d


def unit(d: int, k: int) -> tuple:
    return tuple(Fraction(1 if i == k else 0) for i in range(d))


def format_rational(x: Fraction) -> str:
    # str(Fraction) is already canonical: "-3/7", "5"
    return str(x)


def format_vector(v: Sequence[Fraction]) -> list[str]:
    return [str(x) for x in v]


def parse_vector(items: Iterable) -> tuple:
    return vec(items)


def check_same_dim(*vectors: Sequence) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def add(a, b) -> tuple:
    check_same_dim(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> tuple:
    check_same_dim(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(mu, a) -> tuple:
    mu = as_rational(mu)
    return tuple(mu * x for x in a)


def neg(a) -> tuple:
    return tuple(-x for x in a)


def is_zero(a) -> bool:
    return not any(a)


def linear_combination(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], d: int) -> tuple:
    out = [Fraction(0)] * d
    for lam, v in zip(coeffs, vectors):
        if lam:
            for k, x in enumerate(v):
                if x:
                    out[k] += lam * x
    return tuple(out)


def integer_scaling(row: Sequence[Fraction]) -> tuple[int, list[int]]:
    """Return ``(m, ints)`` with ``m > 0`` and ``ints == m * row`` exactly."""
    m = 1
    for x in row:
        m = lcm(m, x.denominator)
    return m, [int(x * m) for x in row]


def primitive(row: Sequence[int]) -> list[int]:
    g = 0
    for x in row:
        g = gcd(g, x)
    if g <= 1:
        return list(row)
    return [x // g for x in row]


def canonical_direction(v: Sequence[Fraction]) -> tuple:
    """Positive rescaling of ``v`` whose first nonzero entry is +1 or -1."""
    for x in v:
        if x:
            return tuple(y / abs(x) for y in v)
    raise ValueError("zero vector has no direction")


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    if not rows:
        raise ValueError("rank of an empty row set is undefined")
    check_same_dim(*rows)
    mat = [integer_scaling(r)[1] for r in rows]
    n_rows, n_cols = len(mat), len(mat[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        for i in range(r + 1, n_rows):
            a = mat[i][c]
            mat[i] = [(x * p - a * y) // prev for x, y in zip(mat[i], mat[r])]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def is_proportional(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction | None:
    """The unique nonzero ``lam`` with ``a == lam * b``, else None."""
    check_same_dim(a, b)
    if is_zero(b):
        raise ValueError("reference vector b must be nonzero")
    k = next(i for i, x in enumerate(b) if x)
    lam = a[k] / b[k]
    if lam == 0:
        return None
    if all(x == lam * y for x, y in zip(a, b)):
        return lam
    return None
