"""Exact linear programming over the rationals.

The workhorse is an integer-preserving tableau simplex: the tableau is kept
as Python ints together with a common positive denominator (the current
basis determinant) and updated with Bareiss-style exact divisions.  Bland's
rule prevents cycling, which matters since the homogeneous systems we solve
are massively degenerate.

Two public entry points sit on top of it:

* :func:`solve_feasibility` finds ``c`` with ``f.c <= 0`` (``< 0`` for strict
  rows) for every normal ``f``.
* :func:`cone_member` decides whether a target is a nonnegative combination
  of generators, returning either the multipliers or a separating vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, VerificationError
from .exact import dot, integer_scaling, is_zero, linear_combination, primitive


class _Tableau:
    """Maximize ``cost . x`` s.t. ``A x = b``, ``x >= 0`` from a given identity basis."""

    def __init__(self, rows: list[list[int]], rhs: list[int], cost: list[int], basis: list[int]):
        self.n_cols = len(cost)
        self.rows = [row + [b] for row, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.den = 1
        obj = [-c for c in cost] + [0]
        for i, j in enumerate(self.basis):
            cb = cost[j]
            if cb:
                obj = [o + cb * t for o, t in zip(obj, self.rows[i])]
        self.obj = obj
        self.pivots = 0

    def _pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        den = self.den
        rows = self.rows
        for i, row in enumerate(rows):
            if i == r:
                continue
            a = row[c]
            if a:
                rows[i] = [(x * p - a * y) // den for x, y in zip(row, prow)]
            elif p != den:
                rows[i] = [x * p // den for x in row]
        a = self.obj[c]
        if a:
            self.obj = [(x * p - a * y) // den for x, y in zip(self.obj, prow)]
        elif p != den:
            self.obj = [x * p // den for x in self.obj]
        self.den = p
        self.basis[r] = c
        self.pivots += 1

    def solve(self) -> None:
        obj = None
        while True:
            obj = self.obj
            enter = next((j for j in range(self.n_cols) if obj[j] < 0), None)
            if enter is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    # compare row[-1]/a against best ratio; ties broken by basic index
                    lhs = row[-1] * self.rows[best][enter]
                    rhs = self.rows[best][-1] * a
                    if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                        best = i
            if best is None:
                raise ArithmeticError("LP unbounded; the callers' formulations never should be")
            self._pivot(best, enter)

    def value(self) -> Fraction:
        return Fraction(self.obj[-1], self.den)

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n_cols
        for i, j in enumerate(self.basis):
            x[j] = Fraction(self.rows[i][-1], self.den)
        return x


def _check_normals(normals: Sequence[Sequence[Fraction]]) -> int:
    if not normals:
        raise ValueError("at least one normal is required")
    dims = {len(f) for f in normals}
    if len(dims) != 1:
        raise DimensionError(f"normals have mixed dimensions {sorted(dims)}")
    d = dims.pop()
    if d < 1:
        raise DimensionError("zero-dimensional input")
    return d


def solve_feasibility(normals: Sequence[Sequence[Fraction]], strict: Sequence[bool] | bool = False):
    """Find ``c`` with ``f.c <= 0`` for all normals, strictly where flagged.

    Returns a witness in the box ``[-1, 1]^d`` or ``None`` when infeasible.
    The LP maximizes an auxiliary slack ``t <= 1`` subject to
    ``f.c + t <= 0`` on strict rows; the system is strictly feasible iff the
    optimum is positive.  ``c`` is split as ``p - m`` with ``p, m >= 0`` so the
    origin is a feasible starting vertex and no phase one is needed.
    """
    d = _check_normals(normals)
    if isinstance(strict, bool):
        strict = [strict] * len(normals)
    if len(strict) != len(normals):
        raise ValueError("one strictness flag per normal")
    if not any(strict):
        return (Fraction(0),) * d

    k = len(normals)
    n_cols = 2 * d + 1 + k + 1
    t_col = 2 * d
    rows, rhs = [], []
    for i, (f, st) in enumerate(zip(normals, strict)):
        ints = primitive(integer_scaling(f)[1])
        row = [0] * n_cols
        row[:d] = ints
        row[d:2 * d] = [-x for x in ints]
        row[t_col] = 1 if st else 0
        row[t_col + 1 + i] = 1
        rows.append(row)
        rhs.append(0)
    row = [0] * n_cols
    row[t_col] = 1
    row[-1] = 1
    rows.append(row)
    rhs.append(1)
    cost = [0] * n_cols
    cost[t_col] = 1
    tab = _Tableau(rows, rhs, cost, list(range(t_col + 1, n_cols)))
    tab.solve()
    if tab.value() <= 0:
        return None
    x = tab.primal()
    c = [x[j] - x[d + j] for j in range(d)]
    big = max(abs(v) for v in c)
    witness = tuple(v / big for v in c)
    for f, st in zip(normals, strict):
        val = dot(f, witness)
        if val > 0 or (st and val == 0):
            raise VerificationError("feasibility witness failed exact recomputation")
    return witness


@dataclass(frozen=True)
class ConeMembershipResult:
    member: bool
    multipliers: tuple | None = None
    separator: tuple | None = None

    def __bool__(self) -> bool:
        return self.member


def cone_member(target: Sequence[Fraction], generators: Sequence[Sequence[Fraction]]) -> ConeMembershipResult:
    """Decide ``target in cone(generators)`` with an exact certificate.

    Members come with nonnegative multipliers; non-members with a separator
    ``c`` such that ``g.c <= 0`` for every generator and ``target.c > 0``.
    """
    if not generators:
        raise ValueError("generators must be nonempty")
    d = len(target)
    dims = {len(g) for g in generators}
    if dims != {d}:
        raise DimensionError(f"target has dimension {d}, generators {sorted(dims)}")
    k = len(generators)
    if is_zero(target):
        return ConeMembershipResult(True, multipliers=(Fraction(0),) * k)

    # one equality row per coordinate: sum_j lam_j g_j[r] + art_r = target[r]
    n_cols = k + d
    rows, rhs, row_scale = [], [], []
    for r in range(d):
        m, ints = integer_scaling([g[r] for g in generators] + [target[r]])
        sign = -1 if ints[-1] < 0 else 1
        row = [0] * n_cols
        row[:k] = [sign * x for x in ints[:k]]
        row[k + r] = 1
        rows.append(row)
        rhs.append(sign * ints[-1])
        row_scale.append(sign * m)
    cost = [0] * k + [-1] * d
    tab = _Tableau(rows, rhs, cost, list(range(k, n_cols)))
    tab.solve()

    if tab.value() == 0:
        lam = tuple(tab.primal()[:k])
        if linear_combination(lam, generators, d) != tuple(target):
            raise VerificationError("membership multipliers failed exact recomputation")
        return ConeMembershipResult(True, multipliers=lam)

    # dual of phase one: y_r = obj[art_r]/den - 1 and -y separates
    sep_ints = [(tab.den - tab.obj[k + r]) * row_scale[r] for r in range(d)]
    sep = tuple(Fraction(x) for x in primitive(sep_ints))
    if dot(target, sep) <= 0 or any(dot(g, sep) > 0 for g in generators):
        raise VerificationError("Farkas separator failed exact recomputation")
    return ConeMembershipResult(False, separator=sep)
