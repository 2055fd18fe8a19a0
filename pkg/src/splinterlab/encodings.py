"""TSP and AP as rational-input linear problem families.

A family is described by its instance dimension ``D(n)``, its solution count
``S(n)`` and the objective vector ``x(n, s)`` of each solution, so the cost
of solution ``s`` on instance ``c`` is ``x(n, s) . c``.  Solutions are
numbered by lexicographic rank of the underlying permutation of ``1..n``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable

from .errors import DimensionError, SizeCapError
from .exact import dot, sub, vec

DEFAULT_ENUMERATION_CAP = 40_320


# -- permutations ------------------------------------------------------------

def permutation_unrank_lex(n: int, s: int) -> tuple[int, ...]:
    """The ``s``-th permutation of ``1..n`` in lexicographic order (0-based)."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= s < factorial(n):
        raise IndexError(f"index {s} out of range for n={n}")
    pool = list(range(1, n + 1))
    out = []
    for k in range(n - 1, -1, -1):
        q, s = divmod(s, factorial(k))
        out.append(pool.pop(q))
    return tuple(out)


def permutation_rank_lex(perm) -> int:
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{perm!r} is not a permutation of 1..{n}")
    pool = list(range(1, n + 1))
    s = 0
    for i, v in enumerate(perm):
        q = pool.index(v)
        s += q * factorial(n - 1 - i)
        pool.pop(q)
    return s


# -- coordinate layouts ------------------------------------------------------

@lru_cache(maxsize=None)
def tsp_arcs(n: int) -> tuple[tuple[int, int], ...]:
    """Arc order (0,1),(0,2),...,(0,n),(1,0),(1,2),...,(n,n-1)."""
    return tuple((i, j) for i in range(n + 1) for j in range(n + 1) if i != j)


@lru_cache(maxsize=None)
def tsp_arc_index(n: int) -> dict[tuple[int, int], int]:
    return {a: k for k, a in enumerate(tsp_arcs(n))}


def tour_arcs(perm) -> list[tuple[int, int]]:
    stops = (0, *perm, 0)
    return list(zip(stops, stops[1:]))


# -- problem families --------------------------------------------------------

@dataclass(frozen=True)
class RilcopSpec:
    name: str
    dimension: Callable[[int], int]
    solution_count: Callable[[int], int]
    vector_fn: Callable[[int, int], tuple] = field(repr=False)

    def solution_vector(self, n: int, s: int) -> tuple:
        if not 0 <= s < self.solution_count(n):
            raise IndexError(f"solution index {s} out of range for {self.name} n={n}")
        return self.vector_fn(n, s)

    def solution_vectors(self, n: int) -> list[tuple]:
        return [self.vector_fn(n, s) for s in range(self.solution_count(n))]


@lru_cache(maxsize=None)
def tsp_solution_vector(n: int, s: int) -> tuple:
    perm = permutation_unrank_lex(n, s)
    index = tsp_arc_index(n)
    out = [Fraction(0)] * (n * (n + 1))
    for arc in tour_arcs(perm):
        out[index[arc]] = Fraction(1)
    return tuple(out)


@lru_cache(maxsize=None)
def ap_solution_vector(n: int, s: int) -> tuple:
    perm = permutation_unrank_lex(n, s)
    out = [Fraction(0)] * (n * n)
    for i, j in enumerate(perm):
        out[i * n + (j - 1)] = Fraction(1)
    return tuple(out)


TSP = RilcopSpec("tsp", lambda n: n * (n + 1), factorial, tsp_solution_vector)
AP = RilcopSpec("ap", lambda n: n * n, factorial, ap_solution_vector)

PROBLEMS = {"tsp": TSP, "ap": AP}


def get_problem(name: str) -> RilcopSpec:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; expected one of {sorted(PROBLEMS)}") from None


# -- instances ---------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    problem: RilcopSpec
    n: int
    costs: tuple

    def __post_init__(self):
        if len(self.costs) != self.problem.dimension(self.n):
            raise DimensionError(
                f"{self.problem.name} n={self.n} needs {self.problem.dimension(self.n)} costs, "
                f"got {len(self.costs)}"
            )


def make_instance(problem: RilcopSpec, n: int, costs) -> Instance:
    return Instance(problem, n, vec(costs))


def random_instance(problem: RilcopSpec, n: int, rng: random.Random,
                    low: int = -10, high: int = 10, max_den: int = 5) -> Instance:
    """Costs ``k/m`` with ``k`` uniform on ``[low, high]`` and ``m`` on ``[1, max_den]``."""
    d = problem.dimension(n)
    costs = tuple(Fraction(rng.randint(low, high), rng.randint(1, max_den)) for _ in range(d))
    return Instance(problem, n, costs)


def difference_query(spec: RilcopSpec, n: int, s: int, s2: int) -> tuple:
    if s == s2:
        raise ValueError("difference query needs two distinct solutions")
    return sub(spec.solution_vector(n, s), spec.solution_vector(n, s2))


def objective_value(instance: Instance, s: int) -> Fraction:
    x = instance.problem.solution_vector(instance.n, s)
    if len(x) != len(instance.costs):
        raise DimensionError("instance dimension does not match the problem")
    return dot(x, instance.costs)


def check_enumerable(spec: RilcopSpec, n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    count = spec.solution_count(n)
    if count > cap:
        raise SizeCapError(f"{spec.name} n={n} has {count} solutions, over the cap of {cap}")
    return count


def brute_force_optima(instance: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> set[int]:
    count = check_enumerable(instance.problem, instance.n, cap)
    values = [objective_value(instance, s) for s in range(count)]
    best = min(values)
    return {s for s, v in enumerate(values) if v == best}


# -- witnesses from the full-dimensionality / facet argument for TSP --------

def _zero_on_tours(n: int, tours: list[int]) -> Instance:
    index = tsp_arc_index(n)
    costs = [Fraction(1)] * (n * (n + 1))
    for s in tours:
        for arc in tour_arcs(permutation_unrank_lex(n, s)):
            costs[index[arc]] = Fraction(0)
    return Instance(TSP, n, tuple(costs))


def prop2_interior_witness(n: int) -> Instance:
    """Zero cost on the identity tour's arcs, one elsewhere: tour 0 strictly optimal."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _zero_on_tours(n, [0])


def prop2_face_witness(n: int, s2: int) -> Instance:
    """Zero cost on the arcs of tours 0 and ``s2``: exactly those two tie for optimal."""
    if not 1 <= s2 < factorial(n):
        raise IndexError(f"tour index {s2} out of range 1..{factorial(n) - 1}")
    return _zero_on_tours(n, [0, s2])
