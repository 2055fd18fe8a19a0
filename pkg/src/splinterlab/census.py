"""Splinter censuses: how a fresh query sits against every surviving solution set.

A half-space stream restricts each solution set by one chosen side of each
past query.  The census classifies a new query against every restricted set
that is still fully-dimensional and tallies the verdicts, plus the
survivor bookkeeping for either choice of side.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import get_context
from typing import Sequence

from .classify import RSP, SCP, SPL, classify_algebraic, classify_geometric
from .encodings import RilcopSpec, get_problem
from .errors import DimensionError, ProportionalQueryError, SizeCapError, VerificationError
from .exact import is_proportional, is_zero, scale, unit, sub
from .polyhedra import (
    FaceStructure, facet_normals, intersect, is_balanced_polyhedron, is_balanced_query,
    is_fully_dimensional, solution_set,
)

CENSUS_MAX_N = 5
STRATEGIES = ("random-balanced", "facet-combination", "coordinate-difference")


@dataclass(frozen=True)
class HalfSpaceStream:
    queries: tuple = ()
    signs: tuple = ()

    def __post_init__(self):
        if len(self.queries) != len(self.signs):
            raise ValueError("one sign per stream query")
        if any(sg not in (1, -1) for sg in self.signs):
            raise ValueError("signs must be +1 or -1")
        if self.queries:
            dims = {len(q) for q in self.queries}
            if len(dims) != 1:
                raise DimensionError(f"stream queries have mixed dimensions {sorted(dims)}")
        if any(is_zero(q) for q in self.queries):
            raise ValueError("stream queries must be nonzero")

    def __len__(self) -> int:
        return len(self.queries)

    def halfspaces(self) -> list[tuple]:
        return [scale(sg, q) for q, sg in zip(self.queries, self.signs)]

    def to_document(self) -> dict:
        return {"queries": [[str(x) for x in q] for q in self.queries], "signs": list(self.signs)}

    @classmethod
    def from_document(cls, doc: dict) -> "HalfSpaceStream":
        return cls(tuple(tuple(Fraction(x) for x in q) for q in doc.get("queries", [])),
                   tuple(int(sg) for sg in doc.get("signs", [])))


@dataclass(frozen=True)
class RestrictedSet:
    s: int
    polyhedron: object
    interior: tuple | None
    faces: FaceStructure | None = None

    @property
    def full(self) -> bool:
        return self.interior is not None


def _check_size(spec: RilcopSpec, n: int, unsafe_large: bool) -> None:
    if n > CENSUS_MAX_N and not unsafe_large:
        raise SizeCapError(f"census at n={n} exceeds the desk-scale cap n<={CENSUS_MAX_N}")


def _restrict_job(args) -> RestrictedSet:
    problem, n, s, halfspaces, with_faces = args
    spec = get_problem(problem)
    P = intersect(solution_set(spec, n, s), halfspaces)
    interior = is_fully_dimensional(P)
    faces = facet_normals(P, interior) if (with_faces and interior is not None) else None
    return RestrictedSet(s, P, interior, faces)


def _pool_map(func, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with get_context("fork").Pool(jobs) as pool:
        # Pool.map preserves input order, which keeps reports deterministic
        return pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs)))


def restricted_solution_sets(spec: RilcopSpec, n: int, stream: HalfSpaceStream,
                             jobs: int = 1, with_faces: bool = False) -> list[RestrictedSet]:
    d = spec.dimension(n)
    if stream.queries and len(stream.queries[0]) != d:
        raise DimensionError(f"stream has dimension {len(stream.queries[0])}, problem needs {d}")
    hs = stream.halfspaces()
    items = [(spec.name, n, s, hs, with_faces) for s in range(spec.solution_count(n))]
    return _pool_map(_restrict_job, items, jobs)


def _classify_job(args) -> dict:
    rs, q, method = args
    row = {"set": rs.s, "full": rs.full}
    if not rs.full:
        return row
    if method == "geometric":
        result = classify_geometric(q, rs.polyhedron, rs.faces)
    else:
        result = classify_algebraic(q, rs.faces)
    row.update(result.to_document())
    row["facets"] = len(rs.faces.facet_indices)
    row["balanced_set"] = is_balanced_polyhedron(rs.faces.face_defined())
    return row


def check_bookkeeping(report: dict) -> bool:
    counts = report["counts"]
    if counts["spL"] + counts["sCp"] + counts["Rsp"] != report["e_before"]:
        return False
    for side in ("plus", "minus"):
        s = report["sides"][side]
        if s["e_after"] != report["e_before"] - s["discarded_one_sided"]:
            return False
        if s["e_after"] != counts["spL"] + s["kept_one_sided"]:
            return False
    chosen = report["sides"][report["chosen_side"]]
    return report["e_after"] == chosen["e_after"]


def splinter_census(spec: RilcopSpec, n: int, stream: HalfSpaceStream, new_query,
                    side: str = "max", method: str = "algebraic", jobs: int = 1,
                    prepared: list[RestrictedSet] | None = None, detail: bool = True,
                    unsafe_large: bool = False, config: dict | None = None) -> dict:
    """Classify ``new_query`` against every fully-dimensional restricted set."""
    _check_size(spec, n, unsafe_large)
    q = tuple(new_query)
    if len(q) != spec.dimension(n):
        raise DimensionError(f"query has dimension {len(q)}, problem needs {spec.dimension(n)}")
    if is_zero(q):
        raise ValueError("queries must be nonzero")
    for j, past in enumerate(stream.queries):
        if is_proportional(q, past) is not None:
            raise ProportionalQueryError(j)
    if side not in ("max", "plus", "minus"):
        raise ValueError(f"unknown side {side!r}")
    if method not in ("algebraic", "geometric"):
        raise ValueError(f"unknown method {method!r}")

    if prepared is None:
        prepared = restricted_solution_sets(spec, n, stream, jobs, with_faces=True)
    rows = _pool_map(_classify_job, [(rs, q, method) for rs in prepared], jobs)

    counts = {SPL: 0, SCP: 0, RSP: 0}
    plus = minus = 0
    for row in rows:
        if not row["full"]:
            continue
        counts[row["verdict"]] += 1
        if row["verdict"] != SPL:
            if row["orientation"] == "+":
                plus += 1
            elif row["orientation"] == "-":
                minus += 1
            else:
                raise VerificationError(f"set {row['set']} lies on the query plane yet is full")
    e_before = sum(1 for row in rows if row["full"])
    sides = {
        "plus": {"kept_one_sided": plus, "discarded_one_sided": minus, "e_after": e_before - minus},
        "minus": {"kept_one_sided": minus, "discarded_one_sided": plus, "e_after": e_before - plus},
    }
    if side == "max":
        side = "plus" if sides["plus"]["e_after"] >= sides["minus"]["e_after"] else "minus"

    unbalanced = not is_balanced_query(q)
    violations = [row["set"] for row in rows
                  if row["full"] and unbalanced and row["balanced_set"] and row["verdict"] != SPL]

    report = {
        "problem": spec.name,
        "n": n,
        "p": len(stream),
        "query": [str(x) for x in q],
        "method": method,
        "counts": counts,
        "sets_total": len(rows),
        "e_before": e_before,
        "dropped": len(rows) - e_before,
        "sides": sides,
        "chosen_side": side,
        "e_after": sides[side]["e_after"],
        "prop1_violations": violations,
        "config": dict(config or {}),
    }
    if detail:
        report["sets"] = rows
    if not check_bookkeeping(report):
        raise VerificationError("census bookkeeping identity failed")
    return report


# -- conjecture probing ----------------------------------------------------------

def random_balanced_query(d: int, rng: random.Random, bound: int = 3) -> tuple:
    while True:
        v = [rng.randint(-bound, bound) for _ in range(d)]
        v[rng.randrange(d)] -= sum(v)
        if any(v):
            return tuple(Fraction(x) for x in v)


def coordinate_difference_queries(d: int) -> list[tuple]:
    return [sub(unit(d, i), unit(d, j)) for i in range(d) for j in range(i + 1, d)]


def random_stream(d: int, p: int, rng: random.Random) -> HalfSpaceStream:
    queries = []
    while len(queries) < p:
        q = random_balanced_query(d, rng)
        if all(is_proportional(q, old) is None for old in queries):
            queries.append(q)
    return HalfSpaceStream(tuple(queries), tuple(rng.choice((1, -1)) for _ in range(p)))


def _fresh(q, stream: HalfSpaceStream) -> bool:
    return all(is_proportional(q, past) is None for past in stream.queries)


def conjecture_probe(spec: RilcopSpec, n: int, p: int, strategy: str, trials: int, seed: int,
                     jobs: int = 1, unsafe_large: bool = False) -> dict:
    """Search for queries that leave many sets unsplintered; keep the best trial.

    ``coordinate-difference`` enumerates all pairs ``e_i - e_j`` (``i < j``) in
    order when ``trials`` covers them, otherwise samples without replacement.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {list(STRATEGIES)}")
    if p < 0 or trials < 1:
        raise ValueError("need p >= 0 and trials >= 1")
    _check_size(spec, n, unsafe_large)
    d = spec.dimension(n)
    rng = random.Random(seed)

    pairs = None
    if strategy == "coordinate-difference":
        pairs = coordinate_difference_queries(d)
        if trials < len(pairs):
            pairs = rng.sample(pairs, trials)
        trials = len(pairs)

    shared = None
    if p == 0:
        stream0 = HalfSpaceStream()
        shared = (stream0, restricted_solution_sets(spec, n, stream0, jobs, with_faces=True))

    summary, best = [], None
    for t in range(trials):
        if shared is not None:
            stream, prepared = shared
        else:
            stream = random_stream(d, p, rng)
            prepared = restricted_solution_sets(spec, n, stream, jobs, with_faces=True)
        if strategy == "coordinate-difference":
            q = pairs[t]
        elif strategy == "random-balanced":
            q = random_balanced_query(d, rng)
            while not _fresh(q, stream):
                q = random_balanced_query(d, rng)
        else:
            q = _facet_combination(prepared, stream, rng)
        if q is None or not _fresh(q, stream):
            summary.append({"trial": t, "skipped": True})
            continue
        report = splinter_census(spec, n, stream, q, jobs=jobs, prepared=prepared,
                                 unsafe_large=unsafe_large)
        entry = {"trial": t, "query": report["query"], "counts": report["counts"],
                 "e_before": report["e_before"], "e_after": report["e_after"]}
        if p:
            entry["stream"] = stream.to_document()
        summary.append(entry)
        if best is None or report["counts"][SPL] < best["counts"][SPL]:
            best = dict(report, trial=t, stream=stream.to_document())

    return {
        "problem": spec.name, "n": n, "p": p, "strategy": strategy, "trials": trials, "seed": seed,
        "min_spL": None if best is None else best["counts"][SPL],
        "best": best,
        "summary": summary,
    }


def _facet_combination(prepared: Sequence[RestrictedSet], stream: HalfSpaceStream, rng: random.Random):
    candidates = [rs for rs in prepared if rs.full and len(rs.faces.facet_indices) >= 2]
    if not candidates:
        return None
    for _ in range(32):
        rs = rng.choice(candidates)
        a, b = rng.sample(rs.faces.facet_normals, 2)
        q = tuple(x + y for x, y in zip(a, b))
        if any(q) and _fresh(q, stream):
            return q
    return None
