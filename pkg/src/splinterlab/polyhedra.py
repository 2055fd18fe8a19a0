"""Homogeneous polyhedral cones ``{c : f.c <= 0 for every normal f}``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .encodings import RilcopSpec, difference_query
from .errors import DimensionError, NotFullDimensionalError
from .exact import canonical_direction, dot, is_zero, neg
from .lp import cone_member, solve_feasibility

Label = tuple  # ("pair", s, s2) | ("query", j) | ("other", tag)


@dataclass(frozen=True)
class ConePolyhedron:
    dim: int
    normals: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.normals) != len(self.labels):
            raise ValueError("one label per normal")
        for f in self.normals:
            if len(f) != self.dim:
                raise DimensionError(f"normal of dimension {len(f)} in a {self.dim}-dimensional cone")
            if is_zero(f):
                raise ValueError("zero normal")

    @classmethod
    def from_normals(cls, dim: int, normals: Sequence, labels: Sequence | None = None) -> "ConePolyhedron":
        """Build with positive-rescaling deduplication; first label wins."""
        if labels is None:
            labels = [("other", i) for i in range(len(normals))]
        seen = set()
        keep_n, keep_l = [], []
        for f, lab in zip(normals, labels):
            f = tuple(f)
            if len(f) != dim:
                raise DimensionError(f"normal of dimension {len(f)} in a {dim}-dimensional cone")
            if is_zero(f):
                raise ValueError("zero normal")
            key = canonical_direction(f)
            if key in seen:
                continue
            seen.add(key)
            keep_n.append(f)
            keep_l.append(tuple(lab))
        return cls(dim, tuple(keep_n), tuple(keep_l))

    def __len__(self) -> int:
        return len(self.normals)

    def contains(self, c, strict: bool = False) -> bool:
        vals = (dot(f, c) for f in self.normals)
        return all(v < 0 for v in vals) if strict else all(v <= 0 for v in vals)

    def to_document(self) -> dict:
        return {
            "dim": self.dim,
            "normals": [[str(x) for x in f] for f in self.normals],
            "labels": [list(lab) for lab in self.labels],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ConePolyhedron":
        normals = [tuple(Fraction(x) for x in f) for f in doc["normals"]]
        labels = [tuple(lab) for lab in doc.get("labels", [("other", i) for i in range(len(normals))])]
        return cls.from_normals(int(doc["dim"]), normals, labels)


def solution_set(spec: RilcopSpec, n: int, s: int) -> ConePolyhedron:
    """All ``S(n)-1`` difference normals ``x(n,s) - x(n,s2)``."""
    count = spec.solution_count(n)
    if not 0 <= s < count:
        raise IndexError(f"solution index {s} out of range")
    others = [t for t in range(count) if t != s]
    normals = [difference_query(spec, n, s, t) for t in others]
    labels = [("pair", s, t) for t in others]
    return ConePolyhedron.from_normals(spec.dimension(n), normals, labels)


def intersect(P: ConePolyhedron, halfspaces: Sequence, labels: Sequence | None = None) -> ConePolyhedron:
    if not halfspaces:
        return P
    if labels is None:
        labels = [("query", j) for j in range(len(halfspaces))]
    return ConePolyhedron.from_normals(
        P.dim, list(P.normals) + [tuple(h) for h in halfspaces], list(P.labels) + list(labels)
    )


def is_fully_dimensional(P: ConePolyhedron):
    """A strict interior point, or None when the cone has empty interior."""
    if not P.normals:
        return (Fraction(0),) * P.dim  # whole space; any point is interior
    return solve_feasibility(P.normals, True)


def facet_test(P: ConePolyhedron, i: int):
    """Witness with equality on normal ``i`` and strict inequality elsewhere, or None."""
    f = P.normals[i]
    others = [g for k, g in enumerate(P.normals) if k != i]
    return solve_feasibility([f, neg(f)] + others, [False, False] + [True] * len(others))


def validate_facet_witness(P: ConePolyhedron, i: int, c) -> bool:
    if dot(P.normals[i], c) != 0:
        return False
    return all(dot(g, c) < 0 for k, g in enumerate(P.normals) if k != i)


@dataclass(frozen=True)
class FaceStructure:
    polyhedron: ConePolyhedron
    facet_flags: tuple
    witnesses: dict = field(default_factory=dict)  # normal index -> witness
    interior: tuple | None = None

    @property
    def facet_indices(self) -> list[int]:
        return [i for i, flag in enumerate(self.facet_flags) if flag]

    @property
    def facet_normals(self) -> list[tuple]:
        return [self.polyhedron.normals[i] for i in self.facet_indices]

    @property
    def facet_labels(self) -> list[tuple]:
        return [self.polyhedron.labels[i] for i in self.facet_indices]

    def validate(self) -> bool:
        return all(
            validate_facet_witness(self.polyhedron, i, self.witnesses[i]) for i in self.facet_indices
        )

    def face_defined(self) -> ConePolyhedron:
        return ConePolyhedron(self.polyhedron.dim, tuple(self.facet_normals), tuple(self.facet_labels))


def facet_normals(P: ConePolyhedron, interior=None) -> FaceStructure:
    """Flag each normal as facet or redundant, keeping a witness per facet.

    Only meaningful for full-dimensional cones; raises otherwise.
    """
    if interior is None:
        interior = is_fully_dimensional(P)
    if interior is None:
        raise NotFullDimensionalError("facet detection needs a fully-dimensional cone")
    flags, witnesses = [], {}
    for i in range(len(P.normals)):
        w = facet_test(P, i)
        flags.append(w is not None)
        if w is not None:
            witnesses[i] = w
    return FaceStructure(P, tuple(flags), witnesses, tuple(interior))


def paper_literal_face_test(spec: RilcopSpec, n: int, s: int, s2: int) -> bool:
    """True iff ``x(n,s2)`` is not a strictly positive combination of the other solutions.

    The other solutions are all ``s3`` outside ``{s, s2}``.  Membership in
    their cone is tested first; for members, a homogenized strict LP decides
    whether a combination with every multiplier positive exists.
    """
    count = spec.solution_count(n)
    for t in (s, s2):
        if not 0 <= t < count:
            raise IndexError(f"solution index {t} out of range")
    if s == s2:
        raise ValueError("s and s2 must differ")
    target = spec.solution_vector(n, s2)
    gens = [spec.solution_vector(n, t) for t in range(count) if t not in (s, s2)]
    if not gens:
        return True
    if not cone_member(target, gens):
        return True
    return not strictly_positive_combination_exists(target, gens)


def strictly_positive_combination_exists(target, gens) -> bool:
    """Is ``target = sum lam_j g_j`` solvable with every ``lam_j > 0``?

    Homogenized over ``(lam, tau)``: ``G lam - tau target = 0``, all
    coordinates strictly positive, then divide by ``tau``.
    """
    d, k = len(target), len(gens)
    rows, strict = [], []
    for r in range(d):
        row = tuple(g[r] for g in gens) + (-target[r],)
        if is_zero(row):
            continue
        rows += [row, neg(row)]
        strict += [False, False]
    for j in range(k + 1):
        e = tuple(Fraction(-1 if i == j else 0) for i in range(k + 1))
        rows.append(e)
        strict.append(True)
    return solve_feasibility(rows, strict) is not None


def is_balanced_query(q) -> bool:
    if is_zero(q):
        raise ValueError("balancedness is defined for nonzero queries")
    return sum(q, Fraction(0)) == 0


def is_balanced_polyhedron(P: ConePolyhedron) -> bool:
    return all(sum(f, Fraction(0)) == 0 for f in P.normals)


def difference_sign_counts(q) -> tuple[int, int, int]:
    """Counts of (+1 entries, -1 entries, zero entries); other values raise."""
    plus = minus = zero = 0
    for x in q:
        if x == 1:
            plus += 1
        elif x == -1:
            minus += 1
        elif x == 0:
            zero += 1
        else:
            raise ValueError(f"entry {x} is not in {{-1, 0, 1}}")
    return plus, minus, zero


__all__ = [
    "ConePolyhedron",
    "FaceStructure",
    "difference_sign_counts",
    "facet_normals",
    "facet_test",
    "intersect",
    "is_balanced_polyhedron",
    "is_balanced_query",
    "is_fully_dimensional",
    "paper_literal_face_test",
    "solution_set",
    "strictly_positive_combination_exists",
    "validate_facet_witness",
]
