"""How a query plane sits against a face-defined cone.

Three outcomes, each carrying an exact certificate:

``spL``  the plane splinters the cone: interior points exist on both sides.
``sCp``  the plane contains one facet: ``q = lam * y_f`` for a facet normal.
``Rsp``  the plane supports the cone from one side without containing a
         facet: ``+q`` or ``-q`` is a nonnegative combination of at least
         two facet normals.

Orientation ``"+"`` means the whole cone satisfies ``q.c <= 0`` (the ``+1``
answer), ``"-"`` means ``q.c >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotFullDimensionalError, VerificationError
from .exact import dot, is_proportional, is_zero, linear_combination, neg
from .lp import cone_member, solve_feasibility
from .polyhedra import ConePolyhedron, FaceStructure, facet_normals, is_balanced_polyhedron, is_balanced_query

SPL, SCP, RSP = "spL", "sCp", "Rsp"


@dataclass(frozen=True)
class Query:
    vector: tuple
    id: str | None = None

    def __post_init__(self):
        if is_zero(self.vector):
            raise ValueError("queries must be nonzero")


@dataclass(frozen=True)
class QueryClassification:
    verdict: str
    orientation: str | None = None       # "+", "-" or "both" for one-sided verdicts
    scraped_facet: tuple | None = None   # label, for sCp
    scale: Fraction | None = None        # q = scale * y_f, for sCp
    multipliers: tuple | None = None     # over facet normals, for Rsp: orientation*q = sum lam_f y_f
    side_witnesses: tuple | None = None  # (c_plus, c_minus), for spL

    @property
    def side(self) -> int | None:
        return {"+": 1, "-": -1}.get(self.orientation)

    def certificate(self) -> dict:
        if self.verdict == SCP:
            return {"facet": list(self.scraped_facet), "scale": str(self.scale)}
        if self.verdict == RSP:
            return {"orientation": self.orientation, "multipliers": [str(x) for x in self.multipliers]}
        return {"c_plus": [str(x) for x in self.side_witnesses[0]],
                "c_minus": [str(x) for x in self.side_witnesses[1]]}

    def to_document(self) -> dict:
        return {"verdict": self.verdict, "orientation": self.orientation, "certificate": self.certificate()}


def _vector(q) -> tuple:
    v = q.vector if isinstance(q, Query) else tuple(q)
    if is_zero(v):
        raise ValueError("queries must be nonzero")
    return v


def _side_witnesses(q, P: ConePolyhedron):
    normals = list(P.normals)
    c_plus = solve_feasibility(normals + [q], True)
    c_minus = solve_feasibility(normals + [neg(q)], True)
    return c_plus, c_minus


def _one_sided(q, F: FaceStructure, orientation: str | None = None) -> QueryClassification | None:
    facets = F.facet_normals
    labels = F.facet_labels
    for y, lab in zip(facets, labels):
        lam = is_proportional(q, y)
        if lam is not None:
            orient = "+" if lam > 0 else "-"
            if orientation is not None and orient != orientation:
                raise VerificationError("facet proportionality contradicts the observed side")
            return QueryClassification(SCP, orient, scraped_facet=lab, scale=lam)
    if not facets:
        return None
    plus = cone_member(q, facets) if orientation in (None, "+") else None
    minus = cone_member(neg(q), facets) if orientation in (None, "-") else None
    if plus and minus:
        # q in the lineality of the polar: impossible for a fully-dimensional cone
        return QueryClassification(RSP, "both", multipliers=plus.multipliers)
    if plus:
        return QueryClassification(RSP, "+", multipliers=plus.multipliers)
    if minus:
        return QueryClassification(RSP, "-", multipliers=minus.multipliers)
    return None


def classify_algebraic(q, F: FaceStructure) -> QueryClassification:
    """Proportionality, then cone membership of ``+q``/``-q`` over the facets."""
    q = _vector(q)
    if F.interior is None:
        raise NotFullDimensionalError("classification needs a fully-dimensional cone")
    result = _one_sided(q, F)
    if result is not None:
        return result
    c_plus, c_minus = _side_witnesses(q, F.polyhedron)
    if c_plus is None or c_minus is None:
        raise VerificationError("no signed facet combination, yet one side of the plane is empty")
    return QueryClassification(SPL, side_witnesses=(c_plus, c_minus))


def classify_geometric(q, P: ConePolyhedron, F: FaceStructure | None = None) -> QueryClassification:
    """Two strict LPs decide splintering; one-sided outcomes are refined algebraically."""
    q = _vector(q)
    c_plus, c_minus = _side_witnesses(q, P)
    if c_plus is not None and c_minus is not None:
        return QueryClassification(SPL, side_witnesses=(c_plus, c_minus))
    if c_plus is None and c_minus is None:
        raise NotFullDimensionalError("cone has no interior point on either side")
    orientation = "+" if c_minus is None else "-"
    if F is None:
        F = facet_normals(P)
    result = _one_sided(q, F, orientation)
    if result is None:
        raise VerificationError("cone lies on one side, yet no facet combination certifies it")
    return result


def validate_classification(q, F: FaceStructure, result: QueryClassification) -> bool:
    """Recompute ``result``'s certificate exactly."""
    q = _vector(q)
    P = F.polyhedron
    if result.verdict == SCP:
        idx = F.facet_labels.index(result.scraped_facet)
        y = F.facet_normals[idx]
        return result.scale != 0 and tuple(result.scale * x for x in y) == q
    if result.verdict == RSP:
        facets = F.facet_normals
        lam = result.multipliers
        if any(x < 0 for x in lam) or sum(1 for x in lam if x) < 2:
            return False
        if any(is_proportional(q, y) is not None for y in facets):
            return False
        target = q if result.orientation in ("+", "both") else neg(q)
        return linear_combination(lam, facets, P.dim) == target
    if result.verdict == SPL:
        c_plus, c_minus = result.side_witnesses
        return (dot(q, c_plus) < 0 < dot(q, c_minus)
                and P.contains(c_plus) and P.contains(c_minus))
    return False


def check_prop1(q, P: ConePolyhedron, F: FaceStructure | None = None) -> dict:
    """An unbalanced query must splinter a balanced cone; report whether it does."""
    q = _vector(q)
    report = {
        "query_balanced": is_balanced_query(q),
        "polyhedron_balanced": is_balanced_polyhedron(P),
    }
    report["applies"] = (not report["query_balanced"]) and report["polyhedron_balanced"]
    report["violation"] = False
    if not report["applies"]:
        return report
    if F is None:
        F = facet_normals(P)
    alg = classify_algebraic(q, F)
    geo = classify_geometric(q, P, F)
    report["algebraic"] = alg.verdict
    report["geometric"] = geo.verdict
    report["violation"] = alg.verdict != SPL or geo.verdict != SPL
    return report
