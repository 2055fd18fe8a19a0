"""Comparison-only algorithms as binary trees of query planes.

A node is addressed by its answer path, a tuple over ``{+1, -1}``; the root
is ``()``.  Each node asks ``q . c <= 0``; the answer ``+1`` means yes
(ties included).  A leaf still asks its query, and its two final answers
each carry a solution label.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .encodings import Instance, RilcopSpec, difference_query
from .errors import DimensionError, SizeCapError, VerificationError
from .exact import dot, is_zero, linear_combination, neg, scale, sub
from .lp import cone_member, solve_feasibility
from .polyhedra import ConePolyhedron, FaceStructure, facet_normals, solution_set

MATERIALIZE_CAP = 2 ** 20


# -- strings -------------------------------------------------------------------

def parent(b: tuple) -> tuple:
    if not b:
        raise ValueError("the empty string has no parent")
    return b[:-1]


def sibling(b: tuple) -> tuple:
    if not b:
        raise ValueError("the empty string has no sibling")
    return b[:-1] + (-b[-1],)


def path_to_str(b: tuple) -> str:
    return "".join("+" if x > 0 else "-" for x in b)


def str_to_path(text: str) -> tuple:
    try:
        return tuple({"+": 1, "-": -1}[ch] for ch in text)
    except KeyError:
        raise ValueError(f"path {text!r} may only contain '+' and '-'") from None


def validate_tree_like(collection) -> bool:
    members = set(collection)
    return all(parent(b) in members and sibling(b) in members for b in members if b)


def leaf_subcollection(collection) -> set:
    members = set(collection)
    if not validate_tree_like(members):
        raise ValueError("collection is not tree-like")
    return {b for b in members if b + (1,) not in members and b + (-1,) not in members}


def regenerate(leaves) -> set:
    """Close a leaf set under the parent operation."""
    out = set()
    for b in leaves:
        while True:
            if b in out:
                break
            out.add(b)
            if not b:
                break
            b = b[:-1]
    return out


# -- trees ---------------------------------------------------------------------

class QueryTree:
    """Common behaviour; subclasses supply ``query``, ``is_leaf`` and ``label``."""

    problem: str
    n: int
    dim: int

    def query(self, path: tuple) -> tuple:
        raise NotImplementedError

    def is_node(self, path: tuple) -> bool:
        raise NotImplementedError

    def is_leaf(self, path: tuple) -> bool:
        raise NotImplementedError

    def label(self, path: tuple, sign: int) -> int | None:
        raise NotImplementedError

    def node_count(self) -> int:
        raise NotImplementedError

    def depth(self) -> int:
        raise NotImplementedError

    def leaves(self) -> Iterator[tuple]:
        if not self.is_node(()):
            return
        stack = [()]
        while stack:
            b = stack.pop()
            if self.is_leaf(b):
                yield b
            else:
                stack.append(b + (-1,))
                stack.append(b + (1,))

    def nodes(self) -> Iterator[tuple]:
        if not self.is_node(()):
            return
        stack = [()]
        while stack:
            b = stack.pop()
            yield b
            if not self.is_leaf(b):
                stack.append(b + (-1,))
                stack.append(b + (1,))


@dataclass
class ExplicitTree(QueryTree):
    problem: str
    n: int
    dim: int
    node_queries: dict = field(default_factory=dict)
    leaf_labels: dict = field(default_factory=dict)  # (path, sign) -> solution index

    def __post_init__(self):
        if self.node_queries and not validate_tree_like(self.node_queries):
            raise ValueError("node paths are not tree-like")
        for b, q in self.node_queries.items():
            if len(q) != self.dim:
                raise DimensionError(f"query at {path_to_str(b)!r} has dimension {len(q)}")
            if is_zero(q):
                raise ValueError(f"zero query at {path_to_str(b)!r}")

    def query(self, path):
        return self.node_queries[path]

    def is_node(self, path):
        return path in self.node_queries

    def is_leaf(self, path):
        return (path in self.node_queries and path + (1,) not in self.node_queries
                and path + (-1,) not in self.node_queries)

    def label(self, path, sign):
        return self.leaf_labels.get((path, sign))

    def node_count(self):
        return len(self.node_queries)

    def depth(self):
        return max((len(b) + 1 for b in self.node_queries), default=0)

    def to_document(self) -> dict:
        return {
            "problem": self.problem,
            "n": self.n,
            "dim": self.dim,
            "nodes": {path_to_str(b): [str(x) for x in q] for b, q in sorted(self.node_queries.items())},
            "leaves": {path_to_str(b) + ("+" if sg > 0 else "-"): s
                       for (b, sg), s in sorted(self.leaf_labels.items())},
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ExplicitTree":
        nodes = {str_to_path(k): tuple(Fraction(x) for x in v) for k, v in doc.get("nodes", {}).items()}
        labels = {}
        for key, s in doc.get("leaves", {}).items():
            if not key:
                raise ValueError("leaf keys need a trailing sign character")
            path = str_to_path(key)
            labels[(path[:-1], path[-1])] = int(s)
        dim = doc.get("dim")
        if dim is None:
            dim = len(next(iter(nodes.values()))) if nodes else 0
        return cls(doc["problem"], int(doc["n"]), int(dim), nodes, labels)


class TournamentTree(QueryTree):
    """Champion-versus-challenger over solutions ``1, 2, ..., S-1`` in order.

    Nodes are generated on demand from their path, so arbitrarily large
    trees can be walked deterministically.
    """

    def __init__(self, spec: RilcopSpec, n: int):
        self.spec = spec
        self.problem = spec.name
        self.n = n
        self.dim = spec.dimension(n)
        self.count = spec.solution_count(n)
        if self.count < 2:
            raise ValueError("a tournament needs at least two solutions")

    def _champion(self, path: tuple) -> int:
        champ = 0
        for j, b in enumerate(path):
            if b < 0:
                champ = j + 1
        return champ

    def query(self, path):
        if not self.is_node(path):
            raise KeyError(path)
        return difference_query(self.spec, self.n, self._champion(path), len(path) + 1)

    def is_node(self, path):
        return len(path) <= self.count - 2

    def is_leaf(self, path):
        return len(path) == self.count - 2

    def label(self, path, sign):
        if not self.is_leaf(path):
            return None
        return self._champion(path + (sign,))

    def node_count(self):
        return 2 ** (self.count - 1) - 1

    def depth(self):
        return self.count - 1

    def materialize(self, cap: int = MATERIALIZE_CAP) -> ExplicitTree:
        if self.node_count() > cap:
            raise SizeCapError(f"tree has {self.node_count()} nodes, over the cap of {cap}")
        nodes = {b: self.query(b) for b in self.nodes()}
        labels = {(b, sg): self.label(b, sg) for b in self.leaves() for sg in (1, -1)}
        return ExplicitTree(self.problem, self.n, self.dim, nodes, labels)


def build_tournament_tree(spec: RilcopSpec, n: int, lazy: bool | None = None,
                          cap: int = MATERIALIZE_CAP) -> QueryTree:
    tree = TournamentTree(spec, n)
    if lazy is None:
        lazy = tree.node_count() > cap
    return tree if lazy else tree.materialize(cap)


# -- execution -----------------------------------------------------------------

def leaf_halfspaces(tree: QueryTree, leaf: tuple, sign: int) -> list[tuple]:
    """Normals ``b_j * q(b[:j-1])`` along the path, then ``sign * q(leaf)``."""
    if not tree.is_leaf(leaf):
        raise KeyError(f"{path_to_str(leaf)!r} is not a leaf")
    out = [scale(b, tree.query(leaf[:j])) for j, b in enumerate(leaf)]
    out.append(scale(sign, tree.query(leaf)))
    return out


def leaf_polyhedron(tree: QueryTree, leaf: tuple, sign: int) -> ConePolyhedron:
    hs = leaf_halfspaces(tree, leaf, sign)
    return ConePolyhedron.from_normals(tree.dim, hs, [("query", j) for j in range(len(hs))])


def run_tree(tree: QueryTree, instance) -> tuple[tuple, int, int]:
    """Answer queries down to a leaf; returns ``(leaf path, final sign, solution)``."""
    c = instance.costs if isinstance(instance, Instance) else tuple(instance)
    if len(c) != tree.dim:
        raise DimensionError(f"instance has dimension {len(c)}, tree expects {tree.dim}")
    if not tree.is_node(()):
        raise ValueError("empty tree")
    path = ()
    while True:
        ans = 1 if dot(tree.query(path), c) <= 0 else -1
        if tree.is_leaf(path):
            s = tree.label(path, ans)
            if s is None:
                raise ValueError(f"reachable leaf {path_to_str(path)!r}/{ans:+d} has no label")
            return path, ans, s
        path = path + (ans,)


@dataclass(frozen=True)
class LeafCertificate:
    leaf: tuple
    sign: int
    solution: int
    multipliers: dict  # s2 -> multipliers over leaf_halfspaces

    def to_document(self) -> dict:
        return {
            "leaf": path_to_str(self.leaf), "sign": self.sign, "solution": self.solution,
            "multipliers": {str(k): [str(x) for x in v] for k, v in sorted(self.multipliers.items())},
        }


@dataclass(frozen=True)
class LeafCounterexample:
    leaf: tuple
    sign: int
    solution: int
    violated: int          # a solution strictly better than the label on this instance
    instance: tuple
    path_consistent: bool  # True when run_tree on ``instance`` reaches this leaf and sign

    def to_document(self) -> dict:
        return {
            "leaf": path_to_str(self.leaf), "sign": self.sign, "solution": self.solution,
            "violated": self.violated, "instance": [str(x) for x in self.instance],
            "path_consistent": self.path_consistent,
        }


def verify_leaf_containment(tree: QueryTree, leaf: tuple, sign: int, spec: RilcopSpec):
    """Certify the leaf cell lies in its label's solution set, or refute it."""
    s = tree.label(leaf, sign)
    if s is None:
        raise ValueError(f"leaf {path_to_str(leaf)!r}/{sign:+d} is unlabeled")
    n = tree.n
    hs = leaf_halfspaces(tree, leaf, sign)
    mults = {}
    for s2 in range(spec.solution_count(n)):
        if s2 == s:
            continue
        target = difference_query(spec, n, s, s2)
        res = cone_member(target, hs)
        if res.member:
            mults[s2] = res.multipliers
            continue
        # the cell is half-open: "-1" answers are strict inequalities
        strict = [b < 0 for b in leaf] + [sign < 0]
        c = solve_feasibility(hs + [neg(target)], strict + [True])
        consistent = c is not None
        if c is None:
            c = res.separator
        return LeafCounterexample(leaf, sign, s, s2, tuple(c), consistent)
    return LeafCertificate(leaf, sign, s, mults)


def check_leaf_certificate(tree: QueryTree, cert: LeafCertificate, spec: RilcopSpec) -> bool:
    hs = leaf_halfspaces(tree, cert.leaf, cert.sign)
    for s2, lam in cert.multipliers.items():
        if any(x < 0 for x in lam):
            return False
        if linear_combination(lam, hs, tree.dim) != difference_query(spec, tree.n, cert.solution, s2):
            return False
    return len(cert.multipliers) == spec.solution_count(tree.n) - 1


def verify_solves(tree: QueryTree, spec: RilcopSpec, n: int, cap: int = MATERIALIZE_CAP) -> dict:
    if tree.n != n or tree.dim != spec.dimension(n):
        raise DimensionError("tree does not match the problem size")
    if tree.node_count() > cap:
        raise SizeCapError(f"certifying {tree.node_count()} nodes exceeds the cap of {cap}")
    certified, failures = [], []
    for leaf in sorted(tree.leaves()):
        for sign in (1, -1):
            if tree.label(leaf, sign) is None:
                failures.append({"leaf": path_to_str(leaf), "sign": sign, "reason": "unlabeled"})
                continue
            out = verify_leaf_containment(tree, leaf, sign, spec)
            if isinstance(out, LeafCertificate):
                if not check_leaf_certificate(tree, out, spec):
                    raise VerificationError("leaf certificate failed exact recomputation")
                certified.append(out)
            else:
                failures.append({"reason": "counterexample", **out.to_document()})
    return {
        "problem": spec.name,
        "n": n,
        "solved": not failures,
        "depth": tree.depth(),
        "node_count": tree.node_count(),
        "cells": 2 * sum(1 for _ in tree.leaves()),
        "certified": [c.to_document() for c in certified],
        "failures": failures,
    }


# -- face-scrape coverage --------------------------------------------------------

def on_potential_face(tree: QueryTree, c) -> bool:
    """Does ``c`` lie on some node's plane within that node's own cell?"""
    if not tree.is_node(()):
        return False
    path = ()
    while True:
        v = dot(tree.query(path), c)
        if v == 0:
            return True
        if tree.is_leaf(path):
            return False
        path = path + ((1 if v < 0 else -1),)


def sample_facet_points(F: FaceStructure, i: int, samples: int, rng: random.Random,
                        den: int = 64) -> list[tuple]:
    """Seeded points with equality on normal ``i`` and ``<= 0`` on the others."""
    P = F.polyhedron
    f = P.normals[i]
    w = F.witnesses[i]
    ff = dot(f, f)
    others = [g for k, g in enumerate(P.normals) if k != i]
    pts = []
    for _ in range(samples):
        delta = tuple(Fraction(rng.randint(-den, den), den) for _ in range(P.dim))
        delta = sub(delta, scale(dot(f, delta) / ff, f))
        h = Fraction(1)
        for _ in range(64):
            c = tuple(x + h * y for x, y in zip(w, delta))
            if all(dot(g, c) <= 0 for g in others):
                break
            h /= 2
        else:
            c = w
        pts.append(c)
    return pts


def face_scrape_coverage(tree: QueryTree, spec: RilcopSpec, n: int, samples: int, seed: int,
                         faces: dict | None = None) -> dict:
    """Fraction of sampled facet points lying on a potential face of the tree.

    Sampling is evidence only; it cannot prove a facet fully covered.
    """
    if faces is None:
        faces = {s: facet_normals(solution_set(spec, n, s)) for s in range(spec.solution_count(n))}
    rows = []
    for s in sorted(faces):
        F = faces[s]
        for i in F.facet_indices:
            rng = random.Random(f"{seed}:{s}:{i}")
            pts = sample_facet_points(F, i, samples, rng)
            hit = sum(1 for c in pts if on_potential_face(tree, c))
            rows.append({
                "set": s, "facet": list(F.polyhedron.labels[i]), "samples": samples,
                "covered": hit, "fraction": str(Fraction(hit, samples)) if samples else "0",
            })
    return {"problem": spec.name, "n": n, "seed": seed, "samples": samples, "facets": rows}
