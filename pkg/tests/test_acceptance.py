"""Acceptance gate: one test per primary criterion, each printing PASS or FAIL."""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial

import pytest

from oracles import two_witness_splinters
from support import perturb_on_hyperplane
from splinterlab.census import (
    HalfSpaceStream, check_bookkeeping, coordinate_difference_queries, random_balanced_query,
    random_stream, splinter_census,
)
from splinterlab.classify import SPL, check_prop1, classify_algebraic, classify_geometric
from splinterlab.cli import main
from splinterlab.encodings import AP, TSP, brute_force_optima, difference_query, prop2_face_witness, random_instance
from splinterlab.errors import ProportionalQueryError
from splinterlab.exact import dot
from splinterlab.polyhedra import (
    difference_sign_counts, facet_normals, is_balanced_polyhedron, is_fully_dimensional, solution_set,
    validate_facet_witness,
)
from splinterlab.trees import build_tournament_tree, check_leaf_certificate, run_tree, verify_leaf_containment, verify_solves


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def record(name, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            took = time.perf_counter() - start
            if ok and limit is not None and took >= limit:
                ok = False
            with capsys.disabled():
                bound = f" (limit {limit:.0f}s)" if limit else ""
                print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {took:.1f}s{bound}")
        assert limit is None or took < limit, f"{name} took {took:.1f}s"
    return record


def test_full_dimensionality(criterion):
    with criterion("full-dimensionality of every TSP set at n=3 and n=4", limit=60):
        for n in (3, 4):
            for s in range(factorial(n)):
                P = solution_set(TSP, n, s)
                w = is_fully_dimensional(P)
                assert w is not None and P.contains(w, strict=True)


def test_facet_completeness(criterion):
    with criterion("facet completeness: 30 at n=3, 552 at n=4, explicit witnesses accepted", limit=300):
        for n, expected in ((3, 30), (4, 552)):
            faces = {s: facet_normals(solution_set(TSP, n, s)) for s in range(factorial(n))}
            assert sum(sum(F.facet_flags) for F in faces.values()) == expected
            assert all(F.validate() and len(F.witnesses) == len(F.facet_flags) for F in faces.values())
            P = faces[0].polyhedron
            for i, lab in enumerate(P.labels):
                assert validate_facet_witness(P, i, prop2_face_witness(n, lab[2]).costs)


def test_balancedness(criterion):
    with criterion("balancedness of every TSP and AP difference vector for n <= 5"):
        pairs = 0
        for spec in (TSP, AP):
            for n in range(1, 6):
                xs = spec.solution_vectors(n)
                for s, a in enumerate(xs):
                    for t, b in enumerate(xs):
                        if s == t:
                            continue
                        plus, minus, _ = difference_sign_counts(tuple(x - y for x, y in zip(a, b)))
                        assert plus == minus
                        pairs += 1
                for s in range(len(xs)):
                    assert is_balanced_polyhedron(solution_set(spec, n, s)) or len(xs) == 1
        assert pairs == 2 * (2 + 6 * 5 + 24 * 23 + 120 * 119)


def _unbalanced(d, rng):
    while True:
        q = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d))
        if sum(q) != 0:
            return q


def test_unbalanced_query_sweep(criterion, tsp3_faces, tsp4_faces):
    with criterion("unbalanced-query sweep: 1000 queries at n=3 and n=4, zero violations"):
        violations = 0
        rng = random.Random(20261014)
        for k in range(1000):
            q = _unbalanced(12, rng)
            for F in tsp3_faces.values():
                r = check_prop1(q, F.polyhedron, F)
                violations += r["violation"] or r["algebraic"] != SPL or r["geometric"] != SPL
        for k in range(1000):
            q = _unbalanced(20, rng)
            F = tsp4_faces[k % 24]
            r = check_prop1(q, F.polyhedron, F)
            violations += r["violation"] or r["algebraic"] != SPL or r["geometric"] != SPL
        assert violations == 0


def test_trichotomy_agreement(criterion, tsp3_faces, tsp4_faces):
    with criterion("algebraic vs geometric: 180 pairs at n=3, 500 balanced queries at n=4", limit=600):
        disagreements = pairs = 0
        for s in range(6):
            for t in range(6):
                if s == t:
                    continue
                q = difference_query(TSP, 3, s, t)
                for F in tsp3_faces.values():
                    a, g = classify_algebraic(q, F), classify_geometric(q, F.polyhedron, F)
                    disagreements += (a.verdict, a.orientation) != (g.verdict, g.orientation)
                    pairs += 1
        assert pairs == 180
        rng = random.Random(500)
        for k in range(500):
            q = random_balanced_query(20, rng)
            F = tsp4_faces[k % 24]
            a, g = classify_algebraic(q, F), classify_geometric(q, F.polyhedron, F)
            disagreements += (a.verdict, a.orientation) != (g.verdict, g.orientation)
        assert disagreements == 0


def test_tree_certification(criterion):
    with criterion("tournament tree at n=3 certified leaf by leaf, 1000 instances vs brute force"):
        tree = build_tournament_tree(TSP, 3)
        report = verify_solves(tree, TSP, 3)
        assert report["solved"] and len(report["certified"]) == report["cells"] == 32
        for leaf in tree.leaves():
            for sign in (1, -1):
                assert check_leaf_certificate(tree, verify_leaf_containment(tree, leaf, sign, TSP), TSP)
        rng = random.Random(7)
        for _ in range(1000):
            inst = random_instance(TSP, 3, rng)
            assert run_tree(tree, inst)[2] in brute_force_optima(inst)


def test_perturbation_robustness(criterion):
    with criterion("100 perturbations per facet below 1/(2n+2) keep the rest strict, n=3 and n=4"):
        for n in (3, 4):
            P = solution_set(TSP, n, 0)
            bound = Fraction(1, 2 * n + 2)
            rng = random.Random(f"perturb:{n}")
            for i, f in enumerate(P.normals):
                base = prop2_face_witness(n, P.labels[i][2]).costs
                for _ in range(100):
                    c = perturb_on_hyperplane(base, f, bound, rng)
                    assert validate_facet_witness(P, i, c)
                # worst case at the closed bound: |g . delta| <= bound * |g|_1 stays below each gap
                for k, g in enumerate(P.normals):
                    if k != i:
                        assert bound * sum(abs(x) for x in g) < -dot(g, base)


def _cli_bytes(tmp_path, argv, tag):
    out = tmp_path / f"{tag}.json"
    code = main(list(argv) + ["--out", str(out)])
    assert code == 0
    return out.read_bytes()


def test_census_reproducibility(criterion, tmp_path):
    with criterion("census and probe byte-identical over 3 runs and --jobs 1 vs 4, bookkeeping holds"):
        stream = random_stream(12, 2, random.Random(3))
        sfile = tmp_path / "stream.json"
        sfile.write_text(json.dumps(stream.to_document()))
        runs = {
            "census": ["census", "--n", "3", "--seed", "5", "--stream", str(sfile),
                       "--vector", "1,0,0,-1,0,0,0,0,0,0,0,0"],
            "probe": ["probe", "--n", "3", "--p", "1", "--trials", "4", "--seed", "11"],
        }
        for name, argv in runs.items():
            outs = [_cli_bytes(tmp_path, argv, f"{name}{k}") for k in range(3)]
            outs.append(_cli_bytes(tmp_path, argv + ["--jobs", "4"], f"{name}j4"))
            assert len(set(outs)) == 1
            doc = json.loads(outs[0])
            assert check_bookkeeping(doc if name == "census" else doc["best"])
        rng = random.Random(99)
        for _ in range(20):
            stream = random_stream(12, rng.randint(0, 3), rng)
            q = random_balanced_query(12, rng)
            try:
                report = splinter_census(TSP, 3, stream, q)
            except ProportionalQueryError:
                continue
            assert check_bookkeeping(report)
            for side, other in (("plus", "minus"), ("minus", "plus")):
                assert report["sides"][side]["e_after"] == (
                    report["e_before"] - report["sides"][side]["discarded_one_sided"])


def test_desk_scale_census(criterion):
    empty = HalfSpaceStream()
    queries = coordinate_difference_queries(12)
    with criterion("coordinate-difference census at n=3 in under a minute", limit=60):
        reports = [splinter_census(TSP, 3, empty, q) for q in queries]
    with criterion("coordinate-difference census verdicts match the two-witness oracle"):
        cones = [solution_set(TSP, 3, s).normals for s in range(6)]
        mismatches = 0
        for q, report in zip(queries, reports):
            for row in report["sets"]:
                mismatches += (row["verdict"] == SPL) != two_witness_splinters(cones[row["set"]], q)
        assert len(queries) == 66 and mismatches == 0
