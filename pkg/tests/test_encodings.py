import random
from fractions import Fraction
from math import factorial

import pytest

from oracles import lex_permutations, tsp_vector_by_enumeration
from splinterlab.encodings import (
    AP, TSP, brute_force_optima, difference_query, make_instance, objective_value,
    permutation_rank_lex, permutation_unrank_lex, prop2_face_witness, prop2_interior_witness,
    random_instance, tsp_arc_index, tsp_solution_vector, ap_solution_vector,
)
from splinterlab.errors import DimensionError, SizeCapError
from splinterlab.exact import vec
from splinterlab.polyhedra import difference_sign_counts


def test_unrank_examples():
    assert permutation_unrank_lex(3, 0) == (1, 2, 3)
    assert permutation_unrank_lex(3, 5) == (3, 2, 1)
    assert permutation_unrank_lex(4, 23) == (4, 3, 2, 1)
    with pytest.raises(IndexError):
        permutation_unrank_lex(3, 6)


@pytest.mark.parametrize("n", range(1, 7))
def test_unrank_matches_lexicographic_enumeration(n):
    expected = lex_permutations(n)
    got = [permutation_unrank_lex(n, s) for s in range(factorial(n))]
    assert got == expected
    assert all(a < b for a, b in zip(got, got[1:]))
    assert [permutation_rank_lex(p) for p in got] == list(range(factorial(n)))


def test_tours_match_table_of_size_three():
    tours = {
        0: [0, 1, 2, 3], 1: [0, 1, 3, 2], 2: [0, 2, 1, 3],
        3: [0, 2, 3, 1], 4: [0, 3, 1, 2], 5: [0, 3, 2, 1],
    }
    for s, stops in tours.items():
        assert (0, *permutation_unrank_lex(3, s)) == tuple(stops)


def test_tsp_vectors():
    assert tsp_solution_vector(3, 0) == vec([1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0])
    assert tsp_solution_vector(3, 1) == vec([1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1])
    for n in range(2, 6):
        for s in range(factorial(n)):
            x = tsp_solution_vector(n, s)
            assert len(x) == n * (n + 1) and sum(x) == n + 1
            assert list(x) == tsp_vector_by_enumeration(n, permutation_unrank_lex(n, s))


def test_arc_order_follows_instance_layout():
    idx = tsp_arc_index(3)
    order = ["01", "02", "03", "10", "12", "13", "20", "21", "23", "30", "31", "32"]
    assert [idx[(int(a), int(b))] for a, b in order] == list(range(12))


def test_ap_vectors():
    assert ap_solution_vector(3, 0) == vec([1, 0, 0, 0, 1, 0, 0, 0, 1])
    assert ap_solution_vector(2, 1) == vec([0, 1, 1, 0])
    for s in range(24):
        x = ap_solution_vector(4, s)
        rows = [x[4 * i:4 * i + 4] for i in range(4)]
        assert all(sum(r) == 1 for r in rows)
        assert all(sum(r[j] for r in rows) == 1 for j in range(4))


def _arc_vector(n, terms):
    idx = tsp_arc_index(n)
    out = [0] * (n * (n + 1))
    for sign, (i, j) in terms:
        out[idx[(i, j)]] += sign
    return vec(out)


def test_difference_queries_of_displayed_system():
    assert difference_query(TSP, 3, 0, 1) == vec([0, 0, 0, 0, 1, -1, -1, 0, 1, 1, 0, -1])
    expected = _arc_vector(3, [(1, (1, 2)), (-1, (1, 3)), (-1, (2, 0)), (1, (2, 3)), (1, (3, 0)), (-1, (3, 2))])
    assert difference_query(TSP, 3, 0, 1) == expected
    expected5 = _arc_vector(3, [(1, (0, 1)), (-1, (0, 3)), (-1, (1, 0)), (1, (1, 2)),
                                (-1, (2, 1)), (1, (2, 3)), (1, (3, 0)), (-1, (3, 2))])
    assert difference_query(TSP, 3, 0, 5) == expected5
    expected2 = _arc_vector(3, [(1, (0, 1)), (-1, (0, 2)), (1, (1, 2)), (-1, (1, 3)), (-1, (2, 1)), (1, (2, 3))])
    assert difference_query(TSP, 3, 0, 2) == expected2
    with pytest.raises(ValueError):
        difference_query(TSP, 3, 2, 2)
    with pytest.raises(IndexError):
        difference_query(TSP, 3, 0, 6)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tsp_differences_have_matching_signs(n):
    xs = TSP.solution_vectors(n)
    for s, xa in enumerate(xs):
        for t, xb in enumerate(xs):
            if s != t:
                plus, minus, _ = difference_sign_counts(tuple(a - b for a, b in zip(xa, xb)))
                assert plus == minus


def test_objective_value():
    idx = tsp_arc_index(3)
    costs = [0] * 12
    for arc, v in {(0, 1): 1, (1, 2): 2, (2, 3): 3, (3, 0): 4}.items():
        costs[idx[arc]] = v
    inst = make_instance(TSP, 3, costs)
    assert objective_value(inst, 0) == 10
    zero = make_instance(TSP, 3, [0] * 12)
    assert all(objective_value(zero, s) == 0 for s in range(6))
    assert objective_value(prop2_interior_witness(3), 0) == 0
    with pytest.raises(DimensionError):
        make_instance(TSP, 3, [0] * 11)


def test_brute_force_optima():
    assert brute_force_optima(prop2_interior_witness(3)) == {0}
    assert brute_force_optima(make_instance(TSP, 3, [0] * 12)) == set(range(6))
    for s2 in range(1, 6):
        assert brute_force_optima(prop2_face_witness(3, s2)) == {0, s2}


def test_brute_force_refuses_large_sizes():
    with pytest.raises(SizeCapError):
        brute_force_optima(make_instance(TSP, 9, [0] * 90))
    with pytest.raises(SizeCapError):
        brute_force_optima(make_instance(TSP, 4, [0] * 20), cap=10)


@pytest.mark.parametrize("n", [3, 4])
def test_brute_force_agrees_with_minimum(n):
    rng = random.Random(n)
    for _ in range(1000):
        inst = random_instance(TSP, n, rng)
        values = {s: objective_value(inst, s) for s in range(factorial(n))}
        best = min(values.values())
        assert brute_force_optima(inst) == {s for s, v in values.items() if v == best}


def test_interior_witness_layout_and_gaps():
    w = prop2_interior_witness(3)
    idx = tsp_arc_index(3)
    zeros = {(0, 1), (1, 2), (2, 3), (3, 0)}
    assert all(w.costs[idx[a]] == (0 if a in zeros else 1) for a in idx)
    # gaps enumerated over all competing tours; frozen values
    assert sorted({objective_value(w, s) for s in range(1, 6)}) == [3, 4]
    gaps4 = {objective_value(prop2_interior_witness(4), s) for s in range(1, 24)}
    assert sorted(gaps4) == [3, 4, 5]
    assert all(g.denominator == 1 and g > 0 for g in gaps4)


def test_face_witness_ties_exactly_two_tours():
    w = prop2_face_witness(3, 1)
    idx = tsp_arc_index(3)
    zeros = {(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (3, 2), (2, 0)}
    assert all(w.costs[idx[a]] == (0 if a in zeros else 1) for a in idx)
    values = [objective_value(w, s) for s in range(6)]
    assert values[0] == values[1] == 0
    # remaining tours evaluated directly
    assert values[2:] == [2, 3, 2, 3]
    with pytest.raises(IndexError):
        prop2_face_witness(3, 0)


def test_face_witness_construction_breaks_at_five():
    # a third tour can fit inside the union of two tours' arcs once n = 5
    bad = [s for s in range(1, 120) if brute_force_optima(prop2_face_witness(5, s)) != {0, s}]
    assert len(bad) == 11
    for n in (3, 4):
        assert all(brute_force_optima(prop2_face_witness(n, s)) == {0, s} for s in range(1, factorial(n)))


def test_random_instances_are_seeded_rationals():
    a = random_instance(TSP, 3, random.Random(5), max_den=7)
    b = random_instance(TSP, 3, random.Random(5), max_den=7)
    assert a == b
    assert all(isinstance(x, Fraction) for x in a.costs)
    assert random_instance(AP, 3, random.Random(1)).problem is AP
