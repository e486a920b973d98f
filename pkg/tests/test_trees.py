import math
from fractions import Fraction

import pytest

from distpart.automorphism import is_asymmetric
from distpart.errors import BudgetExceeded, EvenParameter, InsufficientData, NotApplicableCase, NotATree
from distpart.hypercore import LabeledHypergraph, is_tree
from distpart.oracle import free_trees, unlabeled_hypertrees
from distpart.partition import params, value_bounds, weight_and_value
from distpart.trees import (EnrichmentSpec, build_T_star, c_graph, constant_C,
                            constant_C_general, count_asymmetric_trees, enriched_counts,
                            enumerate_enriched, estimate_growth, format_catalogue,
                            labelled_count_formula, labelled_count_prufer, ordered_forest_counts,
                            parse_catalogue, plain_spec, theorem_constants, z_value)

# exhaustive generation, frozen
IDENTITY_TREES_BY_EDGES = [1, 0, 0, 0, 0, 0, 1, 1, 3, 6, 15, 29, 67]
ROOTED_IDENTITY_BY_EDGES = [1, 1, 1, 2, 3, 6, 12, 25, 52, 113]
HYPERTREES = {2: [1, 1, 2, 3, 6, 11, 23], 3: [1, 1, 2, 4, 8, 19, 48], 4: [1, 1, 2, 4, 9, 21, 56]}


def test_plain_counts_match_frozen_enumeration():
    table = count_asymmetric_trees(12)
    assert table.series("unrooted") == IDENTITY_TREES_BY_EDGES
    assert table.series("rooted")[:10] == ROOTED_IDENTITY_BY_EDGES


def test_plain_counts_match_live_enumeration():
    trees, table = enumerate_enriched(plain_spec(9), 9)
    rec = count_asymmetric_trees(8)
    assert table.series("unrooted") == rec.series("unrooted")
    assert table.series("rooted") == rec.series("rooted")
    assert all(is_asymmetric(t) for t in trees)


@pytest.mark.parametrize("a", [(1, 1, 1), (2, 1), (1, 2, 1)])
def test_enriched_recurrence_matches_enumeration(a):
    spec = EnrichmentSpec(len(a), a)
    _, table = enumerate_enriched(spec, 7)
    rec = count_asymmetric_trees(6, spec)
    assert table.series("unrooted") == rec.series("unrooted")
    assert table.series("rooted") == rec.series("rooted")


def test_enriched_counts_shapes():
    P, T, U = enriched_counts(plain_spec(6), 6)
    assert len(P) == len(T) == len(U) == 7
    assert U[1] == 1 and T[1] == 1


def test_count_limit():
    with pytest.raises(BudgetExceeded):
        count_asymmetric_trees(30, limit=24)


def test_spec_validation():
    with pytest.raises(ValueError):
        EnrichmentSpec(2, (0, 1))
    with pytest.raises(ValueError):
        EnrichmentSpec(2, (1,))


@pytest.mark.parametrize("n1", [2, 3, 4])
def test_hypertree_counts(n1):
    got = [0] * 7
    for u in unlabeled_hypertrees(n1, 7):
        got[u.n_edges - 1] += 1
        assert is_tree(u)
    assert got == HYPERTREES[n1]


def test_free_trees_match_hypertrees():
    for n in range(2, 9):
        assert sum(1 for _ in free_trees(n)) == HYPERTREES[2][n - 2]


def test_ordered_forests():
    # L = 1 + R L with R = x (single-vertex trees only) gives L_n = 1
    assert ordered_forest_counts([0, 1], 5) == [1, 1, 1, 1, 1, 1]


@pytest.mark.parametrize("i, e3, e3x2", [(3, 4, 8), (5, 90, 360), (7, 5040, 40320)])
def test_labelled_counts_formula_vs_prufer(i, e3, e3x2):
    assert labelled_count_formula(i) == e3
    assert labelled_count_formula(i, "E1+2E3") == e3x2
    assert labelled_count_prufer(i + 1, {1: 1, 3: 1}) == e3
    assert labelled_count_prufer(i + 1, {1: 1, 3: 2}) == e3x2


def test_labelled_counts_even_rejected():
    with pytest.raises(EvenParameter):
        labelled_count_formula(4)


def test_growth_recovers_planted_geometric():
    fit = estimate_growth({i: 2 ** i for i in range(1, 30)}, exponent=0.0)
    assert abs(fit.beta_hat - 2.0) < 1e-9
    fit = estimate_growth({i: 3.0 ** i * i ** -2.5 for i in range(1, 40)})
    assert abs(fit.beta_hat - 3.0) / 3.0 < 0.01


def test_growth_on_identity_trees():
    fit = estimate_growth(count_asymmetric_trees(40, limit=40))
    assert fit.window == (23, 40)
    assert 2.4 < fit.beta_hat < 2.6
    assert fit.corrected_ratio_var < fit.raw_ratio_var
    assert fit.ratios_monotone


def test_growth_needs_data():
    with pytest.raises(InsufficientData):
        estimate_growth([1, 2, 3])


def test_t_star_small_catalogue():
    cat = build_T_star(params(2, 1), 8)
    assert [e.edge_count for e in cat] == [6, 7, 8, 8, 8]
    assert all(e.value == 1 for e in cat)


@pytest.mark.parametrize("n1, m2, max_edges", [(2, 2, 4), (3, 4, 3), (2, 3, 4)])
def test_t_star_invariants(n1, m2, max_edges):
    prm = params(n1, m2)
    cat = build_T_star(prm, max_edges)
    assert cat
    vals = [e.edge_value for e in cat]
    assert vals == sorted(vals, reverse=True)
    keys = set()
    for e in cat:
        h = e.hypergraph
        assert is_tree(h) and is_asymmetric(h)
        assert e.value > 0 and weight_and_value(h, prm).value == e.value
        assert value_bounds(h, prm).all_hold
        assert e.key not in keys
        keys.add(e.key)
        assert len(e.members()) == e.xi_class_size
        assert m2 % e.xi_class_size == 0


@pytest.mark.parametrize("n1, m2, max_edges", [(2, 1, 7), (2, 2, 4), (3, 4, 3)])
def test_t_star_pruning_is_safe(n1, m2, max_edges):
    prm = params(n1, m2)
    a = build_T_star(prm, max_edges)
    b = build_T_star(prm, max_edges, prune=False)
    assert [e.key for e in a] == [e.key for e in b]


def test_t_star_empty_when_j_full():
    assert build_T_star(params(3, 2), 4) == []


def test_catalogue_round_trip():
    cat = build_T_star(params(2, 2), 3)
    rows = parse_catalogue(format_catalogue(cat))
    assert [(k, t, v) for k, t, v, _ in rows] == [(e.key, e.edge_count, e.value) for e in cat]
    assert [h for *_, h in rows] == [e.hypergraph for e in cat]


def test_c_graph_path():
    prm = params(3, 4)
    full = (1, 2, 3, 4)
    u = LabeledHypergraph((full,) * 7, [(0, 1, 2), (2, 3, 4), (4, 5, 6)], 4)
    cg = c_graph(u, prm)
    # full labels leave no defects: the blue middle collapses into one segment
    assert cg.defects == 0
    assert set(cg.colors.values()) == {"blue"}
    assert cg.contracted_edges == ((("e", 0), ("e", 2), 4),)


def test_c_graph_colours_follow_defects():
    from distpart.partition import defects
    prm = params(3, 4)
    full = (1, 2, 3, 4)
    labels = ((), (), full, full, full, (1,), ())
    u = LabeledHypergraph(labels, [(0, 1, 2), (2, 3, 4), (4, 5, 6)], 4)
    cg = c_graph(u, prm)
    d = defects(u, prm)
    assert d.total > 0 and cg.defects == d.total
    for i in range(3):
        assert (cg.colors[("e", i)] == "red") == (i in d.defective_edges)


def test_c_graph_rejects_cycles():
    with pytest.raises(NotATree):
        c_graph(LabeledHypergraph(((1,),) * 3, [(0, 1), (1, 2), (0, 2)], 1), params(2, 1))


def test_constant_C_cases():
    assert constant_C(3, 3) == (Fraction(3), "path")
    c, case = constant_C(3, 4)
    assert case == "j0"
    assert c == Fraction(4 ** 3 * math.comb(4, 1), math.factorial(4))
    with pytest.raises(NotApplicableCase):
        constant_C(4, 3)


def test_constant_C_general_formula():
    m2, j = 9, 1
    e = 2 * m2 - 4 * j - 4
    expected = Fraction(math.comb(m2, j + 1) ** (m2 - 2 * j - 1) * math.comb(m2, j) ** (m2 - 2 * j - 3)
                        * math.comb(e, m2 - 2 * j - 3), math.factorial(e)) / 2 ** (m2 - 2 * j - 3)
    assert constant_C_general(m2, j) == expected


def test_theorem_constants_forms():
    assert theorem_constants(2, 3).epsilon_form == "m1/log_beta(m1)"
    assert theorem_constants(3, 4).epsilon_form == "m1^(3/4)"
    tc = theorem_constants(2, 1, m1=1000, alpha=0.3, beta=2.5)
    assert tc.z == z_value(1000, 0.3, 2.5) and tc.z > 0
