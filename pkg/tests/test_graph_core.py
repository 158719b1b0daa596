from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linfgraph import (
    DistanceFunction,
    Graph,
    InputError,
    PerturbationFailed,
    blocks,
    is_generic,
    perturb_to_generic,
    shortest_path_table,
    suppress_degree_2,
    validate_distance_function,
)
from linfgraph.graph_core import to_fraction

from oracles import sp_by_relaxation


# -- strategies ----------------------------------------------------------------

@st.composite
def small_graph(draw, max_n=6, min_n=2):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    picks = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    return Graph.build(range(n), picks)


@st.composite
def weighted_graph(draw, max_n=6):
    g = draw(small_graph(max_n=max_n))
    ws = draw(
        st.lists(st.integers(0, 30), min_size=g.m, max_size=g.m)
    )
    return g, DistanceFunction.from_values(ws)


# -- construction --------------------------------------------------------------

def test_build_sorts_and_canonicalizes():
    g = Graph.build([3, 1, 2], [(3, 1), (2, 3)])
    assert g.vertices == (1, 2, 3)
    assert g.edges == ((1, 3), (2, 3))
    assert g.edge_id(3, 1) == 0


def test_build_rejects_bad_input():
    with pytest.raises(InputError):
        Graph.build([1, 2], [(1, 3)])
    with pytest.raises(InputError):
        Graph.build([1, 2], [(1, 1)])
    with pytest.raises(InputError):
        Graph.build([1, 2], [(1, 2), (2, 1)])
    with pytest.raises(InputError):
        Graph.build([True], [])
    assert Graph.build([1, 1], []).vertices == (1,)  # vertex lists are sets


def test_mixed_vertex_ids_order():
    g = Graph.build(["b", 2, "a", 1], [(1, "a")])
    assert g.vertices == (1, 2, "a", "b")


def test_to_fraction_forms():
    assert to_fraction("7/2") == Fraction(7, 2)
    assert to_fraction(3) == 3
    assert to_fraction(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(InputError):
        to_fraction(0.5)
    with pytest.raises(InputError):
        to_fraction("x/y")


def test_distance_function_from_map_checks():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3)])
    d = DistanceFunction.from_map(g, {(2, 1): 5, (2, 3): "1/2"})
    assert d.weights == (Fraction(5), Fraction(1, 2))
    with pytest.raises(InputError):
        DistanceFunction.from_map(g, {(1, 2): 5})
    with pytest.raises(InputError):
        DistanceFunction.from_map(g, {(1, 2): -1, (2, 3): 1})


def test_contract_edge_collapses_parallels():
    c4 = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    g = c4.contract_edge(0, 1)
    assert g.n == 3 and g.m == 3  # triangle


# -- validation ----------------------------------------------------------------

def test_validate_flags_long_edge_with_witness_path():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    d = DistanceFunction.from_map(g, {(1, 2): 1, (2, 3): 1, (1, 3): 5})
    report = validate_distance_function(g, d)
    assert not report.valid
    (v,) = report.violations
    assert v.edge == (1, 3)
    assert v.path == (1, 2, 3)
    assert v.length == 2


def test_validate_accepts_zero_weights():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    d = DistanceFunction.from_values([0, 1, 1])
    assert validate_distance_function(g, d).valid


@settings(max_examples=60, deadline=None)
@given(weighted_graph())
def test_validate_matches_relaxation_oracle(gd):
    g, d = gd
    sp = sp_by_relaxation(g, d)
    expect = all(sp[u][v] == d.weights[eid] for eid, (u, v) in enumerate(g.edges))
    assert validate_distance_function(g, d).valid == expect


@settings(max_examples=40, deadline=None)
@given(weighted_graph())
def test_metric_closure_is_valid(gd):
    g, d = gd
    _, dist, _ = shortest_path_table(g, d)
    vi = g.vertex_index
    closed = DistanceFunction(tuple(dist[vi[u]][vi[v]] for u, v in g.edges))
    assert validate_distance_function(g, closed).valid


# -- genericity ----------------------------------------------------------------

def test_generic_triangle():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert is_generic(g, DistanceFunction.from_values([3, 4, 5])).status == "generic"


def test_not_generic_reports_cycle_and_split():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    d = DistanceFunction.from_values([1, 1, 2])
    report = is_generic(g, d)
    assert report.status == "not_generic"
    assert not report
    total = sum(d.weights[e] for e in report.cycle)
    assert sum(d.weights[e] for e in report.subset) * 2 == total


def test_forest_is_vacuously_generic():
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3)])
    report = is_generic(g, DistanceFunction.from_values([1, 1, 1]))
    assert report.status == "generic"
    assert report.pairs_checked == 0


def test_generic_budget_exceeded():
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    report = is_generic(g, DistanceFunction.from_values([1, 2, 4, 8]), budget=2)
    assert report.status == "budget_exceeded"


# -- perturbation --------------------------------------------------------------

def test_perturb_repairs_unit_square():
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    d = DistanceFunction.from_values([1, 1, 1, 1])
    assert is_generic(g, d).status == "not_generic"
    out = perturb_to_generic(g, d, seed=0)
    assert is_generic(g, out).status == "generic"
    assert validate_distance_function(g, out).valid
    for w, w0 in zip(out.weights, d.weights):
        assert abs(w - w0) <= w0 * Fraction(1, 2**20)


def test_perturb_returns_generic_input_unchanged():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    d = DistanceFunction.from_values([3, 4, 5])
    assert perturb_to_generic(g, d) is d


def test_perturb_cannot_fix_zero_cycle():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    d = DistanceFunction.from_values([0, 0, 0])
    with pytest.raises(PerturbationFailed):
        perturb_to_generic(g, d)


def test_perturb_rejects_invalid_input():
    g = Graph.build([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(InputError):
        perturb_to_generic(g, DistanceFunction.from_values([1, 1, 9]))


# -- blocks and suppression ------------------------------------------------------

def test_blocks_of_bowtie():
    g = Graph.build(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    bs = blocks(g)
    assert sorted(b.n for b in bs) == [3, 3]
    assert sorted(b.m for b in bs) == [3, 3]


def test_bridges_are_single_edge_blocks():
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3)])
    assert sorted(b.m for b in blocks(g)) == [1, 1, 1]


@settings(max_examples=50, deadline=None)
@given(small_graph())
def test_blocks_partition_edges(g):
    seen = []
    for b in blocks(g):
        seen.extend(frozenset(e) for e in b.edges)
    assert sorted(seen, key=sorted) == sorted(
        (frozenset(e) for e in g.edges), key=sorted
    )
    assert len(set(seen)) == len(seen) == g.m


def test_suppress_c5_to_triangle():
    g = Graph.build(range(1, 6), [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    reduced, log = suppress_degree_2(g)
    assert reduced.n == 3 and reduced.m == 3
    assert len(log.steps) == 2
    assert all(s.kind in ("smooth", "delete") for s in log.steps)


def test_suppress_subdivided_k4():
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]
    g = Graph.build(list(range(4)) + [9], k4 + [(2, 9), (3, 9)])  # edge 23 subdivided by 9
    reduced, _ = suppress_degree_2(g)
    assert reduced.n == 4 and reduced.m == 6


def test_suppress_k4ek4_minus_edge_reaches_k4():
    # dropping the shared-triangle edge creates suppressible vertices; the
    # fixpoint is a plain K4
    from linfgraph import named_graph

    g = named_graph("K4eK4").without_edge(2, 3)
    reduced, log = suppress_degree_2(g)
    assert reduced.n == 4 and reduced.m == 6
    assert all(reduced.degree(v) == 3 for v in reduced.vertices)


def test_suppress_leaves_forests_alone():
    g = Graph.build(range(5), [(0, 1), (1, 2), (2, 3), (3, 4)])
    reduced, log = suppress_degree_2(g)
    assert reduced == g
    assert set(log.forest_vertices) == set(range(5))
