"""Cover search, realizations, and the combinatorial dimension bounds."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linfgraph import (
    CapExceeded,
    Cover,
    DistanceFunction,
    FinfBounds,
    Graph,
    InputError,
    Realization,
    arboricity,
    build_realization,
    decide_realizable,
    finf_bounds,
    k4ek4_witness,
    k7_generic,
    min_dimension,
    named_graph,
    random_distance_function,
    tk4_instance,
    Tree,
    verify_realization,
    vertex_cover_number,
    w4_witness,
)

from atlas import connected_graphs_upto
from oracles import brute_arboricity, brute_min_dimension, brute_realizable, brute_vertex_cover


# -- decide_realizable ---------------------------------------------------------


def test_single_edge_realizes_in_one_dimension():
    g = Graph.build(["u", "v"], [("u", "v")])
    d = DistanceFunction.from_values([7])
    out = decide_realizable(g, d, 1)
    assert out.cover is not None
    r = build_realization(g, d, out.cover)
    assert r.points == {"u": (Fraction(0),), "v": (Fraction(-7),)}


def test_w4_witness_needs_three_dimensions():
    g, d = w4_witness()
    assert decide_realizable(g, d, 2).exhausted
    out = decide_realizable(g, d, 3)
    assert out.cover is not None
    assert out.cover.check(g, d)


def test_k4ek4_witness_needs_three_dimensions():
    g, d = k4ek4_witness()
    assert decide_realizable(g, d, 2).exhausted
    assert decide_realizable(g, d, 3).cover is not None


def test_edgeless_graph_realizes_immediately():
    g = Graph.build([1, 2, 3], [])
    d = DistanceFunction.from_values([])
    out = decide_realizable(g, d, 2)
    assert out.cover is not None and out.nodes == 0
    r = build_realization(g, d, out.cover)
    assert all(p == (0, 0) for p in r.points.values())


def test_rejects_nonpositive_dimension_and_weight_mismatch():
    g = Graph.build([1, 2], [(1, 2)])
    d = DistanceFunction.from_values([1])
    with pytest.raises(InputError):
        decide_realizable(g, d, 0)
    with pytest.raises(InputError):
        decide_realizable(g, DistanceFunction((Fraction(1), Fraction(2))), 1)


def test_rejects_invalid_distance_function():
    g = named_graph("C_3")
    d = DistanceFunction.from_values([10, 1, 1])
    with pytest.raises(InputError):
        decide_realizable(g, d, 2)


def test_edge_orders_and_pruning_agree_on_verdicts():
    g, d = w4_witness()
    for k in (2, 3):
        verdicts = {
            decide_realizable(g, d, k, edge_order=order, conflict_pruning=cp).exhausted
            for order in ("weight", "canonical")
            for cp in (True, False)
        }
        assert len(verdicts) == 1


def test_explicit_edge_order_list():
    g, d = w4_witness()
    order = list(reversed(range(g.m)))
    out = decide_realizable(g, d, 3, edge_order=order)
    assert out.cover is not None and out.cover.check(g, d)


def test_threads_agree_with_single_threaded_verdict():
    g, d = w4_witness()
    assert decide_realizable(g, d, 2, threads=2).exhausted
    out = decide_realizable(g, d, 3, threads=2)
    assert out.cover is not None and out.cover.check(g, d)


def test_progress_callback_fires():
    g, d = w4_witness()
    seen = []
    decide_realizable(g, d, 2, progress=seen.append, progress_every=10)
    assert seen and seen[0] == 10


@st.composite
def _small_weighted(draw):
    n = draw(st.integers(min_value=2, max_value=5))
    verts = list(range(n))
    pool = list(itertools.combinations(verts, 2))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, min_size=1, max_size=7))
    g = Graph.build(verts, edges)
    raw = {e: draw(st.integers(min_value=1, max_value=12)) for e in g.edges}
    # shortcut every edge to its metric closure so the weights are valid
    from linfgraph import shortest_path_table

    closed = DistanceFunction.from_map(g, raw)
    vs, dist, _ = shortest_path_table(g, closed)
    vi = {v: i for i, v in enumerate(vs)}
    return g, DistanceFunction.from_map(
        g, {(u, v): dist[vi[u]][vi[v]] for u, v in g.edges}
    )


@settings(max_examples=40, deadline=None)
@given(_small_weighted(), st.integers(min_value=1, max_value=3))
def test_realizability_is_monotone_in_dimension(gd, k):
    g, d = gd
    if decide_realizable(g, d, k).cover is not None:
        assert decide_realizable(g, d, k + 1).cover is not None


@settings(max_examples=25, deadline=None)
@given(_small_weighted(), st.integers(min_value=1, max_value=3))
def test_search_matches_brute_force_oracle(gd, k):
    g, d = gd
    assert (decide_realizable(g, d, k).cover is not None) == brute_realizable(g, d, k)


# -- Cover and Realization checking --------------------------------------------


def test_cover_check_rejects_tampering():
    g, d = w4_witness()
    cover = decide_realizable(g, d, 3).cover
    assert cover.check(g, d)
    # dropping a part leaves edges uncovered
    assert not Cover(cover.parts[:-1], cover.potentials[:-1]).check(g, d)
    # mismatched lengths
    assert not Cover(cover.parts, cover.potentials[:-1]).check(g, d)
    # breaking a potential value violates tightness or the edge bound
    p0 = cover.potentials[0]
    v0 = g.vertices[0]
    bent = type(p0)({**p0.values, v0: p0.values[v0] + 1})
    assert not Cover(cover.parts, (bent,) + cover.potentials[1:]).check(g, d)


def test_build_realization_rejects_foreign_cover():
    g, d = w4_witness()
    cover = decide_realizable(g, d, 3).cover
    other_g, other_d = k4ek4_witness()
    with pytest.raises(InputError):
        build_realization(other_g, other_d, cover)


def test_build_realization_distances_are_exact():
    g, d = k4ek4_witness()
    cover = decide_realizable(g, d, 3).cover
    r = build_realization(g, d, cover)
    assert r.k == 3
    assert verify_realization(g, d, r).ok
    assert verify_realization(g, d, r.points).ok  # plain mapping also accepted


def test_verify_realization_reports_the_bad_edge():
    g = Graph.build([1, 2], [(1, 2)])
    d = DistanceFunction.from_values([5])
    res = verify_realization(g, d, {1: (0,), 2: (4,)})
    assert not res.ok and res.edge == (1, 2) and "5" in res.detail


def test_verify_realization_norms():
    g = Graph.build([1, 2], [(1, 2)])
    pts = {1: (Fraction(0), Fraction(0)), 2: (Fraction(3), Fraction(4))}
    assert verify_realization(g, DistanceFunction.from_values([4]), pts, norm="inf").ok
    assert verify_realization(g, DistanceFunction.from_values([7]), pts, norm=1).ok
    assert verify_realization(g, DistanceFunction.from_values([5]), pts, norm=2).ok
    assert not verify_realization(g, DistanceFunction.from_values([5]), pts, norm="inf").ok
    with pytest.raises(InputError):
        verify_realization(g, DistanceFunction.from_values([5]), pts, norm="3")


def test_verify_realization_input_errors():
    g = Graph.build([1, 2], [(1, 2)])
    d = DistanceFunction.from_values([1])
    with pytest.raises(InputError):
        verify_realization(g, d, {1: (0, 0)})  # vertex 2 missing
    with pytest.raises(InputError):
        verify_realization(g, d, Realization({1: (0, 0), 2: (1,)}, 2))


# -- vertex cover and arboricity ------------------------------------------------


def test_vertex_cover_known_values():
    assert vertex_cover_number(named_graph("K_7")) == 6
    assert vertex_cover_number(named_graph("W_4")) == 3
    assert vertex_cover_number(named_graph("star_6")) == 1
    assert vertex_cover_number(named_graph("C_5")) == 3
    assert vertex_cover_number(Graph.build([1], [])) == 0


def test_arboricity_known_values():
    assert arboricity(named_graph("K_7")) == 4
    assert arboricity(named_graph("W_4")) == 2
    assert arboricity(named_graph("path_6")) == 1
    # a cycle is not itself a forest: ceil(5 / 4) = 2
    assert arboricity(named_graph("C_5")) == 2
    assert arboricity(Graph.build([1, 2], [])) == 0


def test_bounds_match_brute_oracles_on_small_graphs():
    for g in connected_graphs_upto(5):
        assert vertex_cover_number(g) == brute_vertex_cover(g)
        assert arboricity(g) == brute_arboricity(g)


def test_caps_are_enforced():
    with pytest.raises(CapExceeded):
        vertex_cover_number(named_graph("path_33"))
    with pytest.raises(CapExceeded):
        arboricity(named_graph("path_21"))


# -- min_dimension ---------------------------------------------------------------


def test_trees_realize_in_one_dimension():
    g = named_graph("path_5")
    d = DistanceFunction.from_values([1, 2, 3, 4])
    assert min_dimension(g, d) == 1
    star = named_graph("star_4")
    ds = DistanceFunction.from_values([1, 2, 4, 8])
    assert min_dimension(star, ds) == 1


def test_witness_instances_have_min_dimension_three():
    assert min_dimension(*w4_witness()) == 3
    assert min_dimension(*k4ek4_witness()) == 3


def test_tk4_path3_needs_three_dimensions():
    path3 = Graph.build(["a", "b", "c"], [("a", "b"), ("b", "c")])
    g, d = tk4_instance(Tree.build(path3))
    assert min_dimension(g, d) == 3


def test_min_dimension_rejects_invalid_weights():
    g = named_graph("C_3")
    with pytest.raises(InputError):
        min_dimension(g, DistanceFunction.from_values([10, 1, 1]))


@settings(max_examples=20, deadline=None)
@given(_small_weighted())
def test_min_dimension_matches_brute_force(gd):
    g, d = gd
    assert min_dimension(g, d) == brute_min_dimension(g, d)


# -- finf_bounds ------------------------------------------------------------------


def test_finf_bounds_on_trees_and_cliques():
    g = named_graph("path_4")
    b = finf_bounds(g, samples=3, seed=1)
    # every tree realizes in one dimension; the cover-number upper bound is 2
    assert (b.lower, b.upper) == (1, 2) and b.witness is None

    star = named_graph("star_5")
    bs = finf_bounds(star, samples=2, seed=1)
    assert (bs.lower, bs.upper) == (1, 1) and bs.witness is None

    k4 = named_graph("K_4")
    b4 = finf_bounds(k4, samples=4, seed=0)
    assert b4.lower >= 2 and b4.upper == 3
    if b4.witness is not None:
        assert min_dimension(k4, b4.witness) == b4.lower


def test_finf_bounds_edgeless():
    assert finf_bounds(Graph.build([1, 2], []), samples=2) == FinfBounds(0, 0, None)


def test_finf_bounds_extra_pool_raises_lower_bound():
    g, d = w4_witness()
    b = finf_bounds(g, samples=0, extra=[d])
    assert b.lower == 3 and b.upper == 3
    assert b.witness is d


def test_k7_generic_realizes_at_five_not_four():
    g, d = k7_generic()
    assert decide_realizable(g, d, 5).cover is not None
    out = decide_realizable(g, d, 4)
    assert out.exhausted and out.nodes > 0
