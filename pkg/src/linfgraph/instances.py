"""Generators for the benchmark instances and named graphs.

Includes the two weight functions that defeat every 2-dimensional search
(on the 4-wheel and on the glued-clique graph), a generic weighting of K7
needing exactly 5 dimensions, the tree-of-cliques family whose dimension
requirement grows with the tree, the exact isometry between 2-dimensional
max-norm and sum-norm space, and a seeded random generator for valid
generic weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .graph_core import (
    DistanceFunction,
    Graph,
    edge_key,
    is_generic,
    perturb_to_generic,
    shortest_path_table,
)


@dataclass(frozen=True)
class Tree:
    """A connected acyclic graph together with an edge ordering; the i-th
    edge (1-based) controls the weights its clique receives in
    tk4_instance."""

    graph: Graph
    edge_order: tuple

    @staticmethod
    def build(graph: Graph, edge_order=None) -> "Tree":
        if not graph.is_connected() or not graph.is_forest() or graph.n == 0:
            raise InputError("tree must be connected and acyclic")
        if edge_order is None:
            order = graph.edges
        else:
            canon = []
            for u, v in edge_order:
                eid = graph.edge_index.get((u, v))
                if eid is None:
                    raise InputError(f"({u!r}, {v!r}) is not a tree edge")
                canon.append(graph.edges[eid])
            order = tuple(canon)
            if sorted(map(edge_key, order)) != sorted(map(edge_key, graph.edges)):
                raise InputError("edge order must be a permutation of the tree's edges")
        return Tree(graph, order)


def named_graph(name: str) -> Graph:
    """Canonical named graphs: K_n, W_n (n-cycle rim 1..n plus hub n+1),
    C_n, path_n, star_n (hub 0, leaves 1..n), K4eK4, petersen."""
    if name == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        spokes = [(i, 5 + i) for i in range(5)]
        return Graph.build(range(10), outer + inner + spokes)
    if name == "K4eK4":
        edges = [(0, 2), (1, 2), (0, 3), (1, 3), (2, 3),
                 (0, 4), (1, 4), (0, 5), (1, 5), (4, 5)]
        return Graph.build(range(6), edges)
    try:
        family, size = name.rsplit("_", 1)
        n = int(size)
    except ValueError:
        raise InputError(f"unknown graph name {name!r}") from None
    if n < 1:
        raise InputError(f"size must be positive in {name!r}")
    if family == "K":
        return Graph.build(
            range(1, n + 1), [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        )
    if family == "W":
        if n < 3:
            raise InputError("wheel rim needs at least 3 vertices")
        rim = [(i, i % n + 1) for i in range(1, n + 1)]
        spokes = [(i, n + 1) for i in range(1, n + 1)]
        return Graph.build(range(1, n + 2), rim + spokes)
    if family == "C":
        if n < 3:
            raise InputError("cycle needs at least 3 vertices")
        return Graph.build(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)])
    if family == "path":
        return Graph.build(range(1, n + 1), [(i, i + 1) for i in range(1, n)])
    if family == "star":
        return Graph.build(range(0, n + 1), [(0, i) for i in range(1, n + 1)])
    raise InputError(f"unknown graph name {name!r}")


def w4_witness() -> tuple[Graph, DistanceFunction]:
    """4-wheel weights not realizable in 2 dimensions: rim 18, 17, 20, 24
    around 1-2-3-4, spokes 200."""
    g = named_graph("W_4")
    weights = {
        (1, 2): 18, (2, 3): 17, (3, 4): 20, (1, 4): 24,
        (1, 5): 200, (2, 5): 200, (3, 5): 200, (4, 5): 200,
    }
    return g, DistanceFunction.from_map(g, weights)


def k4ek4_witness() -> tuple[Graph, DistanceFunction]:
    """Glued-clique weights not realizable in 2 dimensions; generic."""
    g = named_graph("K4eK4")
    weights = {
        (0, 2): 71, (1, 2): 53, (0, 3): 77, (1, 3): 88, (2, 3): 78,
        (0, 4): 74, (1, 4): 79, (0, 5): 46, (1, 5): 36, (4, 5): 79,
    }
    return g, DistanceFunction.from_map(g, weights)


def k7_generic() -> tuple[Graph, DistanceFunction]:
    """K7 with weights 2^21 + 2^rank, rank descending along the ordering
    of edges by endpoints: the first edge (1,2) gets rank 21, the last
    (6,7) gets rank 1.  Valid (all weights within a factor 2) and generic
    (distinct powers of two cannot cancel)."""
    g = named_graph("K_7")
    base = 2**21
    weights = {}
    rank = 21
    for i in range(1, 8):
        for j in range(i + 1, 8):
            weights[(i, j)] = base + 2**rank
            rank -= 1
    return g, DistanceFunction.from_map(g, weights)


def tk4_instance(t: Tree, integer_scaled: bool = False) -> tuple[Graph, DistanceFunction]:
    """The tree-of-cliques construction: each tree vertex v becomes a spine
    edge v+v− of weight 1; each i-th tree edge vw becomes a 4-clique on
    {v+, v−, w+, w−} with parallel pairs weighted 2^-i and crossing pairs
    1 − 2^-i.  With integer_scaled, all weights are multiplied by 2^|E|."""
    g_t = t.graph
    if g_t.n < 2:
        raise InputError("tree needs at least two vertices")
    plus = {v: f"{v}+" for v in g_t.vertices}
    minus = {v: f"{v}-" for v in g_t.vertices}
    names = list(plus.values()) + list(minus.values())
    if len(set(names)) != 2 * g_t.n:
        raise InputError("vertex names collide under +/- suffixing")
    edges: list[tuple] = []
    weights: dict[tuple, Fraction] = {}

    def add(a, b, w):
        edges.append((a, b))
        weights[(a, b)] = w

    for v in g_t.vertices:
        add(plus[v], minus[v], Fraction(1))
    for i, (v, w) in enumerate(t.edge_order, start=1):
        near = Fraction(1, 2**i)
        far = 1 - near
        add(plus[v], plus[w], near)
        add(minus[v], minus[w], near)
        add(plus[v], minus[w], far)
        add(minus[v], plus[w], far)
    g = Graph.build(names, edges)
    d = DistanceFunction.from_map(g, weights)
    if integer_scaled:
        scale = 2 ** len(t.edge_order)
        d = DistanceFunction(tuple(w * scale for w in d.weights))
    return g, d


def linf2_to_l1_2(points) -> dict:
    """The exact isometry from 2-dimensional max-norm space to sum-norm
    space, (x, y) -> ((x-y)/2, (x+y)/2), applied pointwise to a vertex-to-
    vector map:  max(|a|,|b|) = |a-b|/2 + |a+b|/2 for all a, b."""
    out = {}
    for v, vec in points.items():
        if len(vec) != 2:
            raise InputError(f"vertex {v!r} has a {len(vec)}-dimensional point, expected 2")
        x, y = vec
        out[v] = (Fraction(x - y, 2), Fraction(x + y, 2))
    return out


def random_distance_function(g: Graph, seed: int = 0) -> DistanceFunction:
    """Seeded valid generic weights: uniform integers in [1, 2^16], replaced
    by their shortest-path closure (restoring validity), then perturbed to
    genericity.  Deterministic per (g, seed)."""
    import random

    if not g.is_connected():
        raise InputError("random weights need a connected graph")
    rng = random.Random(seed)
    raw = DistanceFunction(tuple(Fraction(rng.randint(1, 2**16)) for _ in range(g.m)))
    _, dist, _ = shortest_path_table(g, raw)
    vi = g.vertex_index
    closed = DistanceFunction(tuple(dist[vi[u]][vi[v]] for u, v in g.edges))
    out = perturb_to_generic(g, closed, seed=seed)
    assert is_generic(g, out).status in ("generic", "budget_exceeded")
    return out
