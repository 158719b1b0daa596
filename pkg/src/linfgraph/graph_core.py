"""Simple graphs with exact rational edge weights, plus structural preprocessing.

Vertex ids are ints or strings.  Edge weights are `fractions.Fraction`
throughout; floats are rejected at the boundary so every comparison made by
the decision procedures is exact.  A weight function is *valid* when each
edge is a shortest path between its endpoints, and *generic* when no cycle
can be split into two edge sets of equal total weight.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import InputError, PerturbationFailed

VertexId = int | str


def vertex_key(v: VertexId):
    """Sort key giving a total order over mixed int/str vertex ids."""
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(f"vertex id must be an int or a str, got {v!r}")
    return (0, v, "") if isinstance(v, int) else (1, 0, v)


def edge_key(e: tuple):
    """Sort key for canonical (u, v) edge tuples under mixed vertex ids."""
    return (vertex_key(e[0]), vertex_key(e[1]))


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction, or 'num/den' string to Fraction; floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational value: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse rational {x!r}: {exc}") from None
    raise InputError(f"weights must be exact rationals, got {type(x).__name__} {x!r}")


def format_fraction(q: Fraction) -> str:
    """Canonical 'num/den' form used in JSON files."""
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with stable, contiguous edge ids.

    `edges` is sorted lexicographically by endpoint keys; an edge's position
    in that tuple is its id.  Build instances through `Graph.build`.
    """

    vertices: tuple[VertexId, ...]
    edges: tuple[tuple[VertexId, VertexId], ...]

    @classmethod
    def build(cls, vertices: Iterable[VertexId], edges: Iterable[tuple[VertexId, VertexId]]) -> "Graph":
        vs = sorted(set(vertices), key=vertex_key)
        vset = set(vs)
        seen: set[tuple] = set()
        norm: list[tuple[VertexId, VertexId]] = []
        for u, v in edges:
            if u not in vset or v not in vset:
                raise InputError(f"edge ({u!r}, {v!r}) references an unknown vertex")
            if u == v:
                raise InputError(f"loop at vertex {u!r} is not allowed")
            a, b = sorted((u, v), key=vertex_key)
            if (a, b) in seen:
                raise InputError(f"duplicate edge ({a!r}, {b!r})")
            seen.add((a, b))
            norm.append((a, b))
        norm.sort(key=edge_key)
        return cls(tuple(vs), tuple(norm))

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict:
        idx = {}
        for i, (u, v) in enumerate(self.edges):
            idx[(u, v)] = i
            idx[(v, u)] = i
        return idx

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: [] for v in self.vertices}
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return {v: tuple(nbrs) for v, nbrs in adj.items()}

    def has_edge(self, u: VertexId, v: VertexId) -> bool:
        return (u, v) in self.edge_index

    def edge_id(self, u: VertexId, v: VertexId) -> int:
        try:
            return self.edge_index[(u, v)]
        except KeyError:
            raise InputError(f"no edge ({u!r}, {v!r})") from None

    def neighbors(self, v: VertexId) -> tuple[VertexId, ...]:
        return tuple(w for w, _ in self.adjacency[v])

    def degree(self, v: VertexId) -> int:
        return len(self.adjacency[v])

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep: Iterable[VertexId]) -> "Graph":
        ks = set(keep)
        return Graph.build(ks, [(u, v) for u, v in self.edges if u in ks and v in ks])

    def without_vertex(self, v: VertexId) -> "Graph":
        return self.induced(set(self.vertices) - {v})

    def without_edge(self, u: VertexId, v: VertexId) -> "Graph":
        eid = self.edge_id(u, v)
        return Graph.build(self.vertices, [e for i, e in enumerate(self.edges) if i != eid])

    def contract_edge(self, u: VertexId, v: VertexId) -> "Graph":
        """Merge v into u (the edge uv disappears; parallels collapse)."""
        self.edge_id(u, v)
        edges = set()
        for a, b in self.edges:
            a2 = u if a == v else a
            b2 = u if b == v else b
            if a2 != b2:
                edges.add(tuple(sorted((a2, b2), key=vertex_key)))
        return Graph.build(set(self.vertices) - {v}, edges)

    # -- connectivity ------------------------------------------------------

    def components(self) -> list[frozenset]:
        seen: set = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y, _ in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_forest(self) -> bool:
        return all(
            sum(1 for u, v in self.edges if u in comp) == len(comp) - 1
            for comp in self.components()
        )


@dataclass(frozen=True)
class DistanceFunction:
    """Edge weights for a fixed graph, indexed by edge id.  Nonnegative, exact."""

    weights: tuple[Fraction, ...]

    @classmethod
    def from_map(cls, g: Graph, mapping: Mapping) -> "DistanceFunction":
        weights = []
        for u, v in g.edges:
            if (u, v) in mapping:
                q = to_fraction(mapping[(u, v)])
            elif (v, u) in mapping:
                q = to_fraction(mapping[(v, u)])
            else:
                raise InputError(f"no weight given for edge ({u!r}, {v!r})")
            if q < 0:
                raise InputError(f"negative weight {q} on edge ({u!r}, {v!r})")
            weights.append(q)
        if len(mapping) != g.m:
            raise InputError(f"{len(mapping)} weights given for {g.m} edges")
        return cls(tuple(weights))

    @classmethod
    def from_values(cls, values: Iterable) -> "DistanceFunction":
        ws = tuple(to_fraction(x) for x in values)
        if any(w < 0 for w in ws):
            raise InputError("negative weight")
        return cls(ws)

    def to_map(self, g: Graph) -> dict:
        if len(self.weights) != g.m:
            raise InputError("weight count does not match the graph")
        return {e: w for e, w in zip(g.edges, self.weights)}

    def of(self, g: Graph, u: VertexId, v: VertexId) -> Fraction:
        return self.weights[g.edge_id(u, v)]

    def __getitem__(self, eid: int) -> Fraction:
        return self.weights[eid]

    def __len__(self) -> int:
        return len(self.weights)


# -- validation (each edge must be a shortest path) -------------------------


@dataclass(frozen=True)
class Violation:
    """A strictly shorter path witnessing that an edge weight is too large."""

    edge: tuple[VertexId, VertexId]
    path: tuple[VertexId, ...]
    length: Fraction


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...]


def shortest_path_table(g: Graph, d: DistanceFunction):
    """All-pairs shortest distances and next-hop table, exact arithmetic."""
    n = g.n
    verts = g.vertices
    INF = None
    dist = [[INF] * n for _ in range(n)]
    nxt = [[None] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = Fraction(0)
    for eid, (u, v) in enumerate(g.edges):
        i, j = g.vertex_index[u], g.vertex_index[v]
        w = d.weights[eid]
        if dist[i][j] is INF or w < dist[i][j]:
            dist[i][j] = dist[j][i] = w
            nxt[i][j] = j
            nxt[j][i] = i
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik is INF:
                continue
            di = dist[i]
            ni = nxt[i]
            for j in range(n):
                if dk[j] is INF:
                    continue
                alt = dik + dk[j]
                if di[j] is INF or alt < di[j]:
                    di[j] = alt
                    ni[j] = ni[k]
    return verts, dist, nxt


def _reconstruct_path(g: Graph, nxt, i: int, j: int) -> tuple[VertexId, ...]:
    path = [i]
    cur = i
    guard = 0
    while cur != j:
        cur = nxt[cur][j]
        path.append(cur)
        guard += 1
        if guard > g.n:
            raise RuntimeError("path reconstruction did not terminate")
    return tuple(g.vertices[x] for x in path)


def validate_distance_function(g: Graph, d: DistanceFunction) -> ValidationReport:
    """Check that every edge weight equals the shortest-path distance between
    its endpoints.  Violations carry an explicit shorter witness path."""
    if len(d.weights) != g.m:
        raise InputError("weight count does not match the graph")
    _, dist, nxt = shortest_path_table(g, d)
    violations = []
    for eid, (u, v) in enumerate(g.edges):
        i, j = g.vertex_index[u], g.vertex_index[v]
        if dist[i][j] < d.weights[eid]:
            path = _reconstruct_path(g, nxt, i, j)
            violations.append(Violation((u, v), path, dist[i][j]))
    return ValidationReport(not violations, tuple(violations))


# -- genericity --------------------------------------------------------------


@dataclass(frozen=True)
class GenericityReport:
    """Outcome of the cycle-split search.

    status is 'generic', 'not_generic' (with the offending cycle and the edge
    subset whose total is exactly half the cycle weight), or 'budget_exceeded'.
    """

    status: str
    pairs_checked: int
    cycle: tuple[int, ...] | None = None
    subset: frozenset | None = None

    def __bool__(self) -> bool:
        return self.status == "generic"


def _simple_cycles(g: Graph) -> Iterator[tuple[int, ...]]:
    """Yield each simple cycle once, as edge ids, keyed by its smallest edge id."""
    for base, (u, v) in enumerate(g.edges):
        # simple paths v -> u using only edges with id > base
        stack = [(v, [base], {v})]
        while stack:
            x, path_edges, used = stack.pop()
            for y, eid in g.adjacency[x]:
                if eid <= base:
                    continue
                if y == u:
                    yield tuple(path_edges + [eid])
                elif y not in used and y != u:
                    stack.append((y, path_edges + [eid], used | {y}))


def is_generic(g: Graph, d: DistanceFunction, budget: int = 10**6) -> GenericityReport:
    """Search every cycle for an equal-weight split of its edges.

    Work is metered in (cycle, subset) pairs; splits are enumerated once per
    unordered pair by always placing the cycle's first edge on one side.
    """
    if len(d.weights) != g.m:
        raise InputError("weight count does not match the graph")
    checked = 0
    for cycle in _simple_cycles(g):
        ws = [d.weights[e] for e in cycle]
        total = sum(ws, Fraction(0))
        half = total / 2
        L = len(cycle)
        # DFS over the remaining edges; first edge is always in the subset.
        stack = [(1, ws[0], [cycle[0]])]
        while stack:
            pos, acc, members = stack.pop()
            if pos == L:
                checked += 1
                if checked > budget:
                    return GenericityReport("budget_exceeded", checked - 1)
                if acc == half:
                    return GenericityReport("not_generic", checked, cycle, frozenset(members))
                continue
            stack.append((pos + 1, acc, members))
            stack.append((pos + 1, acc + ws[pos], members + [cycle[pos]]))
    return GenericityReport("generic", checked)


# -- perturbation -------------------------------------------------------------


def _metric_closure(g: Graph, d: DistanceFunction) -> DistanceFunction:
    _, dist, _ = shortest_path_table(g, d)
    out = []
    for eid, (u, v) in enumerate(g.edges):
        out.append(dist[g.vertex_index[u]][g.vertex_index[v]])
    return DistanceFunction(tuple(out))


def perturb_to_generic(
    g: Graph,
    d: DistanceFunction,
    seed: int = 0,
    max_attempts: int = 20,
    budget: int = 10**6,
) -> DistanceFunction:
    """Nudge a valid weight function into a generic one.

    Each attempt blends d toward a scaled reference function r whose
    weights are 2**(m+2) + 2**s(i) for a seeded permutation s of 1..m.
    Distinct powers of two never cancel in a signed sum, so r is generic
    on every graph, and any two-edge path under r already exceeds any
    single edge, so r is valid on every graph.  The blend (1-t)*d + t*r'
    with r' = r * min(d)/2**(m+3) and t = 2**-(20+attempt) is a convex
    combination of valid functions (hence valid), crosses each tie
    hyperplane for at most one value of t, and moves each weight by at
    most a factor of t.  Weights that are zero stay pinned at zero (the
    deviation bound is relative), with a metric closure restoring
    validity in that case; ties forced by zero-weight edges therefore
    cannot be repaired and raise PerturbationFailed.  Deterministic for
    a fixed seed.
    """
    report = validate_distance_function(g, d)
    if not report.valid:
        raise InputError("input weights are not a valid distance function")
    if is_generic(g, d, budget):
        return d
    positives = [w for w in d.weights if w > 0]
    # scale puts every reference weight strictly below the smallest d weight
    scale = min(positives) / Fraction(2 ** (g.m + 3)) if positives else Fraction(0)
    base = 2 ** (g.m + 2)
    last = d
    for attempt in range(max_attempts):
        rng = random.Random(seed * 1_000_003 + attempt)
        exponents = list(range(1, g.m + 1))
        rng.shuffle(exponents)
        t = Fraction(1, 2 ** (20 + attempt))
        cand = DistanceFunction(
            tuple(
                w if w == 0 else (1 - t) * w + t * scale * (base + 2 ** exponents[i])
                for i, w in enumerate(d.weights)
            )
        )
        cand = _metric_closure(g, cand)
        last = cand
        rep = is_generic(g, cand, budget)
        if rep.status == "generic":
            return cand
        if rep.status == "budget_exceeded":
            # cannot verify within budget; the perturbed candidate is still valid
            return cand
    raise PerturbationFailed(
        f"no generic perturbation found after {max_attempts} attempts", last
    )


# -- block decomposition ------------------------------------------------------


def blocks(g: Graph) -> list[Graph]:
    """2-connected blocks (bridges come out as single-edge blocks).

    The blocks partition E(g); isolated vertices do not appear.
    """
    index = {}
    low = {}
    counter = [0]
    edge_stack: list[tuple[VertexId, VertexId]] = []
    out: list[Graph] = []

    def collect(limit: tuple[VertexId, VertexId]):
        comp = []
        while True:
            e = edge_stack.pop()
            comp.append(e)
            if e == limit:
                break
        vs = {x for e in comp for x in e}
        out.append(Graph.build(vs, comp))

    for root in g.vertices:
        if root in index:
            continue
        # iterative DFS; work items are (vertex, parent edge id, neighbor iterator)
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack = [(root, -1, iter(g.adjacency[root]))]
        while stack:
            x, peid, it = stack[-1]
            advanced = False
            for y, eid in it:
                if eid == peid:
                    continue
                if y not in index:
                    edge_stack.append((x, y))
                    index[y] = low[y] = counter[0]
                    counter[0] += 1
                    stack.append((y, eid, iter(g.adjacency[y])))
                    advanced = True
                    break
                if index[y] < index[x]:
                    edge_stack.append((x, y))
                    if index[y] < low[x]:
                        low[x] = index[y]
            if advanced:
                continue
            stack.pop()
            if stack:
                px = stack[-1][0]
                if low[x] < low[px]:
                    low[px] = low[x]
                if low[x] >= index[px]:
                    collect((px, x))
    return out


# -- degree-2 suppression -----------------------------------------------------


@dataclass(frozen=True)
class SuppressionStep:
    """One reduction: 'smooth' replaces the path u-w-v by the edge uv
    (u, v not adjacent); 'delete' removes w when uv is already an edge."""

    kind: str
    w: VertexId
    u: VertexId
    v: VertexId


@dataclass(frozen=True)
class SuppressionLog:
    steps: tuple[SuppressionStep, ...]
    forest_vertices: frozenset


def _component_of(g: Graph, v: VertexId) -> frozenset:
    for comp in g.components():
        if v in comp:
            return comp
    raise KeyError(v)


def _component_has_cycle(g: Graph, comp: frozenset) -> bool:
    edges = sum(1 for u, v in g.edges if u in comp)
    return edges > len(comp) - 1


def suppress_degree_2(g: Graph) -> tuple[Graph, SuppressionLog]:
    """Repeatedly remove degree-2 vertices where the reduction preserves the
    least realizable dimension.

    In a component that contains a cycle: a degree-2 vertex w with
    non-adjacent neighbors u, v is smoothed (path u-w-v becomes edge uv); if
    u, v are adjacent, w is deleted provided the rest of its component still
    contains a cycle.  Triangles therefore persist.  Forest components are
    reported unchanged (they realize in one dimension already) and are listed
    in the log.
    """
    cur = g
    steps: list[SuppressionStep] = []
    while True:
        progressed = False
        cyclic: set = set()
        for comp in cur.components():
            if _component_has_cycle(cur, comp):
                cyclic |= comp
        for w in cur.vertices:
            if w not in cyclic or cur.degree(w) != 2:
                continue
            (u, _), (v, _) = cur.adjacency[w]
            if not cur.has_edge(u, v):
                nxt = Graph.build(
                    set(cur.vertices) - {w},
                    [e for e in cur.edges if w not in e] + [(u, v)],
                )
                steps.append(SuppressionStep("smooth", w, u, v))
            else:
                residual = cur.without_vertex(w)
                if not _component_has_cycle(residual, _component_of(residual, u)):
                    continue  # removal would drop the dimension below 2
                nxt = residual
                steps.append(SuppressionStep("delete", w, u, v))
            cur = nxt
            progressed = True
            break
        if not progressed:
            break
    forest = frozenset(
        v for comp in cur.components() if not _component_has_cycle(cur, comp) for v in comp
    )
    return cur, SuppressionLog(tuple(steps), forest)
