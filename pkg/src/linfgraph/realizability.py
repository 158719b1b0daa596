"""Deciding realizability in k-dimensional max-norm space.

A weighted graph embeds in dimension k exactly when its edge set is the
union of k feasible sets; each feasible set contributes one coordinate via
the certifying potential.  `decide_realizable` runs a complete backtracking
search over per-edge (part, direction) assignments with three sound
reductions: parts are first used in increasing order, the first edge of each
part has a fixed direction (global reversal symmetry), and a precomputed
table of arc pairs whose joint forcing closes a negative walk rejects
assignments before the full check runs.  Feasibility of every attempted part
is established by exact label-correcting relaxation over integers obtained
by clearing denominators, and results are memoized per arc set.  Covers are
rebuilt and re-verified with exact rational potentials before being
returned, so a positive answer is always certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import CapExceeded, InputError
from .graph_core import (
    DistanceFunction,
    Graph,
    VertexId,
    validate_distance_function,
    is_generic,
)
from .potentials import (
    ArcLengths,
    NegativeCycle,
    Orientation,
    Potential,
    apply_forcing,
    build_bidirected,
    find_potential,
)

ARBORICITY_VERTEX_CAP = 20
VERTEX_COVER_CAP = 32


@dataclass(frozen=True)
class Cover:
    """k orientations whose edge sets jointly cover E, each certified by a
    potential that makes exactly its forced arcs tight."""

    parts: tuple[Orientation, ...]
    potentials: tuple[Potential, ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def check(self, g: Graph, d: DistanceFunction) -> bool:
        if len(self.parts) != len(self.potentials):
            return False
        covered = set()
        for orientation, potential in zip(self.parts, self.potentials):
            for v in g.vertices:
                if v not in potential.values:
                    return False
            for eid, (u, v) in enumerate(g.edges):
                gap = potential.values[u] - potential.values[v]
                if gap > d.weights[eid] or -gap > d.weights[eid]:
                    return False
            for u, v in orientation.arcs:
                eid = g.edge_id(u, v)
                if potential.values[u] - potential.values[v] != d.weights[eid]:
                    return False
                covered.add(eid)
        return covered == set(range(g.m))


@dataclass(frozen=True)
class Realization:
    """Exact coordinates, one per vertex, in k-dimensional space."""

    points: dict
    k: int


@dataclass(frozen=True)
class SearchOutcome:
    """Either a certified Cover or a proof of exhaustion with node counts."""

    cover: Cover | None
    nodes: int

    @property
    def exhausted(self) -> bool:
        return self.cover is None


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    edge: tuple | None = None
    detail: str | None = None


@dataclass(frozen=True)
class FinfBounds:
    lower: int
    upper: int
    witness: DistanceFunction | None


# -- internal search engine ---------------------------------------------------


class _Ctx:
    """Scaled integer view of one (g, d, k) search problem."""

    def __init__(self, g: Graph, d: DistanceFunction, k: int, edge_order, conflict_pruning, lookahead):
        self.g = g
        self.k = k
        self.lookahead = lookahead
        n, m = g.n, g.m
        self.n = n
        self.m = m
        scale = math.lcm(*(q.denominator for q in d.weights)) if m else 1
        self.w = [int(q * scale) for q in d.weights]
        vi = g.vertex_index
        self.tail = [0] * (2 * m)
        self.head = [0] * (2 * m)
        for eid, (u, v) in enumerate(g.edges):
            self.tail[2 * eid], self.head[2 * eid] = vi[u], vi[v]
            self.tail[2 * eid + 1], self.head[2 * eid + 1] = vi[v], vi[u]
        self.sp = self._apsp()
        for eid in range(m):
            if self.sp[self.tail[2 * eid]][self.head[2 * eid]] != self.w[eid]:
                u, v = g.edges[eid]
                raise InputError(
                    f"weights are not a valid distance function: edge ({u!r}, {v!r}) "
                    "is longer than a path between its endpoints"
                )
        self.conflict = self._conflicts() if conflict_pruning else None
        if isinstance(edge_order, (list, tuple)):
            self.order = list(edge_order)
        elif edge_order == "canonical":
            self.order = list(range(m))
        elif edge_order == "weight":
            self.order = sorted(range(m), key=lambda e: (-self.w[e], e))
        else:
            raise InputError(f"unknown edge order {edge_order!r}")
        self.zero = (0,) * n
        self.cache: dict = {}
        self.progress: Callable | None = None
        self.progress_every = 250_000

    def _apsp(self):
        n, INF = self.n, None
        sp = [[None] * n for _ in range(n)]
        for i in range(n):
            sp[i][i] = 0
        for eid in range(self.m):
            i, j = self.tail[2 * eid], self.head[2 * eid]
            w = self.w[eid]
            if sp[i][j] is INF or w < sp[i][j]:
                sp[i][j] = sp[j][i] = w
        for k in range(n):
            rk = sp[k]
            for i in range(n):
                ik = sp[i][k]
                if ik is INF:
                    continue
                ri = sp[i]
                for j in range(n):
                    if rk[j] is INF:
                        continue
                    alt = ik + rk[j]
                    if ri[j] is INF or alt < ri[j]:
                        ri[j] = alt
        return sp

    def _conflicts(self):
        # arcs a=(ta,ha), b=(tb,hb) in one part close the walk
        # ta->ha ~> tb->hb ~> ta; it is negative iff sp(ha,tb)+sp(hb,ta) < wa+wb
        m2 = 2 * self.m
        masks = [0] * m2
        for a in range(m2):
            wa, ta, ha = self.w[a >> 1], self.tail[a], self.head[a]
            for b in range(a + 1, m2):
                if (a >> 1) == (b >> 1):
                    continue
                s1 = self.sp[ha][self.tail[b]]
                s2 = self.sp[self.head[b]][ta]
                if s1 is None or s2 is None:
                    continue
                if s1 + s2 < wa + self.w[b >> 1]:
                    masks[a] |= 1 << b
                    masks[b] |= 1 << a
        return masks

    def bf(self, mask: int, dist0, new_aid: int):
        """Relax to a fixpoint from dist0 after forcing new_aid; None on a
        negative cycle.  Layered rounds; stable within n rounds otherwise."""
        w = self.w[new_aid >> 1]
        t, h = self.tail[new_aid], self.head[new_aid]
        if dist0[h] <= dist0[t] - w:
            return dist0
        n = self.n
        tail, head, wlist = self.tail, self.head, self.w
        dist = list(dist0)
        for _ in range(n):
            new = list(dist)
            changed = False
            for aid in range(2 * self.m):
                l = -wlist[aid >> 1] if (mask >> aid) & 1 else wlist[aid >> 1]
                cand = dist[tail[aid]] + l
                if cand < new[head[aid]]:
                    new[head[aid]] = cand
                    changed = True
            if not changed:
                return tuple(dist)
            dist = new
        return None

    def try_add(self, part_mask: int, part_dist, aid: int):
        new_mask = part_mask | (1 << aid)
        hit = self.cache.get(new_mask, 0)
        if hit != 0:
            return (new_mask, hit) if hit is not None else None
        nd = self.bf(new_mask, part_dist, aid)
        nd = tuple(nd) if nd is not None else None
        self.cache[new_mask] = nd
        return (new_mask, nd) if nd is not None else None


def _viable_remaining(ctx: _Ctx, pos: int, parts) -> bool:
    conflict = ctx.conflict
    for p in range(pos, len(ctx.order)):
        eid = ctx.order[p]
        ok = False
        for aid in (2 * eid, 2 * eid + 1):
            cm = conflict[aid]
            if any(not (cm & mask) for mask, _ in parts):
                ok = True
                break
        if not ok:
            return False
    return True


def _dfs(ctx: _Ctx, pos: int, used: int, parts: list, counter: list):
    """Returns the list of (label, direction) choices for positions pos..end
    completing a cover, or None when the subtree is exhausted."""
    if pos == len(ctx.order):
        return []
    eid = ctx.order[pos]
    for label in range(min(used + 1, ctx.k)):
        fresh = label == used
        for dr in (0,) if fresh else (0, 1):
            aid = 2 * eid + dr
            counter[0] += 1
            if ctx.progress and counter[0] % ctx.progress_every == 0:
                ctx.progress(counter[0])
            mask0, dist0 = (0, ctx.zero) if fresh else parts[label]
            if ctx.conflict is not None and (ctx.conflict[aid] & mask0):
                continue
            added = ctx.try_add(mask0, dist0, aid)
            if added is None:
                continue
            new_parts = list(parts)
            if fresh:
                new_parts.append(added)
            else:
                new_parts[label] = added
            new_used = used + 1 if fresh else used
            if (
                ctx.lookahead
                and ctx.conflict is not None
                and new_used == ctx.k
                and not _viable_remaining(ctx, pos + 1, new_parts)
            ):
                continue
            suffix = _dfs(ctx, pos + 1, new_used, new_parts, counter)
            if suffix is not None:
                return [(label, dr)] + suffix
    return None


def _replay(ctx: _Ctx, choices) -> tuple[int, list]:
    used, parts = 0, []
    for p, (label, dr) in enumerate(choices):
        eid = ctx.order[p]
        aid = 2 * eid + dr
        fresh = label == used
        mask0, dist0 = (0, ctx.zero) if fresh else parts[label]
        added = ctx.try_add(mask0, dist0, aid)
        assert added is not None, "recorded choice must be feasible"
        if fresh:
            parts.append(added)
            used += 1
        else:
            parts[label] = added
    return used, parts


def _search_worker(payload):
    vertices, edges, weights, k, order, conflict_pruning, lookahead, prefix = payload
    g = Graph.build(vertices, edges)
    d = DistanceFunction(tuple(weights))
    ctx = _Ctx(g, d, k, order, conflict_pruning, lookahead)
    used, parts = _replay(ctx, prefix)
    counter = [0]
    suffix = _dfs(ctx, len(prefix), used, parts, counter)
    if suffix is None:
        return None, counter[0]
    return list(prefix) + suffix, counter[0]


def _assignment_to_cover(g: Graph, d: DistanceFunction, k: int, order, choices) -> Cover:
    arcs_per_label: dict[int, list] = {}
    for p, (label, dr) in enumerate(choices):
        u, v = g.edges[order[p]]
        arcs_per_label.setdefault(label, []).append((u, v) if dr == 0 else (v, u))
    base = build_bidirected(g, d)
    parts, potentials = [], []
    for label in range(k):
        orientation = Orientation.of(arcs_per_label.get(label, []))
        res = find_potential(apply_forcing(base, orientation))
        assert isinstance(res, Potential), "search accepted an infeasible part"
        parts.append(orientation)
        potentials.append(res)
    cover = Cover(tuple(parts), tuple(potentials))
    assert cover.check(g, d), "assembled cover failed re-verification"
    return cover


def decide_realizable(
    g: Graph,
    d: DistanceFunction,
    k: int,
    *,
    edge_order: str = "weight",
    conflict_pruning: bool = True,
    lookahead: bool = True,
    threads: int = 1,
    progress: Callable | None = None,
    progress_every: int = 250_000,
) -> SearchOutcome:
    """Complete search for a k-part cover of (g, d); exact and deterministic
    for threads=1.  Returns a certified Cover or an exhaustion outcome."""
    if k <= 0:
        raise InputError(f"dimension must be positive, got {k}")
    if len(d.weights) != g.m:
        raise InputError("weight count does not match the graph")
    ctx = _Ctx(g, d, k, edge_order, conflict_pruning, lookahead)
    ctx.progress = progress
    ctx.progress_every = progress_every
    if g.m == 0:
        return SearchOutcome(_assignment_to_cover(g, d, k, ctx.order, []), 0)

    if threads <= 1:
        counter = [0]
        choices = _dfs(ctx, 0, 0, [], counter)
        if choices is None:
            return SearchOutcome(None, counter[0])
        return SearchOutcome(_assignment_to_cover(g, d, k, ctx.order, choices), counter[0])

    # parallel mode: expand a prefix frontier, then farm subtrees out
    frontier: list[tuple[int, list, list]] = [(0, [], [])]  # used, parts, choices
    depth, nodes = 0, 0
    while frontier and depth < g.m and len(frontier) < threads * 4:
        next_frontier = []
        eid = ctx.order[depth]
        for used, parts, choices in frontier:
            for label in range(min(used + 1, k)):
                fresh = label == used
                for dr in (0,) if fresh else (0, 1):
                    aid = 2 * eid + dr
                    nodes += 1
                    mask0, dist0 = (0, ctx.zero) if fresh else parts[label]
                    if ctx.conflict is not None and (ctx.conflict[aid] & mask0):
                        continue
                    added = ctx.try_add(mask0, dist0, aid)
                    if added is None:
                        continue
                    new_parts = list(parts)
                    if fresh:
                        new_parts.append(added)
                    else:
                        new_parts[label] = added
                    next_frontier.append(
                        (used + 1 if fresh else used, new_parts, choices + [(label, dr)])
                    )
        frontier = next_frontier
        depth += 1
    if not frontier:
        return SearchOutcome(None, nodes)
    if depth == g.m:
        return SearchOutcome(
            _assignment_to_cover(g, d, k, ctx.order, frontier[0][2]), nodes
        )

    import multiprocessing as mp

    payloads = [
        (g.vertices, g.edges, d.weights, k, ctx.order, conflict_pruning, lookahead, choices)
        for _, _, choices in frontier
    ]
    winner = None
    with mp.Pool(processes=threads) as pool:
        for choices, worker_nodes in pool.imap_unordered(_search_worker, payloads):
            nodes += worker_nodes
            if choices is not None:
                winner = choices
                pool.terminate()
                break
    if winner is None:
        return SearchOutcome(None, nodes)
    return SearchOutcome(_assignment_to_cover(g, d, k, ctx.order, winner), nodes)


# -- realizations -------------------------------------------------------------


def build_realization(g: Graph, d: DistanceFunction, cover: Cover) -> Realization:
    """Coordinates from a certified cover: coordinate i of a vertex is its
    value under part i's potential."""
    if not cover.check(g, d):
        raise InputError("cover does not certify (g, d)")
    points = {
        v: tuple(p.values[v] for p in cover.potentials) for v in g.vertices
    }
    realization = Realization(points, cover.k)
    result = verify_realization(g, d, realization, norm="inf")
    assert result.ok, "realization from a certified cover must verify"
    return realization


def verify_realization(g: Graph, d: DistanceFunction, points, norm="inf") -> VerifyResult:
    """Exact check that every edge's endpoint distance equals its weight
    under the requested norm (1, 2, or 'inf'; 2 compares squares).  Accepts
    a Realization or a plain vertex-to-vector mapping."""
    if norm not in (1, 2, "inf"):
        raise InputError(f"unsupported norm {norm!r}")
    if isinstance(points, Realization):
        k, points = points.k, points.points
    else:
        k = len(next(iter(points.values()))) if points else 0
    for v in g.vertices:
        if v not in points:
            raise InputError(f"no coordinates for vertex {v!r}")
        if len(points[v]) != k:
            raise InputError(f"vertex {v!r} has {len(points[v])} coordinates, expected {k}")
    for eid, (u, v) in enumerate(g.edges):
        diffs = [a - b for a, b in zip(points[u], points[v])]
        w = d.weights[eid]
        if norm == "inf":
            got = max((abs(x) for x in diffs), default=Fraction(0))
            ok = got == w
            detail = f"max-norm distance {got} != weight {w}"
        elif norm == 1:
            got = sum((abs(x) for x in diffs), Fraction(0))
            ok = got == w
            detail = f"sum-norm distance {got} != weight {w}"
        else:
            got = sum((x * x for x in diffs), Fraction(0))
            ok = got == w * w
            detail = f"squared distance {got} != squared weight {w * w}"
        if not ok:
            return VerifyResult(False, (u, v), detail)
    return VerifyResult(True)


# -- combinatorial bounds ------------------------------------------------------


def vertex_cover_number(g: Graph) -> int:
    """Exact minimum vertex cover size by branch and bound."""
    if g.n > VERTEX_COVER_CAP:
        raise CapExceeded(f"{g.n} vertices exceeds the cap {VERTEX_COVER_CAP}")
    edges = [frozenset(e) for e in g.edges]
    best = [len(g.vertices)]

    def matching_bound(es) -> int:
        used, size = set(), 0
        for e in es:
            if not (e & used):
                used |= e
                size += 1
        return size

    def rec(es, size):
        if size + matching_bound(es) >= best[0]:
            return
        if not es:
            best[0] = size
            return
        deg: dict = {}
        for e in es:
            for x in e:
                deg[x] = deg.get(x, 0) + 1
        x = max(deg, key=lambda v: (deg[v], str(v)))
        # either x is in the cover, or every neighbor of x is
        rec([e for e in es if x not in e], size + 1)
        nbrs = {next(iter(e - {x})) for e in es if x in e}
        rec([e for e in es if not (e & nbrs)], size + len(nbrs))

    rec(edges, 0)
    return best[0]


def arboricity(g: Graph) -> int:
    """Least number of forests covering E, by the densest-subgraph formula,
    evaluated over all vertex subsets."""
    if g.n > ARBORICITY_VERTEX_CAP:
        raise CapExceeded(f"{g.n} vertices exceeds the cap {ARBORICITY_VERTEX_CAP}")
    if g.m == 0:
        return 0
    n = g.n
    adj_bits = [0] * n
    for u, v in g.edges:
        i, j = g.vertex_index[u], g.vertex_index[v]
        adj_bits[i] |= 1 << j
        adj_bits[j] |= 1 << i
    edge_count = [0] * (1 << n)
    best = 1
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        edge_count[mask] = edge_count[rest] + (adj_bits[low] & rest).bit_count()
        size = mask.bit_count()
        if size >= 2 and edge_count[mask] > 0:
            dens = -(-edge_count[mask] // (size - 1))
            if dens > best:
                best = dens
    return best


def min_dimension(
    g: Graph,
    d: DistanceFunction,
    *,
    genericity_budget: int = 10**6,
    edge_order: str = "weight",
    threads: int = 1,
) -> int:
    """Least k admitting a realization.  Scans k upward, starting from the
    arboricity when the weights are verified generic (parts must then be
    forests) and from 1 otherwise; the vertex cover number caps the scan."""
    report = validate_distance_function(g, d)
    if not report.valid:
        raise InputError("weights are not a valid distance function")
    start = 1
    if is_generic(g, d, genericity_budget).status == "generic":
        start = max(1, arboricity(g))
    upper = max(start, vertex_cover_number(g), 1)
    for k in range(start, upper + 1):
        outcome = decide_realizable(g, d, k, edge_order=edge_order, threads=threads)
        if outcome.cover is not None:
            return k
    raise AssertionError("a star cover must exist at k = vertex cover number")


def finf_bounds(
    g: Graph,
    samples: int = 5,
    seed: int = 0,
    extra: Iterable[DistanceFunction] = (),
) -> FinfBounds:
    """Bounds on the largest min_dimension over all valid weight functions.

    Upper bound: the vertex cover number (stars around a cover realize any
    weights).  Lower bound: the arboricity, improved by the best min_dimension
    seen over `samples` seeded random generic weight functions plus any
    caller-supplied ones; the maximizing weights are returned as witness.
    """
    from .instances import random_distance_function

    if g.m == 0:
        return FinfBounds(0, 0, None)
    upper = vertex_cover_number(g)
    lower = arboricity(g)
    witness = None
    pool = [random_distance_function(g, seed * 1_000_003 + i) for i in range(samples)]
    pool.extend(extra)
    for cand in pool:
        k = min_dimension(g, cand)
        if k > lower:
            lower = k
            witness = cand
    assert lower <= upper
    return FinfBounds(lower, upper, witness)
