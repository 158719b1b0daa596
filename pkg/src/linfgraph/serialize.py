"""Instance and certificate files.

Instances are JSON: {"vertices": [...], "edges": [{"u": ..., "v": ...,
"d": "num/den"}, ...]} with an optional "metadata" object.  Rationals are
always written as "numerator/denominator" strings so round-trips are exact;
saving is byte-stable (sorted keys, canonical fraction form, trailing
newline).  Certificates carry covers, realizations, or minor embeddings and
can be re-verified independently of any search.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import InputError
from .graph_core import DistanceFunction, Graph, format_fraction, to_fraction
from .minors import MinorEmbedding
from .potentials import Orientation, Potential
from .realizability import Cover, Realization


def _parse_vertex(x, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: vertex ids must be integers or strings, got {x!r}")
    return x


def instance_to_obj(g: Graph, d: DistanceFunction | None = None, metadata: dict | None = None) -> dict:
    edges = []
    for eid, (u, v) in enumerate(g.edges):
        entry: dict = {"u": u, "v": v}
        if d is not None:
            entry["d"] = format_fraction(d.weights[eid])
        edges.append(entry)
    obj: dict = {"vertices": list(g.vertices), "edges": edges}
    if metadata:
        obj["metadata"] = metadata
    return obj


def instance_from_obj(obj) -> tuple[Graph, DistanceFunction | None]:
    if not isinstance(obj, dict):
        raise InputError("instance must be a JSON object")
    if "vertices" not in obj or "edges" not in obj:
        raise InputError("instance needs 'vertices' and 'edges' fields")
    if not isinstance(obj["vertices"], list):
        raise InputError("field 'vertices': expected a list")
    if not isinstance(obj["edges"], list):
        raise InputError("field 'edges': expected a list")
    vertices = [_parse_vertex(x, "field 'vertices'") for x in obj["vertices"]]
    edges = []
    weights = {}
    with_d = 0
    for i, entry in enumerate(obj["edges"]):
        where = f"edges[{i}]"
        if not isinstance(entry, dict) or "u" not in entry or "v" not in entry:
            raise InputError(f"{where}: expected an object with 'u' and 'v'")
        u = _parse_vertex(entry["u"], where)
        v = _parse_vertex(entry["v"], where)
        edges.append((u, v))
        if "d" in entry:
            with_d += 1
            try:
                weights[(u, v)] = to_fraction(entry["d"])
            except (InputError, ValueError) as exc:
                raise InputError(f"{where}: bad weight {entry['d']!r}: {exc}") from None
    g = Graph.build(vertices, edges)
    if with_d == 0:
        return g, None
    if with_d != len(edges):
        raise InputError(f"{with_d} of {len(edges)} edges carry weights; need all or none")
    return g, DistanceFunction.from_map(g, weights)


def save_instance(g: Graph, d: DistanceFunction | None, path, metadata: dict | None = None) -> None:
    obj = instance_to_obj(g, d, metadata)
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def load_instance(path) -> tuple[Graph, DistanceFunction | None]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    try:
        return instance_from_obj(obj)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- certificates -------------------------------------------------------------


def cover_to_obj(g: Graph, cover: Cover) -> dict:
    parts = []
    for orientation, potential in zip(cover.parts, cover.potentials):
        parts.append(
            {
                "arcs": [[u, v] for u, v in orientation.arcs],
                "potential": [[v, format_fraction(q)] for v, q in sorted(
                    potential.values.items(), key=lambda kv: g.vertex_index[kv[0]]
                )],
            }
        )
    return {"type": "cover", "k": cover.k, "parts": parts}


def cover_from_obj(obj) -> Cover:
    if obj.get("type") != "cover":
        raise InputError("certificate is not a cover")
    parts, potentials = [], []
    for part in obj["parts"]:
        arcs = [tuple(a) for a in part["arcs"]]
        parts.append(Orientation.of(arcs))
        potentials.append(Potential({v: to_fraction(s) for v, s in part["potential"]}))
    return Cover(tuple(parts), tuple(potentials))


def realization_to_obj(realization: Realization) -> dict:
    return {
        "type": "realization",
        "k": realization.k,
        "points": [
            [v, [format_fraction(q) for q in vec]]
            for v, vec in sorted(realization.points.items(), key=lambda kv: str(kv[0]))
        ],
    }


def realization_from_obj(obj) -> Realization:
    if obj.get("type") != "realization":
        raise InputError("certificate is not a realization")
    points = {v: tuple(to_fraction(s) for s in vec) for v, vec in obj["points"]}
    return Realization(points, obj["k"])


def embedding_to_obj(emb: MinorEmbedding) -> dict:
    return {
        "type": "minor_embedding",
        "pattern": instance_to_obj(emb.pattern),
        "branch_sets": [
            [pv, sorted(bs, key=str)] for pv, bs in sorted(
                emb.branch_sets.items(), key=lambda kv: str(kv[0])
            )
        ],
        "edge_realization": [
            [list(pe), list(ge)] for pe, ge in sorted(
                emb.edge_realization.items(), key=lambda kv: str(kv[0])
            )
        ],
    }


def embedding_from_obj(obj) -> MinorEmbedding:
    if obj.get("type") != "minor_embedding":
        raise InputError("certificate is not a minor embedding")
    pattern, _ = instance_from_obj(obj["pattern"])
    branch_sets = {pv: frozenset(bs) for pv, bs in obj["branch_sets"]}
    real = {tuple(pe): tuple(ge) for pe, ge in obj["edge_realization"]}
    return MinorEmbedding(pattern, branch_sets, real)


def save_certificate(obj: dict, path) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def load_certificate(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError(f"{path}: certificate needs a 'type' field")
    return obj


# -- DOT rendering -------------------------------------------------------------

_PALETTE = (
    "lightblue", "lightpink", "palegreen", "khaki", "plum",
    "lightsalmon", "paleturquoise", "wheat", "thistle", "lightgray",
)


def _dot_id(v) -> str:
    s = str(v)
    escaped = s.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def render_dot(g: Graph, d: DistanceFunction | None = None, emb: MinorEmbedding | None = None) -> str:
    """Graphviz text; edge labels show weights, branch sets share colors."""
    color_of = {}
    if emb is not None:
        for i, pv in enumerate(emb.pattern.vertices):
            for x in emb.branch_sets[pv]:
                color_of[x] = _PALETTE[i % len(_PALETTE)]
    lines = ["graph {"]
    for v in g.vertices:
        attrs = []
        if v in color_of:
            attrs.append(f'style=filled fillcolor="{color_of[v]}"')
        lines.append(f"  {_dot_id(v)}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";")
    for eid, (u, v) in enumerate(g.edges):
        attrs = []
        if d is not None:
            attrs.append(f'label="{d.weights[eid]}"')
        lines.append(
            f"  {_dot_id(u)} -- {_dot_id(v)}" + (f" [{' '.join(attrs)}]" if attrs else "") + ";"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
