"""Reading and writing construction files (YAML, strict)."""

from __future__ import annotations

import re
from typing import Any, Union

import yaml

from .construction import (
    Edge,
    LabeledGraph,
    SectionSumBundle,
    Vertex,
    build_section_sum,
)
from .covers import CoveringMap
from .errors import GenusTooSmall, SurfBundleError
from .fibering import CoverConstruction, CoverVertexData, build_cover_construction
from .surfaces import FiniteGroup, FreeActionData

Construction = Union[SectionSumBundle, CoverConstruction]


class ParseError(SurfBundleError):
    """Malformed construction file: bad YAML, unknown or missing keys, wrong types."""


def _expect_map(node: Any, where: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(node, dict):
        raise ParseError(f"{where}: expected a mapping")
    keys = set(node)
    unknown = keys - required - optional
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {sorted(map(str, unknown))}")
    missing = required - keys
    if missing:
        raise ParseError(f"{where}: missing key(s) {sorted(missing)}")
    return node


def _int(node: Any, where: str) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        raise ParseError(f"{where}: expected an integer, got {node!r}")
    return node


def _list(node: Any, where: str) -> list:
    if not isinstance(node, list):
        raise ParseError(f"{where}: expected a list")
    return node


def _int_matrix(node: Any, where: str, rows: int | None = None, cols: int | None = None) -> list[list[int]]:
    mat = [[_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(_list(r, f"{where}[{i}]"))]
           for i, r in enumerate(_list(node, where))]
    if rows is not None and len(mat) != rows:
        raise ParseError(f"{where}: expected {rows} rows, got {len(mat)}")
    width = cols if cols is not None else (len(mat) if rows is not None else None)
    if width is not None and any(len(r) != width for r in mat):
        raise ParseError(f"{where}: every row must have {width} entries")
    return mat


_CYCLIC = re.compile(r"cyclic\s+(\d+)$")


def parse_group(node: Any, where: str = "group") -> FiniteGroup:
    if isinstance(node, str):
        text = node.strip()
        if text == "trivial":
            return FiniteGroup.trivial()
        m = _CYCLIC.match(text)
        if m and int(m.group(1)) >= 1:
            return FiniteGroup.cyclic(int(m.group(1)))
        raise ParseError(f"{where}: expected 'trivial', 'cyclic N' or a table, got {node!r}")
    node = _expect_map(node, where, {"order", "table"}, {"name"})
    n = _int(node["order"], f"{where}.order")
    if n < 1:
        raise ParseError(f"{where}.order must be positive")
    table = _int_matrix(node["table"], f"{where}.table", n, n)
    for i, row in enumerate(table):
        for j, x in enumerate(row):
            if not 0 <= x < n:
                raise ParseError(f"{where}.table[{i}][{j}]: entry {x} is not an element index")
    name = node.get("name", "")
    if not isinstance(name, str):
        raise ParseError(f"{where}.name must be a string")
    return FiniteGroup(tuple(tuple(r) for r in table), name=name)


def _parse_action(node: Any, where: str, group: FiniteGroup, genus: int) -> tuple | None:
    if node is None:
        return None
    mats = _list(node, where)
    if len(mats) != group.order:
        raise ParseError(f"{where}: expected {group.order} matrices, got {len(mats)}")
    return tuple(tuple(tuple(r) for r in _int_matrix(m, f"{where}[{k}]", 2 * genus, 2 * genus))
                 for k, m in enumerate(mats))


def _vertex_id(node: Any, where: str) -> str:
    if isinstance(node, bool) or not isinstance(node, (str, int)):
        raise ParseError(f"{where}: vertex ids are strings or integers")
    return str(node)


def parse_graph(node: Any) -> LabeledGraph:
    node = _expect_map(node, "graph", {"vertices", "edges"})
    verts = []
    ids: dict[str, int] = {}
    for i, v in enumerate(_list(node["vertices"], "graph.vertices")):
        where = f"graph.vertices[{i}]"
        v = _expect_map(v, where, {"id", "color"})
        vid = _vertex_id(v["id"], f"{where}.id")
        color = v["color"]
        if color not in ("+", "-"):
            raise ParseError(f"{where}.color: expected '+' or '-', got {color!r}")
        if vid in ids:
            raise ParseError(f"{where}.id: duplicate vertex id {vid!r}")
        ids[vid] = i
        verts.append(Vertex(vid, color))
    edges = []
    for k, e in enumerate(_list(node["edges"] or [], "graph.edges")):
        where = f"graph.edges[{k}]"
        e = _expect_map(e, where, {"plus", "minus", "label_plus", "label_minus"})
        ends = []
        for key in ("plus", "minus"):
            vid = _vertex_id(e[key], f"{where}.{key}")
            if vid not in ids:
                raise ParseError(f"{where}.{key}: unknown vertex {vid!r}")
            ends.append(ids[vid])
        edges.append(Edge(ends[0], ends[1], _int(e["label_plus"], f"{where}.label_plus"),
                          _int(e["label_minus"], f"{where}.label_minus")))
    return LabeledGraph(tuple(verts), tuple(edges))


def _parse_covering(node: Any, where: str, graph: LabeledGraph) -> tuple[int, CoverVertexData]:
    node = _expect_map(node, where, {"vertex", "base_genus", "degree", "perms", "group"}, {"action"})
    vid = _vertex_id(node["vertex"], f"{where}.vertex")
    try:
        v = graph.index_of(vid)
    except KeyError:
        raise ParseError(f"{where}.vertex: unknown vertex {vid!r}") from None
    h = _int(node["base_genus"], f"{where}.base_genus")
    d = _int(node["degree"], f"{where}.degree")
    if h < 1 or d < 1:
        raise ParseError(f"{where}: base_genus and degree must be positive")
    perms = _int_matrix(node["perms"], f"{where}.perms", 2 * h, d)
    for i, p in enumerate(perms):
        if sorted(p) != list(range(d)):
            raise ParseError(f"{where}.perms[{i}]: not a permutation of 0..{d - 1}")
    group = parse_group(node["group"], f"{where}.group")
    action = _parse_action(node.get("action"), f"{where}.action", group, h)
    cov = CoveringMap(h, d, tuple(tuple(p) for p in perms))
    return v, CoverVertexData(cov, FreeActionData(group, h, action_on_h1=action))


def parse_construction(text: str) -> Construction:
    """Parse and build; ``ParseError`` for malformed files, domain errors otherwise."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}") from None
    doc = _expect_map(doc, "document", {"surface", "graph"}, {"group", "coverings"})
    cover_mode = "coverings" in doc
    if cover_mode and "group" in doc:
        raise ParseError("document: 'group' is per vertex when 'coverings' is present")
    if not cover_mode and "group" not in doc:
        raise ParseError("document: missing key(s) ['group']")
    surf = _expect_map(doc["surface"], "surface", {"genus"}, set() if cover_mode else {"action"})
    genus = _int(surf["genus"], "surface.genus")
    graph = parse_graph(doc["graph"])
    if not cover_mode:
        group = parse_group(doc["group"])
        if genus < 2:
            raise GenusTooSmall(f"surface.genus {genus} < 2")
        action = _parse_action(surf.get("action"), "surface.action", group, genus)
        return build_section_sum(graph, FreeActionData(group, genus, action_on_h1=action))
    data: dict[int, CoverVertexData] = {}
    for i, c in enumerate(_list(doc["coverings"], "coverings")):
        v, vd = _parse_covering(c, f"coverings[{i}]", graph)
        if v in data:
            raise ParseError(f"coverings[{i}]: vertex {graph.vertices[v].name!r} covered twice")
        data[v] = vd
    missing = [graph.vertices[v].name for v in range(graph.n_vertices) if v not in data]
    if missing:
        raise ParseError(f"coverings: no entry for vertices {missing}")
    return build_cover_construction(graph, genus, [data[v] for v in range(graph.n_vertices)])


def load_construction(path: str) -> Construction:
    with open(path, encoding="utf-8") as fh:
        return parse_construction(fh.read())


# emission

def _group_node(g: FiniteGroup) -> Any:
    if g.order == 1:
        return "trivial"
    if g.table == FiniteGroup.cyclic(g.order).table:
        return f"cyclic {g.order}"
    node = {"order": g.order, "table": [list(r) for r in g.table]}
    if g.name:
        node["name"] = g.name
    return node


def _graph_node(x: LabeledGraph) -> dict:
    return {
        "vertices": [{"id": v.name, "color": v.color} for v in x.vertices],
        "edges": [{"plus": x.vertices[e.plus].name, "minus": x.vertices[e.minus].name,
                   "label_plus": e.label_plus, "label_minus": e.label_minus} for e in x.edges],
    }


def construction_document(c: Construction, include_actions: bool = False) -> dict:
    if isinstance(c, SectionSumBundle):
        surf: dict = {"genus": c.piece_genus}
        if include_actions and c.fiber_piece.action_on_h1 is not None:
            surf["action"] = [[list(r) for r in m] for m in c.fiber_piece.action_on_h1]
        return {"group": _group_node(c.group), "surface": surf, "graph": _graph_node(c.graph)}
    covs = []
    for v, vd in enumerate(c.vertex_data):
        node = {"vertex": c.graph.vertices[v].name, "base_genus": vd.genus, "degree": vd.degree,
                "perms": [list(p) for p in vd.covering.perm_images], "group": _group_node(vd.action.group)}
        if include_actions and vd.action.action_on_h1 is not None:
            node["action"] = [[list(r) for r in m] for m in vd.action.action_on_h1]
        covs.append(node)
    return {"surface": {"genus": c.base_genus}, "graph": _graph_node(c.graph), "coverings": covs}


class _FlowRowsDumper(yaml.SafeDumper):
    pass


def _repr_list(dumper, data):
    flow = all(isinstance(x, (int, str)) for x in data)
    return dumper.represent_sequence("tag:yaml.org,2002:seq", data, flow_style=flow)


_FlowRowsDumper.add_representer(list, _repr_list)


def dump_construction(c: Construction, include_actions: bool = False) -> str:
    return yaml.dump(construction_document(c, include_actions), Dumper=_FlowRowsDumper, sort_keys=False)


def family_construction(kind: str, n: int) -> Construction:
    from .construction import line_graph_family
    from .fibering import basic_construction, tower_construction

    if kind == "line":
        return line_graph_family(n)
    if kind == "basic":
        return basic_construction(n)
    if kind == "tower":
        return tower_construction(n)
    raise ValueError(f"unknown family {kind!r}")

