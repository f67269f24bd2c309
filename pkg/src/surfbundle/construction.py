"""Labeled bipartite graphs and the section-sum bundles built from them.

A labeled graph records the combinatorial blueprint of the 4-manifold:
each vertex is a copy of ``Sigma x Sigma`` with the graphs of some group
elements removed, each edge a gluing of two of the resulting boundary
components.  Everything computed here (genus, Euler characteristic, the
graph-of-groups skeleton) depends only on this shadow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import EulerMismatch, GenusTooSmall, GraphInvalid
from .surfaces import FiniteGroup, FreeActionData, euler_characteristic

PLUS = "+"
MINUS = "-"


@dataclass(frozen=True)
class Vertex:
    name: str
    color: str

    @property
    def sign(self) -> int:
        return 1 if self.color == PLUS else -1


@dataclass(frozen=True)
class Edge:
    """An edge between vertex indices ``plus`` and ``minus``, with half-edge labels."""

    plus: int
    minus: int
    label_plus: int
    label_minus: int

    def endpoint(self, color: str) -> int:
        return self.plus if color == PLUS else self.minus

    def label_at(self, color: str) -> int:
        return self.label_plus if color == PLUS else self.label_minus


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class LabeledGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def first_betti(self) -> int:
        return self.n_edges - self.n_vertices + 1

    def index_of(self, name: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.name == name:
                return i
        raise KeyError(name)

    def half_edges(self, v: int) -> list[tuple[int, int]]:
        """``(edge index, label)`` for every half-edge at vertex ``v``, in edge order."""
        color = self.vertices[v].color
        out = []
        for k, e in enumerate(self.edges):
            if e.endpoint(color) == v and (e.plus == v or e.minus == v):
                out.append((k, e.label_at(color)))
        return out

    def valence(self, v: int) -> int:
        return sum(1 for e in self.edges if e.plus == v) + sum(1 for e in self.edges if e.minus == v)

    def is_connected(self) -> bool:
        n = self.n_vertices
        if n == 0:
            return False
        adj: list[list[int]] = [[] for _ in range(n)]
        for e in self.edges:
            if 0 <= e.plus < n and 0 <= e.minus < n:
                adj[e.plus].append(e.minus)
                adj[e.minus].append(e.plus)
        seen = {0}
        todo = deque([0])
        while todo:
            u = todo.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == n

    def relabeled(self, order: Sequence[int]) -> "LabeledGraph":
        """The same graph with vertex ``order[i]`` moved to position ``i``."""
        pos = {old: new for new, old in enumerate(order)}
        verts = tuple(self.vertices[old] for old in order)
        edges = tuple(Edge(pos[e.plus], pos[e.minus], e.label_plus, e.label_minus) for e in self.edges)
        return LabeledGraph(verts, edges)


def validate_graph(x: LabeledGraph, group_order: int | Sequence[int] | FiniteGroup) -> list[Violation]:
    """All violations of the labeled-graph invariants (empty list means valid).

    ``group_order`` is either one group (all vertices) or one order per vertex.
    """
    n = x.n_vertices
    if isinstance(group_order, FiniteGroup):
        orders = [group_order.order] * n
    elif isinstance(group_order, int):
        orders = [group_order] * n
    else:
        orders = list(group_order)
    out: list[Violation] = []
    if n == 0:
        return [Violation("Disconnected", "graph", "graph has no vertices")]
    names = [v.name for v in x.vertices]
    for v in x.vertices:
        if v.color not in (PLUS, MINUS):
            out.append(Violation("BadColor", f"vertex {v.name}", f"color {v.color!r} is not '+' or '-'"))
    if len(set(names)) != n:
        out.append(Violation("DuplicateVertex", "graph", "vertex names are not unique"))
    for k, e in enumerate(x.edges):
        if not (0 <= e.plus < n and 0 <= e.minus < n):
            out.append(Violation("UnknownVertex", f"edge {k}", "endpoint out of range"))
            continue
        if e.plus == e.minus:
            out.append(Violation("NotBipartite", f"edge {k}", f"self-loop at vertex {names[e.plus]}"))
            continue
        if x.vertices[e.plus].color != PLUS or x.vertices[e.minus].color != MINUS:
            out.append(Violation("NotBipartite", f"edge {k}",
                                 f"must join a '+' vertex to a '-' vertex ({names[e.plus]}, {names[e.minus]})"))
        for color, vid, label in ((PLUS, e.plus, e.label_plus), (MINUS, e.minus, e.label_minus)):
            if not 0 <= label < orders[vid]:
                out.append(Violation("LabelOutOfRange", f"edge {k}",
                                     f"label {label} at vertex {names[vid]} not in a group of order {orders[vid]}"))
    if out:
        return out
    if not x.is_connected():
        out.append(Violation("Disconnected", "graph", "graph is not connected"))
    for v in range(n):
        labels = [lab for _, lab in x.half_edges(v)]
        if len(labels) > orders[v]:
            out.append(Violation("ValenceExceeded", f"vertex {names[v]}",
                                 f"valence {len(labels)} exceeds group order {orders[v]}"))
        seen: dict[int, int] = {}
        for k, lab in x.half_edges(v):
            if lab in seen:
                out.append(Violation("InjectivityFailure", f"vertex {names[v]}",
                                     f"half-edges of edges {seen[lab]} and {k} share label {lab}"))
            else:
                seen[lab] = k
    return out


@dataclass(frozen=True)
class SectionSumBundle:
    """Descriptor of the 4-manifold ``E_X`` built from a labeled graph.

    ``fiber_piece`` is the surface Sigma with its free group action; every
    vertex contributes ``Sigma x Sigma`` minus the graphs of its labels.
    """

    graph: LabeledGraph
    fiber_piece: FreeActionData

    @property
    def C(self) -> int:
        return self.graph.n_vertices

    @property
    def D(self) -> int:
        return self.graph.n_edges

    @property
    def piece_genus(self) -> int:
        return self.fiber_piece.total_genus

    @property
    def group(self) -> FiniteGroup:
        return self.fiber_piece.group


def build_section_sum(x: LabeledGraph, fp: FreeActionData) -> SectionSumBundle:
    if fp.total_genus < 2:
        raise GenusTooSmall(f"surface genus {fp.total_genus} < 2")
    violations = validate_graph(x, fp.group)
    if violations:
        raise GraphInvalid(violations)
    b = SectionSumBundle(x, fp)
    euler_char_total(b)
    return b


def fiber_genus(b: SectionSumBundle) -> int:
    """Genus of ``Sigma^{#C} # Sigma_{1-C+D}``."""
    return b.C * b.piece_genus + b.D - b.C + 1


def euler_char_total(b: SectionSumBundle) -> int:
    """``C chi^2 - 2 D chi``, cross-checked against ``chi(base) * chi(fiber)``."""
    chi = euler_characteristic(b.piece_genus)
    pieces = b.C * chi * chi - 2 * b.D * chi
    product = chi * euler_characteristic(fiber_genus(b))
    if pieces != product:
        raise EulerMismatch(f"piece sum {pieces} != product {product}")
    return pieces


def piece_sum_euler(b: SectionSumBundle) -> int:
    """Independent oracle: sum over vertices of ``chi(Sigma)^2 - valence * chi(Sigma)``."""
    chi = euler_characteristic(b.piece_genus)
    return sum(chi * chi - b.graph.valence(v) * chi for v in range(b.C))


def line_graph(n: int, group: FiniteGroup | None = None) -> LabeledGraph:
    """Path on vertices 1..n, alternately colored; labels 1 toward the right, 0 toward the left."""
    if n < 1:
        raise ValueError("line graph needs n >= 1")
    verts = tuple(Vertex(str(i + 1), PLUS if i % 2 == 0 else MINUS) for i in range(n))
    edges = []
    for i in range(n - 1):
        # left endpoint gets label 1, right endpoint label 0
        left, right = i, i + 1
        if verts[left].color == PLUS:
            edges.append(Edge(left, right, 1, 0))
        else:
            edges.append(Edge(right, left, 0, 1))
    return LabeledGraph(verts, tuple(edges))


def line_graph_family(n: int, fiber_piece: FreeActionData | None = None) -> SectionSumBundle:
    """Line graph on n vertices over the genus-3 surface with a free involution."""
    if fiber_piece is None:
        from .covers import free_action_from_cover

        fiber_piece = free_action_from_cover(FiniteGroup.cyclic(2), 3)
    return build_section_sum(line_graph(n), fiber_piece)


def basic_graph() -> LabeledGraph:
    return LabeledGraph((Vertex("+", PLUS), Vertex("-", MINUS)), (Edge(0, 1, 0, 0),))


def theta_graph() -> LabeledGraph:
    """Two vertices joined by two edges labeled 0 and 1 at both ends."""
    return LabeledGraph((Vertex("u", PLUS), Vertex("w", MINUS)), (Edge(0, 1, 0, 0), Edge(0, 1, 1, 1)))


def tripod_graph() -> LabeledGraph:
    """A valence-3 vertex with a double edge and a single edge, labels in Z/3."""
    return LabeledGraph(
        (Vertex("a", PLUS), Vertex("b", MINUS), Vertex("c", MINUS)),
        (Edge(0, 1, 0, 0), Edge(0, 1, 1, 1), Edge(0, 2, 2, 0)),
    )


@dataclass(frozen=True)
class VertexGroup:
    vertex: str
    base_genus: int
    valence: int
    fiber_free_rank: int | None  # None when the fiber piece is closed (valence 0)
    fiber_closed_genus: int


@dataclass(frozen=True)
class EdgeGroup:
    """pi_1 of the unit tangent bundle: central ``z`` and ``prod [a_i, b_i] = z^exponent``."""

    edge: int
    plus: str
    minus: str
    generators: tuple[str, ...]
    relations: tuple[str, ...]
    euler_exponent: int


@dataclass(frozen=True)
class GraphOfGroupsSkeleton:
    vertex_groups: tuple[VertexGroup, ...]
    edge_groups: tuple[EdgeGroup, ...]
    adjacency: tuple[tuple[int, int], ...]


def unit_tangent_presentation(genus: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    gens = []
    for i in range(1, genus + 1):
        gens += [f"a{i}", f"b{i}"]
    rels = [f"[z, {g}]" for g in gens]
    comm = " ".join(f"[a{i}, b{i}]" for i in range(1, genus + 1))
    rels.append(f"{comm} = z^{2 * genus - 2}")
    return tuple(gens) + ("z",), tuple(rels)


def graph_of_groups_skeleton(b: SectionSumBundle) -> GraphOfGroupsSkeleton:
    g = b.piece_genus
    x = b.graph
    verts = []
    for v in range(x.n_vertices):
        val = x.valence(v)
        rank = 2 * g + val - 1 if val else None
        verts.append(VertexGroup(x.vertices[v].name, g, val, rank, g))
    gens, rels = unit_tangent_presentation(g)
    edges = tuple(
        EdgeGroup(k, x.vertices[e.plus].name, x.vertices[e.minus].name, gens, rels, 2 * g - 2)
        for k, e in enumerate(x.edges)
    )
    adjacency = tuple((e.plus, e.minus) for e in x.edges)
    return GraphOfGroupsSkeleton(tuple(verts), edges, adjacency)
