"""Fiberings of section-sum bundles and cover constructions, with distinctness certificates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence, Union

from . import intlinalg as la
from .construction import (
    PLUS,
    MINUS,
    Edge,
    LabeledGraph,
    SectionSumBundle,
    Vertex,
    basic_graph,
    build_section_sum,
    euler_char_total,
    fiber_genus,
    validate_graph,
)
from .covers import CoveringMap, cyclic_cover, pushforward_h1, validate_covering
from .errors import (
    GenusTooSmall,
    GraphInvalid,
    InternalInvariantError,
    InvalidAction,
    NoDifferingVertex,
    NonIntegralFiberChi,
    TooManyVertices,
    WitnessVanishes,
)
from .surfaces import FiniteGroup, FreeActionData, euler_characteristic

MAX_VERTICES = 20
SECTION_SUM = "section-sum"
COVER = "cover"


@dataclass(frozen=True)
class FiberingAssignment:
    """A map from vertex positions to the factor (1 or 2) each piece projects to."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if any(x not in (1, 2) for x in self.values):
            raise ValueError("assignment values must be 1 or 2")

    @property
    def id(self) -> str:
        return "".join(str(x) for x in self.values)

    @classmethod
    def parse(cls, text: str) -> "FiberingAssignment":
        if not text or any(ch not in "12" for ch in text):
            raise ValueError(f"bad assignment id {text!r}")
        return cls(tuple(int(ch) for ch in text))

    def __getitem__(self, v: int) -> int:
        return self.values[v]


@dataclass(frozen=True)
class CoverVertexData:
    """Covering ``Sigma -> Sigma_v`` and the free action of ``G_v`` on ``Sigma_v``."""

    covering: CoveringMap
    action: FreeActionData

    @property
    def genus(self) -> int:
        return self.covering.base_genus

    @property
    def degree(self) -> int:
        return self.covering.degree


@dataclass(frozen=True)
class CoverConstruction:
    graph: LabeledGraph
    base_genus: int
    vertex_data: tuple[CoverVertexData, ...]

    @property
    def C(self) -> int:
        return self.graph.n_vertices

    @property
    def D(self) -> int:
        return self.graph.n_edges


Parent = Union[SectionSumBundle, CoverConstruction]


def build_cover_construction(x: LabeledGraph, base_genus: int, data: Sequence[CoverVertexData]) -> CoverConstruction:
    if base_genus < 2:
        raise GenusTooSmall(f"surface genus {base_genus} < 2")
    if len(data) != x.n_vertices:
        raise GraphInvalid([f"expected covering data for {x.n_vertices} vertices, got {len(data)}"])
    for v, vd in enumerate(data):
        name = x.vertices[v].name
        if name == "0":
            raise GraphInvalid([f"vertex name '0' is reserved for the fibering over the covering surface"])
        validate_covering(vd.covering)
        if vd.covering.total_genus != base_genus:
            raise InvalidAction(f"covering at vertex {name} has total genus {vd.covering.total_genus}, "
                                f"expected {base_genus}")
        if vd.genus < 2:
            raise GenusTooSmall(f"surface at vertex {name} has genus {vd.genus} < 2")
        if vd.action.total_genus != vd.genus:
            raise InvalidAction(f"group at vertex {name} acts on genus {vd.action.total_genus}, "
                                f"but the covering has base genus {vd.genus}")
    violations = validate_graph(x, [vd.action.group.order for vd in data])
    if violations:
        raise GraphInvalid(violations)
    cc = CoverConstruction(x, base_genus, tuple(data))
    cover_euler_char(cc)
    return cc


def cover_euler_char(cc: CoverConstruction) -> int:
    chi = euler_characteristic(cc.base_genus)
    return sum(chi * euler_characteristic(vd.genus) - cc.graph.valence(v) * chi
               for v, vd in enumerate(cc.vertex_data))


@dataclass(frozen=True)
class FiberingDescriptor:
    id: str
    kind: str
    base_genus: int
    fiber_genus: int
    total_euler_characteristic: int
    assignment: FiberingAssignment | None = None
    distinguished: str | None = None

    @property
    def monodromy_handle(self) -> tuple[str, str]:
        return (self.kind, self.id)

    def check_euler(self) -> bool:
        return euler_characteristic(self.base_genus) * euler_characteristic(self.fiber_genus) == \
            self.total_euler_characteristic


def enumerate_fiberings(b: SectionSumBundle) -> list[FiberingDescriptor]:
    if b.C > MAX_VERTICES:
        raise TooManyVertices(f"{b.C} vertices exceeds the enumeration guard of {MAX_VERTICES}")
    chi = euler_char_total(b)
    fg = fiber_genus(b)
    out = []
    for values in product((1, 2), repeat=b.C):
        a = FiberingAssignment(values)
        out.append(FiberingDescriptor(a.id, SECTION_SUM, b.piece_genus, fg, chi, assignment=a))
    return out


def _genus_from_chi(chi_total: int, base_genus: int) -> int:
    chi_base = euler_characteristic(base_genus)
    if chi_total % chi_base:
        raise NonIntegralFiberChi(f"chi(E) = {chi_total} is not divisible by chi(base) = {chi_base}")
    chi_f = chi_total // chi_base
    if chi_f % 2:
        raise NonIntegralFiberChi(f"fiber Euler characteristic {chi_f} is odd")
    return 1 - chi_f // 2


def cover_fiber_genus_oracle(cc: CoverConstruction, fid: str) -> int:
    """Fiber genus by counting pieces and gluing circles in the fiber."""
    gs = [vd.genus for vd in cc.vertex_data]
    if fid == "0":
        return sum(gs) + cc.D - cc.C + 1
    v = cc.graph.index_of(fid)
    d = cc.vertex_data[v].degree
    pieces = 1 + d * (cc.C - 1)
    gluings = d * cc.D
    return cc.base_genus + d * (sum(gs) - gs[v]) + gluings - pieces + 1


def enumerate_cover_fiberings(cc: CoverConstruction) -> list[FiberingDescriptor]:
    chi = cover_euler_char(cc)
    out = [FiberingDescriptor("0", COVER, cc.base_genus, _genus_from_chi(chi, cc.base_genus), chi,
                              distinguished="0")]
    for v, vd in enumerate(cc.vertex_data):
        name = cc.graph.vertices[v].name
        out.append(FiberingDescriptor(name, COVER, vd.genus, _genus_from_chi(chi, vd.genus), chi,
                                      distinguished=name))
    return out


def fiberings(parent: Parent) -> list[FiberingDescriptor]:
    if isinstance(parent, SectionSumBundle):
        return enumerate_fiberings(parent)
    return enumerate_cover_fiberings(parent)


def find_fibering(parent: Parent, fid: str) -> FiberingDescriptor:
    for f in fiberings(parent):
        if f.id == fid:
            return f
    raise KeyError(f"no fibering with id {fid!r}")


@dataclass(frozen=True)
class DistinctnessCertificate:
    """Witness that two fiberings have different fiber subgroups.

    The class ``witness_class`` of the piece at ``witness_vertex`` lies in a
    fiber of ``fibering1`` and maps to the nonzero ``image_vector`` in H_1 of
    the base of ``fibering2``.
    """

    fibering1: str
    fibering2: str
    witness_vertex: str
    witness_class: int
    image_vector: tuple[int, ...]

    @property
    def valid(self) -> bool:
        return any(self.image_vector)


def _section_sum_image(b: SectionSumBundle, f1: FiberingAssignment, f2: FiberingAssignment,
                       v: int, cls: int) -> list[int]:
    # H_1 of the piece Sigma x Sigma is H_1(Sigma) + H_1(Sigma); the fiber of the
    # projection to factor k is the other factor.
    n = 2 * b.piece_genus
    fiber_factor = 3 - f1[v]
    x = [0] * (2 * n)
    x[(fiber_factor - 1) * n + cls] = 1
    proj = [[1 if j == (f2[v] - 1) * n + i else 0 for j in range(2 * n)] for i in range(n)]
    return la.matvec(proj, x)


def _cover_projection_type(fid: str, v_name: str) -> str:
    """'H' when the piece at the vertex projects onto its own surface, else 'V'."""
    return "H" if fid == v_name else "V"


def _cover_image(cc: CoverConstruction, f1: str, f2: str, v: int, cls: int) -> list[int]:
    name = cc.graph.vertices[v].name
    t1, t2 = _cover_projection_type(f1, name), _cover_projection_type(f2, name)
    if t1 == t2:
        raise NoDifferingVertex(f"fiberings {f1} and {f2} agree at vertex {name}")
    if t1 == "V":
        # fiber is Sigma_v; the second projection maps onto Sigma_v identically
        n = 2 * cc.vertex_data[v].genus
        return [1 if i == cls else 0 for i in range(n)]
    # fiber is Sigma; the second projection is Sigma -> base of f2
    n = 2 * cc.base_genus
    x = [1 if i == cls else 0 for i in range(n)]
    if f2 == "0":
        return x
    w = cc.graph.index_of(f2)
    return la.matvec(pushforward_h1(cc.vertex_data[w].covering), x)


def _witness_classes(parent: Parent, f1: str, v: int) -> int:
    if isinstance(parent, SectionSumBundle):
        return 2 * parent.piece_genus
    name = parent.graph.vertices[v].name
    if _cover_projection_type(f1, name) == "V":
        return 2 * parent.vertex_data[v].genus
    return 2 * parent.base_genus


def _differing_vertex(parent: Parent, f1: str, f2: str) -> int:
    if f1 == f2:
        raise NoDifferingVertex(f"fiberings {f1} and {f2} are the same")
    if isinstance(parent, SectionSumBundle):
        a1, a2 = FiberingAssignment.parse(f1), FiberingAssignment.parse(f2)
        if len(a1.values) != parent.C or len(a2.values) != parent.C:
            raise KeyError("assignment length does not match the vertex count")
        for v in range(parent.C):
            if a1[v] != a2[v]:
                return v
    else:
        ids = {f.id for f in enumerate_cover_fiberings(parent)}
        for f in (f1, f2):
            if f not in ids:
                raise KeyError(f"no fibering with id {f!r}")
        for v, vert in enumerate(parent.graph.vertices):
            if _cover_projection_type(f1, vert.name) != _cover_projection_type(f2, vert.name):
                return v
    raise NoDifferingVertex(f"fiberings {f1} and {f2} agree at every vertex")


def witness_image(parent: Parent, f1: str, f2: str, v: int, cls: int) -> list[int]:
    """Image of the witness class under the second fibering's projection."""
    if isinstance(parent, SectionSumBundle):
        return _section_sum_image(parent, FiberingAssignment.parse(f1), FiberingAssignment.parse(f2), v, cls)
    return _cover_image(parent, f1, f2, v, cls)


def certify_distinct(parent: Parent, f1: str, f2: str) -> DistinctnessCertificate:
    v = _differing_vertex(parent, f1, f2)
    name = parent.graph.vertices[v].name
    for cls in range(_witness_classes(parent, f1, v)):
        image = witness_image(parent, f1, f2, v, cls)
        if any(image):
            return DistinctnessCertificate(f1, f2, name, cls, tuple(image))
    raise WitnessVanishes(f"every standard class at vertex {name} maps to zero")


def verify_certificate(parent: Parent, cert: DistinctnessCertificate) -> bool:
    try:
        v = parent.graph.index_of(cert.witness_vertex)
        image = witness_image(parent, cert.fibering1, cert.fibering2, v, cert.witness_class)
    except (KeyError, IndexError, NoDifferingVertex, ValueError):
        return False
    return tuple(image) == cert.image_vector and any(image)


def all_certificates(parent: Parent) -> list[DistinctnessCertificate]:
    ids = [f.id for f in fiberings(parent)]
    return [certify_distinct(parent, ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]


def basic_construction(g: int) -> SectionSumBundle:
    """Two copies of ``Sigma_g x Sigma_g`` glued along the diagonal, trivial group."""
    if g < 2:
        raise GenusTooSmall(f"genus {g} < 2")
    from .covers import free_action_from_cover

    return build_section_sum(basic_graph(), free_action_from_cover(FiniteGroup.trivial(), g))


def tower_construction(n: int) -> CoverConstruction:
    """Line graph on 1..n over ``Sigma`` of genus ``2^n + 1``.

    Vertex ``k`` carries the cyclic cover of degree ``2^k`` onto the genus
    ``2^(n-k) + 1`` surface and a free involution on it (trivial group at ``n``).
    """
    if n < 1:
        raise ValueError("tower needs n >= 1")
    from .covers import free_action_from_cover

    base = 2 ** n + 1
    verts = tuple(Vertex(str(k), PLUS if k % 2 else MINUS) for k in range(1, n + 1))
    edges = []
    for k in range(n - 1):
        if verts[k].color == PLUS:
            edges.append(Edge(k, k + 1, 1, 0))
        else:
            edges.append(Edge(k + 1, k, 0, 1))
    data = []
    for k in range(1, n + 1):
        gk = 2 ** (n - k) + 1
        group = FiniteGroup.cyclic(2) if k < n else FiniteGroup.trivial()
        data.append(CoverVertexData(cyclic_cover(gk, 2 ** k), free_action_from_cover(group, gk)))
    return build_cover_construction(LabeledGraph(verts, tuple(edges)), base, data)


def two_sheet_example() -> CoverConstruction:
    """Two vertices over ``Sigma_3``, each with a double cover onto ``Sigma_2``."""
    from .covers import free_action_from_cover

    verts = (Vertex("1", PLUS), Vertex("2", MINUS))
    data = tuple(CoverVertexData(cyclic_cover(2, 2), free_action_from_cover(FiniteGroup.trivial(), 2))
                 for _ in range(2))
    return build_cover_construction(LabeledGraph(verts, (Edge(0, 1, 0, 0),)), 3, data)


def check_descriptors(parent: Parent) -> None:
    """Euler multiplicativity for every fibering, plus the piece-count oracle for covers."""
    for f in fiberings(parent):
        if not f.check_euler():
            raise InternalInvariantError(f"fibering {f.id}: chi(base) * chi(fiber) != chi(E)")
        if isinstance(parent, CoverConstruction) and cover_fiber_genus_oracle(parent, f.id) != f.fiber_genus:
            raise InternalInvariantError(f"fibering {f.id}: piece count disagrees with chi division")
