"""Homological monodromy of fiberings, as integer symplectic matrices on H_1 of the fiber.

Fiber homology of a section-sum fibering is laid out as one closed-surface
block per vertex, then the gluing-circle block ``C`` (one class ``c_e`` per
non-tree edge) and the crossing block ``C*`` (one class ``gamma_e`` running
through the fundamental cycle of ``e``), with ``<c_e, gamma_e> = 1``.
Blocks of '-' vertices use mirrored coordinates (``b_i`` negated) so every
piece block carries the standard form.

A base loop ``x`` moves each hole of a piece along a translate of ``x``.
Closed piece classes are unchanged (the twists about the two boundary curves
of a pushed annulus cancel in H_1), crossing classes pick up the difference
of the hole paths at each traversed piece, and the ``C`` corrections are the
unique ones making the result symplectic.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Sequence, Union

from . import intlinalg as la
from .construction import MINUS, SectionSumBundle
from .covers import free_action_from_cover, invert_perm
from .errors import InvalidWord, LagrangianNotVerified, NotSymplectic, UnsupportedGraph
from .fibering import (
    CoverConstruction,
    FiberingAssignment,
    enumerate_cover_fiberings,
)
from .surfaces import FreeActionData

Letter = tuple[int, int]
WordLike = Union[str, Sequence[Letter]]
Parent = Union[SectionSumBundle, CoverConstruction]

EXACT = "exact"
MODEL = "model"
SIGNATURE_FLAG = "by Lagrangian monodromy (cited result)"


@dataclass(frozen=True)
class SymplecticSpace:
    form: la.FrozenMatrix

    def __post_init__(self):
        object.__setattr__(self, "form", la.freeze(self.form))
        if len(self.form) % 2 or not la.is_antisymmetric(self.form) or abs(la.determinant(self.form)) != 1:
            raise ValueError("form must be antisymmetric and unimodular")

    @classmethod
    def standard(cls, genus: int) -> "SymplecticSpace":
        return cls(la.standard_symplectic_form(genus))

    @property
    def rank(self) -> int:
        return len(self.form)

    @property
    def genus(self) -> int:
        return self.rank // 2

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        return la.pairing(self.form, u, v)


@dataclass(frozen=True)
class Block:
    name: str
    kind: str  # "piece", "C" or "C*"
    start: int
    size: int

    @property
    def indices(self) -> range:
        return range(self.start, self.start + self.size)


@dataclass(frozen=True)
class H1Action:
    matrix: la.FrozenMatrix
    space: SymplecticSpace
    blocks: tuple[Block, ...] = ()
    model: str = EXACT

    def __post_init__(self):
        object.__setattr__(self, "matrix", la.freeze(self.matrix))

    @property
    def c_indices(self) -> list[int]:
        return [i for b in self.blocks if b.kind == "C" for i in b.indices]

    def __matmul__(self, other: "H1Action") -> "H1Action":
        return H1Action(la.matmul(self.matrix, other.matrix), self.space, self.blocks,
                        MODEL if MODEL in (self.model, other.model) else EXACT)

    def inverse(self) -> "H1Action":
        return H1Action(la.unimodular_inverse(self.matrix), self.space, self.blocks, self.model)


@dataclass(frozen=True)
class LagrangianSubspace:
    basis: tuple[tuple[int, ...], ...]
    space: SymplecticSpace

    def __post_init__(self):
        object.__setattr__(self, "basis", la.freeze(self.basis))

    def check(self) -> bool:
        """Isotropic, half rank and saturated."""
        b = self.basis
        if len(b) != self.space.genus:
            return False
        if any(self.space.pairing(u, v) for u in b for v in b):
            return False
        mat = la.from_columns(b, self.space.rank)
        return la.invariant_factors(mat, len(b)) == [1] * len(b)


def validate_action(a: H1Action) -> H1Action:
    """Symplectic, unimodular and fixing ``C``; any failure is an internal error."""
    m, form = a.matrix, a.space.form
    if len(m) != a.space.rank:
        raise NotSymplectic("matrix size does not match the symplectic space")
    if not la.is_symplectic(m, form):
        raise NotSymplectic("monodromy matrix does not preserve the intersection form")
    if abs(la.determinant(m)) != 1:
        raise NotSymplectic("monodromy matrix is not unimodular")
    for i in a.c_indices:
        if [row[i] for row in m] != [1 if r == i else 0 for r in range(len(m))]:
            raise NotSymplectic(f"gluing-circle class {i} is not fixed")
    return a


def transvection(c: Sequence[int], s: SymplecticSpace, power: int = 1) -> H1Action:
    """Action of a Dehn twist about a curve of class ``c``: ``x -> x + <x, c> c``."""
    return H1Action(la.transvection_matrix(c, s.form, power), s)


def is_torelli(a: H1Action) -> bool:
    return la.thaw(a.matrix) == la.identity(len(a.matrix))


# words

_TOKEN = re.compile(r"([aAbB])(\d+)(\^-1|\^\+?1)?$")


def parse_word(word: WordLike, base_genus: int) -> list[Letter]:
    """Letters ``(generator index, +-1)``; text uses ``a1 b2^-1 A1`` (capital = inverse)."""
    if isinstance(word, str):
        letters = []
        for tok in re.split(r"[\s,*.]+", word.strip()):
            if not tok or tok == "1":
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise InvalidWord(f"cannot parse letter {tok!r}")
            kind, idx, exp = m.groups()
            i = int(idx)
            if not 1 <= i <= base_genus:
                raise InvalidWord(f"letter {tok!r} out of range for base genus {base_genus}")
            gen = 2 * (i - 1) + (0 if kind.lower() == "a" else 1)
            sign = -1 if kind.isupper() else 1
            if exp == "^-1":
                sign = -sign
            letters.append((gen, sign))
        return letters
    out = []
    for item in word:
        try:
            gen, sign = item
        except (TypeError, ValueError) as exc:
            raise InvalidWord(f"bad letter {item!r}") from exc
        if not 0 <= gen < 2 * base_genus or sign not in (1, -1):
            raise InvalidWord(f"letter {item!r} out of range for base genus {base_genus}")
        out.append((int(gen), int(sign)))
    return out


def generator_names(base_genus: int) -> list[str]:
    return [f"{c}{i}" for i in range(1, base_genus + 1) for c in "ab"]


# section sums

@dataclass(frozen=True)
class CycleData:
    edge: int
    traversals: tuple[tuple[int, int, int], ...]  # (vertex, edge in, edge out)


def fundamental_cycles(b: SectionSumBundle) -> tuple[CycleData, ...]:
    """BFS spanning tree from the first vertex; one cycle per non-tree edge, in edge order."""
    x = b.graph
    adj: list[list[tuple[int, int]]] = [[] for _ in range(x.n_vertices)]
    for k, e in enumerate(x.edges):
        adj[e.plus].append((k, e.minus))
        adj[e.minus].append((k, e.plus))
    parent: dict[int, tuple[int, int] | None] = {0: None}
    depth = {0: 0}
    todo = deque([0])
    tree = set()
    while todo:
        u = todo.popleft()
        for k, w in adj[u]:
            if w not in parent:
                parent[w] = (k, u)
                depth[w] = depth[u] + 1
                tree.add(k)
                todo.append(w)
    cycles = []
    for k, e in enumerate(x.edges):
        if k in tree:
            continue
        # traverse e from plus to minus, then the tree path back
        start, end = e.plus, e.minus
        up_end, up_start = [], []
        a, c = end, start
        while depth[a] > depth[c]:
            up_end.append(parent[a])
            a = parent[a][1]
        while depth[c] > depth[a]:
            up_start.append(parent[c])
            c = parent[c][1]
        while a != c:
            up_end.append(parent[a])
            a = parent[a][1]
            up_start.append(parent[c])
            c = parent[c][1]
        # path end -> lca via up_end, lca -> start via reversed up_start
        verts = [end]
        edges = [k]
        for pk, pv in up_end:
            edges.append(pk)
            verts.append(pv)
        for pk, _ in reversed(up_start):
            edges.append(pk)
            verts.append(x.edges[pk].plus if x.edges[pk].minus == verts[-1] else x.edges[pk].minus)
        assert verts[-1] == start
        trav = []
        for i, v in enumerate(verts):
            trav.append((v, edges[i], edges[i + 1] if i + 1 < len(edges) else k))
        cycles.append(CycleData(k, tuple(trav)))
    return tuple(cycles)


def _action_data(fp: FreeActionData) -> FreeActionData:
    if fp.action_on_h1 is not None:
        return fp
    return free_action_from_cover(fp.group, fp.total_genus)


@dataclass(frozen=True)
class SectionSumLayout:
    genus: int
    n_vertices: int
    cycles: tuple[CycleData, ...]
    space: SymplecticSpace
    blocks: tuple[Block, ...]

    @property
    def piece_dim(self) -> int:
        return 2 * self.genus * self.n_vertices

    @property
    def b1(self) -> int:
        return len(self.cycles)

    def c_index(self, k: int) -> int:
        return self.piece_dim + k

    def gamma_index(self, k: int) -> int:
        return self.piece_dim + self.b1 + k


def section_sum_layout(b: SectionSumBundle) -> SectionSumLayout:
    g = b.piece_genus
    cycles = fundamental_cycles(b)
    r = len(cycles)
    blocks = [Block(f"piece {v.name}", "piece", 2 * g * i, 2 * g) for i, v in enumerate(b.graph.vertices)]
    pd = 2 * g * b.C
    if r:
        blocks.append(Block("C", "C", pd, r))
        blocks.append(Block("C*", "C*", pd + r, r))
    form = la.block_diag(*([la.standard_symplectic_form(g)] * b.C))
    full = la.zeros(pd + 2 * r, pd + 2 * r)
    for i in range(pd):
        full[i][:pd] = form[i]
    for k in range(r):
        full[pd + k][pd + r + k] = 1
        full[pd + r + k][pd + k] = -1
    return SectionSumLayout(g, b.C, cycles, SymplecticSpace(full), tuple(blocks))


def _mirror(v_color: str, vec: list[int]) -> list[int]:
    if v_color != MINUS:
        return vec
    return [x if i % 2 == 0 else -x for i, x in enumerate(vec)]


def _hole_matrix(b: SectionSumBundle, fp: FreeActionData, f: FiberingAssignment, v: int, k: int):
    vert = b.graph.vertices[v]
    label = b.graph.edges[k].label_at(vert.color)
    elem = label if f[v] == 1 else fp.group.inverse(label)
    return fp.matrix(elem)


def crossing_drag(b: SectionSumBundle, f: FiberingAssignment, cycle: CycleData, x: Sequence[int],
                  fp: FreeActionData | None = None) -> list[int]:
    """Piece-block vector added to the crossing class of ``cycle`` by the base class ``x``."""
    fp = _action_data(fp or b.fiber_piece)
    g = b.piece_genus
    out = [0] * (2 * g * b.C)
    for v, k_in, k_out in cycle.traversals:
        moved = la.matvec(_hole_matrix(b, fp, f, v, k_out), x)
        back = la.matvec(_hole_matrix(b, fp, f, v, k_in), x)
        diff = _mirror(b.graph.vertices[v].color, [p - q for p, q in zip(moved, back)])
        for i, val in enumerate(diff):
            out[2 * g * v + i] += val
    return out


def _section_sum_generator(b: SectionSumBundle, f: FiberingAssignment, layout: SectionSumLayout,
                           fp: FreeActionData, gen: int) -> la.Matrix:
    g = b.piece_genus
    x = [1 if i == gen else 0 for i in range(2 * g)]
    pd = layout.piece_dim
    piece_form = [row[:pd] for row in layout.space.form[:pd]]
    drags = [crossing_drag(b, f, cyc, x, fp) for cyc in layout.cycles]
    m = la.identity(layout.space.rank)
    for j, p in enumerate(drags):
        gj = layout.gamma_index(j)
        for i in range(pd):
            m[i][gj] = p[i]
        jp = la.matvec(piece_form, p)
        for y in range(pd):
            # <M y, M gamma_j> = 0 forces the c_j coefficient of M y
            m[layout.c_index(j)][y] = -jp[y]
        for i in range(j):
            m[layout.c_index(i)][gj] = la.pairing(piece_form, drags[i], p)
    return m


def push_monodromy(b: SectionSumBundle, f: FiberingAssignment | str, word: WordLike) -> H1Action:
    if isinstance(f, str):
        f = FiberingAssignment.parse(f)
    if len(f.values) != b.C:
        raise InvalidWord(f"assignment has {len(f.values)} entries for {b.C} vertices")
    letters = parse_word(word, b.piece_genus)
    layout = section_sum_layout(b)
    fp = _action_data(b.fiber_piece)
    model = MODEL if layout.b1 else EXACT
    gens: dict[Letter, la.Matrix] = {}
    m = la.identity(layout.space.rank)
    for letter in letters:
        if letter not in gens:
            gm = _section_sum_generator(b, f, layout, fp, letter[0])
            gens[(letter[0], 1)] = gm
            gens[(letter[0], -1)] = la.unimodular_inverse(gm)
        m = la.matmul(m, gens[letter])
    return validate_action(H1Action(m, layout.space, layout.blocks, model))


# cover constructions

@dataclass(frozen=True)
class CoverLayout:
    blocks: tuple[Block, ...]
    space: SymplecticSpace
    sheet_blocks: tuple[tuple[int, int, int], ...]  # (vertex, sheet, block index)


def _is_tree(x) -> bool:
    return x.n_edges == x.n_vertices - 1


def cover_layout(cc: CoverConstruction, fid: str) -> CoverLayout:
    x = cc.graph
    blocks: list[Block] = []
    sheet_blocks = []
    pos = 0
    if fid == "0":
        for v, vd in enumerate(cc.vertex_data):
            blocks.append(Block(f"piece {x.vertices[v].name}", "piece", pos, 2 * vd.genus))
            pos += 2 * vd.genus
    else:
        v0 = x.index_of(fid)
        blocks.append(Block("piece cover", "piece", 0, 2 * cc.base_genus))
        pos = 2 * cc.base_genus
        for w, vd in enumerate(cc.vertex_data):
            if w == v0:
                continue
            for s in range(cc.vertex_data[v0].degree):
                sheet_blocks.append((w, s, len(blocks)))
                blocks.append(Block(f"piece {x.vertices[w].name} sheet {s}", "piece", pos, 2 * vd.genus))
                pos += 2 * vd.genus
    form = la.block_diag(*[la.standard_symplectic_form(bk.size // 2) for bk in blocks])
    return CoverLayout(tuple(blocks), SymplecticSpace(form), tuple(sheet_blocks))


def cover_fibering_monodromy(cc: CoverConstruction, fid: str, word: WordLike) -> H1Action:
    """Monodromy of ``p^0`` or ``p^v`` on the fiber homology.

    Over ``Sigma_v`` the fiber holds one copy of each other piece per sheet;
    a loop permutes these copies like the covering permutes sheets.
    """
    if not _is_tree(cc.graph):
        raise UnsupportedGraph("cover-construction monodromy is implemented for tree graphs only")
    ids = [f.id for f in enumerate_cover_fiberings(cc)]
    if fid not in ids:
        raise KeyError(f"no fibering with id {fid!r}")
    layout = cover_layout(cc, fid)
    n = layout.space.rank
    if fid == "0":
        parse_word(word, cc.base_genus)
        return validate_action(H1Action(la.identity(n), layout.space, layout.blocks))
    v0 = cc.graph.index_of(fid)
    cov = cc.vertex_data[v0].covering
    letters = parse_word(word, cov.base_genus)
    m = la.identity(n)
    for letter in letters:
        m = la.matmul(m, _sheet_matrix(layout, invert_perm(cov.word_permutation([letter])), n))
    return validate_action(H1Action(m, layout.space, layout.blocks))


def _sheet_matrix(layout: CoverLayout, target: Sequence[int], n: int) -> la.Matrix:
    """Send the block on sheet ``s`` to the block on sheet ``target[s]``."""
    where = {(w, s): bi for w, s, bi in layout.sheet_blocks}
    m = la.zeros(n, n)
    for i in layout.blocks[0].indices:
        m[i][i] = 1
    for w, s, bi in layout.sheet_blocks:
        src = layout.blocks[bi]
        dst = layout.blocks[where[(w, target[s])]]
        for off in range(src.size):
            m[dst.start + off][src.start + off] = 1
    return m


def sheet_permutation_part(cc: CoverConstruction, fid: str, word: WordLike) -> tuple[int, ...]:
    """Where the monodromy of ``word`` sends each sheet block (identity for ``p^0``)."""
    if fid == "0":
        return (0,)
    cov = cc.vertex_data[cc.graph.index_of(fid)].covering
    return invert_perm(cov.word_permutation(parse_word(word, cov.base_genus)))


# dispatch

def base_genus_of(parent: Parent, fid: str) -> int:
    if isinstance(parent, SectionSumBundle):
        return parent.piece_genus
    if fid == "0":
        return parent.base_genus
    return parent.vertex_data[parent.graph.index_of(fid)].genus


def monodromy(parent: Parent, fid: str, word: WordLike) -> H1Action:
    if isinstance(parent, SectionSumBundle):
        return push_monodromy(parent, fid, word)
    return cover_fibering_monodromy(parent, fid, word)


def generator_actions(parent: Parent, fid: str) -> list[H1Action]:
    h = base_genus_of(parent, fid)
    return [monodromy(parent, fid, [(i, 1)]) for i in range(2 * h)]


def invariant_lagrangian(parent: Parent, fid: str) -> LagrangianSubspace:
    """The a-classes of every piece block together with the gluing circles."""
    if isinstance(parent, SectionSumBundle):
        FiberingAssignment.parse(fid)
        layout = section_sum_layout(parent)
        blocks, space = layout.blocks, layout.space
    else:
        cl = cover_layout(parent, fid)
        blocks, space = cl.blocks, cl.space
    n = space.rank
    basis = []
    for bk in blocks:
        if bk.kind == "piece":
            idx = [bk.start + 2 * i for i in range(bk.size // 2)]
        elif bk.kind == "C":
            idx = list(bk.indices)
        else:
            continue
        for i in idx:
            basis.append(tuple(1 if j == i else 0 for j in range(n)))
    lag = LagrangianSubspace(tuple(basis), space)
    if not lag.check():
        raise NotSymplectic("constructed subspace is not Lagrangian")
    return lag


def _in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int], dim: int) -> bool:
    return la.solve_integral(la.from_columns(basis, dim), list(v), len(basis)) is not None


def preserves_lagrangian(a: H1Action, lag: LagrangianSubspace) -> bool:
    n = len(a.matrix)
    if lag.space.rank != n:
        raise ValueError("Lagrangian and action live in spaces of different rank")
    inv = la.unimodular_inverse(a.matrix)
    for v in lag.basis:
        if not _in_lattice(lag.basis, la.matvec(a.matrix, v), n):
            return False
        if not _in_lattice(lag.basis, la.matvec(inv, v), n):
            return False
    return True


def monodromies_agree(parent: Parent, f1: str, f2: str, words: Sequence[WordLike] | None = None,
                      other: Parent | None = None) -> bool:
    """Whether the monodromies of ``f1`` (on ``parent``) and ``f2`` (on ``other``) coincide.

    Both sides are compared in their canonical block layouts; differing
    fiber ranks count as disagreement.
    """
    other = parent if other is None else other
    if words is None:
        h = base_genus_of(parent, f1)
        if base_genus_of(other, f2) != h:
            return False
        words = [[(i, 1)] for i in range(2 * h)]
    for w in words:
        try:
            a1 = monodromy(parent, f1, w)
            a2 = monodromy(other, f2, w)
        except InvalidWord:
            return False
        if a1.matrix != a2.matrix:
            return False
    return True


@dataclass(frozen=True)
class SignatureReport:
    value: int
    flag: str


def signature(parent: Parent) -> SignatureReport:
    """Zero, once every generator monodromy of every fibering preserves its Lagrangian."""
    from .fibering import fiberings

    for f in fiberings(parent):
        lag = invariant_lagrangian(parent, f.id)
        for a in generator_actions(parent, f.id):
            if not preserves_lagrangian(a, lag):
                raise LagrangianNotVerified(f"fibering {f.id}: a generator moves the Lagrangian")
    return SignatureReport(0, SIGNATURE_FLAG)
