"""Finite unbranched covers of closed surfaces.

A cover of degree ``d`` of the genus-``h`` surface is given by permutations
``sigma(a1), sigma(b1), ..., sigma(ah), sigma(bh)`` of the sheets
``0..d-1``.  The base carries the CW structure with one vertex, ``2h`` edges
and one ``4h``-gon glued along ``a1 b1 a1^-1 b1^-1 ... ah bh ah^-1 bh^-1``.
Its lift has one vertex per sheet, the edge ``(i, s)`` running from sheet
``s`` to sheet ``sigma_i(s)``, and one 2-cell per sheet.  Paths lift on the
right: the lift of ``x1 x2`` starting at ``s`` ends at ``sigma_x2(sigma_x1(s))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from . import intlinalg as la
from .errors import (
    InternalInvariantError,
    NotDeckTransformation,
    NotTransitive,
    RelationViolated,
    TorsionFound,
)
from .surfaces import FiniteGroup, FreeActionData

Perm = tuple[int, ...]
Word = Sequence[tuple[int, int]]


def surface_relator(genus: int) -> list[tuple[int, int]]:
    """The word prod [a_i, b_i] as (generator index, +-1) letters."""
    word = []
    for i in range(genus):
        a, b = 2 * i, 2 * i + 1
        word += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return word


def invert_perm(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """``p o q``: first ``q``, then ``p``."""
    return tuple(p[x] for x in q)


@dataclass(frozen=True)
class CoveringMap:
    base_genus: int
    degree: int
    perm_images: tuple[Perm, ...]

    def __post_init__(self):
        perms = tuple(tuple(int(x) for x in p) for p in self.perm_images)
        object.__setattr__(self, "perm_images", perms)
        if self.base_genus < 1 or self.degree < 1:
            raise ValueError("base genus and degree must be positive")
        if len(perms) != 2 * self.base_genus:
            raise ValueError(f"need {2 * self.base_genus} permutations, got {len(perms)}")
        for p in perms:
            if sorted(p) != list(range(self.degree)):
                raise ValueError(f"{p} is not a permutation of 0..{self.degree - 1}")

    @property
    def total_genus(self) -> int:
        return self.degree * (self.base_genus - 1) + 1

    @property
    def n_edges(self) -> int:
        return 2 * self.base_genus * self.degree

    def edge_index(self, gen: int, sheet: int) -> int:
        return gen * self.degree + sheet

    def act(self, sheet: int, word: Word) -> int:
        """Endpoint sheet of the lift of ``word`` starting at ``sheet``."""
        for gen, sign in word:
            p = self.perm_images[gen]
            sheet = p[sheet] if sign > 0 else p.index(sheet)
        return sheet

    def word_permutation(self, word: Word) -> Perm:
        return tuple(self.act(s, word) for s in range(self.degree))

    def lift_chain(self, sheet: int, word: Word) -> tuple[int, list[tuple[int, int]]]:
        """Endpoint and signed edge sequence of the lift of ``word`` from ``sheet``."""
        steps = []
        for gen, sign in word:
            p = self.perm_images[gen]
            if sign > 0:
                steps.append((self.edge_index(gen, sheet), 1))
                sheet = p[sheet]
            else:
                sheet = p.index(sheet)
                steps.append((self.edge_index(gen, sheet), -1))
        return sheet, steps


def _orbit(c: CoveringMap, start: int = 0) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for p in c.perm_images:
                for t in (p[s], p.index(s)):
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return seen


def validate_covering(c: CoveringMap) -> int:
    """Check the surface relation and transitivity; return the total genus."""
    rel = c.word_permutation(surface_relator(c.base_genus))
    if rel != tuple(range(c.degree)):
        raise RelationViolated(f"product of commutators acts as {rel}, not the identity")
    if len(_orbit(c)) != c.degree:
        raise NotTransitive("permutation group is not transitive: total space is disconnected")
    return c.total_genus


def identity_cover(h: int) -> CoveringMap:
    return CoveringMap(h, 1, tuple((0,) for _ in range(2 * h)))


def cyclic_cover(h: int, n: int) -> CoveringMap:
    """Cyclic cover of degree ``n``: ``a1`` acts as the n-cycle, everything else trivially."""
    if h < 2 or n < 1:
        raise ValueError("need h >= 2 and n >= 1")
    ident = tuple(range(n))
    cycle = tuple((s + 1) % n for s in range(n))
    return CoveringMap(h, n, (cycle,) + (ident,) * (2 * h - 1))


def regular_cover(group: FiniteGroup, h: int, generators: Sequence[int] | None = None) -> tuple[CoveringMap, list[Perm]]:
    """Regular cover with deck group ``group``.

    Sheets are group elements; ``a_i`` acts by right multiplication with the
    i-th generator and every ``b_i`` trivially, which satisfies the surface
    relation.  The deck transformation of ``x`` is left multiplication by
    ``x``; the returned list is indexed by group element.
    """
    n = group.order
    if generators is None:
        generators = group.small_generating_set(h)
        if generators is None:
            raise ValueError(f"group of order {n} needs more than {h} generators")
    if len(generators) > h:
        raise ValueError(f"at most {h} generators fit on a genus-{h} base")
    ident = tuple(range(n))
    perms = []
    for i in range(h):
        if i < len(generators):
            g = generators[i]
            perms.append(tuple(group.mul(s, g) for s in range(n)))
        else:
            perms.append(ident)
        perms.append(ident)
    cover = CoveringMap(h, n, tuple(perms))
    decks = [tuple(group.mul(x, s) for s in range(n)) for x in range(n)]
    return cover, decks


def deck_group(c: CoveringMap) -> list[Perm]:
    """All sheet permutations commuting with the monodromy (brute force, small degree)."""
    if c.degree > 8:
        raise ValueError("brute-force deck group limited to degree <= 8")
    out = []
    for p in permutations(range(c.degree)):
        if all(compose(p, s) == compose(s, p) for s in c.perm_images):
            out.append(tuple(p))
    return out


def is_regular(c: CoveringMap) -> bool:
    return len(deck_group(c)) == c.degree


@dataclass(frozen=True)
class CoverChainComplex:
    covering: CoveringMap
    boundary2: la.FrozenMatrix  # edges x faces
    boundary1: la.FrozenMatrix  # vertices x edges
    face_words: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)

    @property
    def cell_counts(self) -> tuple[int, int, int]:
        c = self.covering
        return c.degree, c.n_edges, c.degree


def build_chain_complex(c: CoveringMap) -> CoverChainComplex:
    validate_covering(c)
    return _build_chain_complex(c)


@lru_cache(maxsize=256)
def _build_chain_complex(c: CoveringMap) -> CoverChainComplex:
    d, ne = c.degree, c.n_edges
    b1 = la.zeros(d, ne)
    for i, p in enumerate(c.perm_images):
        for s in range(d):
            e = c.edge_index(i, s)
            b1[p[s]][e] += 1
            b1[s][e] -= 1
    b2 = la.zeros(ne, d)
    relator = surface_relator(c.base_genus)
    words = []
    for s in range(d):
        end, steps = c.lift_chain(s, relator)
        if end != s:
            raise RelationViolated("relator does not lift to a closed loop")
        for e, sign in steps:
            b2[e][s] += sign
        words.append(tuple(steps))
    if not la.is_zero(la.matmul(b1, b2)):
        raise InternalInvariantError("boundary1 @ boundary2 != 0")
    return CoverChainComplex(c, la.freeze(b2), la.freeze(b1), tuple(words))


@dataclass(frozen=True)
class H1Data:
    """H_1 of a cover with a symplectic basis.

    ``basis`` vectors are 1-cycles in edge coordinates; ``coords`` is an
    integer matrix (rank x n_edges) whose rows are 1-cocycles dual to the
    basis, so ``coords @ z`` gives the H_1 coordinates of a cycle ``z``.
    ``raw_form`` is the intersection form on the pre-normalisation basis.
    """

    basis: tuple[tuple[int, ...], ...]
    coords: la.FrozenMatrix
    form: la.FrozenMatrix
    raw_form: la.FrozenMatrix
    ranks: tuple[int, int, int]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, chain: Sequence[int]) -> list[int]:
        return la.matvec(self.coords, chain)


def cup_pairing(cc: CoverChainComplex, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Evaluate ``alpha u beta`` on the fundamental class.

    Each lifted 2-cell is coned to an interior centre ``c``.  The triangle
    over a boundary edge ``e`` is ordered ``[tail(e), head(e), c]``, which
    makes the subdivision a Delta-complex; it enters the fundamental cycle
    with the sign of the traversal.  A 1-cocycle ``beta`` extends to the
    radial edges by ``beta(corner_k -> c) = -(beta summed along the boundary
    word up to corner k)``, and ``(alpha u beta)[t, h, c] = alpha(e) * beta(h -> c)``.
    """
    total = 0
    for steps in cc.face_words:
        prefix = [0]
        for e, sign in steps:
            prefix.append(prefix[-1] + sign * beta[e])
        if prefix[-1]:
            raise InternalInvariantError("cochain is not a cocycle on a 2-cell")
        for k, (e, sign) in enumerate(steps):
            a = alpha[e]
            if a:
                head = k + 1 if sign > 0 else k
                total -= sign * a * prefix[head]
    return total


def homology(cc: CoverChainComplex) -> H1Data:
    return _homology(cc)


@lru_cache(maxsize=256)
def _homology(cc: CoverChainComplex) -> H1Data:
    c = cc.covering
    ne = c.n_edges
    d = c.degree
    # kernel of boundary1 via its Smith form
    d1, _, q1 = la.smith_normal_form(cc.boundary1, ne)
    r1 = sum(1 for x in la.diagonal(d1) if x)
    q1inv = la.unimodular_inverse(q1)
    z = [la.column(q1, j) for j in range(r1, ne)]
    to_z = q1inv[r1:]  # coordinates in the kernel basis
    b = la.matmul(to_z, cc.boundary2)
    k = len(z)
    db, pb, _ = la.smith_normal_form(b, d)
    divisors = [x for x in la.diagonal(db) if x]
    if any(x != 1 for x in divisors):
        raise TorsionFound(f"H_1 has torsion: elementary divisors {divisors}")
    r2 = len(divisors)
    pbinv = la.unimodular_inverse(pb)
    # new kernel basis Z' = Z pb^-1; H_1 basis is its tail
    zmat = la.from_columns(z, ne)
    zprime = la.matmul(zmat, pbinv)
    raw_basis = [la.column(zprime, j) for j in range(r2, k)]
    raw_coords = la.matmul(pb, to_z)[r2:]
    m = len(raw_basis)
    h0 = d - r1
    h2 = d - r2
    # dual cocycles are the rows of raw_coords
    cup = [[cup_pairing(cc, raw_coords[i], raw_coords[j]) for j in range(m)] for i in range(m)]
    if not la.is_antisymmetric(cup) or abs(la.determinant(cup)) != 1:
        raise InternalInvariantError("cup product form is not antisymmetric unimodular")
    # intersection form on homology is -(cup form)^-1
    raw_form = [[-x for x in row] for row in la.unimodular_inverse(cup)]
    s = la.symplectic_basis(raw_form)
    sinv = la.unimodular_inverse(s)
    basis_mat = la.matmul(la.from_columns(raw_basis, ne), s) if m else []
    basis = tuple(tuple(la.column(basis_mat, j)) for j in range(m))
    coords = la.matmul(sinv, raw_coords) if m else []
    form = la.chain(la.transpose(s), raw_form, s) if m else []
    if form != la.standard_symplectic_form(m // 2):
        raise InternalInvariantError("symplectic normalisation failed")
    return H1Data(basis, la.freeze(coords), la.freeze(form), la.freeze(raw_form), (h0, m, h2))


def h1_basis(cc: CoverChainComplex) -> tuple[tuple[int, ...], ...]:
    return homology(cc).basis


def intersection_form(cc: CoverChainComplex) -> la.FrozenMatrix:
    return homology(cc).form


def homology_ranks(cc: CoverChainComplex) -> tuple[int, int, int]:
    return homology(cc).ranks


def _edge_permutation(c: CoveringMap, deck: Sequence[int]) -> list[int]:
    return [c.edge_index(i, deck[s]) for i in range(2 * c.base_genus) for s in range(c.degree)]


def deck_action_h1(c: CoveringMap, deck: Sequence[int]) -> la.Matrix:
    """Matrix of the deck transformation ``deck`` on H_1 of the cover."""
    deck = tuple(deck)
    if sorted(deck) != list(range(c.degree)):
        raise NotDeckTransformation(f"{deck} is not a permutation of the sheets")
    for p in c.perm_images:
        if compose(deck, p) != compose(p, deck):
            raise NotDeckTransformation(f"{deck} does not commute with the monodromy {p}")
    h = homology(build_chain_complex(c))
    eperm = _edge_permutation(c, deck)
    cols = []
    for z in h.basis:
        moved = [0] * c.n_edges
        for e, x in enumerate(z):
            if x:
                moved[eperm[e]] += x
        cols.append(h.coordinates(moved))
    return la.from_columns(cols, h.rank)


def pushforward_h1(c: CoveringMap) -> la.Matrix:
    """Matrix of the covering projection on H_1 (cover basis -> standard base basis)."""
    h = homology(build_chain_complex(c))
    cols = []
    for z in h.basis:
        col = [0] * (2 * c.base_genus)
        for e, x in enumerate(z):
            col[e // c.degree] += x
        cols.append(col)
    return la.from_columns(cols, 2 * c.base_genus)


def free_action_from_cover(group: FiniteGroup, genus: int, generators: Sequence[int] | None = None) -> FreeActionData:
    """A free action of ``group`` on the genus-``genus`` surface with its H_1 action.

    Realised as the deck group of a regular cover of the quotient surface.
    """
    fa = FreeActionData(group, genus)
    if group.order == 1:
        return FreeActionData(group, genus, action_on_h1=(la.identity(2 * genus),))
    cover, decks = regular_cover(group, fa.quotient_genus, generators)
    mats = tuple(la.freeze(deck_action_h1(cover, dk)) for dk in decks)
    return FreeActionData(group, genus, action_on_h1=mats)
