"""Closed oriented surfaces, finite groups and free group actions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import intlinalg as la
from .errors import (
    InvalidAction,
    InvalidGroup,
    NonIntegralQuotient,
    QuotientGenusTooSmall,
)

MAX_GROUP_ORDER = 64


@dataclass(frozen=True)
class ClosedSurface:
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"genus must be non-negative, got {self.genus}")

    @property
    def euler_characteristic(self) -> int:
        return euler_characteristic(self)


def euler_characteristic(s: ClosedSurface | int) -> int:
    g = s.genus if isinstance(s, ClosedSurface) else s
    return 2 - 2 * g


def connected_sum_genus(genera: Sequence[int]) -> int:
    if not genera:
        raise ValueError("connected sum of an empty list of surfaces")
    if any(g < 0 for g in genera):
        raise ValueError("genera must be non-negative")
    return sum(genera)


def validate_free_action(n: int, g: int) -> int:
    """Quotient genus of a free action of a group of order ``n`` on genus ``g``."""
    if n < 1 or g < 2:
        raise ValueError(f"need n >= 1 and g >= 2, got n={n}, g={g}")
    if (g - 1) % n:
        raise NonIntegralQuotient(f"group order {n} does not divide g - 1 = {g - 1}")
    h = (g - 1) // n + 1
    if h < 2:
        raise QuotientGenusTooSmall(f"quotient genus {h} < 2")
    return h


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a multiplication table; element 0 is the identity.

    ``table[x][y]`` is the product ``x*y``.  When elements act on a space,
    ``x*y`` means "first ``y``, then ``x``".
    """

    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "table", la.freeze(self.table))
        n = len(self.table)
        if n < 1 or n > MAX_GROUP_ORDER:
            raise InvalidGroup(f"group order must be in 1..{MAX_GROUP_ORDER}, got {n}")
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise InvalidGroup("multiplication table must be n x n with entries in 0..n-1")
        t = self.table
        if any(t[0][x] != x or t[x][0] != x for x in range(n)):
            raise InvalidGroup("element 0 is not a two-sided identity")
        for x in range(n):
            if 0 not in t[x]:
                raise InvalidGroup(f"element {x} has no inverse")
            if sorted(t[x]) != list(range(n)):
                raise InvalidGroup(f"row {x} is not a permutation")
        for x in range(n):
            tx = t[x]
            for y in range(n):
                txy = tx[y]
                ty = t[y]
                for z in range(n):
                    if t[txy][z] != tx[ty[z]]:
                        raise InvalidGroup(f"not associative at ({x}, {y}, {z})")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inverse(self, x: int) -> int:
        return self.table[x].index(0)

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls(((0,),), name="trivial")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), name=f"cyclic {n}")

    @classmethod
    def from_permutations(cls, generators: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """Closure of a set of permutations, elements in BFS order from the identity."""
        if not generators:
            return cls.trivial()
        deg = len(generators[0])
        ident = tuple(range(deg))
        elems = [ident]
        index = {ident: 0}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for gen in generators:
                    q = tuple(gen[p[i]] for i in range(deg))
                    if q not in index:
                        if len(elems) >= MAX_GROUP_ORDER:
                            raise InvalidGroup("generated group is too large")
                        index[q] = len(elems)
                        elems.append(q)
                        nxt.append(q)
            frontier = nxt
        # (p*q)(i) = p(q(i))
        table = tuple(tuple(index[tuple(p[q[i]] for i in range(deg))] for q in elems) for p in elems)
        return cls(table, name=name)

    @classmethod
    def symmetric(cls, k: int) -> "FiniteGroup":
        if k <= 1:
            return cls.trivial()
        gens = [tuple([1, 0] + list(range(2, k)))]
        if k > 2:
            gens.append(tuple(list(range(1, k)) + [0]))
        return cls.from_permutations(gens, name=f"symmetric {k}")

    def generated_by(self, gens: Sequence[int]) -> bool:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.table[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == self.order

    def small_generating_set(self, max_size: int) -> tuple[int, ...] | None:
        """Lexicographically first generating set of minimal size, if at most ``max_size``."""
        if self.order == 1:
            return ()
        for k in range(1, max_size + 1):
            for combo in combinations(range(1, self.order), k):
                if self.generated_by(combo):
                    return combo
        return None


@dataclass(frozen=True)
class FreeActionData:
    """A free action of ``group`` on a closed surface of genus ``total_genus``.

    ``action_on_h1`` (optional) holds one integer matrix per group element,
    written in a symplectic basis of H_1 (standard form, a1 b1 a2 b2 ...).
    """

    group: FiniteGroup
    total_genus: int
    quotient_genus: int = 0
    action_on_h1: tuple[la.FrozenMatrix, ...] | None = None

    def __post_init__(self):
        h = validate_free_action(self.group.order, self.total_genus)
        if self.quotient_genus and self.quotient_genus != h:
            raise InvalidAction(f"quotient genus {self.quotient_genus} contradicts Riemann-Hurwitz value {h}")
        object.__setattr__(self, "quotient_genus", h)
        if self.action_on_h1 is not None:
            mats = tuple(la.freeze(m) for m in self.action_on_h1)
            object.__setattr__(self, "action_on_h1", mats)
            check_action_on_h1(self.group, self.total_genus, mats)

    @property
    def surface(self) -> ClosedSurface:
        return ClosedSurface(self.total_genus)

    def matrix(self, element: int) -> la.FrozenMatrix:
        if self.action_on_h1 is None:
            raise InvalidAction("no H_1 action attached to this free action")
        return self.action_on_h1[element]


def check_action_on_h1(group: FiniteGroup, genus: int, mats: Sequence[Sequence[Sequence[int]]]) -> None:
    """Homomorphism, symplectic and Lefschetz (trace 2) checks; raises InvalidAction."""
    n = group.order
    dim = 2 * genus
    if len(mats) != n:
        raise InvalidAction(f"expected {n} matrices, got {len(mats)}")
    for x, m in enumerate(mats):
        if len(m) != dim or any(len(r) != dim for r in m):
            raise InvalidAction(f"matrix for element {x} is not {dim}x{dim}")
    if la.thaw(mats[0]) != la.identity(dim):
        raise InvalidAction("identity element does not act as the identity")
    form = la.standard_symplectic_form(genus)
    for x in range(n):
        if not la.is_symplectic(mats[x], form):
            raise InvalidAction(f"matrix for element {x} is not symplectic")
        if x and sum(mats[x][i][i] for i in range(dim)) != 2:
            raise InvalidAction(f"element {x} has trace != 2, so it cannot act freely")
    for x in range(n):
        for y in range(n):
            if la.matmul(mats[x], mats[y]) != la.thaw(mats[group.mul(x, y)]):
                raise InvalidAction(f"not a homomorphism at ({x}, {y})")
