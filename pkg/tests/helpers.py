"""Independent oracles and random generators shared by the test modules."""

from __future__ import annotations

import random
from itertools import permutations

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from surfbundle.construction import Edge, LabeledGraph, Vertex, build_section_sum
from surfbundle.covers import CoveringMap, free_action_from_cover, regular_cover, validate_covering
from surfbundle.errors import NotTransitive, RelationViolated
from surfbundle.surfaces import FiniteGroup


# homology oracle

def sympy_rank(mat) -> int:
    if not mat or not mat[0]:
        return 0
    return Matrix(mat).rank()


def sympy_torsion(mat) -> list[int]:
    """Invariant factors > 1 of an integer matrix, from sympy."""
    if not mat or not mat[0]:
        return []
    return [int(x) for x in invariant_factors(Matrix(mat), domain=ZZ) if abs(int(x)) > 1]


def oracle_h1_rank(cc) -> int:
    n_edges = cc.covering.n_edges
    return n_edges - sympy_rank(cc.boundary1) - sympy_rank(cc.boundary2)


def oracle_cover_genus(h: int, d: int) -> int:
    """Genus from Euler characteristic of the lifted CW structure: V - E + F = d - 2hd + d."""
    chi = d - 2 * h * d + d
    return (2 - chi) // 2


# groups

def klein_four() -> FiniteGroup:
    return FiniteGroup.from_permutations([(1, 0, 3, 2), (2, 3, 0, 1)], name="klein")


SMALL_GROUPS = {
    "trivial": FiniteGroup.trivial,
    "c2": lambda: FiniteGroup.cyclic(2),
    "c3": lambda: FiniteGroup.cyclic(3),
    "c4": lambda: FiniteGroup.cyclic(4),
    "klein": klein_four,
}


def random_group(rng: random.Random) -> FiniteGroup:
    return SMALL_GROUPS[rng.choice(sorted(SMALL_GROUPS))]()


# random covers

def random_perm(rng: random.Random, d: int) -> tuple[int, ...]:
    p = list(range(d))
    rng.shuffle(p)
    return tuple(p)


def _power(p, k):
    out = tuple(range(len(p)))
    for _ in range(k):
        out = tuple(p[x] for x in out)
    return out


def random_cover(rng: random.Random, max_h: int = 3, max_d: int = 6) -> CoveringMap:
    """A random valid cover, by one of three recipes."""
    while True:
        h = rng.randint(2, max_h)
        d = rng.randint(2, max_d)
        recipe = rng.choice(("mirror", "reject", "commuting"))
        if recipe == "mirror":
            # [x, y][y, x] = 1; remaining handles get commuting pairs
            x, y = random_perm(rng, d), random_perm(rng, d)
            perms = [x, y, y, x]
            for _ in range(h - 2):
                z = random_perm(rng, d)
                perms += [_power(z, rng.randint(0, 3)), _power(z, rng.randint(0, 3))]
        elif recipe == "commuting":
            z = random_perm(rng, d)
            perms = [_power(z, rng.randint(0, d)) for _ in range(2 * h)]
        else:
            d = min(d, 3)
            perms = [random_perm(rng, d) for _ in range(2 * h)]
        c = CoveringMap(h, d, tuple(perms))
        try:
            validate_covering(c)
        except (RelationViolated, NotTransitive):
            continue
        return c


def random_regular_cover(rng: random.Random):
    """Regular cover with a random small deck group and generator choice."""
    while True:
        group = rng.choice([FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.cyclic(4),
                            FiniteGroup.cyclic(5), klein_four(), FiniteGroup.symmetric(3)])
        h = rng.randint(2, 3)
        gens = tuple(rng.randrange(group.order) for _ in range(h))
        if group.generated_by(gens):
            return regular_cover(group, h, gens)


def brute_force_deck_group(c: CoveringMap) -> list[tuple[int, ...]]:
    return [p for p in permutations(range(c.degree))
            if all(tuple(p[s[x]] for x in range(c.degree)) == tuple(s[p[x]] for x in range(c.degree))
                   for s in c.perm_images)]


# random labeled graphs

def random_labeled_graph(rng: random.Random, order: int, max_vertices: int = 6) -> LabeledGraph:
    target = rng.randint(1, max_vertices)
    colors = [rng.choice("+-")]
    free = [set(range(order))]
    edges: list[tuple[int, int, int, int]] = []

    def take(v):
        lab = rng.choice(sorted(free[v]))
        free[v].discard(lab)
        return lab

    def add_edge(u, w):
        lu, lw = take(u), take(w)
        if colors[u] == "+":
            edges.append((u, w, lu, lw))
        else:
            edges.append((w, u, lw, lu))

    while len(colors) < target:
        candidates = [v for v in range(len(colors)) if free[v]]
        if not candidates or order < 1:
            break
        u = rng.choice(candidates)
        colors.append("-" if colors[u] == "+" else "+")
        free.append(set(range(order)))
        add_edge(u, len(colors) - 1)
    for _ in range(rng.randint(0, 4)):
        plus = [v for v in range(len(colors)) if colors[v] == "+" and free[v]]
        minus = [v for v in range(len(colors)) if colors[v] == "-" and free[v]]
        if not plus or not minus:
            break
        add_edge(rng.choice(plus), rng.choice(minus))
    verts = tuple(Vertex(f"v{i}", c) for i, c in enumerate(colors))
    return LabeledGraph(verts, tuple(Edge(*e) for e in edges))


def random_bundle(rng: random.Random, max_vertices: int = 6, with_action: bool = False):
    group = random_group(rng)
    h = rng.randint(2, 3)
    genus = group.order * (h - 1) + 1
    if with_action:
        fp = free_action_from_cover(group, genus)
    else:
        from surfbundle.surfaces import FreeActionData

        fp = FreeActionData(group, genus)
    return build_section_sum(random_labeled_graph(rng, group.order, max_vertices), fp)


def random_word(rng: random.Random, genus: int, max_len: int = 8) -> list[tuple[int, int]]:
    return [(rng.randrange(2 * genus), rng.choice((1, -1))) for _ in range(rng.randint(0, max_len))]
