"""Exact bounds on the number of fiberings of 4-manifolds with Euler characteristic at most 4d."""

from __future__ import annotations

from dataclasses import dataclass


def _check(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")


def divisors(d: int) -> list[int]:
    _check(d)
    small, large = [], []
    i = 1
    while i * i <= d:
        if d % i == 0:
            small.append(i)
            if i * i != d:
                large.append(d // i)
        i += 1
    return small + large[::-1]


def divisor_count(d: int) -> int:
    return len(divisors(d))


def genus_pairs(d: int) -> list[tuple[int, int]]:
    """All (g, h) with g, h >= 2 and (g - 1)(h - 1) = d, sorted by g."""
    return [(k + 1, d // k + 1) for k in divisors(d)]


def max_generators(d: int) -> tuple[int, tuple[int, int]]:
    """Largest 2g + 2h over the genus pairs, with the pair attaining it."""
    best = max(genus_pairs(d), key=lambda p: (2 * p[0] + 2 * p[1], p[0]))
    return 2 * best[0] + 2 * best[1], best


def hom_count(d: int) -> int:
    """Bound on homomorphisms from a group on ``2d + 6`` generators to Z/(d+1)."""
    return (d + 1) ** max_generators(d)[0]


def upper_bound(d: int, hillman: bool = False) -> int:
    if hillman:
        return divisor_count(d) * d ** (2 * d + 6)
    return divisor_count(d) * hom_count(d)


def lower_bound(d: int) -> int:
    _check(d)
    return 2 ** ((d + 2) // 6)


def cover_genus(h: int, d: int) -> int:
    """Genus of a (d+1)-sheeted cover of the genus-h surface."""
    if h < 2 or d < 1:
        raise ValueError("need h >= 2 and d >= 1")
    return (h - 1) * d + h


@dataclass(frozen=True)
class BoundsReport:
    d: int
    lower: int
    upper: int
    genus_pairs: tuple[tuple[int, int], ...]
    max_generators: int
    argmax: tuple[int, int]
    hom_count: int
    hillman: bool = False


def bounds_report(d: int, hillman: bool = False) -> BoundsReport:
    mg, arg = max_generators(d)
    r = BoundsReport(d, lower_bound(d), upper_bound(d, hillman), tuple(genus_pairs(d)), mg, arg,
                     hom_count(d), hillman)
    if r.lower > r.upper:
        raise AssertionError(f"lower bound exceeds upper bound at d={d}")
    return r
