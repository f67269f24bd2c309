import pytest
from hypothesis import given, strategies as st
from sympy import divisor_count as sympy_divisor_count

from surfbundle.bounds import (
    bounds_report,
    cover_genus,
    divisor_count,
    divisors,
    genus_pairs,
    hom_count,
    lower_bound,
    max_generators,
    upper_bound,
)


def test_small_examples():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert genus_pairs(4) == [(2, 5), (3, 3), (5, 2)]
    assert max_generators(4) == (14, (5, 2))
    assert hom_count(1) == 2 ** 8


def test_upper_bound_d1():
    assert upper_bound(1) == 256
    assert upper_bound(1, hillman=True) == 1


def test_upper_bound_d4_follows_divisor_formula():
    # 4 has three divisors
    assert upper_bound(4) == 3 * 5 ** 14 == 18310546875


@pytest.mark.parametrize("d, low", [(1, 1), (3, 1), (4, 2), (9, 2), (10, 4), (16, 8)])
def test_lower_bound_examples(d, low):
    assert lower_bound(d) == low


@pytest.mark.parametrize("bad", [0, -3, 2.0, "4"])
def test_invalid_d(bad):
    with pytest.raises(ValueError):
        upper_bound(bad)
    with pytest.raises(ValueError):
        lower_bound(bad)


@given(st.integers(1, 3000))
def test_divisor_count_matches_sympy(d):
    assert divisor_count(d) == int(sympy_divisor_count(d)) == len(genus_pairs(d))


@given(st.integers(1, 400))
def test_genus_pairs_solve_the_equation(d):
    pairs = genus_pairs(d)
    assert all((g - 1) * (h - 1) == d and g >= 2 and h >= 2 for g, h in pairs)
    brute = [(g, h) for g in range(2, d + 2) for h in range(2, d + 2) if (g - 1) * (h - 1) == d]
    assert pairs == brute


@given(st.integers(1, 400))
def test_max_generators_is_2d_plus_6(d):
    assert max_generators(d)[0] == 2 * d + 6


@given(st.integers(1, 300))
def test_bounds_ordered_and_exact(d):
    r = bounds_report(d)
    assert 1 <= r.lower <= r.upper
    assert r.upper == divisor_count(d) * (d + 1) ** (2 * d + 6)
    assert isinstance(r.upper, int)


@given(st.integers(2, 300))
def test_hillman_variant_is_sharper(d):
    assert upper_bound(d, hillman=True) < upper_bound(d)
    assert bounds_report(d, hillman=True).upper == divisor_count(d) * d ** (2 * d + 6)


@given(st.integers(1, 500))
def test_lower_bound_monotone(d):
    assert lower_bound(d) <= lower_bound(d + 1)
    assert lower_bound(d + 6) == 2 * lower_bound(d)


@given(st.integers(2, 50), st.integers(1, 50))
def test_cover_genus_riemann_hurwitz(h, d):
    g = cover_genus(h, d)
    assert g - 1 == (d + 1) * (h - 1)


def test_large_d_is_exact():
    u = upper_bound(1000)
    assert u == divisor_count(1000) * 1001 ** 2006
    assert u.bit_length() > 2006 * 9
