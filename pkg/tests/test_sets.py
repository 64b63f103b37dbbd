import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from folnersys import (
    Bitmask, Complement, ComponentCongruence, Congruence, DyadicBlocks,
    GroupSpec, RotationSet, indicator_bits, indicator_window,
)
from folnersys.errors import WindowExceededError
from folnersys.sets import FRAC_BITS, SCALE, to_fixed


def test_to_fixed_rationals():
    assert to_fixed(Fraction(1, 2)) == SCALE // 2
    assert to_fixed(0) == 0
    assert to_fixed("1/4") == SCALE // 4


def test_to_fixed_golden():
    g = to_fixed("golden")
    # x satisfies x^2 + x - 1 = 0; check the residual at the grid scale
    residual = g * g + g * SCALE - SCALE * SCALE
    assert abs(residual) < 2 * SCALE  # off by < 2 ulps of the grid
    assert abs(g / SCALE - (math.sqrt(5) - 1) / 2) < 1e-15


def test_to_fixed_sqrt2():
    s = to_fixed("sqrt2")
    residual = (s + SCALE) ** 2 - 2 * SCALE * SCALE
    assert abs(residual) < 3 * SCALE


def test_congruence():
    evens = Congruence(0, 2)
    assert evens.member(4) and not evens.member(7)
    assert evens.member(-2)
    np.testing.assert_array_equal(
        evens.bits(0, 6), [True, False, True, False, True, False])
    odds = evens.complement()
    assert isinstance(odds, Congruence)
    assert odds.member(7) and not odds.member(4)


def test_congruence_window_cache_growth():
    e = Congruence(1, 3)
    a = e.bits(0, 10).copy()
    b = e.bits(-5, 20)
    np.testing.assert_array_equal(a, b[5:15])


def test_rotation_set_density_smoke():
    r = RotationSet("golden", Fraction(1, 2))
    n = 100000
    count = int(np.count_nonzero(r.bits(0, n)))
    assert abs(count / n - 0.5) < 5e-3


def test_rotation_incremental_matches_direct():
    r = RotationSet("sqrt2", Fraction(1, 3), x0=Fraction(1, 7))
    bits = r.bits(-50, 50)
    for i, n in enumerate(range(-50, 50)):
        assert bits[i] == ((r.x0_fp + n * r.alpha_fp) % SCALE < r.beta_fp)


def test_rotation_beta_validation():
    with pytest.raises(ValueError):
        RotationSet("golden", 0)
    with pytest.raises(ValueError):
        RotationSet("golden", Fraction(3, 2))


def test_dyadic_blocks():
    d = DyadicBlocks()
    # blocks [1,2), [4,8), [16,32), ...
    members = [n for n in range(0, 40) if d.member(n)]
    assert members == [1] + list(range(4, 8)) + list(range(16, 32))
    np.testing.assert_array_equal(
        d.bits(0, 40), [d.member(n) for n in range(40)])
    assert not d.member(-3)


def test_bitmask_window():
    b = Bitmask(5, [1, 0, 1, 1])
    assert b.member(5) and not b.member(6) and b.member(8)
    with pytest.raises(WindowExceededError, match="window exceeded"):
        b.member(9)
    with pytest.raises(WindowExceededError):
        b.bits(4, 8)


def test_component_congruence():
    g = GroupSpec("Zd", 2)
    s = ComponentCongruence(g, [(0, 2), None])
    assert s.member((4, 7)) and not s.member((3, 0))
    coords = np.array([[0, 1, 2], [5, 5, 5]])
    np.testing.assert_array_equal(s.member_coords(coords), [True, False, True])

    h3 = GroupSpec("H3")
    t = ComponentCongruence(h3, [None, None, (1, 2)])
    assert t.member((9, -4, 3)) and not t.member((9, -4, 2))


def test_complement_roundtrip():
    e = Congruence(2, 5)
    c = Complement(e)
    assert c.complement() is e
    np.testing.assert_array_equal(c.bits(0, 10), ~e.bits(0, 10))
    assert c.member(0) and not c.member(2)


def test_indicator_window_packing():
    evens = Congruence(0, 2)
    # over [1, 9): members 2,4,6,8 at offsets 1,3,5,7 -> 0xAA
    assert indicator_window(evens, 1, 9).tobytes() == b"\xaa"
    assert indicator_window(evens, 0, 8).tobytes() == b"\x55"


@settings(max_examples=50, deadline=None)
@given(a=st.integers(-20, 20), m=st.integers(1, 12),
       lo=st.integers(-100, 100), n=st.integers(0, 64))
def test_congruence_bits_match_member(a, m, lo, n):
    e = Congruence(a, m)
    bits = indicator_bits(e, lo, lo + n)
    assert [bool(b) for b in bits] == [e.member(k) for k in range(lo, lo + n)]
