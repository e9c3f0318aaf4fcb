import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramandel.angles import (HALF, Itinerary, angle, double, is_dyadic,
                               itinerary_of_angle, orbit_angles, rotation_cycle,
                               tuned_dyadic_pair, wake_interval)
from paramandel.errors import InvalidFractionError


def test_double_examples():
    assert double(Fraction(1, 7)) == Fraction(2, 7)
    assert double(Fraction(4, 7)) == Fraction(1, 7)
    assert double(Fraction(1, 2)) == 0


def test_itinerary_roundtrip_examples():
    it = itinerary_of_angle(Fraction(1, 3))
    assert it.per == (0, 1)
    assert it.angle() == Fraction(1, 3)
    assert Itinerary.make((), (1,)).angle() == 0      # all-ones is 1 = 0 mod 1
    lo, hi = itinerary_of_angle(HALF, both=True)
    assert {str(lo), str(hi)} == {"0(1)", "1(0)"}
    assert lo.angle() == hi.angle() == HALF


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5000), st.integers(2, 5000))
def test_itinerary_roundtrip_random(num, den):
    a = angle(num, den)
    if is_dyadic(a):
        lo, hi = itinerary_of_angle(a, both=True)
        assert lo.angle() == a and hi.angle() == a
    else:
        assert itinerary_of_angle(a).angle() == a


def test_shift_matches_doubling():
    a = Fraction(9, 56)
    it = itinerary_of_angle(a)
    assert it.shift().angle() == double(a)


def test_rotation_cycles():
    assert rotation_cycle(1, 3) == (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7))
    assert rotation_cycle(1, 2) == (Fraction(1, 3), Fraction(2, 3))
    assert rotation_cycle(1, 4) == (Fraction(1, 15), Fraction(2, 15),
                                    Fraction(4, 15), Fraction(8, 15))
    with pytest.raises(InvalidFractionError):
        rotation_cycle(2, 4)


def test_rotation_cycle_shift_property():
    for q in range(2, 11):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            cyc = rotation_cycle(p, q)
            pos = {t: i for i, t in enumerate(cyc)}
            assert all((pos[double(t)] - pos[t]) % q == p for t in cyc)


def test_wake_interval():
    assert wake_interval(1, 3) == (Fraction(1, 7), Fraction(2, 7))
    assert wake_interval(1, 2) == (Fraction(1, 3), Fraction(2, 3))


def test_tuning_basilica_half_tip():
    # the 1/2 sub-wake of the 1/2 satellite copy is bounded by 5/12 and 7/12
    pair = tuned_dyadic_pair(1, 2, 1, 1)
    assert pair == (Fraction(5, 12), Fraction(7, 12))


def test_orbit_angles():
    assert orbit_angles(Fraction(1, 7)) == [Fraction(1, 7), Fraction(2, 7),
                                            Fraction(4, 7)]
