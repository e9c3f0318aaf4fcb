import cmath
import math
from fractions import Fraction

import pytest

from paramandel.circle import h_circle, h_depth_residual, h_inverse_circle
from paramandel.maps import Bl


def test_h_fixes_marked_points():
    assert h_circle(Fraction(0), 40) == 1.0
    assert h_circle(Fraction(1, 2), 40) == -1.0
    assert h_circle(Fraction(1, 4), 40) == 1j


def test_h_one_third_against_period_two_oracle():
    # the non-fixed period-2 point of Bl on the circle, upper half:
    # the fixed-point factorization leaves 3z^2 + 2z + 3 = 0
    w = (-1 + 2j * math.sqrt(2)) / 3
    assert abs(Bl(Bl(w)) - w) < 1e-15
    assert abs(h_circle(Fraction(1, 3), 40) - w) < 1e-8


def test_h_conjugacy_residual_sample():
    worst = 0.0
    for k in range(0, 200):
        a = Fraction(k, 200)
        r = abs(Bl(h_circle(a, 40)) - h_circle(double_mod(a), 40))
        worst = max(worst, r)
    assert worst < 1e-8


def double_mod(a):
    return (2 * a) % 1


def test_h_conjugation_symmetry():
    for k in (1, 7, 40, 99):
        a = Fraction(k, 211)
        assert abs(h_circle(a, 40).conjugate() - h_circle(1 - a, 40)) < 1e-9


def test_h_order_preserving():
    pts = [h_circle(Fraction(k, 157), 40) for k in range(157)]
    phases = [cmath.phase(z) % (2 * math.pi) for z in pts]
    wraps = sum(1 for i in range(157) if phases[(i + 1) % 157] < phases[i])
    assert wraps == 1


def test_h_inverse_roundtrip():
    assert h_inverse_circle(1.0 + 0j) == 0.0
    assert h_inverse_circle(-1.0 + 0j, 40) == pytest.approx(0.5)
    w = h_circle(Fraction(1, 7), 45)
    assert abs(h_inverse_circle(w, 33) - 1 / 7) < 1e-9


def test_depth_convergence_indicator():
    assert h_depth_residual(Fraction(3, 101), 40) < 1e-10
