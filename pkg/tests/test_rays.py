import cmath
import math
from fractions import Fraction

import pytest

from paramandel.angles import Itinerary, itinerary_of_angle
from paramandel.circle import h_circle
from paramandel.maps import Bl
from paramandel.rays import (boettcher_position, co_land, landing_point,
                             rotation_number_at, trace_gB_family, trace_qc_family,
                             trace_ray_Bl, trace_ray_gB, trace_ray_Qc, tree_point)
from paramandel.sphere import INF


def _wake13_B(t=1.15):
    A = t * cmath.exp(2j * cmath.pi / 3)
    B = cmath.sqrt(1 - A)
    return -B if B.real < 0 else B


def test_tree_points():
    assert tree_point("") == 0
    assert abs(tree_point("0") - 1j / math.sqrt(3)) < 1e-12
    assert abs(tree_point("1") + 1j / math.sqrt(3)) < 1e-12
    # Bl maps the depth-n node to the depth-(n-1) node of the shifted word
    for word in ("01", "100", "0110", "10101"):
        z = tree_point(word)
        w = tree_point(word[1:])
        assert abs(Bl(z) - w) < 1e-9


def test_model_ray_zero_lands_at_parabolic_point():
    ray = trace_ray_Bl(Itinerary.make((), (0,)), 40)
    assert ray.status == "landed"
    assert abs(ray.landing.z - 1.0) < 1e-3      # parabolic landing is slow


def test_model_ray_period_two_lands_at_h_one_third():
    ray = trace_ray_Bl(itinerary_of_angle(Fraction(1, 3)), 40)
    assert ray.status == "landed"
    assert abs(ray.landing.z - h_circle(Fraction(1, 3), 40)) < 1e-6


def test_external_ray_is_reflection():
    internal = trace_ray_Bl(itinerary_of_angle(Fraction(1, 7)), 15)
    external = trace_ray_Bl(itinerary_of_angle(Fraction(1, 7)), 15, external=True)
    ints = {round(t, 6): z for t, z in internal.vertices if z != 0}
    for t, z in external.vertices:
        w = ints.get(round(t, 6))
        if w is not None:
            assert abs(z - 1.0 / w.conjugate()) < 1e-12


def test_shift_equivariance_model():
    r1 = trace_ray_Bl(itinerary_of_angle(Fraction(1, 7)), 12)
    r2 = trace_ray_Bl(itinerary_of_angle(Fraction(2, 7)), 12)
    # Bl maps the depth-(n+1) part of R_{1/7} into R_{2/7}
    pts2 = [z for _, z in r2.vertices]
    for t, z in r1.vertices:
        if t <= -1:
            img = Bl(z)
            assert min(abs(img - w) for w in pts2) < 1e-6


def test_gB_cycle_colands_at_alpha():
    B = _wake13_B()
    fam = trace_gB_family(B, itinerary_of_angle(Fraction(1, 7)), 160)
    assert len(fam) == 3
    rays = list(fam.values())
    assert all(r.status == "landed" for r in rays)
    alpha = -1.0 / B
    for r in rays:
        assert abs(r.landing.z - alpha) < 1e-4
    assert co_land(rays, tol=1e-4)
    assert rotation_number_at(alpha, rays) == Fraction(1, 3)


def test_gB_zero_ray_lands_at_infinity():
    B = _wake13_B()
    ray = trace_ray_gB(B, Itinerary.make((), (0,)), 30)
    assert ray.status == "landed"
    assert ray.landing.at_infinity


def test_gB_ray_pullback_consistency():
    B = _wake13_B()
    fam = trace_gB_family(B, itinerary_of_angle(Fraction(1, 7)), 40)
    r17 = fam[itinerary_of_angle(Fraction(1, 7))]
    r27 = fam[itinerary_of_angle(Fraction(2, 7))]
    pts27 = [z for _, z in r27.vertices]
    for t, z in r17.vertices:
        if t <= -1.0:
            img = z + B + 1.0 / z
            assert min(abs(img - w) for w in pts27) < 1e-6


def test_gB_bump_on_parameter_ray():
    # place the parameter on the 1/7 parameter ray: the dynamical 1/7 ray bumps
    from paramandel.parameter import trace_parameter_ray
    pray = trace_parameter_ray(itinerary_of_angle(Fraction(1, 7)), 6)
    B = pray.vertices[-1][1]
    fam = trace_gB_family(B, itinerary_of_angle(Fraction(1, 7)), 40)
    statuses = {str(k.angle() if hasattr(k, "angle") else k): v.status
                for k, v in fam.items()}
    assert "bumped" in statuses.values()
    assert statuses["1/7"] == "bumped"


def test_qc_rays_basic():
    r = trace_ray_Qc(0.0, Fraction(1, 7), 40)
    assert r.status == "landed"
    assert abs(r.landing.z - cmath.exp(2j * cmath.pi / 7)) < 1e-6
    r = trace_ray_Qc(-1.0, Fraction(1, 3), 80)
    alpha = (1 - math.sqrt(5)) / 2
    assert r.status == "landed"
    assert abs(r.landing.z - alpha) < 1e-6


def test_qc_beta_ray_and_bump():
    r = trace_ray_Qc(1 + 1j, Fraction(0, 1), 45)
    assert r.status == "landed"
    assert abs(r.landing.z - (1 - 1j)) < 1e-9     # beta from the quadratic formula
    rb = trace_ray_Qc(0.5, Fraction(0, 1), 45)
    assert rb.status == "bumped"                   # c on the zero parameter ray
    assert abs(rb.bump_point - 0.5) < 1e-9


def test_qc_zero_ray_lands_at_beta_inside_M():
    r = trace_ray_Qc(-1.0, Fraction(0, 1), 60)
    beta = (1 + math.sqrt(5)) / 2
    assert r.status == "landed"
    assert abs(r.landing.z - beta) < 1e-6
    assert rotation_number_at(beta, [r]) == Fraction(0, 1)


def test_qc_colanding_basilica():
    fam = trace_qc_family(-1.0, Fraction(1, 3), 80)
    rays = [fam[Fraction(1, 3)], fam[Fraction(2, 3)]]
    assert co_land(rays)
    fam2 = trace_qc_family(0.0, Fraction(1, 7), 40)
    r1, r2 = fam2[Fraction(1, 7)], fam2[Fraction(2, 7)]
    assert not co_land([r1, r2])


def test_boettcher_position():
    th, pot = boettcher_position(0.5)
    assert th == pytest.approx(0.0)
    assert pot > 0
    assert boettcher_position(-1.0) is None       # bounded orbit


def test_ray_export_text():
    r = trace_ray_Qc(0.0, Fraction(1, 7), 10)
    text = r.to_text()
    assert text.splitlines()[0].startswith("# label")
    assert len(text.splitlines()) == len(r.vertices) + 1
