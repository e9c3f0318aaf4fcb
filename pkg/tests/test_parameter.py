import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from paramandel.angles import Itinerary, itinerary_of_angle
from paramandel import parameter as P
from paramandel.errors import WakeMismatchError

F = Fraction


def _B_of_A(A):
    B = cmath.sqrt(1 - A)
    return -B if B.real < 0 else B


def test_in_M1_examples():
    assert P.in_M1(1.0).inside == "inside"            # g_1(-1) = -1 exactly
    assert P.in_M1(_B_of_A(0.5), 2000).inside != "outside"
    v = P.in_M1(10.0, refine_witness=True)
    assert v.inside == "outside" and v.witness == 0   # v_B already in the petal
    assert P.in_M1(0.0).inside == "inside"            # degenerate cusp


def test_in_M1_monotone():
    rng = np.random.default_rng(3)
    for _ in range(10):
        A = rng.uniform(1.3, 4.0) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
        v = P.in_M1(_B_of_A(A), 400)
        if v.inside == "outside":
            assert P.in_M1(_B_of_A(A), 800).inside == "outside"
            assert P.in_M1(_B_of_A(A), 3200).inside == "outside"


def test_in_M_examples():
    assert P.in_M(0.0).inside == "inside"
    v = P.in_M(1.0)
    assert v.inside == "outside" and v.witness == 3
    assert P.in_M(-2.0).inside == "inside"            # Chebyshev


def test_upsilon_asymptotics_and_coherence():
    u = P.upsilon(50.0)
    # measured law |Upsilon(B) - 3| ~ 4.7/|B|
    assert abs(u - 3.0) < 0.12
    assert abs(u - 3.0) > 0.05
    from paramandel.fatou import GBFatou, blaschke_charts
    ch = blaschke_charts()
    gb = GBFatou(50.0)
    assert abs(ch.phi_ext(u) - gb.phi(48.0)) < 1e-6


def test_upsilon_outside_only():
    from paramandel.errors import NotInBasinError
    with pytest.raises(NotInBasinError):
        P.upsilon(1.0)


def test_multiplier_match():
    assert P.multiplier_match(0.0) == 0.0
    assert P.multiplier_match(1.0) == pytest.approx(0.25)
    c = P.multiplier_match(cmath.exp(2j * cmath.pi / 3))
    assert abs(c - (-0.125 + 0.6495190528383290j)) < 1e-12


def test_limb_of():
    assert P.limb_of(_B_of_A(0.3)) == "central"
    assert P.limb_of(_B_of_A(1.15 * cmath.exp(2j * cmath.pi / 3))) == (1, 3)
    assert P.limb_of(_B_of_A(-1.2)) == (1, 2)
    A = 1.1 * cmath.exp(2j * cmath.pi / 3)
    assert P.yoccoz_log_disk_holds(A, 1, 3)
    assert not P.yoccoz_log_disk_holds(A, 1, 2)


def test_parameter_ray_dyadic_pair_lands_at_tip():
    r1 = P.trace_parameter_ray(Itinerary.parse("1(0)"), 32, samples_per_unit=1)
    r2 = P.trace_parameter_ray(Itinerary.parse("0(1)"), 32, samples_per_unit=1)
    assert r1.status == "landed" and r2.status == "landed"
    assert abs(r1.landing - 2.0) < 1e-3               # the 1/2-dyadic tip B = 2
    assert abs(r1.landing - r2.landing) < 1e-3        # common landing point


def test_parameter_ray_equirays_residual():
    # v_B lies on the dynamical ray of the same itinerary along the ray
    from paramandel import rays as R
    lab = itinerary_of_angle(F(1, 7))
    pray = P.trace_parameter_ray(lab, 8)
    t, B = pray.vertices[-1]
    fam = R.trace_gB_family(B, lab, int(-t) + 3)
    ray = fam[lab]
    v = B - 2.0
    d = min(abs(v - z) for _, z in ray.vertices) if ray.vertices else 1.0
    if ray.status == "bumped" and ray.bump_point is not None:
        d = min(d, abs(v - ray.bump_point))
    assert d < 1e-5


@pytest.mark.slow
def test_parameter_ray_wake_root_pair():
    A13 = cmath.exp(2j * cmath.pi / 3)
    lands = []
    for th in (F(1, 7), F(2, 7)):
        ray = P.trace_parameter_ray(itinerary_of_angle(th), 60, samples_per_unit=1)
        assert ray.status == "landed"
        lands.append(ray.landing)
    for Bl_ in lands:
        assert abs((1 - Bl_ * Bl_) - A13) < 1e-3      # in the A plane
    assert abs(lands[0] - lands[1]) < 2e-3


def test_mandel_parameter_ray():
    r = P.mandel_parameter_ray(F(1, 2), 16)
    assert r.status == "landed"
    assert abs(r.landing - (-2.0)) < 1e-9
    r2 = P.mandel_parameter_ray(F(9, 56), 16)
    assert r2.status == "landed"
    # lands on the boundary of M: some bounded parameter nearby
    near = any(P.in_M(r2.landing + dx + 1j * dy, 1200).inside != "outside"
               for dx in np.linspace(-2e-3, 2e-3, 5)
               for dy in np.linspace(-2e-3, 2e-3, 5))
    assert near


def test_psi1_points():
    r = P.psi1_approx(1.0, 1)                         # B=1 -> A=0
    assert r.kind == "point" and abs(r.c) < 1e-12
    A = cmath.exp(2j * cmath.pi / 3)
    r2 = P.psi1_approx(_B_of_A(A), 1)
    assert r2.kind == "point"
    assert abs(r2.c - (-0.125 + 0.6495190528383290j)) < 1e-9


@pytest.mark.slow
def test_psi1_region_nesting():
    B = (4.0 - math.sqrt(2.0) * 1j) / 3.0             # recurrent 1/3-limb sample
    regions = [P.psi1_approx(B, d) for d in (1, 2, 3)]
    assert all(r.kind == "region" for r in regions)
    assert regions[2].diameter <= regions[0].diameter + 1e-12
    from paramandel import towers as TW
    from paramandel import puzzles as PZ
    for d in range(2):
        outer = TW.critical_value_gap(regions[d].tower)
        inner = TW.critical_value_gap(regions[d + 1].tower)
        assert all(any(PZ._arc_subset(ai, ao) for ao in outer.arcs)
                   for ai in inner.arcs)
