import cmath

import numpy as np
import pytest

from paramandel.errors import BranchCutError, NotInBasinError
from paramandel.fatou import (GBFatou, blaschke_charts, fatou_Bl_exterior,
                              fatou_Bl_interior, fatou_gB, fatou_inverse_Bl,
                              membership)
from paramandel.maps import Bl


def test_gB_chart_normalization_and_abel():
    for B in (1.0, 2.0, 1.3 - 0.38j):
        gb = GBFatou(B)
        assert abs(gb.phi(1.0)) < 1e-12
        assert abs(gb.phi(B + 2.0) - 1.0) < 1e-10
        z = B * (2.2 + 0.7j)
        g = z + B + 1.0 / z
        assert abs(gb.phi(g) - gb.phi(z) - 1.0) < 1e-9
        # five iterates of the critical point
        z = 1.0
        for _ in range(5):
            z = z + B + 1.0 / z
        assert abs(gb.phi(z) - 5.0) < 1e-9


def test_gB_not_in_basin():
    gb = GBFatou(1.0)
    with pytest.raises(NotInBasinError):
        gb.phi(-1.0)          # fixed critical point of g_1, never escapes


def test_bl_charts():
    ch = blaschke_charts()
    assert abs(ch.phi_ext(3.0) - 1.0) < 1e-10
    z = 3.0                    # Bl(inf)
    for _ in range(2):
        z = Bl(z)
    assert abs(ch.phi_ext(z) - 3.0) < 1e-9          # Bl^3(inf) has time 3
    assert abs(fatou_Bl_interior(1 / 3) - 1.0) < 1e-9
    assert abs(fatou_Bl_interior(0.0)) < 1e-12
    for z in (2.0 + 1.5j, 1.2 - 0.8j, -3.0 + 0.2j):
        assert abs(ch.phi_ext(Bl(z)) - ch.phi_ext(z) - 1.0) < 1e-9


def test_fatou_inverse():
    assert abs(fatou_inverse_Bl(1.0) - 3.0) < 1e-9
    w = 0.5 + 2.0j
    z = fatou_inverse_Bl(w)
    assert abs(fatou_Bl_exterior(z) - w) < 1e-8
    with pytest.raises(BranchCutError):
        fatou_inverse_Bl(-1.0)
    # far right maps toward the parabolic point
    assert abs(fatou_inverse_Bl(1e7) - 1.0) < 1e-3


def test_chart_consistency_g0_vs_nu():
    ch = blaschke_charts()
    diffs = []
    for z in (2.0 + 1j, 3.0, 1.5 - 2j, 4.0 + 0.5j):
        u = (z + 1) / (z - 1)     # nu(z); phi_ext(nu-image) vs the g0 chart
        diffs.append(ch.phi_ext(u) - ch.phi_g0(z))
    arr = np.array(diffs)
    assert np.std(arr) < 1e-8


def test_membership_regions():
    assert membership("Omega", 3.0) is True
    assert membership("Omega", Bl(3.0)) is True    # forward invariance sample
    assert membership("D0", 2.5 + 0.5j) == membership("D_half", -2.5 - 0.5j)
    assert membership("D1", 2.5 + 0.5j) in (True, False)
    z = 2.5 + 0.5j
    assert membership("D1", z) == membership("D0", Bl(z))
    # infinity sits on the boundary of D0/D_half: tri-state None
    from paramandel.sphere import INF
    assert membership("Omega", INF) is None
    assert membership("OmegaB", 1.3 * 4.0, B=4.0) in (True, False)
    gb = GBFatou(4.0)
    zz = gb.psi(2.0 + 0.5j)
    assert membership("OmegaB", zz, B=4.0) is True


def test_omega_forward_invariance_samples():
    rng = np.random.default_rng(7)
    ch = blaschke_charts()
    count = 0
    for _ in range(100):
        w = complex(rng.uniform(0.3, 4.0), rng.uniform(-3, 3))
        z = ch.inverse_ext(w)
        if membership("Omega", z) is True:
            assert membership("Omega", Bl(z)) is True
            count += 1
    assert count > 50


def test_univalence_sampling_on_gb_petal():
    gb = GBFatou(1.5)
    rng = np.random.default_rng(11)
    pts = [gb.psi(complex(rng.uniform(0.2, 5), rng.uniform(-4, 4)))
           for _ in range(60)]
    vals = [gb.phi(z) for z in pts]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) > 1e-8:
                assert abs(vals[i] - vals[j]) > 1e-12


def test_hB_consistency_with_model():
    # phi_ext(h_B(z)) = phi_B(z) on petal samples, h_B = inverse_ext after phi_B
    gb = GBFatou(2.0 + 1.0j)
    ch = blaschke_charts()
    for w in (1.5 + 0.3j, 2.0 - 1.0j, 3.3 + 2.0j):
        z = gb.psi(w)
        hb = ch.inverse_ext(gb.phi(z))
        assert abs(ch.phi_ext(hb) - gb.phi(z)) < 1e-7
