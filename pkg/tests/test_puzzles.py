import cmath
import math
from fractions import Fraction

import pytest

from paramandel import puzzles as PZ
from paramandel import towers as TW
from paramandel.errors import WakeMismatchError

F = Fraction


def _wake13_B(t=1.15):
    A = t * cmath.exp(2j * cmath.pi / 3)
    B = cmath.sqrt(1 - A)
    return -B if B.real < 0 else B


def test_shortcut_times_hand_values():
    assert PZ.shortcut_data(F(1, 7), F(2, 7)) == (2, 1, 3, 4)
    assert PZ.shortcut_data(F(2, 7), F(4, 7)) == (1, 1, 2, 3)
    assert PZ.shortcut_data(F(11, 14), F(1, 14)) == (0, 0, 2, 3)
    assert PZ.shortcut_data(F(1, 14), F(1, 7))[:2] == (3, 1)


def test_shortcut_endpoint_fatou_times():
    from paramandel.fatou import blaschke_charts
    ch = blaschke_charts()
    for a, b in ((F(2, 7), F(4, 7)), (F(11, 14), F(1, 14)), (F(1, 7), F(2, 7))):
        cut, ta, tb = PZ.shortcut_arc_model(a, b)
        times = sorted((-ch.phi_ext(cut[0]).real, -ch.phi_ext(cut[-1]).real))
        assert abs(times[0] - min(ta, tb)) < 1e-6
        assert abs(times[1] - max(ta, tb)) < 1e-6


def test_universal_yoccoz_counts():
    uy = PZ.UniversalYoccoz(1, 3, 2)
    assert sum(1 for l in uy.labels if l.level == 0) == 6     # 2q pieces
    assert sum(1 for l in uy.labels if l.level == 1) == 12
    lvl1 = [l for l in uy.labels if l.level == 1]
    for lab in lvl1:
        img = uy.image(lab)
        assert img.level == 0


def test_universal_parabolic_counts_and_roots():
    up = PZ.UniversalParabolic(1, 3, 1)
    assert sum(1 for l in up.labels if l.level == 0) == 6
    roots = [l for l in up.labels if l.level == 1 and up.beta_flag(l)]
    assert len(roots) == 1          # P_{1,n}: the piece with 1 on its boundary
    rootsm = [l for l in up.labels if l.level == 1 and up.beta_prime_flag(l)]
    assert len(rootsm) == 1


def test_chi_correspondence_level2():
    rep = PZ.chi_correspondence(1, 3, 2)
    assert rep.ok, rep.details


def test_dynamical_puzzle_counts():
    dp = PZ.DynamicalPuzzle("Qc", -1.0, 1, 2, 1)
    assert len(dp.pieces(0)) == 3                     # 2q - 1 with q = 2
    B = _wake13_B()
    dg = PZ.DynamicalPuzzle("gB", B, 1, 3, 1)
    assert len(dg.pieces(0)) == 5                     # 2q - 1 with q = 3
    g0 = dg.critical_piece(0)
    assert PZ._winding(dg.piece_polygon(g0), -1.0)    # critical point inside


def test_piece_containing_and_nest():
    dp = PZ.DynamicalPuzzle("Qc", -1.0, 1, 2, 2)
    g = dp.piece_containing(0.0, 0)
    assert g is not None and g.is_critical()
    nest = PZ.nest_of(dp, -1.0, 2)
    assert len(nest.labels) >= 1
    assert nest.period == 2                           # basilica renormalization


def test_classify_satellite_and_recurrent():
    v = PZ.classify_parameter("Qc", -1.0, 1, 2, depth=8)
    assert v.category == "satellite-candidate"
    v2 = PZ.classify_parameter("Qc", 1j, 1, 3, depth=8)
    assert v2.category == "recurrent"
    assert v2.m == 1 and v2.r == 1 and v2.s == 1
    B = _wake13_B()
    v3 = PZ.classify_parameter("gB", B, 1, 3, depth=6)
    assert v3.category == "satellite-candidate"


def test_classify_matched_pair_agrees():
    # the recurrent 1/3-limb pair: c = i and its g_B mirror
    B = (4.0 - math.sqrt(2.0) * 1j) / 3.0
    vc = PZ.classify_parameter("Qc", 1j, 1, 3, depth=8)
    vb = PZ.classify_parameter("gB", B, 1, 3, depth=8)
    assert (vc.category, vc.m, vc.r, vc.s) == (vb.category, vb.m, vb.r, vb.s)


def test_classify_wrong_limb_rejected():
    with pytest.raises(WakeMismatchError):
        PZ.classify_parameter("Qc", 1j, 1, 2, depth=6)


@pytest.mark.slow
def test_parameter_puzzle_counts_match_fertile_towers():
    counts = []
    for n in range(3):
        pp = PZ.parameter_puzzle(1, 3, n)
        counts.append(len(pp.pieces))
    fert = [sum(1 for t in TW.enumerate_towers(1, 3, n + 1)
                if TW.classify(t) == "fertile") for n in range(3)]
    assert counts == fert == [1, 1, 3]


@pytest.mark.slow
def test_parameter_puzzle_member_tower():
    pp = PZ.parameter_puzzle(1, 3, 2)
    B = _wake13_B()
    hits = [pc for pc in pp.pieces if pc.contains(B)]
    assert len(hits) == 1
    tw = TW.tower_from_dynamics("gB", B, 1, 3, 3, check_limb=False)
    cvg = TW.critical_value_gap(tw)
    piece_angles = {x for arc in hits[0].arcs for x in arc}
    gap_angles = set(cvg.boundary_angles) | {x for arc in cvg.arcs for x in arc}
    assert piece_angles <= gap_angles


def test_tower_from_dynamics_monotone_restriction():
    B = _wake13_B()
    t2 = TW.tower_from_dynamics("gB", B, 1, 3, 2, check_limb=False)
    t1 = TW.tower_from_dynamics("gB", B, 1, 3, 1, check_limb=False)
    assert t2.restricted(1) == t1


def test_satellite_tower_matches_adjacency_construction():
    # the satellite member's depth-3 tower is the period-q adjacent tower
    B = _wake13_B()
    tw = TW.tower_from_dynamics("gB", B, 1, 3, 3, check_limb=False)
    term = [t for t in TW.enumerate_towers(1, 3, 3)
            if TW.classify(t) == "terminal"][0]
    sats = [a for a in TW.adjacent_towers(term, depth=3)
            if TW.is_renormalizable(a) and TW.is_renormalizable(a)[1] == 3]
    assert tw.levels == sats[0].levels
