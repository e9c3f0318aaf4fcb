from fractions import Fraction

import pytest

from paramandel import towers as TW
from paramandel.errors import InvalidTowerError, WakeMismatchError

F = Fraction


def test_level_sets():
    assert TW.level_set(1, 3, 0) == (F(1, 14), F(1, 7), F(2, 7), F(4, 7),
                                     F(9, 14), F(11, 14))
    assert TW.level_set(1, 2, 0) == (F(1, 6), F(1, 3), F(2, 3), F(5, 6))
    assert len(TW.level_set(1, 3, 1)) == 12          # 2q * 2^n
    for n in range(4):
        assert len(TW.level_set(1, 2, n)) == 4 * 2 ** n


def test_base_tower_valid_and_critical():
    t = TW.base_tower(1, 3)
    assert TW.is_valid(t)
    assert len(t.gaps(0)) == 5                        # 2q - 1 faces
    kind, obj = TW.critical_object(t, 0)
    assert kind == "gap"
    assert set(obj.arcs) == {(F(1, 14), F(1, 7)), (F(4, 7), F(9, 14))}
    per, cv, k = TW.critical_data(t)
    assert k == 3                                     # uses the formal levels


def test_validation_witnesses():
    t = TW.base_tower(1, 2)
    # linked classes fail the non-crossing condition with a witness
    z1 = TW.level_set(1, 2, 1)
    bad_classes = TW._canon([
        frozenset({F(1, 3), F(2, 3)}), frozenset({F(1, 6), F(5, 6)}),
        frozenset({F(1, 12), F(7, 12)}), frozenset({F(5, 12), F(11, 12)}),
    ])
    bad = TW.Tower(1, 2, (t.levels[0], bad_classes))
    rep = dict((name, (ok, w)) for name, ok, w in TW.validate(bad))
    ok, witness = rep["non-crossing-1"]
    assert not ok and witness is not None
    # a level-1 class mapping onto a non-class fails class-maps
    bad2_classes = TW._canon([
        frozenset({F(1, 3), F(2, 3)}), frozenset({F(1, 6), F(1, 12)}),
        frozenset({F(5, 6), F(5, 12)}), frozenset({F(7, 12), F(11, 12)}),
    ])
    bad2 = TW.Tower(1, 2, (t.levels[0], bad2_classes))
    rep2 = dict((name, (ok, w)) for name, ok, w in TW.validate(bad2))
    assert not rep2["class-maps-1"][0]


def test_enumeration_counts_and_validity():
    counts = []
    for h in range(4):
        ts = TW.enumerate_towers(1, 2, h)
        counts.append(len(ts))
        assert all(TW.is_valid(t) for t in ts)
        assert len({t.levels for t in ts}) == len(ts)     # duplicate-free
        for t in ts:
            _, _, k = TW.critical_data(t)
            assert k >= 2
    # golden regression anchors from the first verified run
    assert counts == [1, 1, 3, 5]
    assert [len(TW.enumerate_towers(1, 3, h)) for h in range(4)] == [1, 1, 1, 4]


def test_children_structure():
    t0 = TW.base_tower(1, 3)
    assert TW.classify(t0) == "fertile"
    targets = TW.extension_targets(t0)
    assert len(targets) == 1
    t1 = TW.child(t0, targets[0])
    assert TW.is_valid(t1)
    assert t1.restricted(0).levels == t0.levels       # child restricts to parent
    t2 = TW.child(t1, TW.extension_targets(t1)[0])
    tg2 = TW.extension_targets(t2)
    assert sorted(k for k, _ in tg2) == ["class", "gap", "gap", "gap"]


def test_terminal_and_adjacency():
    term = [t for t in TW.enumerate_towers(1, 3, 3) if TW.classify(t) == "terminal"]
    assert len(term) == 1
    tt = term[0]
    child = TW.unique_child(tt)
    assert TW.is_valid(child)
    adj = TW.adjacent_towers(tt, depth=6)
    assert len(adj) == 3
    assert all(TW.is_valid(a) for a in adj)
    rens = [TW.is_renormalizable(a) for a in adj]
    assert sum(1 for r in rens if r is not None and r[1] == 3) == 1


def test_renormalizable_monotone():
    term = [t for t in TW.enumerate_towers(1, 3, 3) if TW.classify(t) == "terminal"][0]
    sat = [a for a in TW.adjacent_towers(term, depth=8)
           if (TW.is_renormalizable(a) or (None, None))[1] == 3][0]
    n_deep = TW.is_renormalizable(sat)[0]
    n_shallow = TW.is_renormalizable(sat.restricted(6))[0]
    assert n_deep >= n_shallow - 1e-9


def test_json_roundtrip_bit_exact():
    for t in TW.enumerate_towers(1, 2, 3):
        assert TW.Tower.from_json(t.to_json()) == t


def test_tower_from_dynamics_basilica():
    tw = TW.tower_from_dynamics("Qc", -1.0, 1, 2, 1, check_limb=False)
    assert TW.is_valid(tw)
    lvl0 = {tuple(sorted(c)) for c in tw.levels[0]}
    assert lvl0 == {(F(1, 3), F(2, 3)), (F(1, 6), F(5, 6))}


def test_tower_from_dynamics_rejects_wrong_limb():
    with pytest.raises(WakeMismatchError):
        TW.tower_from_dynamics("Qc", 1j, 1, 2, 1, check_limb=False)
