"""Towers of laminations over the angle sets Z_n, exactly.

Z_0 is the p/q rotation cycle together with its half-translates; Z_n its n-th
doubling preimage. A tower is a level-stratified family of equivalence
relations satisfying the admissibility conditions (two base classes, classes
map to classes, restriction compatibility, non-linked hulls). Everything here
is exact Fraction arithmetic; gaps are the faces of the chord diagram, found
by the circular boundary walk (arc, then chord to the class predecessor).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .angles import HALF, double, rotation_cycle
from .errors import (InvalidFractionError, InvalidTowerError, SizeOverflowError,
                     TargetNotInCriticalValueGapError, UnresolvedLandingError)

LEVEL_CAP = 20


def level_set(p: int, q: int, n: int) -> tuple:
    """Z_n, sorted: the n-th doubling preimage of the cycle plus half-translates."""
    if n > LEVEL_CAP:
        raise SizeOverflowError(f"level sets capped at n <= {LEVEL_CAP}")
    cyc = rotation_cycle(p, q)
    cur = set(cyc) | {(t + HALF) % 1 for t in cyc}
    for _ in range(n):
        cur = {x for t in cur for x in ((t / 2) % 1, (t / 2 + HALF) % 1)}
    return tuple(sorted(cur))


def _halves(t: Fraction):
    return (t / 2) % 1, (t / 2 + HALF) % 1


def _canon(classes) -> tuple:
    return tuple(sorted((frozenset(c) for c in classes), key=lambda c: min(c)))


@dataclass(frozen=True)
class Gap:
    """A complementary face of the chord diagram at one level.

    arcs: circle arcs (a, b) in boundary-walk order; chords: the class sides
    (x, y) traversed after each arc (degenerate (x, x) entries are dropped).
    """

    level: int
    arcs: tuple
    chords: tuple

    @property
    def boundary_angles(self) -> frozenset:
        return frozenset(x for arc in self.arcs for x in arc)

    def is_critical(self) -> bool:
        shifted = {tuple((x + HALF) % 1 for x in arc) for arc in self.arcs}
        return shifted == set(self.arcs)

    def arc_intervals(self):
        return self.arcs

    def contains_angle(self, t: Fraction) -> bool:
        t = t % 1
        return any(_in_arc(t, a, b) for a, b in self.arcs)


def _in_arc(t, a, b) -> bool:
    """Strictly inside the ccw arc from a to b."""
    if a < b:
        return a < t < b
    return t > a or t < b


def _arc_len(a, b) -> Fraction:
    return (b - a) % 1


@dataclass(frozen=True)
class Tower:
    """Partitions of Z_0..Z_N; levels[n] is the canonical class tuple of ~_n."""

    p: int
    q: int
    levels: tuple

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def classes(self, n: int) -> tuple:
        return self.levels[n]

    def class_of(self, n: int, t: Fraction) -> frozenset:
        t = t % 1
        for c in self.levels[n]:
            if t in c:
                return c
        raise KeyError(f"{t} not in Z_{n}")

    def restricted(self, n: int) -> "Tower":
        return Tower(self.p, self.q, self.levels[: n + 1])

    # ------------------------------------------------------------- structure

    def gaps(self, n: int) -> tuple:
        return _faces(self.p, self.q, n, self.levels[n])

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p, "q": self.q, "N": self.height,
            "levels": [[sorted(f"{t.numerator}/{t.denominator}" for t in c)
                        for c in lev] for lev in self.levels],
        })

    @staticmethod
    def from_json(s: str) -> "Tower":
        d = json.loads(s)
        levels = tuple(
            _canon(frozenset(Fraction(x) for x in c) for c in lev)
            for lev in d["levels"])
        return Tower(d["p"], d["q"], levels)


def base_tower(p: int, q: int) -> Tower:
    e0 = frozenset(rotation_cycle(p, q))
    me0 = frozenset((t + HALF) % 1 for t in e0)
    return Tower(p, q, (_canon([e0, me0]),))


def _faces(p, q, n, classes) -> tuple:
    pts = level_set(p, q, n)
    # hand-built towers may use a sub- or superset; derive points from classes
    got = sorted({t for c in classes for t in c})
    if tuple(got) != pts:
        pts = tuple(got)
    m = len(pts)
    idx = {t: i for i, t in enumerate(pts)}
    cls_sorted = {}
    for c in classes:
        sc = sorted(c)
        for t in c:
            cls_sorted[t] = sc
    faces = []
    seen = [False] * m
    for start in range(m):
        if seen[start]:
            continue
        arcs, chords = [], []
        cur = start
        while True:
            if seen[cur]:
                break
            seen[cur] = True
            a, b = pts[cur], pts[(cur + 1) % m]
            arcs.append((a, b))
            sc = cls_sorted[b]
            j = sc.index(b)
            y = sc[(j - 1) % len(sc)]
            if y != b:
                chords.append((b, y))
            cur = idx[y]
            if cur == start:
                break
        faces.append(Gap(level=n, arcs=tuple(arcs), chords=tuple(chords)))
    return tuple(faces)


# -------------------------------------------------------------------- checks

def validate(t: Tower) -> list:
    """Per-condition report [(name, ok, witness)]; never raises."""
    report = []
    p, q = t.p, t.q
    # (i)+(ii): base level has exactly the two canonical classes
    try:
        want = base_tower(p, q).levels[0]
        ok = t.levels[0] == want
        report.append(("base-classes", ok, None if ok else t.levels[0]))
    except InvalidFractionError as e:
        report.append(("base-classes", False, str(e)))
        return report
    # partitions cover Z_n disjointly
    for n in range(t.height + 1):
        pts = set(level_set(p, q, n))
        seen = set()
        ok, witness = True, None
        for c in t.levels[n]:
            if c & seen:
                ok, witness = False, ("overlap", n, c & seen)
                break
            seen |= c
        if ok and seen != pts:
            ok, witness = False, ("cover", n, pts ^ seen)
        report.append((f"partition-{n}", ok, witness))
    # (iii) images of classes are classes one level down
    for n in range(1, t.height + 1):
        ok, witness = True, None
        lower = set(t.levels[n - 1])
        for c in t.levels[n]:
            img = frozenset(double(x) for x in c)
            if img not in lower:
                ok, witness = False, (n, c, img)
                break
        report.append((f"class-maps-{n}", ok, witness))
    # (iv) restriction compatibility
    for n in range(1, t.height + 1):
        ok, witness = True, None
        zm = set(level_set(p, q, n - 1))
        low = {frozenset(c) for c in t.levels[n - 1]}
        restr = {frozenset(c & zm) for c in t.levels[n]} - {frozenset()}
        if restr != low:
            ok, witness = False, (n, restr ^ low)
        report.append((f"restriction-{n}", ok, witness))
    # (v) non-crossing hulls within each level
    for n in range(t.height + 1):
        ok, witness = True, None
        cl = t.levels[n]
        for i in range(len(cl)):
            for j in range(i + 1, len(cl)):
                w = _linked(cl[i], cl[j])
                if w:
                    ok, witness = False, (n, w)
                    break
            if not ok:
                break
        report.append((f"non-crossing-{n}", ok, witness))
    # unique critical class or gap per level
    for n in range(t.height + 1):
        crit = _critical_objects(t, n)
        ok = len(crit) == 1
        report.append((f"critical-unique-{n}", ok, None if ok else crit))
    return report


def _linked(E, F):
    """A crossing quadruple a < c < b < d (a,b in E; c,d in F), or None."""
    for a in E:
        for b in E:
            if a == b:
                continue
            inside_c = [c for c in F if _in_arc(c, a, b)]
            outside_c = [c for c in F if _in_arc(c, b, a)]
            if inside_c and outside_c:
                return (a, inside_c[0], b, outside_c[0])
    return None


def is_valid(t: Tower) -> bool:
    return all(ok for _, ok, _ in validate(t))


def _critical_objects(t: Tower, n: int) -> list:
    out = []
    for c in t.levels[n]:
        if frozenset((x + HALF) % 1 for x in c) == c:
            out.append(("class", c))
    for g in t.gaps(n):
        if g.is_critical():
            out.append(("gap", g))
    return out


# -------------------------------------------------------- critical structure

def critical_object(t: Tower, n: int):
    objs = _critical_objects(t, n)
    if len(objs) != 1:
        raise InvalidTowerError(f"level {n}: {len(objs)} critical objects")
    return objs[0]


def _gap_image(t: Tower, n: int, gap: Gap):
    """The gap one level down whose arcs contain the doubled arcs; n-1 may be
    formal (negative), in which case an E_0 arc pair is returned."""
    a, b = gap.arcs[0]
    da, db = double(a), double(b)
    if n - 1 >= 0:
        for g in t.gaps(n - 1):
            if (da, db) in g.arcs:
                return g
        mid = (da + _arc_len(da, db) / 2) % 1
        for g in t.gaps(n - 1):  # hand-built towers: arc may sit inside a longer one
            if g.contains_angle(mid):
                return g
        raise InvalidTowerError(f"gap image missing at level {n - 1}")
    # formal level: gaps are the single arcs of E_0
    cyc = sorted(rotation_cycle(t.p, t.q))
    for i, x in enumerate(cyc):
        y = cyc[(i + 1) % len(cyc)]
        if (da, db) == (x, y) or _in_arc(da, x, y) or da == x:
            return Gap(level=n - 1, arcs=((x, y),), chords=())
    raise InvalidTowerError("formal gap image missing")


def critical_data(t: Tower):
    """(critical object per level, critical value object of the top level,
    critical period k of the deepest critical gap). k >= q is enforced."""
    per_level = [critical_object(t, n) for n in range(t.height + 1)]
    kind, obj = per_level[-1]
    if kind == "class":
        value = ("class", frozenset(double(x) for x in obj))
    else:
        value = ("gap", _gap_image(t, t.height, obj))
    # critical period from the deepest level holding a critical gap
    n_gap = max((n for n, (k, _) in enumerate(per_level) if k == "gap"), default=None)
    if n_gap is None:
        raise InvalidTowerError("no critical gap at any level")
    k = _critical_period(t, n_gap, per_level[n_gap][1])
    if k < t.q:
        raise InvalidTowerError(f"critical period {k} < q = {t.q}")
    return per_level, value, k


def _critical_period(t: Tower, n: int, gap: Gap) -> int:
    g, lev = gap, n
    for k in range(1, n + t.q + 1):
        g = _gap_image(t, lev, g)
        lev -= 1
        if lev >= 0:
            if g.is_critical():
                return k
        else:
            a, b = g.arcs[0]
            if _arc_len(a, b) > HALF:  # 0 inside the formal cap
                return k
    raise InvalidTowerError("critical period not found within q formal levels")


def classify(t: Tower) -> str:
    kind, _ = critical_object(t, t.height)
    return "terminal" if kind == "class" else "fertile"


# ---------------------------------------------------------------- extensions

def critical_value_gap(t: Tower):
    """The critical value gap of the top level (a gap one level down, possibly
    formal for height 0)."""
    kind, obj = critical_object(t, t.height)
    if kind != "gap":
        raise InvalidTowerError("terminal tower has a critical value class")
    return _gap_image(t, t.height, obj)


def extension_targets(t: Tower) -> list:
    """Classes and gaps of the top level lying inside the critical value gap.
    Each is a valid target for a one-level extension."""
    if classify(t) != "fertile":
        return []
    cvg = critical_value_gap(t)
    targets = []
    for c in t.levels[t.height]:
        if all(_angle_in_gap_closure(x, cvg) for x in c):
            targets.append(("class", c))
    for g in t.gaps(t.height):
        if all(_arc_inside(arc, cvg) for arc in g.arcs):
            targets.append(("gap", g))
    return targets


def _angle_in_gap_closure(x, gap) -> bool:
    return any(_in_arc(x, a, b) for a, b in gap.arcs)


def _arc_inside(arc, gap) -> bool:
    a, b = arc
    for x, y in gap.arcs:
        if (a == x or _in_arc(a, x, y)) and (b == y or _in_arc(b, x, y)):
            if _arc_len(a, b) <= _arc_len(x, y):
                return True
    return False


def child(t: Tower, target) -> Tower:
    """The unique height+1 extension with the given critical value object.

    target: ("class", frozenset) or ("gap", Gap) inside the critical value gap.
    New points are grouped by the complementary intervals of the new critical
    object (the preimage of the target): for a class target that object is the
    invariant polygon over it, for a gap target it is the gap whose arcs are
    the halved target arcs; the closed between-arc intervals then split every
    preimage pair, boundary-class preimages landing on interval endpoints.
    """
    if classify(t) != "fertile":
        raise InvalidTowerError("terminal towers have a unique child; use unique_child")
    if target not in extension_targets(t):
        raise TargetNotInCriticalValueGapError("target not inside the critical value gap")
    kind, obj = target
    if kind == "class":
        pstar = sorted({h for s in obj for h in _halves(s)})
        intervals = [(a, pstar[(i + 1) % len(pstar)]) for i, a in enumerate(pstar)]
        return _extend(t, obj, intervals)
    arcs = sorted(arc for a, b in obj.arcs for arc in _half_arcs(a, b))
    intervals = [(arcs[i][1], arcs[(i + 1) % len(arcs)][0]) for i in range(len(arcs))]
    return _extend(t, None, intervals)


def _half_arcs(a, b):
    """The two preimage arcs of (a, b) under doubling (half-translate pair)."""
    u = (a / 2) % 1
    step = _arc_len(a, b) / 2
    return ((u, (u + step) % 1), ((u + HALF) % 1, (u + HALF + step) % 1))


def _extend(t: Tower, exempt_class, intervals) -> Tower:
    N = t.height
    p, q = t.p, t.q
    znew = set(level_set(p, q, N + 1)) - set(level_set(p, q, N))

    def compartment(x):
        # closed circular intervals; endpoints belong to their interval
        for i, (a, b) in enumerate(intervals):
            if x == a or x == b or _in_arc(x, a, b):
                return i
        raise InvalidTowerError(f"{x} inside the new critical object trace")

    newclasses = []
    for c in t.levels[N]:
        pre = sorted(x for s in c for x in _halves(s) if x in znew)
        if not pre:
            continue
        if exempt_class is not None and c == exempt_class:
            newclasses.append(frozenset(pre))  # the invariant 2:1 critical class
            continue
        groups = {}
        for x in pre:
            groups.setdefault(compartment(x), []).append(x)
        if len(groups) != 2:
            raise InvalidTowerError(f"preimage of {sorted(c)} split into {len(groups)} parts")
        newclasses.extend(frozenset(g) for g in groups.values())
    levels = t.levels + (_canon(list(t.levels[N]) + newclasses),)
    return Tower(p, q, levels)


def children(t: Tower) -> list:
    return [child(t, target) for target in extension_targets(t)]


def unique_child(t: Tower) -> Tower:
    """The forced extension of a terminal tower: the barrier is the hull of the
    invariant critical class itself."""
    kind, crit = critical_object(t, t.height)
    if kind != "class":
        raise InvalidTowerError("not terminal")
    pstar = sorted(crit)
    intervals = [(a, pstar[(i + 1) % len(pstar)]) for i, a in enumerate(pstar)]
    return _extend(t, None, intervals)


def enumerate_towers(p: int, q: int, height: int) -> list:
    """Every admissible tower of exactly the given height."""
    frontier = [base_tower(p, q)]
    for _ in range(height):
        nxt = []
        for t in frontier:
            if classify(t) == "fertile":
                nxt.extend(children(t))
            else:
                nxt.append(unique_child(t))
        frontier = nxt
    return frontier


# ----------------------------------------------------------------- adjacency

def adjacent_towers(t: Tower, depth: int) -> list:
    """The q towers adjacent to a terminal tower, truncated to the given height.

    The critical value class E' is a q-gon of the parent level; each adjacent
    tower replaces the class extension by the gap extension along one of the q
    gaps touching H(E'), then keeps extending along the gap adjacent to E'.
    """
    if classify(t) != "terminal":
        raise InvalidTowerError("adjacency needs a terminal tower")
    N = t.height
    _, crit = critical_object(t, N)
    eprime = frozenset(double(x) for x in crit)
    parent = t.restricted(N - 1)
    sides = _class_sides(eprime)
    out = []
    for side in sides:
        g = _gap_with_side(parent, N - 1, side)
        tw = child(parent, ("gap", g))
        while tw.height < depth:
            tw = _extend_along_side(tw, side)
        out.append(tw)
    if len(out) != t.q:
        raise InvalidTowerError(f"expected q={t.q} adjacent towers, got {len(out)}")
    return out


def _class_sides(c: frozenset) -> list:
    sc = sorted(c)
    return [(sc[i], sc[(i + 1) % len(sc)]) for i in range(len(sc))]


def _gap_with_side(t: Tower, n: int, side) -> Gap:
    a, b = side
    for g in t.gaps(n):
        if (b, a) in g.chords or (a, b) in g.chords:
            return g
    raise InvalidTowerError(f"no gap with side {side} at level {n}")


def _extend_along_side(t: Tower, side) -> Tower:
    for target in extension_targets(t):
        if target[0] != "gap":
            continue
        g = target[1]
        if (side in g.chords) or ((side[1], side[0]) in g.chords):
            return child(t, target)
    raise InvalidTowerError(f"no extension target along side {side}")


def is_renormalizable(t: Tower, depth: int | None = None):
    """Minimal (N, k) such that every inspected level >= N has critical period
    k, or None when the constancy has no persistence yet (fewer than two gap
    levels agree). Finite-depth verdict: deeper data never decreases N."""
    top = t.height if depth is None else min(depth, t.height)
    periods = {}
    for n in range(top + 1):
        kind, obj = critical_object(t, n)
        if kind == "gap":
            periods[n] = _critical_period(t, n, obj)
    if not periods:
        return None
    ns = sorted(periods)
    k = periods[ns[-1]]
    N = ns[-1]
    for n in reversed(ns):
        if periods[n] != k:
            break
        N = n
    if sum(1 for n in ns if n >= N) >= 2:
        return (N, k)
    return None


# -------------------------------------------------------------- from dynamics

def tower_from_dynamics(plane: str, param, p: int, q: int, depth: int,
                        ray_depth: int | None = None, tol: float = 1e-5,
                        check_limb: bool = True) -> Tower:
    """The co-landing tower of Q_c ("Qc") or g_B ("gB") in the p/q limb.

    t ~ t' at level n iff the traced rays of angles t, t' land at the same
    point (within tol). Unresolved landings raise UnresolvedLandingError with
    the offending angles.
    """
    from . import rays as R
    if check_limb and plane == "gB":
        from .parameter import limb_of
        wake = limb_of(param, qmax=max(q, 3))
        if wake != (p, q):
            from .errors import WakeMismatchError
            raise WakeMismatchError(f"parameter reports limb {wake}, wanted {(p, q)}")
    if ray_depth is None:
        ray_depth = max(160 if plane == "gB" else 80, depth + 40)
    cache = {}

    def landing_of(t):
        if t not in cache:
            fam = (R.trace_gB_family(param, R.itinerary_of_angle(t), ray_depth)
                   if plane == "gB" else
                   R.trace_qc_family(param, t, ray_depth))
            for key, ray in fam.items():
                ang = key.angle() if hasattr(key, "angle") else key
                if ray.status == "landed" and not ray.landing.at_infinity:
                    cache[ang] = ray.landing.z
                else:
                    cache[ang] = None
        return cache[t]

    tower = tower_from_landings(p, q, depth, landing_of, tol)
    bad = [name for name, ok, _ in validate(tower) if not ok]
    if bad:
        from .errors import WakeMismatchError
        raise WakeMismatchError(
            f"co-landing pattern is not a {p}/{q} tower (failed: {bad[:3]}); "
            "is the parameter in this limb?")
    return tower


def tower_from_landings(p: int, q: int, depth: int, landing_of, tol: float = 1e-5) -> Tower:
    """Build the co-landing tower: landing_of(angle)->complex or None. Angles
    with unresolved landings raise UnresolvedLandingError listing them."""
    zn = level_set(p, q, depth)
    pts = {}
    bad = []
    for t in zn:
        z = landing_of(t)
        if z is None:
            bad.append(t)
        else:
            pts[t] = complex(z)
    if bad:
        raise UnresolvedLandingError(f"{len(bad)} unresolved landings", bad)
    # cluster by proximity (union-find)
    items = list(pts)
    parent = {t: t for t in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(items):
        for b in items[i + 1:]:
            if abs(pts[a] - pts[b]) <= tol:
                parent[find(a)] = find(b)
    levels = []
    for n in range(depth + 1):
        zm = level_set(p, q, n)
        cl = {}
        for t in zm:
            cl.setdefault(find(t), []).append(t)
        levels.append(_canon(frozenset(c) for c in cl.values()))
    return Tower(p, q, tuple(levels))
