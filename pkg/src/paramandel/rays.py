"""Parabolic rays for the Blaschke model and for g_B, and polynomial external
rays for Q_c.

Model rays live in the dyadic tree of iterated Bl-preimages of the segment
[0, 1/3]; a ray of itinerary eps is the branch through the tree points
z_{eps_1..eps_n}. Rays for g_B transport the model through the Fatou charts:
the two "trunks" attached to the critical point 1 are Newton-continued across
the petal boundary (the branch side fixed by the leading symbol), and each
deeper arc is the g_B-pullback of the previous arc of the shifted itinerary,
so the whole eventually-periodic family of shifts is traced together. Q_c rays
use the same arc-pullback scheme on the Boettcher field lines with an optional
Newton polish against Q_c^n(z) = target.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import dd
from .angles import HALF, Itinerary, double, itinerary_of_angle
from .circle import h_circle
from .errors import (BranchAmbiguityError, NewtonDivergenceError,
                     NotLandedError, ToleranceNotMetError)
from .fatou import GBFatou, blaschke_charts
from .maps import Bl, Bl_preimages
from .sphere import INF, CPoint

ARC_SAMPLES = 16
LANDING_TAIL = 10
LANDING_TOL = 1e-5
BUMP_TOL = 1e-7
QC_TRUNK_POTENTIAL = 24.0


@dataclass
class Ray:
    label: Itinerary
    plane: str                      # "Bl-internal" | "Bl-external" | "gB" | "Qc"
    param: complex | None = None
    vertices: list = field(default_factory=list)   # (time, complex point)
    status: str = "traced"          # "traced" | "landed" | "bumped"
    landing: CPoint | None = None
    bump_depth: int | None = None
    bump_point: complex | None = None
    warnings: list = field(default_factory=list)

    def arc_ends(self):
        """Deepest vertex of each unit-time arc, shallowest arc first."""
        ends = {}
        for t, z in self.vertices:
            ends[int(math.floor(-t + 1e-9))] = z
        return [ends[k] for k in sorted(ends)]

    def to_text(self) -> str:
        head = (f"# label {self.label} plane {self.plane} status {self.status}"
                + (f" param {self.param}" if self.param is not None else ""))
        lines = [head]
        for t, z in self.vertices:
            lines.append(f"{t:.6f} {z.real:.17g} {z.imag:.17g}")
        return "\n".join(lines)


def _as_itinerary(label) -> Itinerary:
    if isinstance(label, Itinerary):
        return label
    if isinstance(label, Fraction):
        return itinerary_of_angle(label)
    if isinstance(label, str):
        return Itinerary.parse(label)
    return itinerary_of_angle(Fraction(label))


def _shift_closure(label: Itinerary) -> list:
    out = [label]
    s = label.shift()
    while s not in out:
        out.append(s)
        s = s.shift()
    return out


# ---------------------------------------------------------------- model rays

def tree_point(word, max_len: int = 60) -> complex:
    """The tree point z_word, word a binary tuple/string; z_empty = 0.

    Recursive preimage selection: the preimage of z_{w'} in the open sector
    spanned by the first symbol's half-arc (upper for 0, lower for 1).
    """
    if isinstance(word, str):
        word = tuple(int(c) for c in word)
    if len(word) > max_len:
        raise ValueError("word too long")
    if not word:
        return 0j
    y = tree_point(word[1:], max_len)
    s, _ = Bl_preimages(y)
    if abs(s.imag) < 1e-10:
        raise BranchAmbiguityError(f"sector boundary hit at word {word}")
    want_upper = word[0] == 0
    z = s if (s.imag > 0) == want_upper else -s
    return z


def _sector_lift(points, sym):
    out = []
    for y in points:
        s, _ = Bl_preimages(y)
        if s.imag == 0:
            # only the root 0 lifts to the imaginary axis; keep sector rule on signs
            s = abs(s) * (1j if sym == 0 else -1j)
            out.append(s)
            continue
        out.append(s if (s.imag > 0) == (sym == 0) else -s)
    return out


def trace_ray_Bl(label, depth: int, external: bool = False) -> Ray:
    """Internal parabolic ray of the given itinerary (external: tau image).

    Vertex times are -(n + k/16): the interior Fatou coordinate of the tree
    node z_{eps_1..eps_n} is exactly -n.
    """
    label = _as_itinerary(label)
    shifts = _shift_closure(label)
    base = [Fraction(k, ARC_SAMPLES) * Fraction(1, 3) for k in range(ARC_SAMPLES)]
    base = [complex(float(x), 0.0) for x in base]   # [0, 1/3) real segment samples
    arcs = {s: [_sector_lift(base, s.bits(1)[0])] for s in shifts}
    for n in range(1, depth):
        new = {}
        for s in shifts:
            src = arcs[s.shift()][n - 1]
            new[s] = _sector_lift(src, s.bits(1)[0])
        for s in shifts:
            arcs[s].append(new[s])
    ray = Ray(label=label, plane="Bl-external" if external else "Bl-internal")
    for n, arc in enumerate(arcs[label]):
        for k, z in enumerate(arc):
            if external:
                z = 1.0 / z.conjugate() if z != 0 else complex("inf")
                if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                    continue
            ray.vertices.append((-(n + k / ARC_SAMPLES), z))
    target = None
    if label.per in ((0,), (1,)):
        # dyadic-tail labels land at the (pre)image of the parabolic point;
        # tau fixes the circle, so internal and external share the target
        target = h_circle(label.angle(), 40)
    _detect_landing(ray, period_hint=max(1, len(label.per)), known_target=target)
    return ray


# ------------------------------------------------------------------ g_B rays

def _newton_phi_gB(gb: GBFatou, target: complex, z0: complex,
                   tol: float = 1e-11, itmax: int = 50) -> complex:
    z = z0
    for _ in range(itmax):
        v, dv = gb.phi_d(z)
        if dv == 0:
            break
        step = (v - target) / dv
        z = z - step
        if abs(step) < tol * max(1.0, abs(z)):
            return z
    raise ToleranceNotMetError(f"trunk Newton stalled near {z0}")


def _gB_trunks(gb: GBFatou, h: float):
    """The two arcs of the ray tree attached to the critical point 1, at times
    -(k+1/2)h for k = 0..ARC_SAMPLES-1; trunk[0] on the leading-symbol-0 side."""
    kappa = gb.critical_scale()
    spine = gb.spine_dir()
    taus = [-(k + 0.5) * h for k in range(ARC_SAMPLES)]
    trunks = {}
    for sym in (0, 1):
        root = cmath.sqrt(abs(taus[0]) / kappa)
        if (root / spine).real < 0:
            root = -root
        u0 = (-1j if sym == 0 else 1j) * root
        z = _newton_phi_gB(gb, taus[0], 1.0 + u0)
        pts = [z]
        for tau in taus[1:]:
            z = _newton_phi_gB(gb, tau, z)
            pts.append(z)
        trunks[sym] = pts
    if abs(trunks[0][0] - trunks[1][0]) < 1e-9:
        raise BranchAmbiguityError("trunk sides collapsed; parameter too degenerate")
    return trunks


def trace_gB_family(B, label, depth: int, bump_tol: float = BUMP_TOL) -> dict:
    """Trace the rays of every shift of `label` for g_B simultaneously.

    Returns {itinerary: Ray}. Bumps (pullback through the second critical
    value) truncate the affected ray with status "bumped".
    """
    label = _as_itinerary(label)
    gb = GBFatou(B)
    vB = gb.B - 2.0
    h = 1.0 / ARC_SAMPLES
    shifts = _shift_closure(label)
    trunks = _gB_trunks(gb, h)
    # bumps only occur when the second critical value escapes; the budget must
    # cover the regime entry (~REGIME_RADIUS steps) past the ray depth
    bump_active = _gb_escapes(gb.B, depth + 1200)
    arcs = {s: [list(trunks[s.bits(1)[0]])] for s in shifts}
    status = {s: "traced" for s in shifts}
    bump = {}
    for n in range(1, depth):
        new = {}
        for s in shifts:
            if status[s] != "traced":
                new[s] = None
                continue
            src_ray = s.shift()
            if status[src_ray] != "traced" and len(arcs[src_ray]) < n:
                status[s] = "bumped"    # upstream bump truncates the pullback
                bump[s] = (n, None)
                new[s] = None
                continue
            src = arcs[src_ray][n - 1]
            ref = arcs[s][n - 1][-1]
            pts = []
            for y in src:
                if bump_active and abs(y - vB) < bump_tol * max(1.0, abs(vB)):
                    status[s] = "bumped"
                    bump[s] = (n, y)
                    break
                c1, c2 = gb.pull_candidates(y)
                if abs(c1 - c2) < 1e-9:
                    status[s] = "bumped" if abs(y - vB) < 1e-3 else status[s]
                    if status[s] == "bumped":
                        bump[s] = (n, y)
                        break
                    raise BranchAmbiguityError(f"preimages merge at depth {n}")
                z = c1 if abs(c1 - ref) < abs(c2 - ref) else c2
                pts.append(z)
                ref = z
            new[s] = pts if status[s] == "traced" else (pts or None)
        for s in shifts:
            if new[s]:
                arcs[s].append(new[s])
    rays = {}
    for s in shifts:
        r = Ray(label=s, plane="gB", param=gb.B)
        for n, arc in enumerate(arcs[s]):
            for k, z in enumerate(arc):
                r.vertices.append((-(n + (k + 0.5) / ARC_SAMPLES), z))
        if status[s] == "bumped":
            r.status = "bumped"
            r.bump_depth, r.bump_point = bump[s]
        else:
            _detect_landing(r, period_hint=max(1, len(s.per)),
                            allow_infinity=True)
        rays[s] = r
    return rays


def _gb_escapes(B: complex, budget: int) -> bool:
    w = (B - 2.0) / B
    a = 1.0 / (B * B)
    for _ in range(budget):
        if w.real > 0 and abs(w) > 1e3:
            return True
        if abs(w) < 1e-14:
            return False
        w = w + 1 + a / w
    return False


def trace_ray_gB(B, label, depth: int) -> Ray:
    label = _as_itinerary(label)
    return trace_gB_family(B, label, depth)[label]


# ------------------------------------------------------------------ Q_c rays

def boettcher_position(c, big: float = 1e9, budget: int = 300):
    """(external angle, Green potential) of the critical value of an escaping
    Q_c, or None when the orbit stays bounded within the budget.

    The angle's halving chain is back-propagated from a far iterate, so
    parameters exactly on a dyadic-free ray get the exact angle to 1e-12."""
    c = complex(c)
    orbit = [c]
    for _ in range(budget):
        z = orbit[-1]
        if abs(z) > big:
            break
        orbit.append(z * z + c)
    else:
        return None
    n = len(orbit) - 1
    g = math.log(abs(orbit[-1])) / 2.0 ** n
    th = cmath.phase(orbit[-1]) / (2 * math.pi) % 1.0
    for k in range(n - 1, -1, -1):
        cand = (th / 2.0, th / 2.0 + 0.5)
        ref = cmath.phase(orbit[k]) / (2 * math.pi) % 1.0
        th = min(cand, key=lambda x: min(abs(x - ref), 1 - abs(x - ref)))
    return th, g


def trace_qc_family(c, theta, depth: int, newton_polish: bool = True,
                    bump_tol: float = BUMP_TOL) -> dict:
    """External rays of Q_c for every angle in the doubling orbit of theta.

    Arc n covers Green potentials [L/2^n, L/2^(n-1)]; vertex times are the
    matching -(n + k/16). A ray bumps when its angle equals the external angle
    of the escaping critical value and its potential reaches the critical
    value's potential (near-misses of the pullback segments get a warning).
    Polishing solves Q_c^n(z) = (trunk point) by Newton.
    """
    c = complex(c)
    theta = theta if isinstance(theta, Fraction) else Fraction(theta)
    angs = []
    t = theta % 1
    while t not in angs:
        angs.append(t)
        t = double(t)
    L = QC_TRUNK_POTENTIAL
    crit = boettcher_position(c)

    def trunk_point(ang, pot):
        w = cmath.exp(pot + 2j * cmath.pi * float(ang))
        return w - c / (2.0 * w)

    # potentials for arc 0 run from 2L down to L
    arcs = {a: [[trunk_point(a, 2 * L - k * L / ARC_SAMPLES) for k in range(ARC_SAMPLES)]]
            for a in angs}
    status = {a: "traced" for a in angs}
    bump = {}
    nxt = {a: double(a) for a in angs}
    use_dd = dd.enabled()
    arcs_dd = {a: [[dd.DDC.of(z) for z in arcs[a][0]]] for a in angs} if use_dd else None
    warn = {a: [] for a in angs}
    for n in range(1, depth):
        new = {}
        new_dd = {}
        for a in angs:
            if status[a] != "traced":
                new[a] = None
                continue
            if crit is not None and _circle_dist(float(a), crit[0]) < 1e-9:
                lo, hi = L / 2.0 ** n, 2.0 * L / 2.0 ** n
                if lo <= crit[1]:
                    # the ray carries the critical value; stop at its potential
                    status[a] = "bumped"
                    bump[a] = (n, c)
                    new[a] = None
                    continue
            if status[nxt[a]] != "traced" and len(arcs[nxt[a]]) < n:
                status[a] = "bumped"
                bump[a] = (n, None)
                new[a] = None
                continue
            src = arcs[nxt[a]][n - 1]
            ref = arcs[a][n - 1][-1]
            pts = []
            pts_dd = [] if use_dd else None
            src_dd = arcs_dd[nxt[a]][n - 1] if use_dd else None
            prev_y = None
            for i, y in enumerate(src):
                if crit is not None and abs(y - c) < bump_tol * max(1.0, abs(c)):
                    status[a] = "bumped"
                    bump[a] = (n, y)
                    break
                if prev_y is not None and crit is not None:
                    d = _seg_dist(prev_y, y, c)
                    if d < 1e-6 * max(1.0, abs(c)) and (
                            _circle_dist(float(nxt[a]), crit[0]) > 1e-9):
                        warn[a].append((n, d))
                prev_y = y
                if use_dd:
                    zdd = dd.ddc_sqrt(src_dd[i] - dd.DDC.of(c), ref=ref)
                    z = complex(zdd)
                    pts_dd.append(zdd)
                else:
                    s = cmath.sqrt(y - c)
                    z = s if abs(s - ref) < abs(-s - ref) else -s
                pts.append(z)
                ref = z
            new[a] = pts if status[a] == "traced" else (pts or None)
            if use_dd:
                new_dd[a] = pts_dd
        for a in angs:
            if new[a]:
                arcs[a].append(new[a])
                if use_dd:
                    arcs_dd[a].append(new_dd[a])
    rays = {}
    for a in angs:
        lab = itinerary_of_angle(a)
        r = Ray(label=lab, plane="Qc", param=c)
        for n, arc in enumerate(arcs[a]):
            for k, z in enumerate(arc):
                r.vertices.append((-(n + k / ARC_SAMPLES), z))
        r.warnings = [f"near-tangency at depth {n} (dist {d:.1e})"
                      for n, d in warn[a][:4]]
        if status[a] == "bumped":
            r.status = "bumped"
            r.bump_depth, r.bump_point = bump[a]
        else:
            if newton_polish:
                _qc_polish(r, c, a, arcs[a])
            _detect_landing(r, period_hint=max(1, len(lab.per)))
        rays[a] = r
    return rays


def _circle_dist(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def _seg_dist(a: complex, b: complex, z: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(z - a)
    t = ((z - a) / ab).real
    t = max(0.0, min(1.0, t))
    return abs(a + t * ab - z)


def _qc_polish(ray: Ray, c, angle, arcs, itmax: int = 3):
    """Newton-polish the deepest vertex against Q_c^n(z) = (trunk target).

    The trunk target is the angle-2^n theta field-line point at the doubled-up
    potential, where the asymptotic Boettcher inverse is exact to ~1e-10.
    """
    n_deep = len(arcs) - 1
    if n_deep < 1:
        return
    a = angle
    for _ in range(n_deep):
        a = double(a)
    # deepest vertex potential, pushed forward n_deep times
    pot = QC_TRUNK_POTENTIAL * (2.0 - (ARC_SAMPLES - 1) / ARC_SAMPLES)
    w = cmath.exp(pot + 2j * cmath.pi * float(a))
    target = w - c / (2.0 * w)
    zz = arcs[n_deep][-1]
    for _ in range(itmax):
        val = zz
        der = 1.0 + 0j
        for _k in range(n_deep):
            der *= 2.0 * val
            val = val * val + c
            if abs(val) > 1e150:
                return
        if der == 0:
            return
        step = (val - target) / der
        if abs(step) > 0.5 * max(1.0, abs(zz)):
            raise NewtonDivergenceError("Qc ray polish diverged", last_good=n_deep - 1)
        zz = zz - step
        if abs(step) < 1e-13 * max(1.0, abs(zz)):
            break
    ray.vertices[-1] = (ray.vertices[-1][0], zz)


def trace_ray_Qc(c, theta, depth: int, newton_polish: bool = True) -> Ray:
    theta = theta if isinstance(theta, Fraction) else Fraction(theta)
    return trace_qc_family(c, theta, depth, newton_polish)[theta % 1]


# ------------------------------------------------------------------- landing

def _detect_landing(ray: Ray, period_hint: int = 1, allow_infinity: bool = False,
                    known_target=None):
    ends = ray.arc_ends()
    if len(ends) < LANDING_TAIL + 1:
        return
    tail = ends[-LANDING_TAIL:]
    if allow_infinity:
        mags = [abs(z) for z in ends[-12:]]
        if (all(mags[i] < mags[i + 1] for i in range(len(mags) - 1))
                and mags[-1] > 20.0):
            ray.status = "landed"
            ray.landing = INF
            return
    diam = max(abs(p - q) for p in tail for q in tail)
    if diam < LANDING_TOL:
        ray.status = "landed"
        ray.landing = CPoint.of(_aitken_limit(ends, period_hint))
        return
    if known_target is not None:
        # parabolic-limit labels: the landing point is known; accept a strictly
        # approaching tail (the approach itself is O(1/depth), too slow for the
        # Cauchy window)
        dists = [abs(z - known_target) for z in ends[-12:]]
        if (all(dists[i + 1] <= dists[i] + 1e-12 for i in range(len(dists) - 1))
                and dists[-1] < 0.5):
            ray.status = "landed"
            ray.landing = CPoint.of(known_target)
        return
    # slowly landing rays (preimages of parabolic points): ends ~ w + c/n
    if len(ends) >= 16:
        def rich(k, span):
            n1, n0 = k, k - span
            return (n1 * ends[n1] - n0 * ends[n0]) / (n1 - n0)
        n = len(ends) - 1
        span = max(3, n // 3)
        e1, e2 = rich(n, span), rich(n - 2, span)
        if abs(e1 - e2) < 1e-4 and abs(e1 - ends[-1]) < 0.5:
            ray.status = "landed"
            ray.landing = CPoint.of(e1)
            ray.warnings.append("landing extrapolated from a 1/depth tail")


def _aitken_limit(ends, period: int) -> complex:
    """Aitken delta-squared on the arc-end subsequence stepping by the period."""
    if len(ends) < 2 * period + 1:
        return ends[-1]
    s0, s1, s2 = ends[-1 - 2 * period], ends[-1 - period], ends[-1]
    den = s2 - 2 * s1 + s0
    if abs(den) < 1e-30:
        return s2
    acc = (s2 * s0 - s1 * s1) / den
    return acc if abs(acc - s2) < 1.0 else s2


def landing_point(ray: Ray) -> CPoint:
    if ray.status != "landed" or ray.landing is None:
        raise NotLandedError(f"ray {ray.label} has status {ray.status}")
    return ray.landing


def rotation_number_at(point, rays) -> Fraction:
    """Combinatorial rotation number of a cycle of co-landing rays.

    The cyclic order of the rays around the landing point, compared with the
    permutation induced by the shift on labels, gives p; q is the cycle length.
    """
    pt = CPoint.of(point)
    if pt.at_infinity:
        raise NotLandedError("rotation number at infinity is not defined here")
    z0 = pt.z
    labs = [r.label for r in rays]
    q = len(rays)
    if q == 1:
        return Fraction(0, 1)
    approach = []
    for r in rays:
        tail = [v for _, v in r.vertices[-3 * ARC_SAMPLES:]]
        v = next((x for x in reversed(tail) if abs(x - z0) > 10 * LANDING_TOL), tail[0])
        approach.append(cmath.phase(v - z0) % (2 * math.pi))
    order = sorted(range(q), key=lambda i: approach[i])
    pos = {labs[i]: k for k, i in enumerate(order)}
    shifts = []
    for lab in labs:
        s = lab.shift()
        if s not in pos:
            raise NotLandedError("rays do not form a shift-closed cycle")
        shifts.append((pos[s] - pos[lab]) % q)
    if len(set(shifts)) != 1:
        raise ToleranceNotMetError(f"inconsistent rotation data {shifts}")
    return Fraction(shifts[0], q)


def co_land(rays, tol: float = 1e-5) -> bool:
    pts = []
    for r in rays:
        p = landing_point(r)
        if p.at_infinity:
            pts.append(None)
        else:
            pts.append(p.z)
    if any(p is None for p in pts):
        return all(p is None for p in pts)
    return max(abs(p - q) for p in pts for q in pts) <= tol
