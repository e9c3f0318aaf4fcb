"""Universal Yoccoz and universal parabolic puzzles with shortcut arcs,
dynamical puzzles for Q_c and g_B, the piece correspondence between the two
universal models, orbit classification, and parameter puzzles.

Pieces are stored combinatorially: a label is (level, arc) where arc is the
exact angle pair of consecutive marked points. Geometry (ray polylines,
shortcut spirals, equipotential boxes) attaches lazily and is only consulted
for point queries and for the cross-checks that the correspondence tests
demand. Dynamical pieces are the gaps of the co-landing tower; their point-
query polygons join co-landing ray pairs at the landing points and close the
circle-side openings with straight tops at the shortcut times (the spiral
interior only matters near the trunk, far from every queried orbit point).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import rays as R
from . import towers as TW
from .angles import (HALF, Itinerary, double, itinerary_of_angle,
                     rotation_cycle, tuned_dyadic_pair, wake_interval)
from .circle import h_circle
from .errors import ParamandelError, UnresolvedLandingError, WakeMismatchError
from .fatou import blaschke_charts
from .maps import Bl
from .sphere import CPoint

DEFAULT_L0 = 1.0


# ------------------------------------------------------------ shortcut times

def shortcut_data(theta_a: Fraction, theta_b: Fraction):
    """(k, r, t_a, t_b) for the piece arc (theta_a, theta_b): the arc hangs on
    the dyadic r/2^k of minimal level inside it, and the two bounding rays
    leave the tiling disk at Fatou times -t_a, -t_b."""
    a, b = theta_a % 1, theta_b % 1
    k, r = _min_dyadic(a, b)
    ia, ib = itinerary_of_angle(a), itinerary_of_angle(b)
    if k == 0:
        run_a = _leading_run(ia, 1)
        run_b = _leading_run(ib, 0)
        return 0, 0, run_a, run_b
    sa, sb = ia, ib
    for _ in range(k - 1):
        sa, sb = sa.shift(), sb.shift()
    # sa starts 0 then a 1-run, sb starts 1 then a 0-run
    ca = _leading_run(sa.shift(), 1)
    cb = _leading_run(sb.shift(), 0)
    return k, r, k + ca, k + cb


def _min_dyadic(a: Fraction, b: Fraction):
    """(k, r): the minimal-level dyadic r/2^k strictly inside the ccw arc (a,b);
    k = 0 when the arc wraps angle 0."""
    if a >= b:
        return 0, 0
    k = 0
    while True:
        k += 1
        if k > 64:
            raise ParamandelError("no dyadic found (degenerate arc)")
        lo = int(a * (1 << k)) + 1
        hi = int(b * (1 << k)) if b * (1 << k) != int(b * (1 << k)) else int(b * (1 << k)) - 1
        for r in range(lo, hi + 1):
            if r % 2 == 1 and a < Fraction(r, 1 << k) < b:
                return k, r


def _leading_run(it: Itinerary, sym: int) -> int:
    n = 0
    bits = it.bits(64)
    while n < 64 and bits[n] == sym:
        n += 1
    return max(1, n)


def shortcut_arc_model(theta_a: Fraction, theta_b: Fraction, samples: int = 24):
    """The model shortcut replacing the tails of the rays bounding the arc
    (theta_a, theta_b): the Fatou-chart Archimedean spiral through the tiling
    disk attached at the arc's minimal dyadic, pulled back by the shared
    itinerary prefix. Returns (polyline, t_a, t_b)."""
    k, r, ta, tb = shortcut_data(theta_a, theta_b)
    ch = blaschke_charts()
    if k == 0:
        n0, n1 = tb, ta          # lower edge carries the 0-leading ray
        pts = [ch.inverse_ext(_spiral(n0, n1, s)) for s in np.linspace(0, 1, samples)]
        return pts, ta, tb
    # local spiral in D_half = -D0, with local times (t - (k-1))
    la, lb = ta - (k - 1), tb - (k - 1)
    raw = [-ch.inverse_ext(_spiral(la, lb, s))
           for s in np.linspace(0, 1, samples)]
    # pull back by the shared prefix (sector lifts)
    prefix = itinerary_of_angle(theta_a).bits(k - 1)
    for sym in reversed(range(k - 1)):
        raw = R._sector_lift(raw, prefix[sym])
    return raw, ta, tb


_SPIRAL_EDGE_EPS = 1e-9


def _spiral(n0: float, n1: float, s: float) -> complex:
    # clamp off the slit ends; the true edge points are the ray vertices
    s = _SPIRAL_EDGE_EPS + (1 - 2 * _SPIRAL_EDGE_EPS) * s
    rad = n0 ** (1 - s) * n1 ** s if n0 > 0 and n1 > 0 else n0 * (1 - s) + n1 * s
    return rad * cmath.exp(1j * math.pi * (-1 + 2 * s))


# --------------------------------------------------------- universal puzzles

@dataclass(frozen=True)
class PieceLabel:
    level: int
    arc: tuple            # (theta_i, theta_{i+1}) exact fractions


def _marked_arcs(p, q, n):
    pts = TW.level_set(p, q, n)
    return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]


class UniversalYoccoz:
    """Sector-box model: level-n pieces live between the unit circle and the
    equipotential exp(l0/2^n), cut along the radial lines through Z_n."""

    def __init__(self, p, q, nmax, l0: float = DEFAULT_L0):
        if nmax > 12:
            raise ParamandelError("universal puzzle depth capped at 12")
        self.p, self.q, self.nmax, self.l0 = p, q, nmax, l0
        self.labels = [PieceLabel(n, arc)
                       for n in range(nmax + 1) for arc in _marked_arcs(p, q, n)]

    def radius(self, n):
        return math.exp(self.l0 / 2 ** n)

    def polygon(self, lab: PieceLabel):
        a, b = lab.arc
        rr = self.radius(lab.level)
        out = []
        for s in np.linspace(0, 1, 9):
            out.append(cmath.rect(1 + s * (rr - 1), 2 * math.pi * float(a)))
        for s in np.linspace(0, 1, 17):
            ang = float(a) + float((b - a) % 1) * s
            out.append(cmath.rect(rr, 2 * math.pi * ang))
        for s in np.linspace(0, 1, 9):
            out.append(cmath.rect(rr - s * (rr - 1), 2 * math.pi * float(b)))
        for s in np.linspace(0, 1, 17):
            ang = float(b) - float((b - a) % 1) * s
            out.append(cmath.rect(1.0, 2 * math.pi * ang))
        return out

    def probe(self, lab: PieceLabel):
        a, b = lab.arc
        mid = float(a) + float((b - a) % 1) / 2
        rr = self.radius(lab.level)
        return cmath.rect(math.sqrt(rr), 2 * math.pi * mid)

    def nested(self, inner: PieceLabel, outer: PieceLabel) -> bool:
        if inner.level < outer.level:
            return False
        if inner.level == outer.level:
            return inner.arc == outer.arc
        return _arc_subset(inner.arc, outer.arc)

    def image(self, lab: PieceLabel):
        if lab.level == 0:
            return None
        return PieceLabel(lab.level - 1, (double(lab.arc[0]), double(lab.arc[1])))

    def beta_flag(self, lab):
        return _arc_contains_closed(lab.arc, Fraction(0))

    def beta_prime_flag(self, lab):
        return _arc_contains_closed(lab.arc, HALF)


def _arc_subset(inner, outer) -> bool:
    a, b = inner
    x, y = outer
    la, lo = (b - a) % 1, (y - x) % 1
    off = (a - x) % 1
    return off + la <= lo


def _arc_contains_closed(arc, t) -> bool:
    a, b = arc
    off = (t - a) % 1
    return off <= (b - a) % 1


class UniversalParabolic:
    """Lens model: level-n pieces are bounded by the shortcut arc of the pair
    of parabolic rays through h(Z_n) and the circle arc between them."""

    def __init__(self, p, q, nmax, ray_depth: int = 24, h_depth: int = 40):
        if nmax > 12:
            raise ParamandelError("universal puzzle depth capped at 12")
        self.p, self.q, self.nmax = p, q, nmax
        self.h_depth = h_depth
        self.ray_depth = ray_depth
        self.labels = [PieceLabel(n, arc)
                       for n in range(nmax + 1) for arc in _marked_arcs(p, q, n)]
        self._rays = {}
        self._polys = {}

    def ray(self, theta: Fraction):
        theta = theta % 1
        if theta not in self._rays:
            self._rays[theta] = R.trace_ray_Bl(
                itinerary_of_angle(theta), self.ray_depth, external=True)
        return self._rays[theta]

    def polygon(self, lab: PieceLabel):
        if lab in self._polys:
            return self._polys[lab]
        a, b = lab.arc
        cut, ta, tb = shortcut_arc_model(a, b)
        ra = [z for t, z in self.ray(a).vertices if t <= -ta + 1e-9]
        rb = [z for t, z in self.ray(b).vertices if t <= -tb + 1e-9]
        # orient the shortcut from ray(a)'s exit point to ray(b)'s
        if ra and cut and abs(cut[0] - ra[0]) > abs(cut[-1] - ra[0]):
            cut = cut[::-1]
        circ = []
        ha, hb = h_circle(a, self.h_depth), h_circle(b, self.h_depth)
        pa, pb = cmath.phase(ha), cmath.phase(hb)
        while pb <= pa:
            pb += 2 * math.pi
        for s in np.linspace(0, 1, 17):
            circ.append(cmath.rect(1.0, pb + (pa - pb) * s))
        poly = list(reversed(ra)) + cut + rb + circ
        self._polys[lab] = poly
        return poly

    def probe(self, lab: PieceLabel):
        a, b = lab.arc
        mid = (a + (b - a) % 1 / 2) % 1
        w = h_circle(mid, self.h_depth) if isinstance(mid, Fraction) else cmath.exp(
            2j * math.pi * mid)
        return w * (1 + 1e-4)

    def nested(self, inner: PieceLabel, outer: PieceLabel) -> bool:
        if inner.level < outer.level:
            return False
        if inner.level == outer.level:
            return inner.arc == outer.arc
        return _winding(self.polygon(outer), self.probe(inner))

    def image(self, lab: PieceLabel):
        """Geometric image label: apply Bl to the probe and locate it among the
        pieces one level down; the root pieces follow the g-hat convention
        g(P_n(beta)) = g(P_n(beta')) = P_{n-1}(beta)."""
        if lab.level == 0:
            return None
        down = [l2 for l2 in self.labels if l2.level == lab.level - 1]
        if self.beta_flag(lab) or self.beta_prime_flag(lab):
            for l2 in down:
                if self.beta_flag(l2):
                    return l2
        z = complex(Bl(self.probe(lab)))
        z = z / abs(z) * (1 + 1e-4)      # project back toward the circle trace
        for l2 in down:
            if _winding(self.polygon(l2), z):
                return l2
        return None

    def beta_flag(self, lab):
        return _arc_contains_closed(lab.arc, Fraction(0))

    def beta_prime_flag(self, lab):
        return _arc_contains_closed(lab.arc, HALF)


def _winding(poly, z) -> bool:
    if not poly:
        return False
    wind = 0.0
    n = len(poly)
    for i in range(n):
        a = poly[i] - z
        b = poly[(i + 1) % n] - z
        if a == 0 or b == 0:
            return True
        wind += cmath.phase(b / a)
    return abs(wind) > math.pi


def annulus_nondegenerate(inner_arc, outer_arc, geom_sep: float | None = None) -> bool:
    """Combinatorial non-degeneracy: the inner closure shares no boundary label
    (arc endpoint) with the outer; the circle side is the Julia placeholder and
    is not counted. An optional geometric separation refines the verdict."""
    shared = set(inner_arc) & set(outer_arc)
    if shared:
        return False
    if geom_sep is not None and geom_sep <= 1e-5:
        return False
    return True


@dataclass
class ChiReport:
    labels: list
    level_ok: bool
    nesting_ok: bool
    dynamics_ok: bool
    criticality_ok: bool
    annuli_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (self.level_ok and self.nesting_ok and self.dynamics_ok
                and self.criticality_ok and self.annuli_ok)


def chi_correspondence(p: int, q: int, n: int) -> ChiReport:
    """The label bijection between the universal Yoccoz and universal parabolic
    puzzles (identity on (level, arc)), with both sides' structure computed by
    their own route and compared."""
    uy = UniversalYoccoz(p, q, n)
    up = UniversalParabolic(p, q, n)
    labels = uy.labels
    level_ok = {(l.level, l.arc) for l in labels} == {(l.level, l.arc) for l in up.labels}

    nest_mismatch = []
    for x in labels:
        for y in labels:
            if y.level >= x.level and (x, y) != (y, x) and y.level - x.level > 1:
                continue
            a = uy.nested(x, y)
            b = up.nested(x, y)
            if a != b:
                nest_mismatch.append((x, y, a, b))
    dyn_mismatch = []
    for x in labels:
        iy = uy.image(x)
        ipar = up.image(x)
        if x.level >= 1 and (uy.beta_flag(x) or uy.beta_prime_flag(x)):
            iy = next(l2 for l2 in labels
                      if l2.level == x.level - 1 and uy.beta_flag(l2))
        if iy != ipar:
            dyn_mismatch.append((x, iy, ipar))
    crit_mismatch = [x for x in labels
                     if uy.beta_flag(x) != up.beta_flag(x)
                     or uy.beta_prime_flag(x) != up.beta_prime_flag(x)]
    ann_mismatch = []
    for x in labels:
        for y in labels:
            if x.level == y.level + 1 and uy.nested(x, y):
                a = annulus_nondegenerate(x.arc, y.arc)
                b = annulus_nondegenerate(x.arc, y.arc, _poly_separation(up, x, y))
                if a != b:
                    ann_mismatch.append((x, y))
    return ChiReport(
        labels=labels,
        level_ok=level_ok,
        nesting_ok=not nest_mismatch,
        dynamics_ok=not dyn_mismatch,
        criticality_ok=not crit_mismatch,
        annuli_ok=not ann_mismatch,
        details={"nesting": nest_mismatch, "dynamics": dyn_mismatch,
                 "criticality": crit_mismatch, "annuli": ann_mismatch},
    )


def _poly_separation(up: UniversalParabolic, inner, outer) -> float:
    if set(inner.arc) & set(outer.arc):
        return 0.0
    pa = up.polygon(inner)
    pb = up.polygon(outer)
    pa = pa[:: max(1, len(pa) // 40)]
    pb = pb[:: max(1, len(pb) // 40)]
    return min(abs(u - v) for u in pa for v in pb)


# ---------------------------------------------------------- dynamical pieces

class DynamicalPuzzle:
    """Level-n puzzle of Q_c or g_B in the p/q limb: pieces are the gaps of the
    co-landing tower, with ray-pair geometry for point location."""

    def __init__(self, plane: str, param, p: int, q: int, nmax: int,
                 ray_depth: int | None = None, tol: float = 1e-4):
        self.plane, self.param, self.p, self.q, self.nmax = plane, param, p, q, nmax
        if ray_depth is None:
            ray_depth = 160 if plane == "gB" else 80
        self.ray_depth = ray_depth
        self.tol = tol
        self._fam = {}
        self.tower = TW.tower_from_dynamics(plane, param, p, q, nmax,
                                            ray_depth=ray_depth, tol=tol,
                                            check_limb=False)
        self._polys = {}

    # --- rays
    def ray(self, theta: Fraction):
        theta = theta % 1
        if theta not in self._fam:
            lab = itinerary_of_angle(theta)
            fam = (R.trace_gB_family(self.param, lab, self.ray_depth)
                   if self.plane == "gB"
                   else R.trace_qc_family(self.param, theta, self.ray_depth))
            for key, ray in fam.items():
                ang = key.angle() if isinstance(key, Itinerary) else key
                self._fam[ang] = ray
        return self._fam[theta]

    def pieces(self, n: int):
        return self.tower.gaps(n)

    def piece_polygon(self, gap: TW.Gap):
        """Boundary polygon for winding queries: each chord contributes its
        co-landing ray pair (down ray x, landing, up ray y), each circle arc is
        crossed by the implicit straight top at the shortcut times."""
        key = (gap.level, gap.arcs)
        if key in self._polys:
            return self._polys[key]
        narcs = len(gap.arcs)
        times = {}
        for a, b in gap.arcs:
            _, _, ta, tb = shortcut_data(a, b)
            times[a] = ta
            times[b] = tb
        poly = []
        for i in range(len(gap.chords)):
            x, y = gap.chords[i]
            rx, ry = self.ray(x), self.ray(y)
            dx = [z for t, z in rx.vertices if t <= -times.get(x, 1) + 1e-9]
            dy = [z for t, z in ry.vertices if t <= -times.get(y, 1) + 1e-9]
            poly.extend(dx)
            land = None
            if rx.landing is not None and not rx.landing.at_infinity:
                land = rx.landing.z
            elif ry.landing is not None and not ry.landing.at_infinity:
                land = ry.landing.z
            if land is not None:
                poly.append(land)
            poly.extend(reversed(dy))
        self._polys[key] = poly
        return poly

    def piece_containing(self, z, n: int):
        z = complex(z)
        hits = [g for g in self.pieces(n) if _winding(self.piece_polygon(g), z)]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            return None
        hits.sort(key=lambda g: len(g.arcs))
        return hits[0]

    def critical_piece(self, n: int):
        for g in self.pieces(n):
            if g.is_critical():
                return g
        raise ParamandelError("no critical piece (terminal level?)")

    def alpha(self) -> complex:
        if self.plane == "gB":
            return -1.0 / complex(self.param)
        c = complex(self.param)
        return (1 - cmath.sqrt(1 - 4 * c)) / 2

    def beta(self) -> CPoint:
        if self.plane == "gB":
            return CPoint(at_infinity=True)
        c = complex(self.param)
        return CPoint.of((1 + cmath.sqrt(1 - 4 * c)) / 2)

    def fmap(self, z):
        if self.plane == "gB":
            B = complex(self.param)
            return z + B + 1.0 / z if z != 0 else complex("inf")
        return z * z + complex(self.param)

    def critical_point(self) -> complex:
        return -1.0 if self.plane == "gB" else 0.0


@dataclass
class Nest:
    labels: list                   # [(level, gap)] outermost first
    classification: str            # convergent-to-point | quadratic-like-end | undecided
    diameters: list = field(default_factory=list)
    period: int | None = None


def nest_of(puzzle: DynamicalPuzzle, z, maxlevel: int) -> Nest:
    labels = []
    diams = []
    for n in range(min(maxlevel, puzzle.nmax) + 1):
        g = puzzle.piece_containing(z, n)
        if g is None:
            break
        labels.append((n, g))
        pts = [x for x in puzzle.piece_polygon(g)]
        diams.append(max(abs(u - v) for u in pts for v in pts) if pts else float("inf"))
    cls = "undecided-at-depth"
    ren = TW.is_renormalizable(puzzle.tower)
    if diams and diams[-1] < 1e-3 and all(
            diams[i + 1] <= diams[i] + 1e-12 for i in range(len(diams) - 1)):
        cls = "convergent-to-point"
    elif ren is not None and abs(complex(z) - _critical_value(puzzle)) < 1e-9:
        cls = "quadratic-like-end"
    return Nest(labels, cls, diams, period=(ren[1] if ren else None))


def _critical_value(puzzle: DynamicalPuzzle):
    if puzzle.plane == "gB":
        return complex(puzzle.param) - 2.0
    return complex(puzzle.param)


# ----------------------------------------------------------- classification

@dataclass
class ParameterClass:
    category: str            # satellite-candidate | prebeta | capture | recurrent | undecided
    m: int | None = None
    r: int | None = None
    s: int | None = None
    witness: list = field(default_factory=list)


def classify_parameter(plane: str, param, p: int, q: int, depth: int = 12,
                       puzzle: DynamicalPuzzle | None = None) -> ParameterClass:
    """Finite-depth orbit classification of the critical point in the level-0
    and level-1 puzzle geometry (the dichotomy and its refinement, with the
    dyadic sub-wake address read off the escape)."""
    pz = puzzle or DynamicalPuzzle(plane, param, p, q, min(2, depth))
    crit = pz.critical_point()
    g0 = pz.critical_piece(0)
    poly0 = pz.piece_polygon(g0)
    horizon = depth * q + 2 * q
    orbit = [crit]
    for _ in range(horizon):
        orbit.append(pz.fmap(orbit[-1]))
    beta = pz.beta()
    # prebeta: the orbit hits beta exactly (for g_B: passes through the pole)
    for l, z in enumerate(orbit):
        if beta.at_infinity:
            if z == 0 or abs(z) > 1e12 or z != z or (isinstance(z, complex) and (
                    math.isinf(abs(z)))):
                return ParameterClass("prebeta", witness=[l])
        elif abs(z - beta.z) < 1e-9:
            return ParameterClass("prebeta", witness=[l])
    m = None
    for j in range(1, depth + 1):
        if not _winding(poly0, orbit[j * q]):
            m = j
            break
    if m is None:
        return ParameterClass("satellite-candidate")
    r = _dyadic_address(pz, m)
    # recurrence in the level-1 off-critical alpha pieces
    x1 = _x1_pieces(pz)
    returns = [l for l in range(m * q - 1, horizon)
               if any(_winding(pz.piece_polygon(g), orbit[l]) for g in x1)]
    if len(returns) >= 3:
        return ParameterClass("recurrent", m=m, r=r, s=m, witness=returns[:6])
    # capture: the tail never leaves the closed critical piece again
    tail_in = [_winding(poly0, orbit[j * q]) for j in range(m + 1, depth + 1)]
    if tail_in and all(tail_in):
        return ParameterClass("capture", m=m, r=r, s=m,
                              witness=[(m + 1) * q])
    return ParameterClass("undecided", m=m, r=r, s=m)


def _x1_pieces(pz: DynamicalPuzzle):
    """The recurrence gateway: level-1 pieces inside the piece of beta' (the
    gap whose closed arc carries angle 1/2) whose image is not the critical
    piece."""
    if pz.nmax < 1:
        return []
    gb_prime = next(g for g in pz.pieces(0)
                    if any(_arc_contains_closed(arc, HALF) for arc in g.arcs))
    out = []
    for g in pz.pieces(1):
        if not all(any(TW._arc_inside(arc, TW.Gap(0, (barc,), ()))
                       for barc in gb_prime.arcs) for arc in g.arcs):
            continue
        img = TW._gap_image(pz.tower, 1, g)
        if img.is_critical():
            continue
        out.append(g)
    return out


def _dyadic_address(pz: DynamicalPuzzle, m: int):
    """The odd r with the critical value inside the r/2^m dyadic sub-wake,
    decided by the tuned co-landing ray pairs."""
    v = _critical_value(pz)
    for r in range(1, 1 << m, 2):
        try:
            ta, tb = tuned_dyadic_pair(pz.p, pz.q, r, m)
            ra, rb = pz.ray(ta), pz.ray(tb)
        except ParamandelError:
            continue
        if ra.status != "landed" or rb.status != "landed":
            continue
        poly = ([z for _, z in ra.vertices]
                + [z for _, z in reversed(rb.vertices)])
        if _winding(poly, v):
            return r
    return None


# ------------------------------------------------------------ param puzzles

@dataclass
class ParameterPiece:
    arcs: tuple
    chords: tuple
    polygon: list

    def contains(self, B) -> bool:
        return _winding(self.polygon, complex(B))


@dataclass
class ParameterPuzzle:
    p: int
    q: int
    level: int
    pieces: list
    rays: dict
    clusters: list


def parameter_puzzle(p: int, q: int, n: int, ray_depth: int = 24,
                     land_tol: float = 5e-3) -> ParameterPuzzle:
    """Level-n parameter puzzle of the p/q wake in the B-plane.

    Traces the parameter rays of the level angles interior to the wake,
    clusters their landings, and forms the pieces as the faces of the
    resulting partial lamination closed off by the wake boundary pair.
    """
    if n > 8:
        raise ParamandelError("parameter puzzles capped at level 8")
    from .parameter import trace_parameter_ray
    lo, hi = wake_interval(p, q)
    interior = [t for t in TW.level_set(p, q, n) if lo < t < hi]
    rays = {}
    land = {}
    for t in interior:
        ray = trace_parameter_ray(itinerary_of_angle(t), ray_depth)
        rays[t] = ray
        if ray.status != "landed":
            raise UnresolvedLandingError("parameter ray did not land", [t])
        land[t] = ray.landing
    # cluster landings
    items = list(interior)
    parent = {t: t for t in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(items):
        for b in items[i + 1:]:
            if abs(land[a] - land[b]) <= land_tol:
                parent[find(a)] = find(b)
    clusters = {}
    for t in items:
        clusters.setdefault(find(t), []).append(t)
    classes = [frozenset(c) for c in clusters.values()]
    classes.append(frozenset({lo, hi}))          # the wake boundary pair
    faces = TW._faces(p, q, 0, _fake_partition(classes))
    pieces = []
    for f in faces:
        if any(_arc_contains_closed((a, b), _outside_probe(lo, hi)) for a, b in f.arcs):
            continue                              # the face outside the wake
        pieces.append(ParameterPiece(
            arcs=f.arcs, chords=f.chords,
            polygon=_parameter_piece_polygon(f, rays, lo, hi)))
    return ParameterPuzzle(p, q, n, pieces, rays, [sorted(c) for c in classes])


def _fake_partition(classes):
    return TW._canon(classes)


def _outside_probe(lo, hi):
    return (hi + (lo + 1 - hi) / 2) % 1


def _parameter_piece_polygon(face: TW.Gap, rays: dict, lo, hi):
    """Join the face's chords through the traced rays (ray down, landing, next
    ray up); chords at the wake boundary pair and the arc tops close with
    straight segments. Sampling geometry only, used for membership probes."""
    poly = []
    for i, arc in enumerate(face.arcs):
        if i >= len(face.chords):
            continue
        x, y = face.chords[i]
        rx, ry = rays.get(x), rays.get(y)
        if rx is not None:
            poly.extend(z for _, z in rx.vertices)
            if rx.landing is not None:
                poly.append(rx.landing)
        if ry is not None:
            poly.extend(z for _, z in reversed(ry.vertices))
    return poly
