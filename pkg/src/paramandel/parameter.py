"""Parameter-plane machinery: membership in M1 and M, the escape-locus
parametrization Upsilon, parameter rays in both planes, wake/limb
classification, and the finite-depth multiplier/tower matching map.

Membership kernels are vectorized numpy loops and the scalar predicates wrap
them with batch size one, so pixel renders and analytic code share one
implementation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import rays as R
from . import towers as TW
from .angles import Itinerary, itinerary_of_angle, rotation_cycle, wake_interval
from .circle import h_circle
from .errors import (ContinuationError, InvalidFractionError,
                     NewtonDivergenceError, NotInBasinError, ParamandelError,
                     ToleranceNotMetError, WakeMismatchError)
from .fatou import REGIME_RADIUS, GBFatou, blaschke_charts
from .maps import sqrt_B_of_A
from .sphere import CPoint

M1_DEFAULT_BUDGET = 20_000
M_DEFAULT_BUDGET = 1_000


@dataclass
class MembershipVerdict:
    inside: str                 # "inside" | "outside" | "undecided"
    witness: int | None = None  # outside: first index in the attracting regime
    budget: int = 0

    def __bool__(self):
        return self.inside != "outside"


# ------------------------------------------------------------------- kernels

def gb_escape_batch(B, z0, budget: int, return_w: bool = False):
    """Escape of g_B orbits toward the parabolic point, in the w = z/B chart.

    Returns (escaped, steps, pole_hit): escaped marks entry into the regime
    Re w > 0, |w| > REGIME_RADIUS; steps is the entry index (or the count so
    far); pole_hit marks exact passes through the pole (grand orbit of the
    fixed point: treated as non-escaping). With return_w the final w is
    appended (frozen at the escape step for escaped entries).
    """
    B = np.asarray(B, dtype=complex)
    z0 = np.asarray(z0, dtype=complex)
    B, z0 = np.broadcast_arrays(B, z0)
    w = (z0 / B).astype(complex).copy()
    a = 1.0 / (B * B)
    escaped = np.zeros(w.shape, dtype=bool)
    pole = np.zeros(w.shape, dtype=bool)
    steps = np.zeros(w.shape, dtype=np.int64)
    active = np.ones(w.shape, dtype=bool)
    for _ in range(budget):
        if not active.any():
            break
        done = active & (w.real > 0) & (np.abs(w) > REGIME_RADIUS)
        escaped |= done
        active &= ~done
        hit = active & (np.abs(w) < 1e-14)
        pole |= hit
        active &= ~hit
        if active.any():
            wa = w[active]
            w[active] = wa + 1 + a[active] / wa
            steps[active] += 1
    if return_w:
        return escaped, steps, pole, w
    return escaped, steps, pole


def qc_escape_batch(c, z0, budget: int):
    """Strict radius-2 escape for Q_c (|z| > 2 so the Chebyshev orbit stays)."""
    c = np.asarray(c, dtype=complex)
    z0 = np.asarray(z0, dtype=complex)
    c, z0 = np.broadcast_arrays(c, z0)
    z = z0.astype(complex).copy()
    escaped = np.zeros(z.shape, dtype=bool)
    steps = np.zeros(z.shape, dtype=np.int64)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(budget):
        if not active.any():
            break
        done = active & (np.abs(z) > 2.0)
        escaped |= done
        active &= ~done
        if active.any():
            za = z[active]
            z[active] = za * za + c[active]
            steps[active] += 1
    return escaped, steps


def in_M1(B, budget: int = M1_DEFAULT_BUDGET, refine_witness: bool = False) -> MembershipVerdict:
    """Tri-state membership of [g_B] in M1: outside iff the orbit of the
    second critical value v_B = B-2 is attracted to the parabolic point.

    B = 0 (the degenerate cusp A = 1) is inside by convention: both critical
    orbits converge yet the Julia set is the connected circle through infinity.
    """
    B = _canonical_B(B)
    if B == 0:
        return MembershipVerdict("inside", budget=budget)
    escaped, steps, pole = gb_escape_batch(np.array([B]), np.array([B - 2.0]), budget)
    if pole[0]:
        return MembershipVerdict("inside", budget=budget)  # exact tip orbit
    if not escaped[0]:
        orb = _short_cycle_check(B)
        return MembershipVerdict("inside" if orb else "undecided", budget=budget)
    n = int(steps[0])
    if refine_witness:
        n = _refine_omega_witness(B, n)
    return MembershipVerdict("outside", witness=n, budget=budget)


def _canonical_B(B) -> complex:
    B = complex(B)
    if B.real < 0 or (B.real == 0 and B.imag < 0):
        B = -B
    return B


def _short_cycle_check(B, max_period: int = 64, eps: float = 1e-13) -> bool:
    """Detect an exactly (pre)periodic critical orbit (g_1(-1) = -1 style)."""
    z = B - 2.0
    seen = []
    for _ in range(max_period):
        for w in seen:
            if abs(w - z) < eps * max(1.0, abs(z)):
                return True
        seen.append(z)
        if z == 0:
            return True
        z = z + B + 1.0 / z
        if abs(z) > 1e6:
            return False
    return False


def _refine_omega_witness(B, n_regime: int) -> int:
    """Minimal n with g^n(v_B) in the petal Omega^B (Fatou round trip)."""
    gb = GBFatou(B)
    orbit = [B - 2.0]
    for _ in range(n_regime):
        z = orbit[-1]
        orbit.append(z + B + 1.0 / z)
    n = n_regime
    while n > 0:
        z = orbit[n - 1]
        try:
            t = gb.phi(z)
        except NotInBasinError:
            break
        if t.real <= 0:
            break
        if abs(gb.psi(t) - z) > 1e-6 * max(1.0, abs(z)):
            break
        n -= 1
    return n


def in_M(c, budget: int = M_DEFAULT_BUDGET) -> MembershipVerdict:
    """Standard escape-time membership for the quadratic connectedness locus."""
    escaped, steps = qc_escape_batch(np.array([complex(c)]), np.array([0j]), budget)
    if escaped[0]:
        return MembershipVerdict("outside", witness=int(steps[0]), budget=budget)
    return MembershipVerdict("inside", budget=budget)


# ------------------------------------------------------------------- Upsilon

UPSILON_BASE = 50.0


class UpsilonTracker:
    """Evaluates Upsilon(B) = position of the second critical value in the
    Blaschke model, by continuation from the base parameter.

    Keeps the last (B, value) pair; nearby evaluations reuse it as the branch
    reference for the Bl-pullback chain.
    """

    def __init__(self, budget: int = M1_DEFAULT_BUDGET):
        self.budget = budget
        self.B = None
        self.value = None

    def _eval_here(self, B, ref_value):
        gb = GBFatou(B, budget=self.budget, verify=False)
        u = gb.phi(B - 2.0)                    # Fatou coordinate of v_B
        ch = blaschke_charts()
        m = 0
        while u.real + m < 25.0:
            m += 1
        refs = None
        if ref_value is not None:
            orbit = [ref_value]
            for _ in range(m):
                orbit.append(complex(R.Bl(orbit[-1])))
            # pullback j lands at Fatou value u+m-j-1; guide it with Bl^(m-j-1)
            refs = list(reversed(orbit[:-1]))
        y = ch.inverse_ext(u, chain_refs=refs)
        res = abs(ch.phi_ext(y) - u)
        if res > 1e-6:
            raise ContinuationError(f"Fatou-time coherence {res:.2e} at B={B}")
        return y

    def eval_local(self, B) -> complex:
        """Evaluate at a parameter close to the tracker state, without the
        polar-path machinery (basin failures surface as exceptions)."""
        B = _canonical_B(B)
        val = self._eval_here(B, self.value)
        self.B, self.value = B, val
        return val

    def eval(self, B) -> complex:
        B = _canonical_B(B)
        verdict = in_M1(B, self.budget)
        if verdict.inside != "outside":
            raise NotInBasinError(f"B={B} is not outside M1 at this budget")
        if self.B is None:
            start = complex(max(UPSILON_BASE, 3 * abs(B)))
            self.value = self._eval_here(start, None)
            self.B = start
        return self._continue_to(B)

    def _continue_to(self, B) -> complex:
        # polar path: rotate at constant radius, then shrink radially
        waypoints = []
        r0, a0 = abs(self.B), cmath.phase(self.B)
        r1, a1 = abs(B), cmath.phase(B)
        rbig = max(r0, r1, UPSILON_BASE)
        if abs(r0 - rbig) > 1e-12:
            waypoints.append(cmath.rect(rbig, a0))
        turns = max(1, int(abs(a1 - a0) / 0.2))
        for k in range(1, turns + 1):
            waypoints.append(cmath.rect(rbig, a0 + (a1 - a0) * k / turns))
        waypoints.append(B)
        for target in waypoints:
            self._step_to(target)
        return self.value

    def _step_to(self, target):
        while True:
            span = target - self.B
            if abs(span) < 1e-15:
                return
            step = 1.0
            while True:
                Bt = self.B + span * step
                Bt = _canonical_B(Bt)
                try:
                    if in_M1(Bt, self.budget).inside != "outside":
                        raise ContinuationError("path touched M1")
                    val = self._eval_here(Bt, self.value)
                    jump = abs(val - self.value)
                    if jump > 0.75:
                        raise ContinuationError(f"value jump {jump:.2f}")
                    self.B, self.value = Bt, val
                    break
                except (ContinuationError, NotInBasinError, ParamandelError):
                    step /= 2.0
                    if step < 1e-6:
                        raise ContinuationError(
                            f"continuation stalled between {self.B} and {target}")


def upsilon(B, budget: int = M1_DEFAULT_BUDGET) -> complex:
    """Upsilon(B) for B outside M1; |phi_ext(Upsilon(B)) - phi_B(v_B)| < 1e-6."""
    return UpsilonTracker(budget).eval(B)


# ------------------------------------------------------------ parameter rays

@dataclass
class ParameterRay:
    label: Itinerary
    plane: str                       # "M1" | "M"
    vertices: list = field(default_factory=list)   # (time, parameter value)
    status: str = "traced"
    landing: complex | None = None

    def tail_points(self, k: int = 12):
        return [z for _, z in self.vertices[-k:]]


def trace_parameter_ray(label, depth: int, samples_per_unit: int = 4,
                        budget: int = M1_DEFAULT_BUDGET,
                        newton_tol: float = 2e-7) -> ParameterRay:
    """The parameter ray of the given itinerary in the B-plane.

    Solves Upsilon(B) = (model ray point) by Newton in B, marching the target
    in the model plane from the base value to the ray's edge and then down the
    traced model ray, with adaptive subdivision (the map compresses the far
    parameter range enormously, so the B steps are controlled by value steps).
    """
    label = R._as_itinerary(label)
    model = R.trace_ray_Bl(label, depth + 1, external=True)
    sym = label.bits(1)[0]
    side = -1.0 if sym == 0 else 1.0
    tracker = UpsilonTracker(budget)
    tracker.eval(_canonical_B(UPSILON_BASE))
    ch = blaschke_charts()
    # target path: swing off the spine to the ray's edge side, then follow it
    u0 = ch.phi_ext(tracker.value)
    pre = []
    for s in np.linspace(0.0, 1.0, 8)[1:]:
        pre.append(ch.inverse_ext(complex(u0.real * (1 - s) - 0.10 * s,
                                          u0.imag * (1 - s) + side * 0.35 * s)))
    for s in (0.28, 0.2, 0.12, 0.06, 0.02):
        pre.append(ch.inverse_ext(complex(-0.12, side * s)))
    stride = max(1, R.ARC_SAMPLES // samples_per_unit)
    ray_targets = [(t, z) for i, (t, z) in enumerate(model.vertices)
                   if i % stride == 0 and t < -0.01]
    ray = ParameterRay(label=label, plane="M1")
    for target in pre:
        _march_upsilon(tracker, target, newton_tol)
    # shallow part by value continuation in the model plane
    for t, target in ray_targets:
        if t <= -1.2:
            break
        _march_upsilon(tracker, target, newton_tol)
        ray.vertices.append((t, tracker.B))
    # deep part by the dynamical characterization: v_B on the dynamical ray
    B = tracker.B
    for t, _ in ray_targets:
        if t > -1.2:
            continue
        B = _newton_dynamical_ray(B, label, t)
        ray.vertices.append((t, B))
    _parameter_ray_landing(ray)
    return ray


def _gb_ray_point(B, label, t_target):
    """The vertex of the dynamical ray of `label` for g_B nearest time t."""
    depth = int(math.ceil(-t_target)) + 2
    fam = R.trace_gB_family(B, label, depth)
    ray = fam[label]
    best = min(ray.vertices, key=lambda tv: abs(tv[0] - t_target))
    if abs(best[0] - t_target) > 0.2 and ray.status == "bumped" \
            and ray.bump_point is not None:
        return ray.bump_point
    return best[1]


def _newton_dynamical_ray(B, label, t, tol: float = 1e-9, itmax: int = 16):
    """Solve v_B = (dynamical ray point at time t) in B: the parameter sits on
    the parameter ray exactly when the critical value sits on the dynamical
    ray (and the itinerary tracer pins the sheet)."""
    for _ in range(itmax):
        f = (B - 2.0) - _gb_ray_point(B, label, t)
        if abs(f) < tol:
            return B
        h = 1e-7 * max(1.0, abs(B))
        fp = (B + h - 2.0) - _gb_ray_point(B + h, label, t)
        d = (fp - f) / h
        if d == 0:
            break
        step = f / d
        if abs(step) > 0.1 * max(1.0, abs(B)):
            step *= 0.1 * max(1.0, abs(B)) / abs(step)
        B = _canonical_B(B - step)
    f = (B - 2.0) - _gb_ray_point(B, label, t)
    if abs(f) < 1e-5:
        return B
    raise NewtonDivergenceError(f"dynamical-ray Newton stalled at time {t}",
                                last_good=B)


def _march_upsilon(tracker: UpsilonTracker, target, tol, max_splits: int = 48):
    """Continue the tracker until Upsilon(B) = target, subdividing the value
    path whenever the local Newton solve misbehaves."""
    stack = [complex(target)]
    splits = 0
    while stack:
        sub = stack[-1]
        try:
            _newton_local(tracker, sub, tol)
            stack.pop()
        except (ParamandelError, ZeroDivisionError):
            splits += 1
            if splits > max_splits:
                raise ContinuationError(f"value path stalled toward {target}")
            stack.append((tracker.value + sub) / 2.0)


def _phi_ext_solve(seed, u, tol: float = 1e-11, itmax: int = 40,
                   patch: float = 0.8) -> complex:
    """Solve phi_ext(y) = u by Newton from the seed; the solution is pinned to
    the seed's sheet by the step cap."""
    ch = blaschke_charts()
    y = complex(seed)
    for _ in range(itmax):
        val, dv = ch.phi_ext_d(y)
        if dv == 0:
            break
        step = (val - u) / dv
        if abs(step) > 0.35:
            step *= 0.35 / abs(step)
        y = y - step
        if abs(y - seed) > patch:
            raise ContinuationError("left the seed's sheet patch")
        if abs(step) < tol:
            return y
    val, _ = ch.phi_ext_d(y)
    if abs(val - u) < 1e-8:
        return y
    raise ToleranceNotMetError("phi_ext Newton stalled")


def _upsilon_near(B, target, budget: int) -> complex:
    """Upsilon(B) for B whose value lies near `target` (the sheet anchor)."""
    gb = GBFatou(B, budget=budget, verify=False)
    u = gb.phi(B - 2.0)
    return _phi_ext_solve(target, u)


def _newton_local(tracker: UpsilonTracker, target, tol, itmax: int = 12):
    B = tracker.B
    ok_B, ok_val = tracker.B, tracker.value
    if abs(ok_val - target) > 0.6:
        raise ContinuationError("target too far from the tracker state")
    best = None
    best_err = float("inf")
    for _ in range(itmax):
        v = _upsilon_near(B, target, tracker.budget)
        err = abs(v - target)
        if err < best_err:
            best, best_err = (B, v), err
        if err < tol:
            tracker.B, tracker.value = B, v
            return B
        h = 1e-6 * max(1.0, abs(B))
        vp = _upsilon_near(B + h, target, tracker.budget)
        d = (vp - v) / h
        if d == 0:
            break
        step = (v - target) / d
        cap = 0.25 * max(1.0, abs(B))
        if abs(step) > cap:
            tracker.B, tracker.value = ok_B, ok_val
            raise ContinuationError("Newton step too large; subdividing")
        B = _canonical_B(B - step)
    if best is not None and best_err < 100 * tol:
        tracker.B, tracker.value = best
        return best[0]
    tracker.B, tracker.value = ok_B, ok_val
    raise NewtonDivergenceError(f"parameter ray Newton stalled near {B}",
                                last_good=ok_B)


def _parameter_ray_landing(ray: ParameterRay, tol: float = 2e-3):
    if len(ray.vertices) < 6:
        return
    pts = ray.tail_points(10)
    diam = max(abs(p - q) for p in pts for q in pts)
    if diam < tol:
        s0, s1, s2 = pts[-3], pts[-2], pts[-1]
        den = s2 - 2 * s1 + s0
        ray.status = "landed"
        ray.landing = (s2 * s0 - s1 * s1) / den if abs(den) > 1e-30 else s2
        return

    last = ray.vertices[-1][1]
    sane = max(0.25, 20 * diam)
    n = len(ray.vertices)
    candidates = []

    # geometric tails (repelling landing points): Aitken
    def aitken(k, s):
        s0, s1, s2 = (ray.vertices[k - 2 * s][1], ray.vertices[k - s][1],
                      ray.vertices[k][1])
        den = s2 - 2 * s1 + s0
        return (s2 * s0 - s1 * s1) / den if abs(den) > 1e-30 else None

    if n >= 9:
        a1 = aitken(n - 1, 2)
        a2 = aitken(n - 2, 3)
        if a1 is not None and a2 is not None:
            candidates.append((abs(a1 - a2), a1))

    # parabolic access (dyadic tips): B(t) ~ B_inf + c/t + d/t^2
    def extrap(idx):
        xs, bs = [], []
        for i in idx:
            t, b = ray.vertices[i]
            xs.append(1.0 / t)
            bs.append(b)
        x1, x2, x3 = xs
        b1, b2, b3 = bs
        return (b1 * x2 * x3 / ((x1 - x2) * (x1 - x3))
                + b2 * x1 * x3 / ((x2 - x1) * (x2 - x3))
                + b3 * x1 * x2 / ((x3 - x1) * (x3 - x2)))

    span = max(3, n // 4)
    if n > 2 * span + 2:
        e1 = extrap((n - 1, n - 1 - span, n - 1 - 2 * span))
        e2 = extrap((n - 2, n - 2 - span, n - 2 - 2 * span))
        candidates.append((abs(e1 - e2), e1))

    # root landings carry a log correction: fit B + c/t + d log(t)/t^2
    def logfit(tmin):
        pts2 = [(abs(t), b) for t, b in ray.vertices if abs(t) >= tmin]
        if len(pts2) < 6:
            return None
        ts = np.array([t for t, _ in pts2])
        bs = np.array([b for _, b in pts2])
        basis = np.vstack([np.ones_like(ts), 1 / ts, np.log(ts) / ts ** 2]).T
        coef, *_ = np.linalg.lstsq(basis, bs, rcond=None)
        return coef[0]

    tmax = abs(ray.vertices[-1][0])
    f1 = logfit(tmax / 3)
    f2 = logfit(tmax / 2)
    if f1 is not None and f2 is not None:
        candidates.append((abs(f1 - f2) / 2, f1))

    # the estimator with the best self-agreement wins, if consistent enough
    candidates = [(d, e) for d, e in candidates if abs(e - last) < sane]
    if candidates:
        d, e = min(candidates, key=lambda p: p[0])
        if d < tol / 2:
            ray.status = "landed"
            ray.landing = e


def mandel_parameter_ray(theta, depth: int, samples_per_unit: int = 8,
                         l0: float = 1.0) -> ParameterRay:
    """Standard external parameter ray of the Mandelbrot set at angle theta.

    Newton on Q_c^N(c) = W along the field line; the ladder starts at a high
    potential where the Boettcher chart is close to the identity (this pins
    the branch) and halves down; vertices at times -log2(l0/potential)."""
    theta = theta if isinstance(theta, Fraction) else Fraction(theta)
    lab = itinerary_of_angle(theta)
    ray = ParameterRay(label=lab, plane="M")
    P0 = 24.0
    c = None
    steps = int((depth + math.log2(P0 / l0)) * samples_per_unit) + 1
    for j in range(steps):
        pot = P0 * 2.0 ** (-j / samples_per_unit)
        N = max(0, int(math.ceil(math.log2(max(1e-12, 20.0 / pot)))))
        W = cmath.exp((pot * 2 ** N) + 2j * cmath.pi * float(theta) * (2 ** N))
        if pot >= 4.0:
            # Boettcher is near the identity: reseed directly each rung
            c = cmath.exp(pot + 2j * cmath.pi * float(theta)) - 0.5
        c = _newton_mandel(c, W, N)
        t = -math.log2(l0 / pot)
        if t < 0:
            ray.vertices.append((t, c))
    _parameter_ray_landing(ray, tol=5e-3)
    return ray


def _newton_mandel(c, W, N, itmax: int = 60, tol: float = 1e-13):
    for _ in range(itmax):
        z = c
        dz = 1.0 + 0j
        over = False
        for _k in range(N):
            dz = 2.0 * z * dz + 1.0
            z = z * z + c
            if abs(z) > 1e140:
                over = True
                break
        if over:
            c = c * 0.98
            continue
        f = z - W
        if dz == 0:
            break
        step = f / dz
        cap = 0.6 * max(1.0, abs(c))
        if abs(step) > cap:
            step *= cap / abs(step)
        c = c - step
        if abs(step) < tol * max(1.0, abs(c)):
            return c
    return c


# ---------------------------------------------------------- multiplier match

def multiplier_match(A) -> complex:
    """The unique c whose fixed point has multiplier A: c = A/2 - A^2/4."""
    A = complex(A)
    return A / 2.0 - A * A / 4.0


# ------------------------------------------------------------------ limbs

def yoccoz_log_disk_holds(A, p: int, q: int) -> bool:
    """log A lies in the closed disk of radius log4/q centered log4/q + 2pi i p/q."""
    A = complex(A)
    r = math.log(4.0) / q
    target = 2.0 * math.pi * p / q
    arg = cmath.phase(A)
    while arg < target - math.pi:
        arg += 2 * math.pi
    while arg > target + math.pi:
        arg -= 2 * math.pi
    logA = complex(math.log(abs(A)), arg)
    return abs(logA - complex(r, target)) <= r * (1 + 1e-9)


def _farey_fractions(qmax: int):
    out = []
    for q in range(2, qmax + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def limb_of(B, qmax: int = 24, ray_depth: int = 160, tol: float = 1e-4):
    """The p/q limb containing B, or "central" when |A| <= 1.

    Uses the Yoccoz log-disk bound as a shortlist and confirms by co-landing
    of the rotation cycle's rays at the fixed point -1/B.
    """
    B = _canonical_B(B)
    A = 1 - B * B
    if abs(A) <= 1.0:
        return "central"
    alpha = -1.0 / B
    for p, q in _farey_fractions(qmax):
        if not yoccoz_log_disk_holds(A, p, q):
            continue
        try:
            cyc = rotation_cycle(p, q)
            fam = R.trace_gB_family(B, itinerary_of_angle(cyc[0]), ray_depth)
        except ParamandelError:
            continue
        pts = []
        for lab, ray in fam.items():
            if ray.status != "landed" or ray.landing.at_infinity:
                pts = None
                break
            pts.append(ray.landing.z)
        if pts and max(abs(z - alpha) for z in pts) <= tol:
            if not yoccoz_log_disk_holds(A, p, q):
                raise WakeMismatchError("log-disk bound failed post-hoc")
            return (p, q)
    raise WakeMismatchError(f"no wake with q <= {qmax} found for B={B}")


# ---------------------------------------------------------------- Psi^1

@dataclass
class Psi1Region:
    """Finite-depth image of Psi^1: either a point (multiplier matching on the
    closed disk) or a parameter-puzzle region of M bounded by co-landing
    parameter-ray pairs of the matching finite tower."""

    kind: str                      # "point" | "region"
    c: complex | None = None
    p: int | None = None
    q: int | None = None
    depth: int | None = None
    tower: object | None = None
    chords: tuple = ()             # ((t, t'), ...) boundary angle pairs
    boundary: list = field(default_factory=list)   # closed polyline in c-plane
    diameter: float | None = None

    def contains(self, c) -> bool:
        if self.kind == "point":
            return abs(complex(c) - self.c) < 1e-9
        return _winding_inside(self.boundary, complex(c))


def _winding_inside(poly, z) -> bool:
    if not poly:
        return False
    wind = 0.0
    for i in range(len(poly) - 1):
        a, b = poly[i] - z, poly[i + 1] - z
        if a == 0 or b == 0:
            return True
        d = cmath.phase(b / a)
        wind += d
    return abs(wind) > math.pi


def psi1_approx(B, depth: int, ray_depth: int | None = None,
                mandel_ray_depth: int = 14) -> Psi1Region:
    """Finite-depth combinatorial approximation of Psi^1(B).

    |A| <= 1: exact multiplier matching. Otherwise the tower of B to level
    depth+1 selects the parameter-puzzle piece of M (bounded by the parameter
    rays of the critical value gap's boundary chords) containing every c with
    the same finite tower.
    """
    B = _canonical_B(B)
    A = 1 - B * B
    if abs(A) <= 1.0 + 1e-12:
        return Psi1Region(kind="point", c=multiplier_match(A))
    p, q = limb_of(B)
    tw = TW.tower_from_dynamics("gB", B, p, q, depth + 1,
                                ray_depth=ray_depth, check_limb=False)
    return psi1_region_of_tower(tw, depth, mandel_ray_depth)


def psi1_region_of_tower(tw, depth: int, mandel_ray_depth: int = 14) -> Psi1Region:
    """The M-side parameter region of a fertile tower truncated at depth+1."""
    sub = tw.restricted(depth + 1)
    cvg = TW.critical_value_gap(sub)
    chords = tuple(cvg.chords)
    boundary = []
    land = {}
    for x, y in chords:
        for t in (x, y):
            if t not in land:
                ray = mandel_parameter_ray(t, mandel_ray_depth)
                land[t] = ray
    # walk the gap boundary: arc (equipotential top), then chord (ray pair)
    for i, arc in enumerate(cvg.arcs):
        a, b = arc
        for s in np.linspace(0.0, 1.0, 9):
            ang = float(a) + float((b - a) % 1) * s
            boundary.append(cmath.exp(1.0 * 2.0 ** (-depth) + 2j * math.pi * ang))
        if i < len(cvg.chords):
            x, y = cvg.chords[i]
            rx, ry = land[x], land[y]
            boundary.extend(z for _, z in rx.vertices)
            if rx.landing is not None:
                boundary.append(rx.landing)
            boundary.extend(z for _, z in reversed(ry.vertices))
    if boundary:
        boundary.append(boundary[0])
    pts = [z for z in boundary]
    diam = max((abs(u - v) for u in pts for v in pts), default=None)
    # diameter of the landing cluster is the meaningful shrink measure
    lands = [r.landing for r in land.values() if r.landing is not None]
    if len(lands) >= 2:
        diam = max(abs(u - v) for u in lands for v in lands)
    return Psi1Region(kind="region", p=tw.p, q=tw.q, depth=depth, tower=sub,
                      chords=chords, boundary=boundary, diameter=diam)
