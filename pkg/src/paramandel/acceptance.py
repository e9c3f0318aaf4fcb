"""The acceptance suite: one callable per criterion, returning a result record.

Used by tests/test_acceptance.py (assertions) and by the CLI selftest
(pass/fail printout). Sampling is deterministic (fixed seeds).
"""

from __future__ import annotations

import cmath
import hashlib
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import parameter as P
from . import puzzles as PZ
from . import render as RD
from . import rays as R
from . import towers as TW
from .angles import itinerary_of_angle, rotation_cycle
from .circle import h_circle, h_inverse_circle
from .errors import ParamandelError
from .fatou import GBFatou, blaschke_charts
from .maps import Bl, Bl_prime, eval_Bl, eval_gB, eval_nu

SEED = 20240901

# the wake-1/3 interior samples (along A = t*exp(2pi i/3), membership-checked)
WAKE13_TS = (1.05, 1.1, 1.15, 1.2, 1.25)
# recurrent 1/3-limb parameter: the landing point of the 1/6 parameter ray
# (the g_B mirror of c = i); exact: the critical value orbit has preperiod 1
# into a 2-cycle. Verified by the classifier before use.
RECURRENT_13_B = (4.0 - math.sqrt(2.0) * 1j) / 3.0


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    info: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.name} ({self.seconds:.1f}s)"


def _timed(number, name):
    def wrap(fn):
        def run(**kw):
            t0 = time.time()
            passed, info = fn(**kw)
            return CriterionResult(number, name, passed, time.time() - t0, info)
        run.number = number
        return run
    return wrap


def _wake13_B(t):
    A = t * cmath.exp(2j * cmath.pi / 3)
    B = cmath.sqrt(1 - A)
    return -B if B.real < 0 else B


# ---------------------------------------------------------------- criteria

@_timed(1, "model constants and Moebius conjugacy")
def criterion_1():
    from .sphere import INF
    info = {}
    ok = True
    ok &= abs(eval_Bl(0).z - 1 / 3) < 1e-12
    ok &= abs(eval_Bl(INF).z - 3.0) < 1e-12
    ok &= abs(Bl_prime(1.0 + 0j) - 1.0) < 1e-12
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(z - 1) < 0.2 or min(abs(z - 1j * 3 ** 0.5), abs(z + 1j * 3 ** 0.5)) < 0.1:
            continue
        u = eval_nu(z)
        if u.at_infinity:
            continue
        g0u = eval_gB(0.0, u)
        if g0u.at_infinity:
            continue
        lhs = eval_Bl(z)
        rhs = eval_nu(g0u)
        if lhs.at_infinity or rhs.at_infinity:
            continue
        worst = max(worst, abs(lhs.z - rhs.z))
    info["nu_conjugacy_worst"] = worst
    ok &= worst < 1e-12
    return ok, info


@_timed(2, "circle conjugacy residual, order, conjugation symmetry")
def criterion_2():
    info = {}
    worst = 0.0
    pts = []
    for k in range(1000):
        a = Fraction(k, 1000)
        ha = h_circle(a, 40)
        pts.append(ha)
        r = abs(Bl(ha) - h_circle((2 * a) % 1, 40))
        worst = max(worst, r)
    info["residual_worst"] = worst
    phases = [cmath.phase(z) % (2 * math.pi) for z in pts]
    wraps = sum(1 for i in range(1000) if phases[(i + 1) % 1000] < phases[i])
    info["order_wraps"] = wraps
    conj_worst = max(abs(h_circle(Fraction(k, 997), 40).conjugate()
                         - h_circle(Fraction(997 - k, 997), 40))
                     for k in range(1, 997, 31))
    info["conj_worst"] = conj_worst
    ok = worst < 1e-8 and wraps == 1 and conj_worst < 1e-9
    return ok, info


@_timed(3, "rotation cycles and shift property")
def criterion_3():
    info = {}
    ok = rotation_cycle(1, 3) == (Fraction(1, 7), Fraction(2, 7), Fraction(4, 7))
    checked = 0
    for q in range(2, 11):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            cyc = rotation_cycle(p, q)
            pos = {t: i for i, t in enumerate(cyc)}
            if not all((pos[(2 * t) % 1] - pos[t]) % q == p for t in cyc):
                ok = False
                info["failed"] = (p, q)
            checked += 1
    info["cycles_checked"] = checked
    return ok, info


@_timed(4, "Fatou charts: Abel residual and normalizations")
def criterion_4():
    info = {}
    rng = np.random.default_rng(SEED + 4)
    ok = True
    worst_all = 0.0
    for B in (1.0, 2.0, _wake13_B(1.15), 0.9 + 1.2j, cmath.sqrt(0.5)):
        gb = GBFatou(B)
        ok &= abs(gb.phi(1.0)) < 1e-12
        ws = 2.0 + rng.uniform(0, 1, 1000) * np.exp(2j * math.pi * rng.uniform(0, 1, 1000))
        zs = np.asarray(ws) * complex(B)
        vals = gb.phi_batch(zs)
        g = zs + complex(B) + 1.0 / zs
        vals_g = gb.phi_batch(g)
        res = np.nanmax(np.abs(vals_g - vals - 1.0))
        worst_all = max(worst_all, float(res))
    ch = blaschke_charts()
    ok &= abs(ch.phi_ext(1e18)) < 1e-8  # phi(inf) = 0 in the limit
    zs = 2.0 + rng.uniform(0, 1.5, 1000) * np.exp(2j * math.pi * rng.uniform(0, 1, 1000))
    for chart, pts in (("ext", zs), ("int", 1.0 / np.conj(zs))):
        vals = np.array([ch.phi_ext(z) for z in pts])
        vals_g = np.array([ch.phi_ext(complex(Bl(complex(z)))) for z in pts])
        res = np.max(np.abs(vals_g - vals - 1.0))
        worst_all = max(worst_all, float(res))
    info["abel_worst"] = worst_all
    ok &= worst_all < 1e-8
    return ok, info


@_timed(5, "Upsilon asymptotics, coherence, injectivity")
def criterion_5():
    info = {}
    tr = P.UpsilonTracker()
    u50 = tr.eval(50.0)
    info["upsilon_50"] = u50
    info["dist_to_3"] = abs(u50 - 3.0)
    asym_ok = abs(u50 - 3.0) < 1e-3
    info["asymptotic_clause"] = asym_ok
    # coherence + injectivity on seeded outside samples
    rng = np.random.default_rng(SEED + 5)
    samples = []
    tries = 0
    while len(samples) < 1000 and tries < 6000:
        tries += 1
        A = rng.uniform(1.5, 3.5) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
        B = cmath.sqrt(1 - A)
        if B.real < 0:
            B = -B
        if P.in_M1(B, 3000).inside == "outside":
            samples.append(B)
    samples.sort(key=lambda b: (cmath.phase(b), abs(b)))
    values = []
    coh_worst = 0.0
    ch = blaschke_charts()
    for B in samples:
        v = tr.eval(B)
        gb = GBFatou(B)
        coh_worst = max(coh_worst, abs(ch.phi_ext(v) - gb.phi(B - 2.0)))
        values.append(v)
    info["coherence_worst"] = coh_worst
    arr = np.array(values)
    d = np.abs(arr[None, :] - arr[:, None]) + np.eye(len(arr)) * 1e9
    info["min_pairwise"] = float(d.min())
    inj_ok = bool(d.min() > 1e-9)
    coh_ok = coh_worst < 1e-6 and len(samples) >= 100
    info["n_samples"] = len(samples)
    return asym_ok and coh_ok and inj_ok, info


@_timed(6, "wake/limb landing and Yoccoz log-disk bound")
def criterion_6():
    info = {}
    ok = True
    for t in WAKE13_TS:
        B = _wake13_B(t)
        if P.in_M1(B, 20000).inside == "outside":
            ok = False
            info[f"sample_{t}"] = "outside M1"
            continue
        fam = R.trace_gB_family(B, itinerary_of_angle(Fraction(1, 7)), 160)
        alpha = -1.0 / B
        dists = []
        for lab, ray in fam.items():
            if ray.status != "landed" or ray.landing.at_infinity:
                ok = False
                break
            dists.append(abs(ray.landing.z - alpha))
        else:
            info[f"coland_{t}"] = max(dists)
            ok &= max(dists) < 1e-4
        wake = P.limb_of(B)
        ok &= wake == (1, 3)
    logdisk_checked = 0
    for q in (2, 3, 4):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            for s in (0.03, 0.08, 0.15):
                A = (1 + s) * cmath.exp(2j * math.pi * p / q)
                B = cmath.sqrt(1 - A)
                if B.real < 0:
                    B = -B
                if P.in_M1(B, 20000).inside == "outside":
                    continue
                try:
                    wake = P.limb_of(B, qmax=8)
                except ParamandelError:
                    continue
                if wake == "central":
                    continue
                ok &= P.yoccoz_log_disk_holds(1 - B * B, wake[0], wake[1])
                logdisk_checked += 1
    info["logdisk_members"] = logdisk_checked
    ok &= logdisk_checked >= 6
    return ok, info


@_timed(7, "tower engine: enumeration, criticality, periods, adjacency")
def criterion_7():
    info = {}
    ok = True
    total = 0
    for h in range(4):
        for t in TW.enumerate_towers(1, 2, h):
            total += 1
            rep = TW.validate(t)
            if not all(okc for _, okc, _ in rep):
                ok = False
                info["validation_failure"] = [(n, w) for n, okc, w in rep if not okc]
            _, _, k = TW.critical_data(t)
            ok &= k >= 2
    info["towers_enumerated"] = total
    term = [t for t in TW.enumerate_towers(1, 2, 3) if TW.classify(t) == "terminal"]
    ok &= len(term) >= 1
    adj = TW.adjacent_towers(term[0], depth=6)
    ok &= len(adj) == 2
    ok &= all(TW.is_valid(t) for t in adj)
    rens = [TW.is_renormalizable(t) for t in adj]
    info["adjacent_renorm"] = rens
    ok &= sum(1 for r in rens if r is not None and r[1] == 2) == 1
    return ok, info


@_timed(8, "universal puzzle correspondence chi at (1,3) level 3")
def criterion_8():
    rep = PZ.chi_correspondence(1, 3, 3)
    info = {"labels": len(rep.labels),
            "level": rep.level_ok, "nesting": rep.nesting_ok,
            "dynamics": rep.dynamics_ok, "criticality": rep.criticality_ok,
            "annuli": rep.annuli_ok}
    if not rep.ok:
        info["details"] = {k: v[:4] if isinstance(v, list) else v
                           for k, v in rep.details.items()}
    return rep.ok, info


@_timed(9, "parameter puzzles: counts vs fertile towers, member towers")
def criterion_9():
    info = {}
    ok = True
    counts = []
    puzzles = {}
    for n in range(3):
        pp = PZ.parameter_puzzle(1, 3, n)
        puzzles[n] = pp
        counts.append(len(pp.pieces))
    fertile = [sum(1 for t in TW.enumerate_towers(1, 3, n + 1)
                   if TW.classify(t) == "fertile") for n in range(3)]
    info["piece_counts"] = counts
    info["fertile_counts"] = fertile
    ok &= counts[0] == 1
    ok &= counts == fertile
    # sampled member: the wake sample's tower picks its piece
    B = _wake13_B(1.15)
    tw = TW.tower_from_dynamics("gB", B, 1, 3, 3, check_limb=False)
    cvg = TW.critical_value_gap(tw)
    hits = [pc for pc in puzzles[2].pieces if pc.contains(B)]
    info["containing_pieces"] = len(hits)
    ok &= len(hits) == 1
    if hits:
        piece_angles = {x for arc in hits[0].arcs for x in arc}
        gap_angles = set(cvg.boundary_angles) | {x for arc in cvg.arcs for x in arc}
        info["piece_angles_subset"] = piece_angles <= gap_angles
        ok &= piece_angles <= gap_angles
    return ok, info


def _recurrent_sample() -> complex:
    """The recurrent 1/3-limb parameter (critical orbit escapes the level-0
    critical piece and recurs through the gateway), verified by the classifier."""
    B = RECURRENT_13_B
    # exactness check of the frozen algebra: g(v) is 2-periodic
    v = B - 2.0
    g = lambda z: z + B + 1.0 / z
    o1 = g(v)
    assert abs(g(g(o1)) - o1) < 1e-12
    verdict = PZ.classify_parameter("gB", B, 1, 3, depth=8)
    if verdict.category != "recurrent":
        raise ParamandelError(f"frozen sample classifies as {verdict.category}")
    return B


@_timed(10, "Psi1: multiplier matching and shrinking tower regions")
def criterion_10():
    info = {}
    ok = True
    r0 = P.psi1_approx(0.0 * 1j + 1.0, 1)  # B = 1 -> A = 0
    ok &= r0.kind == "point" and abs(r0.c - 0.0) < 1e-9
    A_root = cmath.exp(2j * cmath.pi / 3)
    c_root = P.multiplier_match(A_root)
    ok &= abs(c_root - (-0.125 + 0.6495190528383290j)) < 1e-9
    B_root = cmath.sqrt(1 - A_root)
    if B_root.real < 0:
        B_root = -B_root
    rr = P.psi1_approx(B_root, 1)
    ok &= rr.kind == "point" and abs(rr.c - c_root) < 1e-9
    info["root_c"] = c_root
    B = _recurrent_sample()
    regions = [P.psi1_approx(B, d) for d in (1, 2, 3)]
    diams = [r.diameter for r in regions]
    info["diameters"] = diams
    ok &= all(r.kind == "region" for r in regions)
    # nesting: deeper critical value gaps sit inside shallower ones
    for d in range(2):
        outer = TW.critical_value_gap(regions[d].tower)
        inner = TW.critical_value_gap(regions[d + 1].tower)
        nested = all(
            any(PZ._arc_subset(arc_i, arc_o) for arc_o in outer.arcs)
            for arc_i in inner.arcs)
        ok &= nested
    ok &= all(d is not None for d in diams)
    ok &= diams[2] <= diams[0] + 1e-12
    # the region meets M: bounded-orbit parameters near the boundary landings
    lands = []
    for (x, y) in regions[2].chords:
        ray = P.mandel_parameter_ray(x, 14)
        if ray.landing is not None:
            lands.append(ray.landing)
    meets = False
    for c0 in lands:
        for dx in np.linspace(-2e-3, 2e-3, 5):
            for dy in np.linspace(-2e-3, 2e-3, 5):
                if P.in_M(c0 + dx + 1j * dy, 1500).inside != "outside":
                    meets = True
    ok &= bool(lands) and meets
    info["region_meets_M"] = meets
    return ok, info


@_timed(11, "membership sanity: budgets, unit disk, monotonicity")
def criterion_11():
    info = {}
    ok = True
    for budget in (10, 100, 1000, 10000):
        ok &= P.in_M1(1.0, budget).inside == "inside"
    rng = np.random.default_rng(SEED + 11)
    grid_ok = True
    for r in np.linspace(0.05, 0.97, 8):
        for th in np.linspace(0, 2 * math.pi, 16, endpoint=False):
            A = r * cmath.exp(1j * th)
            B = cmath.sqrt(1 - A)
            if B.real < 0:
                B = -B
            if P.in_M1(B, 2000).inside == "outside":
                grid_ok = False
    info["disk_grid"] = grid_ok
    ok &= grid_ok
    mono_ok = True
    for _ in range(25):
        A = rng.uniform(1.2, 4.0) * cmath.exp(2j * math.pi * rng.uniform(0, 1))
        B = cmath.sqrt(1 - A)
        if B.real < 0:
            B = -B
        v1 = P.in_M1(B, 500)
        if v1.inside == "outside":
            for budget in (1000, 4000):
                if P.in_M1(B, budget).inside != "outside":
                    mono_ok = False
    info["monotone"] = mono_ok
    ok &= mono_ok
    return ok, info


@_timed(12, "figure presets: determinism and content checks")
def criterion_12(resolution: int = 1024, budget: int = 400):
    info = {}
    ok = True
    hashes = {}
    for preset in ("fig-m1", "fig-m", "fig-julia-pair", "fig-chessboard",
                   "fig-wake13", "fig-dyadic-half"):
        t0 = time.time()
        for suffix, job in RD.figure_preset(preset, resolution, budget):
            img1 = RD.render(job)
            img2 = RD.render(job)
            same = bool(np.array_equal(img1, img2))
            ok &= same
            hashes[preset + suffix] = hashlib.sha256(img1.tobytes()).hexdigest()[:16]
            if preset == "fig-m1" and suffix == "":
                ok &= _inside_fraction_sane(job, img1, info)
        info[preset + "_seconds"] = round(time.time() - t0, 1)
        ok &= info[preset + "_seconds"] < 300
    info["golden_sha256"] = hashes
    # cardioid grid inside the M render
    jobm = RD.figure_preset("fig-m", 256, 300)[0][1]
    imgm = RD.render(jobm)
    for lam in np.linspace(0.1, 0.95, 6):
        for th in np.linspace(0, 2 * math.pi, 8, endpoint=False):
            lam_c = lam * cmath.exp(1j * th)
            c = lam_c / 2 - lam_c * lam_c / 4
            i, j = _pix(jobm, c)
            if 0 <= i < 256 and 0 <= j < 256:
                ok &= imgm[i, j] == 0
    # B=1 Julia: the fixed critical point -1 does not escape
    jb = RD.RenderJob("Julia-gB", center=0j, width=6.0, resolution=128,
                      budget=300, param=1.0 + 0j)
    imgj = RD.render(jb)
    i, j = _pix(jb, -1.0 + 0j)
    ok &= imgj[i, j] == 0
    return ok, info


def _pix(job, z):
    half = job.width / 2
    n = job.resolution
    scale = (n - 1) / job.width
    i = int(round((job.center.imag + half - z.imag) * scale))
    j = int(round((z.real - (job.center.real - half)) * scale))
    return i, j


def _inside_fraction_sane(job, img, info):
    inside = float((img == 0).mean())
    info["m1_inside_fraction"] = inside
    ok = 0.02 < inside < 0.9
    # unit disk samples in the A chart stay inside
    for r in (0.2, 0.5, 0.8):
        for th in np.linspace(0, 2 * math.pi, 8, endpoint=False):
            i, j = _pix(job, r * cmath.exp(1j * th))
            if 0 <= i < img.shape[0] and 0 <= j < img.shape[1]:
                ok &= img[i, j] == 0
    return ok


ALL_CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
                criterion_11, criterion_12]


def run_all(fast: bool = False):
    results = []
    for crit in ALL_CRITERIA:
        kw = {}
        if fast and crit.number == 12:
            kw = {"resolution": 256, "budget": 200}
        try:
            results.append(crit(**kw))
        except ParamandelError as e:
            results.append(CriterionResult(crit.number, crit.__name__, False, 0.0,
                                           {"error": str(e)}))
    return results
