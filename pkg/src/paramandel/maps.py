"""The maps of the model: g_B(z) = z + B + 1/z, the parabolic Blaschke product,
the Moebius change of coordinates, and the quadratic family Q_c(z) = z^2 + c.

All evaluation is double precision; the sphere is handled through isolated
special cases at 0 and infinity (see sphere.CPoint).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .errors import DegenerateParameterError
from .sphere import INF, CPoint

# tolerance for "the orbit hit a pole/critical point exactly"
HIT_EPS = 1e-13


@dataclass(frozen=True)
class ParabolicParam:
    """Parameter B of g_B, kept in the half-plane chart Re(B) >= 0.

    The finite fixed point is -1/B with multiplier A = 1 - B^2.
    """

    B: complex

    def __post_init__(self):
        object.__setattr__(self, "B", complex(self.B))
        if self.B.real < 0:
            raise ValueError("ParabolicParam expects Re(B) >= 0 (canonical chart)")

    @property
    def A(self) -> complex:
        return 1 - self.B * self.B

    @staticmethod
    def from_A(A) -> "ParabolicParam":
        return ParabolicParam(sqrt_B_of_A(complex(A)))


def sqrt_B_of_A(A: complex) -> complex:
    """Canonical B with 1 - B^2 = A: Re(B) >= 0, and Im(B) >= 0 on the axis."""
    B = cmath.sqrt(1 - A)
    if B.real < 0 or (B.real == 0 and B.imag < 0):
        B = -B
    return B


def eval_gB(B, z) -> CPoint:
    """g_B(z) = z + B + 1/z, total on the sphere (0 and inf both map to inf)."""
    B = complex(B)
    p = CPoint.of(z)
    if p.at_infinity or p.is_zero():
        return INF
    w = p.z
    return CPoint.of(w + B + 1.0 / w)


def gB_prime(B, z) -> complex:
    z = complex(z)
    return 1.0 - 1.0 / (z * z)


def gB_multiplier_at_alpha(B) -> complex:
    """Multiplier 1 - 1/z^2 at the finite fixed point z = -1/B; equals 1 - B^2."""
    B = complex(B)
    if B == 0:
        raise DegenerateParameterError("B=0: triple fixed point at infinity")
    alpha = -1.0 / B
    return 1.0 - 1.0 / (alpha * alpha)


def eval_Bl(z) -> CPoint:
    """The parabolic Blaschke product Bl(z) = (z^2 + 1/3)/(1 + z^2/3)."""
    p = CPoint.of(z)
    if p.at_infinity:
        return CPoint.of(3.0)
    w = p.z
    den = 1.0 + w * w / 3.0
    if abs(den) == 0.0:
        return INF
    return CPoint.of((w * w + 1.0 / 3.0) / den)


def Bl(z: complex) -> complex:
    """Affine fast path of eval_Bl; caller keeps z away from the poles +-i*sqrt(3)."""
    return (z * z + 1.0 / 3.0) / (1.0 + z * z / 3.0)


def Bl_prime(z: complex) -> complex:
    """Quotient-rule derivative, Bl'(z) = (16/9) z / (1 + z^2/3)^2."""
    den = 1.0 + z * z / 3.0
    return (16.0 / 9.0) * z / (den * den)


def Bl_preimages(y: complex) -> tuple[complex, complex]:
    """The two solutions of Bl(z) = y, as +-sqrt((3y-1)/(3-y))."""
    s = cmath.sqrt((3.0 * y - 1.0) / (3.0 - y))
    return s, -s


def eval_nu(z) -> CPoint:
    """nu(z) = (z+1)/(z-1), an involution: nu(nu(z)) = z."""
    p = CPoint.of(z)
    if p.at_infinity:
        return CPoint.of(1.0)
    w = p.z
    if w == 1.0:
        return INF
    return CPoint.of((w + 1.0) / (w - 1.0))


def eval_nu_inverse(z) -> CPoint:
    return eval_nu(z)


def eval_tau(z) -> CPoint:
    """tau(z) = 1/conj(z), reflection in the unit circle."""
    p = CPoint.of(z)
    if p.at_infinity:
        return CPoint.of(0.0)
    if p.is_zero():
        return INF
    return CPoint.of(1.0 / p.z.conjugate())


def eval_g0(z) -> CPoint:
    """g_0(z) = z + 1/z; Bl = nu o g_0 o nu^(-1)."""
    return eval_gB(0.0, z)


def eval_Qc(c, z) -> CPoint:
    p = CPoint.of(z)
    if p.at_infinity:
        return INF
    w = p.z
    return CPoint.of(w * w + complex(c))


def sigma0(c) -> complex:
    """Product of the multipliers 2*z1 * 2*z2 over the fixed points of Q_c.

    The roots of z^2 - z + c = 0 have product c, so this returns 4c up to
    round-off; computed from the actual roots, not from the identity.
    """
    c = complex(c)
    d = cmath.sqrt(1.0 - 4.0 * c)
    z1 = (1.0 + d) / 2.0
    z2 = (1.0 - d) / 2.0
    return (2.0 * z1) * (2.0 * z2)


@dataclass
class OrbitRecord:
    points: list = field(default_factory=list)  # CPoint entries
    escape_index: int | None = None
    hit_pole: int | None = None       # index at which the orbit hit a pole exactly
    hit_critical: int | None = None   # index at which it hit a critical point exactly


_MAPS = {
    "gB": (eval_gB, lambda B: (CPoint.of(0.0),), lambda B: (CPoint.of(1.0), CPoint.of(-1.0))),
    "Bl": (lambda _p, z: eval_Bl(z),
           lambda _p: (CPoint.of(1j * 3 ** 0.5), CPoint.of(-1j * 3 ** 0.5)),
           lambda _p: (CPoint.of(0.0), INF)),
    "Qc": (eval_Qc, lambda c: (), lambda c: (CPoint.of(0.0),)),
}


def orbit(map_id: str, param, z0, max_iter: int, escape_radius: float | None = None) -> OrbitRecord:
    """Iterate one of the model maps, recording escape and exact pole/critical hits.

    escape_radius, when given, stops at the first index with |z| >= radius
    (matching the usual radius-r test; membership predicates use their own rules).
    """
    if max_iter < 1:
        raise ValueError("max_iter >= 1 required")
    fmap, poles_of, crits_of = _MAPS[map_id]
    poles = poles_of(param)
    crits = crits_of(param)
    rec = OrbitRecord()
    p = CPoint.of(z0)
    for n in range(max_iter + 1):
        rec.points.append(p)
        for q in poles:
            if _same_point(p, q) and rec.hit_pole is None:
                rec.hit_pole = n
        for q in crits:
            if _same_point(p, q) and rec.hit_critical is None:
                rec.hit_critical = n
        if escape_radius is not None and not p.at_infinity and abs(p.z) >= escape_radius:
            rec.escape_index = n
            break
        if p.at_infinity and map_id == "Qc":
            rec.escape_index = n
            break
        if n < max_iter:
            p = fmap(param, p)
    return rec


def _same_point(p: CPoint, q: CPoint) -> bool:
    if p.at_infinity or q.at_infinity:
        return p.at_infinity and q.at_infinity
    scale = max(1.0, abs(p.z), abs(q.z))
    return abs(p.z - q.z) <= HIT_EPS * scale
