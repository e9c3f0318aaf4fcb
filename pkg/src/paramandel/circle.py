"""The circle conjugacy h between z -> z^2 and the Blaschke product.

h is built by the recursive preimage construction: h_n is the Bl-preimage of
h_{n-1} at the doubled angle, the branch picked by the half-circle the angle
dictates (upper arc for angles in (0,1/2), lower for (1/2,1)). Convergence is
geometric away from the parabolic point and slows to O(1/depth) near it.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .angles import HALF, double
from .errors import BranchAmbiguityError, ToleranceNotMetError
from .maps import Bl, Bl_preimages

DEFAULT_DEPTH = 40
_IM_GUARD = 1e-15


def h_circle(a, depth: int = DEFAULT_DEPTH) -> complex:
    """h(e^{2 pi i a}) at the given construction depth.

    a may be a Fraction (exact doubling) or a float angle mod 1.
    h(0) = 1 and h(1/2) = -1 exactly at every depth.
    """
    if depth < 1:
        raise ValueError("depth >= 1")
    if isinstance(a, Fraction):
        return _h_exact(a % 1, depth, {})
    return _h_float(float(a) % 1.0, depth)


def _h_exact(a: Fraction, n: int, memo: dict) -> complex:
    key = (a, n)
    if key in memo:
        return memo[key]
    if a == 0:
        return 1.0 + 0j
    if a == HALF:
        return -1.0 + 0j
    if n == 0:
        val = cmath.exp(2j * cmath.pi * float(a))
    else:
        y = _h_exact(double(a), n - 1, memo)
        s, _ = Bl_preimages(y)
        if abs(s.imag) < _IM_GUARD:
            raise BranchAmbiguityError(f"preimage on the real axis at angle {a}")
        want_upper = a < HALF
        val = s if (s.imag > 0) == want_upper else -s
        val /= abs(val)  # stay on the circle
    memo[key] = val
    return val


def _h_float(a: float, n: int) -> complex:
    if n == 0 or a == 0.0:
        return cmath.exp(2j * cmath.pi * a)
    if a == 0.5:
        return -1.0 + 0j
    y = _h_float((2.0 * a) % 1.0, n - 1)
    s, _ = Bl_preimages(y)
    if abs(s.imag) < _IM_GUARD:
        raise BranchAmbiguityError(f"preimage on the real axis at angle {a}")
    val = s if (s.imag > 0) == (a < 0.5) else -s
    return val / abs(val)


def h_depth_residual(a, depth: int = DEFAULT_DEPTH) -> float:
    """|h_depth(a) - h_{depth+1}(a)|, the empirical convergence indicator."""
    return abs(h_circle(a, depth) - h_circle(a, depth + 1))


def h_inverse_circle(w: complex, depth: int = DEFAULT_DEPTH) -> float:
    """Angle a with h(a) ~ w, to within 2^-depth.

    Reads off the Bl-itinerary of w on the circle; the resulting binary digits
    are exactly the bisection path that inverts the order-preserving h.
    """
    if abs(abs(w) - 1.0) > 1e-9:
        raise ToleranceNotMetError("h_inverse_circle needs |w| = 1 within 1e-9")
    z = w / abs(w)
    if z == 1:
        return 0.0
    val = 0.0
    scale = 0.5
    for _ in range(depth):
        if z.imag > 0:
            pass                       # upper arc: digit 0
        elif z.imag < 0:
            val += scale               # lower arc: digit 1
        else:
            # exactly real: z = 1 terminates at this scale, z = -1 is angle 1/2
            if z.real > 0:
                break
            val += scale
            break
        z = Bl(z)
        z /= abs(z)
        scale /= 2.0
    return val % 1.0
