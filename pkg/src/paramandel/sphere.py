"""Points of the Riemann sphere: rectangular coordinates plus an at-infinity flag."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CPoint:
    """A point of the sphere. at_infinity=True forces re=im=0.0 by convention."""

    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "re", 0.0)
            object.__setattr__(self, "im", 0.0)
        else:
            if not (math.isfinite(self.re) and math.isfinite(self.im)):
                raise ValueError("finite CPoint requires finite coordinates")

    @staticmethod
    def of(z) -> "CPoint":
        if isinstance(z, CPoint):
            return z
        z = complex(z)
        return CPoint(z.real, z.imag)

    @property
    def z(self) -> complex:
        if self.at_infinity:
            raise ValueError("point at infinity has no finite affine value")
        return complex(self.re, self.im)

    def is_zero(self, eps: float = 0.0) -> bool:
        return (not self.at_infinity) and abs(complex(self.re, self.im)) <= eps

    def __complex__(self) -> complex:
        return self.z


INF = CPoint(at_infinity=True)


def dist_sphere(p: CPoint, q: CPoint) -> float:
    """Chordal distance, bounded metric usable at infinity."""
    if p.at_infinity and q.at_infinity:
        return 0.0

    def lift(pt):
        if pt.at_infinity:
            return (0.0, 0.0, 1.0)
        x, y = pt.re, pt.im
        d = 1.0 + x * x + y * y
        return (2 * x / d, 2 * y / d, (d - 2.0) / d)

    a, b = lift(p), lift(q)
    return math.sqrt(sum((u - v) ** 2 for u, v in zip(a, b)))
