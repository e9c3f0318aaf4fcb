"""Software double-double arithmetic (opt-in extended precision).

Used behind the PARAMANDEL_DD environment switch for deep polynomial ray
pullbacks, where chained square roots in plain doubles lose digits. Only the
operations that path needs are provided.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass


def enabled() -> bool:
    return os.environ.get("PARAMANDEL_DD", "") not in ("", "0")


def _two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _two_prod(a: float, b: float):
    p = a * b
    err = math.fma(a, b, -p) if hasattr(math, "fma") else _split_prod_err(a, b, p)
    return p, err


def _split_prod_err(a, b, p):
    sp = 134217729.0  # 2^27 + 1
    ah = a * sp
    ah = ah - (ah - a)
    al = a - ah
    bh = b * sp
    bh = bh - (bh - b)
    bl = b - bh
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl


@dataclass(frozen=True)
class DD:
    hi: float
    lo: float = 0.0

    @staticmethod
    def of(x) -> "DD":
        return x if isinstance(x, DD) else DD(float(x), 0.0)

    def __add__(self, other):
        other = DD.of(other)
        s, e = _two_sum(self.hi, other.hi)
        e += self.lo + other.lo
        s, e = _two_sum(s, e)
        return DD(s, e)

    def __neg__(self):
        return DD(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-DD.of(other))

    def __mul__(self, other):
        other = DD.of(other)
        p, e = _two_prod(self.hi, other.hi)
        e += self.hi * other.lo + self.lo * other.hi
        p, e = _two_sum(p, e)
        return DD(p, e)

    def __truediv__(self, other):
        other = DD.of(other)
        q1 = self.hi / other.hi
        r = self - other * q1
        q2 = r.hi / other.hi
        r = r - other * q2
        q3 = r.hi / other.hi
        s, e = _two_sum(q1, q2)
        s, e = _two_sum(s, e + q3)
        return DD(s, e)

    def sqrt(self) -> "DD":
        if self.hi == 0:
            return DD(0.0)
        x = math.sqrt(self.hi)
        # one Newton step in DD: x' = (x + self/x)/2
        xd = DD(x)
        return (xd + self / xd) * 0.5

    def __float__(self):
        return self.hi + self.lo


@dataclass(frozen=True)
class DDC:
    re: DD
    im: DD

    @staticmethod
    def of(z) -> "DDC":
        if isinstance(z, DDC):
            return z
        z = complex(z)
        return DDC(DD.of(z.real), DD.of(z.imag))

    def __add__(self, other):
        other = DDC.of(other)
        return DDC(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = DDC.of(other)
        return DDC(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = DDC.of(other)
        return DDC(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    def __neg__(self):
        return DDC(-self.re, -self.im)

    def abs2(self) -> DD:
        return self.re * self.re + self.im * self.im

    def sqrt(self) -> "DDC":
        """Principal square root: double seed plus one complex Newton step."""
        import cmath
        z = complex(self)
        if z == 0:
            return DDC.of(0)
        w = DDC.of(cmath.sqrt(z))
        step = w + self * _ddc_inv(w)
        return DDC(step.re * 0.5, step.im * 0.5)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _ddc_inv(w: DDC) -> DDC:
    d = w.abs2()
    return DDC(w.re / d, -(w.im / d))


DD.__rmul__ = lambda self, other: DD.of(other) * self
DD.__radd__ = lambda self, other: DD.of(other) + self
DD.__rsub__ = lambda self, other: DD.of(other) - self


def ddc_sqrt(z, ref=None):
    """Principal (or ref-nearest) square root of z in double-double."""
    w = DDC.of(z)
    out = w.sqrt()
    if ref is not None:
        zc = complex(out)
        if abs(zc - ref) > abs(-zc - ref):
            out = -out
    return out
