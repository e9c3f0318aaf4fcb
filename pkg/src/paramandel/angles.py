"""Exact circle combinatorics: angle doubling, binary itineraries, rotation cycles.

Angles are fractions.Fraction values taken mod 1 (always reduced, arbitrary
precision), so doubling and cycle searches are exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidFractionError, SizeOverflowError

ROTATION_CYCLE_QMAX = 24
HALF = Fraction(1, 2)


def angle(num, den=None) -> Fraction:
    """Normalize to a Fraction in [0, 1)."""
    a = Fraction(num) if den is None else Fraction(num, den)
    return a % 1


def double(a: Fraction) -> Fraction:
    """The angle doubling m2(theta) = 2*theta mod 1, exact."""
    return (2 * a) % 1


def is_dyadic(a: Fraction) -> bool:
    a = a % 1
    d = a.denominator
    return d & (d - 1) == 0


@dataclass(frozen=True)
class Itinerary:
    """An eventually periodic binary sequence: preperiod word then period word.

    Doubles as a binary expansion of an angle (symbol k is the k-th binary
    digit). The period may be empty only for finite truncations produced by
    bits(); constructors here always canonicalize to a primitive period and a
    minimal preperiod.
    """

    pre: tuple
    per: tuple

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.pre + self.per):
            raise ValueError("binary symbols only")

    @staticmethod
    def make(pre, per) -> "Itinerary":
        pre, per = list(pre), list(per)
        if per:
            # primitive period
            n = len(per)
            for d in range(1, n):
                if n % d == 0 and per == per[d:] + per[:d]:
                    per = per[:d]
                    break
            # absorb trailing preperiod symbols equal to the period's last symbol
            while pre and pre[-1] == per[-1]:
                pre.pop()
                per = [per[-1]] + per[:-1]
        return Itinerary(tuple(pre), tuple(per))

    def shift(self) -> "Itinerary":
        """Drop the leading symbol (the one-sided shift)."""
        if self.pre:
            return Itinerary.make(self.pre[1:], self.per)
        if not self.per:
            raise ValueError("cannot shift an empty itinerary")
        return Itinerary.make((), self.per[1:] + self.per[:1])

    def bits(self, n: int) -> tuple:
        out = list(self.pre)
        if self.per:
            while len(out) < n:
                out.extend(self.per)
        elif len(out) < n:
            raise ValueError("finite itinerary too short")
        return tuple(out[:n])

    def angle(self) -> Fraction:
        """The angle with this binary expansion, exact."""
        p = len(self.pre)
        head = 0
        for b in self.pre:
            head = head * 2 + b
        if not self.per:
            return Fraction(head, 1 << p) % 1
        q = len(self.per)
        body = 0
        for b in self.per:
            body = body * 2 + b
        return (Fraction(head, 1 << p) + Fraction(body, (1 << p) * ((1 << q) - 1))) % 1

    def __str__(self):
        head = "".join(map(str, self.pre))
        if not self.per:
            return head or "0"
        return f"{head}({''.join(map(str, self.per))})"

    @staticmethod
    def parse(s: str) -> "Itinerary":
        """Parse '01(001)' style strings (parentheses delimit the period)."""
        s = s.strip()
        if "(" in s:
            head, _, rest = s.partition("(")
            per = rest.rstrip(")")
        else:
            head, per = s, ""
        return Itinerary.make([int(c) for c in head], [int(c) for c in per])


def itinerary_of_angle(a: Fraction, both: bool = False):
    """Binary expansion(s) of a rational angle.

    Non-dyadic rationals have a unique expansion. Dyadics have exactly two
    (w10^bar and w01^bar); by default the terminating-style one (ending in
    0^bar) is returned, with both=True the pair (lower, upper) is returned.
    """
    a = a % 1
    if not is_dyadic(a):
        seen = {}
        bits = []
        t = a
        while t not in seen:
            seen[t] = len(bits)
            bits.append(0 if t < HALF else 1)
            t = double(t)
        k = seen[t]
        return Itinerary.make(bits[:k], bits[k:])
    # dyadic: finite word w with a = w / 2^s, s minimal
    s = a.denominator.bit_length() - 1
    w = [(a.numerator >> (s - 1 - i)) & 1 for i in range(s)] if s else []
    upper = Itinerary.make(w, (0,))                     # w then 000...
    if a == 0:
        lower = Itinerary.make((), (1,))                # 111... represents 1 = 0 mod 1
    else:
        borrow = list(w)
        i = len(borrow) - 1
        borrow[i] -= 1                                  # w ends in 1 since reduced
        lower = Itinerary.make(borrow, (1,))
    if both:
        return (lower, upper)
    return upper


def angle_of_itinerary(e: Itinerary) -> Fraction:
    return e.angle()


@lru_cache(maxsize=None)
def rotation_cycle(p: int, q: int) -> tuple:
    """The unique period-q cycle of doubling whose cyclic order has rotation
    number p/q, found by exhaustive search over denominators 2^q - 1.

    Returned sorted increasing. (p, q) = (0, 1) gives the fixed angle 0.
    """
    if q < 1 or math.gcd(p, q) != 1 or not (0 < p < q or (p, q) == (0, 1)):
        raise InvalidFractionError(f"invalid rotation number {p}/{q}")
    if q > ROTATION_CYCLE_QMAX:
        raise SizeOverflowError(f"rotation cycle search capped at q <= {ROTATION_CYCLE_QMAX}")
    if (p, q) == (0, 1):
        return (Fraction(0),)
    mod = (1 << q) - 1
    seen = bytearray(mod)
    for k in range(1, mod):
        if seen[k]:
            continue
        orbit = [k]
        t = (2 * k) % mod
        while t != k:
            orbit.append(t)
            t = (2 * t) % mod
        for x in orbit:
            seen[x] = 1
        if len(orbit) != q:
            continue
        ordered = sorted(orbit)
        pos = {x: i for i, x in enumerate(ordered)}
        shift = (pos[(2 * ordered[0]) % mod] - pos[ordered[0]]) % q
        if shift == p and all(
            (pos[(2 * x) % mod] - pos[x]) % q == p for x in ordered
        ):
            return tuple(Fraction(x, mod) for x in ordered)
    raise InvalidFractionError(f"no {p}/{q} cycle found")  # unreachable for valid p/q


def orbit_angles(a: Fraction) -> list:
    """Forward doubling orbit of a rational angle, in orbit order, until repeat."""
    out = []
    seen = set()
    t = a % 1
    while t not in seen:
        seen.add(t)
        out.append(t)
        t = double(t)
    return out


def wake_interval(p: int, q: int) -> tuple:
    """The characteristic interval (theta_minus, theta_plus): the shortest
    complementary arc of the p/q rotation cycle."""
    cyc = rotation_cycle(p, q)
    best = None
    for i, th in enumerate(cyc):
        nxt = cyc[(i + 1) % q] if i + 1 < q else cyc[0] + 1
        if best is None or nxt - th < best[1] - best[0]:
            best = (th, nxt)
    return (best[0] % 1, best[1] % 1)


def tuned_dyadic_pair(p: int, q: int, r: int, s: int) -> tuple:
    """Angle pair bounding the r/2^s dyadic sub-wake of the p/q satellite copy.

    Obtained by substituting the binary words of theta_minus / theta_plus for
    the digits 0/1 in the two binary expansions of r/2^s (tuning).
    """
    if s < 1 or not (0 < r < (1 << s)) or r % 2 == 0:
        raise InvalidFractionError("need r odd, 0 < r < 2^s")
    lo, hi = wake_interval(p, q)
    w0 = itinerary_of_angle(lo).bits(q)
    w1 = itinerary_of_angle(hi).bits(q)
    d_lo, d_hi = itinerary_of_angle(Fraction(r, 1 << s), both=True)

    def tune(it):
        pre = [b for d in it.pre for b in (w1 if d else w0)]
        per = [b for d in it.per for b in (w1 if d else w0)]
        return Itinerary.make(pre, per).angle()

    pair = sorted((tune(d_lo), tune(d_hi)))
    return (pair[0], pair[1])
