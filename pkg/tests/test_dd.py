import math
from fractions import Fraction

from paramandel import dd


def test_dd_arithmetic():
    a = dd.DD.of(1.0) / dd.DD.of(3.0)
    # residual of 3*(1/3) - 1 should be far below double precision
    r = a * 3.0 - 1.0
    assert abs(float(r)) < 1e-30
    s = dd.DD.of(2.0).sqrt()
    err = s * s - 2.0
    assert abs(float(err)) < 1e-30


def test_ddc_sqrt_branches():
    z = dd.DDC.of(3 + 4j)
    w = z.sqrt()
    assert abs(complex(w) - (2 + 1j)) < 1e-15
    w2 = dd.ddc_sqrt(3 + 4j, ref=-2 - 1j)
    assert abs(complex(w2) + (2 + 1j)) < 1e-15


def test_dd_ray_path(monkeypatch):
    # the extended-precision switch produces the same ray within double noise
    from paramandel import rays as R
    base = R.trace_ray_Qc(-1.0, Fraction(1, 3), 30)
    monkeypatch.setenv("PARAMANDEL_DD", "1")
    hi = R.trace_ray_Qc(-1.0, Fraction(1, 3), 30)
    monkeypatch.delenv("PARAMANDEL_DD")
    assert len(base.vertices) == len(hi.vertices)
    # the gap is the double path's accumulated rounding; both stay on the ray
    worst = max(abs(a[1] - b[1]) for a, b in zip(base.vertices, hi.vertices))
    assert worst < 1e-6
