"""Escape-time renders of the parameter and dynamical planes.

Pixel verdicts come from the same batch membership kernels the analytic code
uses (parameter.gb_escape_batch / qc_escape_batch); there is no separate fast
path. Renders are deterministic: identical jobs give byte-identical images.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParamandelError
from .maps import sqrt_B_of_A
from .parameter import gb_escape_batch, qc_escape_batch

MAX_RESOLUTION = 16384
MAX_BUDGET = 10_000_000


@dataclass
class RenderJob:
    plane: str                   # M1-A | M1-B | M | Julia-gB | Julia-Qc
    center: complex = 0j
    width: float = 4.0
    resolution: int = 512
    budget: int = 500
    param: complex | None = None  # B or c for Julia renders
    shading: str = "steps"        # steps | chessboard | mask
    overlays: list = field(default_factory=list)  # lists of complex polylines

    def validate(self):
        if self.resolution > MAX_RESOLUTION or self.resolution < 1:
            raise ValueError("resolution out of range")
        if self.budget > MAX_BUDGET or self.budget < 1:
            raise ValueError("budget out of range")
        if self.plane.startswith("Julia") and self.param is None:
            raise ValueError("Julia renders need --param")


def _grid(job: RenderJob):
    n = job.resolution
    half = job.width / 2.0
    xs = np.linspace(job.center.real - half, job.center.real + half, n)
    ys = np.linspace(job.center.imag - half, job.center.imag + half, n)
    return xs[None, :] + 1j * ys[::-1, None]


def render(job: RenderJob) -> np.ndarray:
    """Render to a uint8 grayscale array (0 = inside/black)."""
    job.validate()
    zz = _grid(job)
    if job.plane == "M1-A":
        B = np.sqrt(1.0 - zz + 0j)   # principal branch: Re >= 0, the canonical chart
        esc, steps, pole, w = gb_escape_batch(B, B - 2.0, job.budget, return_w=True)
        inside = (~esc) | pole
        img = _shade(job, inside, steps, w)
    elif job.plane == "M1-B":
        B = np.where(zz.real < 0, -zz, zz)
        esc, steps, pole, w = gb_escape_batch(B, B - 2.0, job.budget, return_w=True)
        inside = (~esc) | pole
        img = _shade(job, inside, steps, w)
    elif job.plane == "M":
        esc, steps = qc_escape_batch(zz, np.zeros_like(zz), job.budget)
        img = _shade(job, ~esc, steps, None)
    elif job.plane == "Julia-gB":
        B = complex(job.param)
        esc, steps, pole, w = gb_escape_batch(np.full(zz.shape, B), zz,
                                              job.budget, return_w=True)
        inside = (~esc) | pole
        img = _shade(job, inside, steps, w)
    elif job.plane == "Julia-Qc":
        esc, steps = qc_escape_batch(np.full(zz.shape, complex(job.param)), zz,
                                     job.budget)
        img = _shade(job, ~esc, steps, None)
    else:
        raise ValueError(f"unknown plane {job.plane!r}")
    for poly in job.overlays:
        _draw_polyline(img, poly, job)
    return img


def _shade(job: RenderJob, inside, steps, w) -> np.ndarray:
    img = np.zeros(inside.shape, dtype=np.uint8)
    out = ~inside
    if job.shading == "mask":
        img[out] = 255
    elif job.shading == "chessboard" and w is not None:
        par = ((steps & 1) ^ (w.imag > 0)).astype(np.uint8)
        img[out] = np.where(par[out] > 0, 230, 120)
    else:
        s = steps.astype(float)
        with np.errstate(divide="ignore"):
            g = 64 + 191 * np.exp(-s / 48.0)
        img[out] = g[out].astype(np.uint8)
    return img


def _draw_polyline(img, poly, job: RenderJob, value: int = 255):
    n = job.resolution
    half = job.width / 2.0
    x0, y0 = job.center.real - half, job.center.imag - half
    scale = (n - 1) / job.width
    pts = [complex(z) for z in poly]
    for a, b in zip(pts, pts[1:]):
        steps = max(2, int(abs(b - a) * scale * 2))
        for s in range(steps + 1):
            z = a + (b - a) * s / steps
            i = int(round((job.center.imag + half - z.imag) * scale))
            j = int(round((z.real - x0) * scale))
            if 0 <= i < n and 0 <= j < n:
                img[i, j] = value


def write_ppm(img: np.ndarray, path: str):
    h, w = img.shape
    with open(path, "w") as f:
        f.write(f"P2\n{w} {h}\n255\n")
        for row in img:
            f.write(" ".join(str(int(v)) for v in row) + "\n")


def write_png(img: np.ndarray, path: str):
    from PIL import Image
    Image.fromarray(img, mode="L").save(path, format="PNG")


def write_image(img: np.ndarray, path: str):
    if path.endswith(".ppm"):
        write_ppm(img, path)
    else:
        write_png(img, path)


# ------------------------------------------------------------------- presets

RABBIT_LIKE_C = -0.122561166876654 + 0.744861766619744j  # period-3 center of M
WAKE13_A = 1.15 * cmath.exp(2j * math.pi / 3)


def figure_preset(name: str, resolution: int = 512, budget: int = 400):
    """The figure-reproduction presets; returns a list of (suffix, RenderJob)."""
    if name == "fig-m1":
        return [("", RenderJob("M1-A", center=-0.8 + 0j, width=5.0,
                               resolution=resolution, budget=budget))]
    if name == "fig-m":
        return [("", RenderJob("M", center=-0.75 + 0j, width=3.0,
                               resolution=resolution, budget=budget))]
    if name == "fig-chessboard":
        return [("", RenderJob("M1-A", center=-0.8 + 0j, width=5.0,
                               resolution=resolution, budget=budget,
                               shading="chessboard"))]
    if name == "fig-wake13":
        return [("", RenderJob("M1-A", center=WAKE13_A, width=1.6,
                               resolution=resolution, budget=budget))]
    if name == "fig-julia-pair":
        B = sqrt_B_of_A(WAKE13_A)
        return [("-gB", RenderJob("Julia-gB", center=0j, width=8.0, param=B,
                                  resolution=resolution, budget=budget)),
                ("-Qc", RenderJob("Julia-Qc", center=0j, width=3.2,
                                  param=RABBIT_LIKE_C,
                                  resolution=resolution, budget=budget))]
    if name == "fig-dyadic-half":
        return [("", RenderJob("M1-A", center=-1.0 + 0j, width=6.0,
                               resolution=resolution, budget=budget))]
    raise ParamandelError(f"unknown preset {name!r}")
