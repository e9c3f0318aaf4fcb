import json
import os
import subprocess
import sys

import numpy as np
import pytest

from paramandel import render as RD
from paramandel.cli import main


def test_render_m1_disk_inside(tmp_path):
    job = RD.RenderJob("M1-A", center=0j, width=3.0, resolution=96, budget=300)
    img = RD.render(job)
    # unit-disk grid inside (A chart): black pixels
    n = job.resolution
    for r in (0.2, 0.5, 0.8):
        for th in np.linspace(0, 2 * np.pi, 8, endpoint=False):
            z = r * np.exp(1j * th)
            i = int(round((job.center.imag + 1.5 - z.imag) * (n - 1) / 3.0))
            jj = int(round((z.real - (job.center.real - 1.5)) * (n - 1) / 3.0))
            assert img[i, jj] == 0
    img2 = RD.render(job)
    assert np.array_equal(img, img2)


def test_render_julia_b1():
    job = RD.RenderJob("Julia-gB", center=0j, width=6.0, resolution=64,
                       budget=200, param=1.0 + 0j)
    img = RD.render(job)
    n = 64
    i = int(round((3.0 - (-0.0)) * (n - 1) / 6.0))
    jj = int(round((-1.0 + 3.0) * (n - 1) / 6.0))
    assert img[i, jj] == 0          # the fixed critical point -1 does not escape


def test_ppm_and_png(tmp_path):
    job = RD.RenderJob("M", center=-0.75 + 0j, width=3.0, resolution=32, budget=100)
    img = RD.render(job)
    p1 = tmp_path / "m.ppm"
    p2 = tmp_path / "m.png"
    RD.write_image(img, str(p1))
    RD.write_image(img, str(p2))
    assert p1.read_text().startswith("P2\n32 32")
    assert p2.stat().st_size > 0


def test_cli_cycle(capsys):
    assert main(["cycle", "1", "3"]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "1/7 2/7 4/7"


def test_cli_psi1_point(capsys):
    assert main(["psi1", "--A", "-0.5", "--depth", "1"]) == 0
    out = capsys.readouterr().out.strip()
    # multiplier matching: c = A/2 - A^2/4 = -0.3125
    assert out.startswith("-0.3125")


def test_cli_tower(capsys):
    assert main(["tower", "1", "2", "--height", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 5 and data["valid"]


def test_cli_trace_ray(tmp_path, capsys):
    out = tmp_path / "ray.txt"
    code = main(["trace-ray", "--plane", "Qc", "--c", "0", "--angle", "1/7",
                 "--depth", "12", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.startswith("# label")


def test_cli_render(tmp_path, capsys):
    out = tmp_path / "m1.png"
    code = main(["render-m1", "--res", "48", "--budget", "120",
                 "--out", str(out)])
    assert code == 0
    assert out.stat().st_size > 0


def test_cli_errors(capsys):
    assert main(["cycle", "2", "4"]) == 3          # invalid fraction -> numeric error
    err = capsys.readouterr().err
    assert "InvalidFractionError" in err
    assert main(["nonsense"]) == 2


def test_cli_jobfile(tmp_path, capsys):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"center": "-0.75", "width": 2.5,
                               "resolution": 32, "budget": 80}))
    out = tmp_path / "m.png"
    assert main(["render-m", "--jobfile", str(job), "--out", str(out)]) == 0
    assert out.stat().st_size > 0


def test_cli_puzzle_svg(tmp_path, capsys):
    svg = tmp_path / "p.svg"
    assert main(["puzzle", "1", "3", "--level", "1", "--svg", str(svg)]) == 0
    data = json.loads(capsys.readouterr().out.splitlines()[0])
    assert data["chi_ok"]
    assert svg.read_text().startswith("<svg")
