"""Command-line surface: renders, ray traces, cycles, towers, puzzles,
classification, the finite-depth parameter map, and the selftest harness.

Exit codes: 0 success, 2 user error (arguments, job files, output paths),
3 numeric failure; numeric failures also emit a machine-readable JSON line on
stderr.
"""

from __future__ import annotations

import argparse
import cmath
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import ParamandelError

try:
    import tomllib
except ModuleNotFoundError:  # python 3.10
    import tomli as tomllib


def _parse_complex(s: str) -> complex:
    return complex(s.replace(" ", "").replace("i", "j"))


def _load_jobfile(path):
    if path.endswith(".json"):
        with open(path) as f:
            return json.load(f)
    with open(path, "rb") as f:
        return tomllib.load(f)


def _B_from_args(args) -> complex:
    if getattr(args, "B", None) is not None:
        B = _parse_complex(args.B)
    elif getattr(args, "A", None) is not None:
        from .maps import sqrt_B_of_A
        B = sqrt_B_of_A(_parse_complex(args.A))
    else:
        raise SystemExit(2)
    return B


def _add_window(sp, default_width=4.0):
    sp.add_argument("--center", default="0", help="window center (complex)")
    sp.add_argument("--width", type=float, default=default_width)
    sp.add_argument("--res", type=int, default=512)
    sp.add_argument("--budget", type=int, default=400)
    sp.add_argument("--out", default=None, help="output image (.png or .ppm)")
    sp.add_argument("--jobfile", default=None, help="TOML/JSON job file; flags override")
    sp.add_argument("--preset", default=None, help="figure preset name")
    sp.add_argument("--shading", default="steps",
                    choices=["steps", "chessboard", "mask"])


def _render_job(args, plane, param=None):
    from .render import RenderJob
    base = {}
    if args.jobfile:
        base = _load_jobfile(args.jobfile)
    job = RenderJob(
        plane=base.get("plane", plane),
        center=_parse_complex(str(base.get("center", args.center))),
        width=float(base.get("width", args.width)),
        resolution=int(base.get("resolution", args.res)),
        budget=int(base.get("budget", args.budget)),
        param=param if param is not None else (
            _parse_complex(str(base["param"])) if "param" in base else None),
        shading=base.get("shading", args.shading),
    )
    return job


def _do_render(args, plane, param=None):
    from .render import figure_preset, render, write_image
    jobs = []
    if args.preset:
        jobs = figure_preset(args.preset, args.res, args.budget)
    else:
        jobs = [("", _render_job(args, plane, param))]
    out = args.out or (f"{args.preset or plane}.png")
    for suffix, job in jobs:
        img = render(job)
        path = out if not suffix else out.rsplit(".", 1)[0] + suffix + "." + out.rsplit(".", 1)[1]
        write_image(img, path)
        print(f"wrote {path} ({job.plane}, {job.resolution}^2, budget {job.budget})")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="paramandel",
                                 description="parabolic Mandelbrot machinery")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("render-m1", help="render the parabolic connectedness locus")
    _add_window(sp, 5.0)
    sp.add_argument("--chart", choices=["A", "B"], default="A")

    sp = sub.add_parser("render-m", help="render the Mandelbrot set")
    _add_window(sp, 3.0)

    sp = sub.add_parser("render-julia", help="render a Julia set")
    _add_window(sp, 6.0)
    sp.add_argument("--map", choices=["gB", "Qc"], required=True)
    sp.add_argument("--B", default=None)
    sp.add_argument("--A", default=None)
    sp.add_argument("--c", default=None)

    sp = sub.add_parser("trace-ray", help="trace a dynamical ray")
    sp.add_argument("--plane", choices=["Bl", "gB", "Qc"], required=True)
    sp.add_argument("--angle", default=None, help="rational angle like 1/7")
    sp.add_argument("--itinerary", default=None, help="binary like 0(01)")
    sp.add_argument("--depth", type=int, default=30)
    sp.add_argument("--B", default=None)
    sp.add_argument("--A", default=None)
    sp.add_argument("--c", default=None)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("trace-param-ray", help="trace a parameter ray of M1")
    sp.add_argument("--angle", default=None)
    sp.add_argument("--itinerary", default=None)
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("cycle", help="rotation cycle of the doubling map")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)

    sp = sub.add_parser("tower", help="enumerate or extract towers")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--height", type=int, default=3)
    sp.add_argument("--from-B", dest="fromB", default=None,
                    help="extract the tower of this parameter instead")
    sp.add_argument("--depth", type=int, default=2)

    sp = sub.add_parser("puzzle", help="universal puzzle report / SVG export")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--level", type=int, default=2)
    sp.add_argument("--svg", default=None)

    sp = sub.add_parser("param-puzzle", help="parameter puzzle of the p/q wake")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--level", type=int, default=1)

    sp = sub.add_parser("classify", help="finite-depth orbit classification")
    sp.add_argument("--plane", choices=["gB", "Qc"], required=True)
    sp.add_argument("--B", default=None)
    sp.add_argument("--A", default=None)
    sp.add_argument("--c", default=None)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--depth", type=int, default=10)

    sp = sub.add_parser("psi1", help="finite-depth parameter correspondence")
    sp.add_argument("--B", default=None)
    sp.add_argument("--A", default=None)
    sp.add_argument("--depth", type=int, default=2)

    sp = sub.add_parser("selftest", help="run the acceptance suite")
    sp.add_argument("--fast", action="store_true")

    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0

    try:
        return _dispatch(args)
    except (ParamandelError, ValueError) as e:
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e)})
                         + "\n")
        return 3
    except OSError as e:
        sys.stderr.write(json.dumps({"error": "io", "message": str(e)}) + "\n")
        return 2


def _dispatch(args) -> int:
    if args.cmd == "render-m1":
        return _do_render(args, "M1-" + args.chart)
    if args.cmd == "render-m":
        return _do_render(args, "M")
    if args.cmd == "render-julia":
        if args.map == "Qc":
            if args.c is None:
                raise ValueError("render-julia --map Qc needs --c")
            return _do_render(args, "Julia-Qc", _parse_complex(args.c))
        return _do_render(args, "Julia-gB", _B_from_args(args))
    if args.cmd == "cycle":
        from .angles import rotation_cycle
        cyc = rotation_cycle(args.p, args.q)
        print(" ".join(f"{t.numerator}/{t.denominator}" for t in cyc))
        return 0
    if args.cmd == "trace-ray":
        return _trace_ray(args)
    if args.cmd == "trace-param-ray":
        from .parameter import trace_parameter_ray
        label = _label_of(args)
        ray = trace_parameter_ray(label, args.depth)
        text = "\n".join(f"{t:.6f} {z.real:.17g} {z.imag:.17g}"
                         for t, z in ray.vertices)
        header = f"# label {ray.label} plane M1-B status {ray.status}"
        _emit(args.out, header + "\n" + text)
        if ray.landing is not None:
            print(f"landing ~ {ray.landing}")
        return 0
    if args.cmd == "tower":
        return _tower(args)
    if args.cmd == "puzzle":
        return _puzzle(args)
    if args.cmd == "param-puzzle":
        from .puzzles import parameter_puzzle
        pp = parameter_puzzle(args.p, args.q, args.level)
        print(json.dumps({
            "p": args.p, "q": args.q, "level": args.level,
            "pieces": len(pp.pieces),
            "clusters": [[str(t) for t in c] for c in pp.clusters],
        }))
        return 0
    if args.cmd == "classify":
        from .puzzles import classify_parameter
        param = (_parse_complex(args.c) if args.plane == "Qc" else _B_from_args(args))
        v = classify_parameter(args.plane, param, args.p, args.q, args.depth)
        print(json.dumps({"category": v.category, "m": v.m, "r": v.r, "s": v.s,
                          "witness": v.witness}))
        return 0
    if args.cmd == "psi1":
        from .parameter import psi1_approx
        B = _B_from_args(args)
        reg = psi1_approx(B, args.depth)
        if reg.kind == "point":
            print(f"{reg.c.real:.12f}{reg.c.imag:+.12f}i")
        else:
            print(json.dumps({
                "kind": "region", "p": reg.p, "q": reg.q, "depth": reg.depth,
                "diameter": reg.diameter,
                "chords": [[str(x), str(y)] for x, y in reg.chords]}))
        return 0
    if args.cmd == "selftest":
        from .acceptance import run_all
        results = run_all(fast=args.fast)
        for r in results:
            print(r.line())
        npass = sum(1 for r in results if r.passed)
        print(f"{npass}/{len(results)} criteria passed")
        return 0 if npass == len(results) else 3
    raise ValueError(f"unknown command {args.cmd}")


def _label_of(args):
    from .angles import itinerary_of_angle
    if args.itinerary:
        from .angles import Itinerary
        return Itinerary.parse(args.itinerary)
    if args.angle:
        return itinerary_of_angle(Fraction(args.angle))
    raise ValueError("need --angle or --itinerary")


def _trace_ray(args) -> int:
    from .rays import trace_ray_Bl, trace_ray_Qc, trace_ray_gB
    label = _label_of(args)
    if args.plane == "Bl":
        ray = trace_ray_Bl(label, args.depth, external=True)
    elif args.plane == "gB":
        ray = trace_ray_gB(_B_from_args(args), label, args.depth)
    else:
        if args.c is None:
            raise ValueError("trace-ray --plane Qc needs --c")
        ray = trace_ray_Qc(_parse_complex(args.c), label.angle(), args.depth)
    _emit(args.out, ray.to_text())
    print(f"status {ray.status}"
          + (f" landing {ray.landing}" if ray.landing is not None else "")
          + (f" bump depth {ray.bump_depth}" if ray.status == "bumped" else ""))
    return 0


def _emit(path, text):
    if path:
        with open(path, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def _tower(args) -> int:
    from . import towers as TW
    if args.fromB:
        B = _parse_complex(args.fromB)
        tw = TW.tower_from_dynamics("gB", B, args.p, args.q, args.depth)
        print(tw.to_json())
        return 0
    ts = TW.enumerate_towers(args.p, args.q, args.height)
    fertile = sum(1 for t in ts if TW.classify(t) == "fertile")
    print(json.dumps({"p": args.p, "q": args.q, "height": args.height,
                      "count": len(ts), "fertile": fertile,
                      "valid": all(TW.is_valid(t) for t in ts)}))
    return 0


def _puzzle(args) -> int:
    from .puzzles import UniversalParabolic, UniversalYoccoz, chi_correspondence
    rep = chi_correspondence(args.p, args.q, args.level)
    print(json.dumps({"p": args.p, "q": args.q, "level": args.level,
                      "pieces": len(rep.labels), "chi_ok": rep.ok}))
    if args.svg:
        up = UniversalParabolic(args.p, args.q, args.level)
        _write_svg(args.svg, up)
        print(f"wrote {args.svg}")
    return 0


def _write_svg(path, up) -> None:
    lines = ['<svg xmlns="http://www.w3.org/2000/svg" viewBox="-2.2 -2.2 4.4 4.4">',
             '<circle cx="0" cy="0" r="1" fill="none" stroke="black" '
             'stroke-width="0.004"/>']
    for lab in up.labels:
        poly = up.polygon(lab)
        pts = " ".join(f"{z.real:.4f},{-z.imag:.4f}" for z in poly[::2])
        lines.append(f'<polyline points="{pts}" fill="none" stroke="#336" '
                     'stroke-width="0.003"/>')
    lines.append("</svg>")
    with open(path, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    sys.exit(main())
