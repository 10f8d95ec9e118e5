"""Command-line front end: batch subcommands with deterministic file outputs.

Exit codes: 0 success, 1 computation error (domain, resonance, convergence),
2 usage error.  Complex-valued flags accept "re" or "re,im"; prefix negative
values with '=' (e.g. --c=-0.8,0.1).  QCDYN_THREADS caps render parallelism
without changing any output byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from . import fixed_points as fp
from . import jets, orbits, render
from .errors import (
    BranchDegenerate,
    ContractError,
    DomainError,
    EigenvalueError,
    NoConvergence,
    ResonanceError,
)
from .maps import MapParams

_COMPUTE_ERRORS = (
    DomainError,
    ResonanceError,
    EigenvalueError,
    ContractError,
    BranchDegenerate,
    NoConvergence,
)


def _complex_flag(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _add_grid_flags(sp, default_iter):
    sp.add_argument("--center", type=_complex_flag, default=0j, help="grid center re,im")
    sp.add_argument("--width", type=float, required=True, help="grid width")
    sp.add_argument("--height", type=float, default=None, help="grid height (default: width*ny/nx)")
    sp.add_argument("--nx", type=int, default=512)
    sp.add_argument("--ny", type=int, default=512)
    sp.add_argument("--max-iter", type=int, default=default_iter)
    sp.add_argument(
        "--mode",
        choices=[render.ESCAPE_ONLY, render.ATTRACTOR_DETECT],
        default=render.ESCAPE_ONLY,
    )
    sp.add_argument("--format", choices=["pgm", "csv"], default="pgm")


def _grid_from_args(args) -> render.GridSpec:
    height = args.height if args.height is not None else args.width * args.ny / args.nx
    return render.GridSpec(args.center, args.width, height, args.nx, args.ny)


def _write_raster(raster, args):
    if args.format == "pgm":
        render.write_pgm(raster, args.output)
    else:
        render.write_cells_csv(raster, args.output)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcdyn", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("julia", help="render a filled Julia set")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--c", type=_complex_flag, required=True)
    _add_grid_flags(sp, 1000)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("locus", help="render the connectedness locus")
    sp.add_argument("--alpha", type=float, required=True)
    _add_grid_flags(sp, 256)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("fixed-points", help="locate and classify fixed points")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--c", type=_complex_flag, required=True)
    sp.add_argument("-o", "--output", default=None, help=".csv or .json table (optional)")

    sp = sub.add_parser("curves", help="trace bifurcation curves and their images")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument(
        "--which",
        choices=[fp.DELTA, fp.GAMMA_PLUS, fp.GAMMA_MINUS, "all"],
        default="all",
    )
    sp.add_argument("--n", type=int, default=512, help="samples per curve")
    sp.add_argument("--cusps", action="store_true", help="append cusp rows for gamma+")
    sp.add_argument("--probe", type=int, default=0, metavar="PAIRS",
                    help="also run the injectivity probe with this many pairs")
    sp.add_argument("--seed", type=int, default=42, help="probe RNG seed")
    sp.add_argument("-o", "--output", required=True, help="CSV output")

    sp = sub.add_parser("hopf", help="Hopf number at one angle or over a sweep")
    sp.add_argument("--alpha", type=str, required=True, help="value or comma list")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", type=float, help="single angle")
    group.add_argument("--theta-grid", type=int, help="uniform offset grid size over (0, 2pi)")
    sp.add_argument("-o", "--output", default=None, help="CSV output (required for sweeps)")

    sp = sub.add_parser("orbit", help="critical or periodic orbit")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--c", type=_complex_flag, required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--critical", type=int, metavar="N", help="critical orbit length")
    group.add_argument("--periodic", type=int, metavar="Q", help="period for Newton search")
    sp.add_argument("--seed-point", type=_complex_flag, default=0.1 + 0.1j,
                    help="Newton seed for --periodic")
    sp.add_argument("-o", "--output", default=None, help="CSV output")

    sp = sub.add_parser("leaf", help="pull a polyline back through inverse branches")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--c", type=_complex_flag, required=True)
    sp.add_argument("--radius", type=float, required=True, help="initial circle radius")
    sp.add_argument("--points", type=int, default=256)
    sp.add_argument("--word", type=str, required=True,
                    help="branch word, e.g. 010 or 0,1,0")
    sp.add_argument("-o", "--output", required=True, help="CSV output")
    return ap


def _validate(parser: argparse.ArgumentParser, args) -> None:
    """Reject malformed run configurations with usage text (exit code 2)."""
    alpha_min_exclusive = args.command in {"fixed-points", "curves"}
    if hasattr(args, "alpha") and not isinstance(args.alpha, str):
        if alpha_min_exclusive and not args.alpha > 0.5:
            parser.error(f"{args.command}: alpha must be > 1/2")
        if not args.alpha >= 0.5:
            parser.error(f"{args.command}: alpha must be >= 1/2")
    if getattr(args, "max_iter", 1) < 1:
        parser.error("max-iter must be >= 1")
    if getattr(args, "width", 1.0) <= 0 or (getattr(args, "height", None) or 1.0) <= 0:
        parser.error("grid width and height must be positive")
    if getattr(args, "nx", 1) < 1 or getattr(args, "ny", 1) < 1:
        parser.error("grid needs at least one pixel per axis")
    if args.command == "hopf":
        try:
            alphas = [float(tok) for tok in args.alpha.split(",") if tok]
        except ValueError:
            parser.error("hopf: --alpha expects a value or comma list")
        if not alphas or any(not a > 0.5 for a in alphas):
            parser.error("hopf: every alpha must be > 1/2")
        if args.theta_grid is not None and args.theta_grid < 1:
            parser.error("hopf: theta grid size must be >= 1")
        if args.theta is None and not args.output:
            parser.error("hopf: sweeps need -o/--output for the CSV table")
    if args.command == "orbit":
        if args.critical is not None and args.critical < 1:
            parser.error("orbit: --critical length must be >= 1")
        if args.periodic is not None and args.periodic < 1:
            parser.error("orbit: --periodic period must be >= 1")
    if args.command == "leaf":
        if args.radius <= 0:
            parser.error("leaf: radius must be positive")
        if args.points < 2:
            parser.error("leaf: need at least two polyline points")
        if any(ch not in "01" for ch in args.word.replace(",", "")):
            parser.error("leaf: branch word must consist of 0s and 1s")


def _cmd_julia(args) -> int:
    raster = render.render_julia(
        MapParams(args.alpha, args.c), _grid_from_args(args), args.max_iter, args.mode
    )
    _write_raster(raster, args)
    return 0


def _cmd_locus(args) -> int:
    raster = render.render_locus(args.alpha, _grid_from_args(args), args.max_iter, args.mode)
    _write_raster(raster, args)
    return 0


def _cmd_fixed_points(args) -> int:
    records = fp.find_fixed_points(MapParams(args.alpha, args.c))
    print(f"{'re':>22} {'im':>22} {'class':>11} {'|l1|':>10} {'|l2|':>10} {'det':>10} {'trace':>10}")
    for r in records:
        print(
            f"{r.z.real:22.15g} {r.z.imag:22.15g} {r.cls:>11}"
            f" {abs(r.eigenvalues[0]):10.6g} {abs(r.eigenvalues[1]):10.6g}"
            f" {r.det:10.6g} {r.trace:10.6g}"
        )
    if args.output:
        if args.output.endswith(".json"):
            payload = [
                {
                    "re": r.z.real,
                    "im": r.z.imag,
                    "class": r.cls,
                    "eigenvalues": [[e.real, e.imag] for e in r.eigenvalues],
                    "det": r.det,
                    "trace": r.trace,
                }
                for r in records
            ]
            with open(args.output, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
        else:
            with open(args.output, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(
                    ["re", "im", "class", "eig1_re", "eig1_im", "eig2_re", "eig2_im", "det", "trace"]
                )
                for r in records:
                    e1, e2 = r.eigenvalues
                    w.writerow(
                        [repr(r.z.real), repr(r.z.imag), r.cls,
                         repr(e1.real), repr(e1.imag), repr(e2.real), repr(e2.imag),
                         repr(r.det), repr(r.trace)]
                    )
    return 0


def _cmd_curves(args) -> int:
    which = [fp.DELTA, fp.GAMMA_PLUS, fp.GAMMA_MINUS] if args.which == "all" else [args.which]
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["curve", "kind", "index", "re", "im"])
        for name in which:
            src = fp.trace_curve(args.alpha, name, args.n)
            img = fp.trace_curve_image(args.alpha, name, args.n)
            for idx, z in enumerate(src.points):
                w.writerow([name, "source", idx, repr(z.real), repr(z.imag)])
            for idx, z in enumerate(img.points):
                w.writerow([name, "image", idx, repr(z.real), repr(z.imag)])
        if args.cusps:
            for idx, z in enumerate(fp.detect_cusps(args.alpha)):
                w.writerow([fp.GAMMA_PLUS, "cusp", idx, repr(z.real), repr(z.imag)])
    if args.probe:
        verdict = fp.injectivity_probe(args.alpha, args.probe, args.seed)
        print(f"injectivity probe ({args.probe} pairs, seed {args.seed}): "
              f"{'passed' if verdict else 'FAILED'}")
        if not verdict:
            return 1
    return 0


def _cmd_hopf(args) -> int:
    alphas = [float(tok) for tok in args.alpha.split(",") if tok]
    if args.theta is not None:
        thetas = [args.theta]
    else:
        n = args.theta_grid
        thetas = [2.0 * math.pi * (k + 0.5) / n for k in range(n)]
    rows = jets.hopf_sweep(alphas, thetas)
    if args.theta is not None and len(alphas) == 1:
        alpha, beta, theta, val, status = rows[0]
        if status != "ok":
            print(f"alpha={alpha} theta={theta}: {status}", file=sys.stderr)
            return 1
        print(f"alpha={alpha} theta={theta} hopf={val!r}")
    if args.output:
        jets.write_sweep_csv(rows, args.output)
    return 0


def _cmd_orbit(args) -> int:
    p = MapParams(args.alpha, args.c)
    if args.critical is not None:
        trace = orbits.critical_orbit(p, args.critical)
        print(f"critical orbit: {len(trace.points)} points, "
              f"{'escaped' if trace.escaped else 'bounded'}")
        pts = trace.points
        header = ["index", "re", "im"]
    else:
        orb = orbits.find_periodic_orbit(p, args.periodic, args.seed_point)
        m1, m2 = orb.multipliers
        print(f"period {orb.period} ({orb.cls}); multipliers "
              f"{m1.real:+.9g}{m1.imag:+.9g}i, {m2.real:+.9g}{m2.imag:+.9g}i")
        pts = orb.points
        header = ["index", "re", "im"]
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for idx, z in enumerate(pts):
                w.writerow([idx, repr(z.real), repr(z.imag)])
    return 0


def _cmd_leaf(args) -> int:
    word = [int(ch) for ch in args.word.replace(",", "")]
    circle = [
        args.radius * complex(math.cos(2 * math.pi * k / args.points),
                              math.sin(2 * math.pi * k / args.points))
        for k in range(args.points)
    ]
    leaf = fp.Polyline(tuple(circle), closed=True)
    pulled = orbits.pullback_leaf(MapParams(args.alpha, args.c), leaf, word)
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "re", "im"])
        for idx, z in enumerate(pulled.points):
            w.writerow([idx, repr(z.real), repr(z.imag)])
    return 0


_DISPATCH = {
    "julia": _cmd_julia,
    "locus": _cmd_locus,
    "fixed-points": _cmd_fixed_points,
    "curves": _cmd_curves,
    "hopf": _cmd_hopf,
    "orbit": _cmd_orbit,
    "leaf": _cmd_leaf,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return _DISPATCH[args.command](args)
    except _COMPUTE_ERRORS as exc:
        print(f"qcdyn {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
