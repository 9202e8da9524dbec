"""Command-line entry point: ``taunaf <subcommand> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import bounds as bnd
from .blockstats import BlockStats, count_nafs, occurrence_moments
from .cells import Region, boundary_cells, card, ceil_cells, cover_cells, floor_cells
from .census import count_digits, fluctuation_scan
from .digitset import build_digit_set, digit_cells_svg
from .fractal import dim_upper_bound, render
from .koblitz import KoblitzCurve, cost_table, random_scalars, scalar_mul_ztau
from .geometry import voronoi_cell
from .naf import expand, to_text, value, weight
from .svg import polygons_svg
from .ring import OrderError, make_order


class UsageError(ValueError):
    pass


# formatting -------------------------------------------------------------------


def fmt(x) -> str:
    """Rationals as num/den, reals to 6 significant digits, integers in full."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, float):
        return float(fmt(x))
    return x


@dataclass
class Output:
    header: list
    rows: list
    meta: dict

    def text(self) -> str:
        lines = [f"{k}: {fmt(v)}" for k, v in self.meta.items()]
        if self.rows:
            lines.append("  ".join(self.header))
            lines.extend("  ".join(fmt(c) for c in r) for r in self.rows)
        return "\n".join(lines) + "\n"

    def json(self) -> str:
        doc = dict(_jsonable(self.meta))
        if self.rows:
            doc["rows"] = [dict(zip(self.header, _jsonable(list(r)))) for r in self.rows]
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        if self.rows:
            wr.writerow(self.header)
            wr.writerows([fmt(c) for c in r] for r in self.rows)
        else:
            wr.writerow(list(self.meta))
            wr.writerow([fmt(v) for v in self.meta.values()])
        return buf.getvalue()


# argument parsing -------------------------------------------------------------


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers a,b, got {text!r}")
    return a, b


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _disc(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected cx,cy,r")
    cx, cy, r = (_rational(t) for t in parts)
    if r <= 0:
        raise argparse.ArgumentTypeError("radius must be positive")
    return cx, cy, r


def _polygon(text: str) -> list[tuple[Fraction, Fraction]]:
    pts = []
    for item in text.split(";"):
        xy = item.split(",")
        if len(xy) != 2:
            raise argparse.ArgumentTypeError(f"bad vertex {item!r}")
        pts.append((_rational(xy[0]), _rational(xy[1])))
    return pts


def _scan(text: str) -> tuple[Fraction, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected base,octaves,phases")
    return _rational(parts[0]), int(parts[1]), int(parts[2])


CELL_OPS = ("floor", "ceil", "cover", "boundary")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=1, help="trace of tau (default 1)")
    common.add_argument("-q", type=int, default=2, help="norm of tau (default 2)")
    common.add_argument("-w", type=int, default=2, help="width (default 2)")
    fmt_group = common.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true", help="JSON output")
    fmt_group.add_argument("--csv", metavar="PATH", help="write CSV to PATH ('-' for stdout)")
    common.add_argument("-o", "--output", metavar="PATH", help="write the main output to PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")

    region = argparse.ArgumentParser(add_help=False)
    g = region.add_mutually_exclusive_group()
    g.add_argument("--disc", type=_disc, metavar="CX,CY,R")
    g.add_argument("--polygon", type=_polygon, metavar="X1,Y1;X2,Y2;...")
    region.add_argument("-N", type=_rational, default=Fraction(1), help="scaling factor N")

    parser = argparse.ArgumentParser(prog="taunaf", description="tau-adic width-w non-adjacent forms")
    sub = parser.add_subparsers(dest="command", required=True)
    d = sub.add_parser("digitset", parents=[common], help="minimal-norm digit set")
    d.add_argument("--svg", metavar="PATH", help="also draw the digit cells")
    e = sub.add_parser("expand", parents=[common], help="w-NAF of an element a + b tau")
    e.add_argument("--z", type=_pair, required=True, metavar="A,B")
    s = sub.add_parser("stats", parents=[common], help="block-length digit statistics")
    s.add_argument("-n", type=int, default=20, help="block length")
    s.add_argument("--digit", type=_pair, metavar="A,B", help="the nonzero digit to count (default 1)")
    b = sub.add_parser("bounds", parents=[common], help="value bounds and problematic-case searches")
    b.add_argument("--tables", action="store_true", help="regenerate the problematic-value tables")
    c = sub.add_parser("cells", parents=[common, region], help="cell rounding operators")
    c.add_argument("--scale", type=int, default=0, help="cells of tau^-scale Z[tau]")
    c.add_argument("--op", choices=CELL_OPS + ("card", "summary"), default="summary")
    c.add_argument("--svg", metavar="PATH", help="draw the selected cells")
    r = sub.add_parser("render", parents=[common], help="SVG of the fundamental domain")
    r.add_argument("-l", "--level", type=int, default=8)
    r.add_argument("--mode", choices=("digits", "plain"), default="digits")
    r.add_argument("--svg", metavar="PATH")
    sub.add_parser("dimension", parents=[common], help="boundary dimension bound")
    cs = sub.add_parser("census", parents=[common, region], help="digit census over N U")
    cs.add_argument("--scan", type=_scan, metavar="BASE,OCTAVES,PHASES")
    k = sub.add_parser("curve-demo", parents=[common], help="Frobenius-and-add on a binary Koblitz curve")
    k.add_argument("-m", type=int, default=19, choices=(7, 11, 19))
    k.add_argument("-a", type=int, default=1, choices=(0, 1))
    k.add_argument("--trials", type=int, default=200)
    return parser


# subcommands ------------------------------------------------------------------


def _digit_set(args):
    if args.w < 2:
        raise UsageError("w must be at least 2")
    return build_digit_set(make_order(args.p, args.q), args.w)


def _region(args, order) -> Region:
    if args.polygon is not None:
        return Region.polygon(order, args.polygon)
    cx, cy, r = args.disc if args.disc is not None else (Fraction(0), Fraction(0), Fraction(1))
    return Region.disc(order, cx, cy, r * r)


def cmd_digitset(args) -> Output:
    ds = _digit_set(args)
    rows = [(d.a, d.b, d.norm()) for d in ds.digits]
    meta = {"p": args.p, "q": args.q, "w": args.w, "size": len(ds)}
    if ds.warning:
        meta["warning"] = ds.warning
    if args.svg:
        _write(args.svg, digit_cells_svg(ds))
        meta["svg"] = args.svg
    return Output(["a", "b", "norm"], rows, meta)


def cmd_expand(args) -> Output:
    ds = _digit_set(args)
    z = ds.order(*args.z)
    word = expand(ds, z)
    rows = [(j, d.a, d.b) for j, d in sorted(word.support.items(), reverse=True)]
    meta = {
        "z": f"{z.a},{z.b}",
        "word": to_text(word),
        "weight": weight(word),
        "length": word.left_length,
        "value_check": value(word) == z,
    }
    return Output(["index", "a", "b"], rows, meta)


def cmd_stats(args) -> Output:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    if args.q < 2 or args.w < 2:
        raise UsageError("need q >= 2 and w >= 2")
    st = BlockStats(args.q, args.w)
    digit = (1, 0) if args.digit is None else args.digit
    ds = _digit_set(args)
    if digit not in {(d.a, d.b) for d in ds.nonzero}:
        raise UsageError(f"{digit[0]},{digit[1]} is not a nonzero digit")
    mean, var = occurrence_moments(args.n, args.q, args.w)
    meta = {
        "q": args.q,
        "w": args.w,
        "n": args.n,
        "digit": f"{digit[0]},{digit[1]}",
        "nonzero_digits": st.num_nonzero_digits,
        "e_w": st.e_w,
        "v_w": st.v_w,
        "rho": st.rho,
        "count": count_nafs(args.n, args.q, args.w),
        "mean": mean,
        "variance": var,
        "mean_deviation": st.mean_deviation(args.n),
        "variance_deviation": var - st.v_w * args.n,
    }
    return Output([], [], meta)


def cmd_bounds(args) -> Output:
    if args.tables:
        rows = []
        for prof in bnd.problematic_profiles():
            up, ap, lo = prof.upper, prof.approx, prof.lower
            rows.append(
                (
                    prof.q, prof.p, prof.w,
                    up.ell, up.radius, up.margin,
                    ap.ell, ap.radius, ap.margin,
                    lo.ell, lo.radius, lo.nu_tilde, bnd.log_tau(prof.f_U / lo.nu_tilde, prof.q),
                )
            )
        header = [
            "q", "p", "w",
            "upper_l", "upper_radius", "upper_margin",
            "approx_k", "approx_radius", "approx_margin",
            "lower_l", "lower_radius", "nu_tilde", "log_fU_over_nu_tilde",
        ]
        return Output(header, rows, {})
    ds = _digit_set(args)
    prof = bnd.bounds_profile(ds)
    meta = {
        "p": prof.p, "q": prof.q, "w": prof.w,
        "f_U": prof.f_U, "nu": prof.nu, "f_L": prof.f_L, "problematic": prof.problematic,
    }
    if prof.upper is not None:
        meta.update(upper_l=prof.upper.ell, approx_k=prof.approx.ell, lower_l=prof.lower.ell)
    return Output([], [], meta)


def cmd_cells(args) -> Output:
    ds = _digit_set(args)
    o = ds.order
    U = _region(args, o).scaled(args.N)
    j = args.scale
    if args.op == "card":
        return Output([], [], {"N": args.N, "scale": j, "card": card(o, U, j)})
    if args.op in CELL_OPS:
        op = {"floor": floor_cells, "ceil": ceil_cells, "cover": cover_cells, "boundary": boundary_cells}
        cells = op[args.op](o, U, j)
        centers = sorted(cells, key=lambda z: (z.b, z.a))
        t = o.tau.complex() ** j
        rows = [(z.a, z.b, (z.complex() / t).real, (z.complex() / t).imag) for z in centers]
        if args.svg:
            cell = voronoi_cell(o)
            _write(args.svg, polygons_svg([(cell.polygon(z, j), "#2471a3") for z in centers]))
        return Output(["a", "b", "x", "y"], rows, {"op": args.op, "scale": j, "cells": len(rows)})
    fl, ce, bd, co = (f(o, U, j) for f in (floor_cells, ceil_cells, boundary_cells, cover_cells))
    meta = {
        "N": args.N,
        "scale": j,
        "floor": len(fl),
        "ceil": len(ce),
        "boundary": len(bd),
        "cover": len(co),
        "card": card(o, U, j),
        "measure": U.measure(),
    }
    return Output([], [], meta)


def cmd_render(args) -> Output:
    ds = _digit_set(args)
    target = args.svg or args.output
    doc = render(ds, args.level, args.mode)
    if target is None:
        sys.stdout.write(doc)
        return Output([], [], {})
    _write(target, doc)
    return Output([], [], {"svg": target, "level": args.level})


def cmd_dimension(args) -> Output:
    if args.q < 2 or args.w < 2:
        raise UsageError("need q >= 2 and w >= 2")
    rep = dim_upper_bound(q=args.q, w=args.w)
    meta = {
        "q": args.q,
        "w": args.w,
        "eigenvalue": rep.eigenvalue,
        "sigma_gap": float(rep.gap),
        "dimension_bound": rep.bound,
        "bound_deficit": 2 - rep.bound,
        "growth_rate": rep.growth_rate,
    }
    return Output([], [], meta)


def cmd_census(args) -> Output:
    ds = _digit_set(args)
    U = _region(args, ds.order)
    digits = [(d.a, d.b) for d in ds.nonzero]
    names = [f"Z_{a}_{b}" for a, b in digits]
    if args.scan is not None:
        base, octaves, phases = args.scan
        if octaves < 1 or phases < 1:
            raise UsageError("scan needs at least one octave and one phase")
        sc = fluctuation_scan(ds, U, float(base), range(octaves), [i / phases for i in range(phases)])
        rows = [(m, f, base_n, sc.psi_hat[(m, f)]) for (m, f), base_n in _scan_points(sc, ds)]
        return Output(["octave", "phase", "N", "psi_hat"], rows, {})
    workers = args.threads if args.threads is not None else (os.cpu_count() or 1)
    res = count_digits(ds, U, args.N, workers=workers)
    row = [res.N] + [res.Z[d] for d in digits] + [res.main_term] + [res.psi_hat[d] for d in digits]
    header = ["N"] + names + ["main_term"] + [f"psi_hat_{a}_{b}" for a, b in digits]
    return Output(header, [row], {})


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _scan_points(sc, ds):
    t = ds.order.abs_tau
    for m in sc.octaves:
        for f in sc.phases:
            yield (m, f), sc.base_N * t ** (m + f)


def cmd_curve_demo(args) -> Output:
    if not 2 <= args.w <= 6:
        raise UsageError("curve-demo supports 2 <= w <= 6")
    if args.trials < 1:
        raise UsageError("trials must be positive")
    curve = KoblitzCurve(args.m, args.a)
    rng = random.Random(args.seed)
    scalars = random_scalars(args.trials, 2 ** 30, rng, curve.mu)
    # spot-check the arithmetic against the reference multiplication
    P = curve.random_point(rng)
    ds = curve.digit_set(args.w)
    for z in scalars[:5]:
        Q, _ = scalar_mul_ztau(curve, ds, z, P)
        if Q != curve.mul_ztau_reference(z, P):
            raise AssertionError("Frobenius-and-add disagrees with the reference multiplication")
    rows = [
        (r.w, r.mean_adds, r.mean_length, float(BlockStats(2, r.w).e_w) * r.mean_length, r.predicted_adds, r.precomp_size)
        for r in cost_table(scalars, curve.mu, range(2, args.w + 1))
    ]
    meta = {"m": args.m, "a": args.a, "mu": curve.mu, "trials": args.trials}
    header = ["w", "mean_adds", "mean_length", "e_w_length", "predicted_adds", "precomp_size"]
    return Output(header, rows, meta)


COMMANDS = {
    "digitset": cmd_digitset,
    "expand": cmd_expand,
    "stats": cmd_stats,
    "bounds": cmd_bounds,
    "cells": cmd_cells,
    "render": cmd_render,
    "dimension": cmd_dimension,
    "census": cmd_census,
    "curve-demo": cmd_curve_demo,
}


def _emit(args, out: Output) -> None:
    if args.csv:
        text = out.csv()
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return
    text = out.json() if args.json else out.text()
    if args.output and args.command != "render":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif out.meta or out.rows:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None and args.threads < 1:
        parser.print_usage(sys.stderr)
        print("taunaf: error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        out = COMMANDS[args.command](args)
        _emit(args, out)
    except (UsageError, OrderError, ValueError) as exc:
        print(f"taunaf: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and signal an internal failure
        print(f"taunaf: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
