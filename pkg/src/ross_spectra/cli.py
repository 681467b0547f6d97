"""Command-line entry point: ``ross-spectra <subcommand> [options]``.

Exit codes: 0 when every check passed, 1 when a check failed (the report is
still written), 2 for usage and domain errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import appendix as ap
from .eigen import DEFAULT_TOL, BracketError, ball_spectrum, gap_row, lambda1_ball, radius_for_lambda1
from .geometry import Curvature, DomainError, SpaceSpec
from .integrator import IntegrationError, RadialProfile
from .quotient import build_quotient_curves, verify_monotonicity
from .rearrangement import chiti_report, ppw_pipeline
from .report import TOOL_VERSION, VerificationReport, document, dumps_json, reports_to_csv, rows_to_csv, write_text
from .suite import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SPACE_K = {"RH": 1, "CH": 2, "HH": 4, "OH": 8}
GAP_HEADER = ("R", "lambda1", "lambda2", "lambda1_S_R", "margin")


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ plot data

def emit_plot_data(curve: RadialProfile, path) -> None:
    """Two-column ``r,value`` CSV with 17 significant digits and LF line endings."""
    grid = np.asarray(curve.grid, dtype=float)
    vals = np.asarray(curve.values, dtype=float)
    if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(vals))):
        raise ValueError(f"curve for {path} has non-finite entries")
    lines = ["r,value"] + [f"{r:.17g},{v:.17g}" for r, v in zip(grid, vals)]
    write_text(path, "\n".join(lines) + "\n")


def _curve(r, values) -> RadialProfile:
    r = np.asarray(r, dtype=float)
    v = np.asarray(values, dtype=float)
    dom = (float(r[0]), float(r[-1])) if r.size else (0.0, 0.0)
    return RadialProfile(r, v, np.zeros_like(v), dom)


def _write_curves(directory, curves: dict[str, RadialProfile]) -> None:
    d = Path(directory)
    for name in sorted(curves):
        emit_plot_data(curves[name], d / f"{name}.csv")


def figure_curves(points: int = 801) -> dict[str, RadialProfile]:
    """Data behind the appendix figures."""
    cat = ap.catalog()
    r_g = np.linspace(1.0, 2.0, points)
    r = np.linspace(0.5, 2.5, points)
    r_mid = np.linspace(1.0, 2.0, points)
    A1, A3, B3 = cat["A1"](r_mid), cat["A3"](r_mid), cat["B3"](r_mid)
    mix = tuple(44 * a + b for a, b in zip(A3, B3))
    red_blue = np.sinh(r_mid) ** 6 * ap.cross2(A1, mix)
    return {
        "figure1_g_on_1_2": _curve(r_g, ap.catalog_curve("g_section5", r_g)),
        "figure2_49A1+9B1_x_49A3+9B3": _curve(r_mid, ap.catalog_curve("4:2:VxG3", r_mid)),
        "figure3_sinh6_A1_x_44A3+B3": _curve(r_mid, red_blue),
        "figure4_49A1+9B1_x_B2": _curve(r, ap.catalog_curve("4:2:VxB2", r)),
        "figure5_B2_x_A2": _curve(r, ap.catalog_curve("B2xA2", r)),
    }


# ------------------------------------------------------------------ helpers

def _space(args) -> SpaceSpec:
    k = args.k
    name = getattr(args, "space", "KH")
    if name != "KH":
        implied = SPACE_K[name]
        if k is not None and k != implied:
            raise UsageError(f"--space {name} has k = {implied}, but --k {k} was given")
        k = implied
    if k is None or args.n is None:
        raise UsageError("--k and --n are required")
    curv = Curvature.COMPACT if getattr(args, "compact", False) else Curvature.NONCOMPACT
    return SpaceSpec(k, args.n, curv)


def _tol(args) -> float:
    return DEFAULT_TOL if args.tol is None else args.tol


def _nodes(args, default: int = 2001) -> int:
    return default if args.grid is None else args.grid + 1


def _emit(args, text: str) -> None:
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _emit_reports(args, command: str, reports: list[VerificationReport], extra: dict | None = None) -> int:
    fmt = args.format or "json"
    extra = dict(extra or {})
    extra["b2_form"] = ap.b2_note()
    if fmt == "json":
        _emit(args, dumps_json(document(command, reports, extra)))
    else:
        _emit(args, reports_to_csv(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _emit_data(args, command: str, payload: dict, header=None, row=None) -> int:
    if (args.format or "json") == "json":
        doc = {"tool": "ross-spectra", "version": TOOL_VERSION, "command": command, **payload}
        _emit(args, dumps_json(doc))
    else:
        header = header or sorted(payload)
        _emit(args, rows_to_csv(header, [row or [payload[h] for h in header]]))
    return EXIT_OK


# ------------------------------------------------------------------ subcommands

def cmd_ball_spectrum(args) -> int:
    sp = _space(args)
    spec = ball_spectrum(sp, args.radius, _tol(args), n_nodes=_nodes(args))
    if args.plot_data:
        _write_curves(args.plot_data, {"g1": spec.g1, "g2": spec.g2})
    summary = spec.summary()
    flat = {"k": sp.k, "n": sp.n, "curvature": sp.curvature.value,
            **{k: v for k, v in summary.items() if k != "space"}}
    return _emit_data(args, "ball-spectrum", summary if (args.format or "json") == "json" else flat)


def cmd_radius_for_lambda1(args) -> int:
    sp = _space(args)
    tol = 1e-9 if args.tol is None else args.tol
    R = radius_for_lambda1(sp, args.lam, tol)
    payload = {"k": sp.k, "n": sp.n, "curvature": sp.curvature.value, "lambda_target": args.lam,
               "radius": R, "lambda1_at_radius": lambda1_ball(sp, R)}
    return _emit_data(args, "radius-for-lambda1", payload)


def _radii(r_min: float, r_max: float, step: float) -> list[float]:
    if step <= 0 or r_max < r_min or r_min <= 0:
        raise UsageError("need 0 < r-min <= r-max and step > 0")
    count = int(math.floor((r_max - r_min) / step + 1e-9)) + 1
    return [round(r_min + i * step, 12) for i in range(count)]


def cmd_verify_gap(args) -> int:
    sp = _space(args)
    if sp.compact:
        raise UsageError("the gap grid is defined for the noncompact type")
    rows = [gap_row(sp, R, _tol(args)) for R in _radii(args.r_min, args.r_max, args.step)]
    worst = min(rows, key=lambda r: r.margin)
    rep = VerificationReport.from_margin("gap:lambda2-lambda1-lambda1(S_R)", worst.margin, 1e-8, space=sp,
                                         location={"radius": worst.R},
                                         parameters={"r_min": args.r_min, "r_max": args.r_max, "step": args.step})
    if args.plot_data:
        grid = [r.R for r in rows]
        _write_curves(args.plot_data, {"gap_margin": _curve(grid, [r.margin for r in rows]),
                                       "lambda1": _curve(grid, [r.lambda1 for r in rows]),
                                       "lambda2": _curve(grid, [r.lambda2 for r in rows])})
    if (args.format or "csv") == "csv":
        _emit(args, rows_to_csv(GAP_HEADER, [r.as_tuple() for r in rows]))
        return EXIT_OK if rep.passed else EXIT_FAIL
    extra = {"rows": [dict(zip(GAP_HEADER, r.as_tuple())) for r in rows]}
    args.format = "json"
    return _emit_reports(args, "verify-gap", [rep], extra)


def cmd_verify_monotonicity(args) -> int:
    sp = _space(args)
    grid = 2000 if args.grid is None else args.grid
    spec = ball_spectrum(sp, args.radius, _tol(args), n_nodes=grid + 1)
    rep = verify_monotonicity(spec, grid)
    if args.plot_data:
        c = build_quotient_curves(spec)
        _write_curves(args.plot_data, {"G": c.G, "q": c.q, "B": c.B, "psi": c.psi, "g1": spec.g1, "g2": spec.g2})
    return _emit_reports(args, "verify-monotonicity", [rep])


def cmd_verify_appendix(args) -> int:
    if args.k not in (1, 2, 4, 8) or args.n is None or args.n < 2:
        raise UsageError("need k in {1, 2, 4, 8} and n >= 2")
    order = args.series_order
    if not 0 <= order <= 60:
        raise UsageError("--series-order must lie in [0, 60]")
    reports = ap.verify_appendix(args.k, args.n, series_order=order)
    if args.plot_data:
        _write_curves(args.plot_data, figure_curves())
    return _emit_reports(args, "verify-appendix", reports)


def _annulus_args(args):
    sp = _space(args)
    if not 0 < args.r_in < args.r_out:
        raise UsageError("need 0 < r-in < r-out")
    return sp


def cmd_ppw_annulus(args) -> int:
    sp = _annulus_args(args)
    res = ppw_pipeline(sp, args.r_in, args.r_out)
    if args.plot_data:
        _write_curves(args.plot_data, {"u1": res.u1.profile, "u1_star": res.u_star.profile, "z": res.z.profile})
    extra = {"margin": res.report.parameters["margin"], "chain": res.chain}
    return _emit_reports(args, "ppw-annulus", [res.report], extra)


def cmd_chiti(args) -> int:
    sp = _annulus_args(args)
    rep = chiti_report(sp, args.r_in, args.r_out)
    return _emit_reports(args, "chiti", [rep])


def cmd_suite(args) -> int:
    reports = run_suite(args.profile)
    if args.plot_data:
        _write_curves(args.plot_data, figure_curves())
    return _emit_reports(args, f"suite --profile {args.profile}", reports)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="eigenvalue tolerance")
    common.add_argument("--grid", type=int, default=None, help="number of grid intervals for profiles")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--plot-data", default=None, metavar="DIR",
                        help="directory for two-column r,value CSV files, one per curve")

    space = argparse.ArgumentParser(add_help=False)
    space.add_argument("--k", type=int, default=None)
    space.add_argument("--n", type=int, default=None)
    space.add_argument("--space", choices=("KH",) + tuple(SPACE_K), default="KH")

    p = argparse.ArgumentParser(prog="ross-spectra", description="Dirichlet spectra of balls and annuli "
                                "in rank-one symmetric spaces, and numerical checks of the PPW bound.")
    p.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ball-spectrum", parents=[common, space])
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_ball_spectrum)

    s = sub.add_parser("radius-for-lambda1", parents=[common, space])
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_radius_for_lambda1)

    s = sub.add_parser("verify-gap", parents=[common, space])
    s.add_argument("--r-min", type=float, default=0.1)
    s.add_argument("--r-max", type=float, default=5.0)
    s.add_argument("--step", type=float, default=0.1)
    s.set_defaults(func=cmd_verify_gap)

    s = sub.add_parser("verify-monotonicity", parents=[common, space])
    s.add_argument("--radius", type=float, required=True)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_verify_monotonicity)

    s = sub.add_parser("verify-appendix", parents=[common, space])
    s.add_argument("--series-order", type=int, default=40)
    s.set_defaults(func=cmd_verify_appendix)

    for name, func in (("ppw-annulus", cmd_ppw_annulus), ("chiti", cmd_chiti)):
        s = sub.add_parser(name, parents=[common, space])
        s.add_argument("--r-in", type=float, required=True)
        s.add_argument("--r-out", type=float, required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("suite", parents=[common])
    s.add_argument("--profile", choices=("quick", "full"), default="quick")
    s.set_defaults(func=cmd_suite)
    return p


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, DomainError, BracketError, IntegrationError, ValueError) as exc:
        print(f"ross-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ross-spectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
