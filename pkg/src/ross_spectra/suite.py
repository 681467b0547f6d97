"""Verification grids and the quick/full suites run by the command line.

Grid points are evaluated in worker processes (capped by the environment
variable ROSS_SPECTRA_THREADS); results are always assembled in the input
order, so output is independent of scheduling.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import appendix as ap
from .eigen import GAP_PAIRS, GAP_RADII, GapRow, gap_row, lambda1_ball, lambda2_ball, lambda02_ball
from .geometry import Curvature, SpaceSpec
from .oracles import bessel_zeros, fd_extrapolated
from .quotient import verify_monotonicity
from .rearrangement import chiti_report, ppw_test
from .report import VerificationReport

THREADS_ENV = "ROSS_SPECTRA_THREADS"

CALIBRATION_PAIRS = ((2, 2), (4, 2), (8, 2))
CALIBRATION_RADIUS = 0.01
CALIBRATION_TOL = 5e-3

ORACLE_CASES = (
    (2, 2, "noncompact", 0.5), (2, 2, "noncompact", 1.0), (2, 2, "noncompact", 2.0),
    (2, 3, "noncompact", 1.0), (2, 5, "noncompact", 1.5), (4, 2, "noncompact", 1.0),
    (4, 3, "noncompact", 0.7), (8, 2, "noncompact", 1.0), (8, 2, "noncompact", 2.0),
    (1, 2, "noncompact", 1.0), (1, 3, "noncompact", 2.0), (2, 2, "compact", math.pi / 4),
)
ORACLE_TOL = 1e-6
ORACLE_NODES = 4000

GAP_TOL = 1e-8
MONOTONICITY_RADII = (0.5, 1.0, 2.0)
LEMMA_RADII = (1.0, 2.0)

PPW_ANNULI = tuple((k, n, r_in, round(r_in + w, 10))
                   for k, n in ((2, 2), (4, 2))
                   for r_in in (0.1, 0.2, 0.5, 1.0, 2.0)
                   for w in (0.5, 1.0))
NEAR_BALL_ANNULI = ((2, 2, 1e-6, 1.0), (4, 2, 1e-6, 1.0))


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise ValueError(f"{THREADS_ENV} must be an integer (got {raw!r})") from exc
        if value < 1:
            raise ValueError(f"{THREADS_ENV} must be positive (got {value})")
        return value
    return os.cpu_count() or 1


def parallel_map(fn, items) -> list:
    """Map ``fn`` over ``items`` in worker processes, returning results in input order."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _space(k: int, n: int, curvature: str = "noncompact") -> SpaceSpec:
    return SpaceSpec(k, n, Curvature(curvature))


# ------------------------------------------------------------------ Euclidean calibration

def calibration_report(pairs=CALIBRATION_PAIRS, R: float = CALIBRATION_RADIUS) -> VerificationReport:
    """lambda R^2 against squared Bessel zeros for a tiny ball."""
    kids = []
    for k, n in pairs:
        sp = SpaceSpec(k, n)
        nu = sp.dim / 2 - 1
        j_rad = bessel_zeros(nu, 2)
        j_harm = bessel_zeros(nu + 1, 1)[0]
        cases = (("lambda1", lambda1_ball(sp, R), j_rad[0] ** 2),
                 ("lambda2", lambda2_ball(sp, R), j_harm**2),
                 ("lambda02", lambda02_ball(sp, R), j_rad[1] ** 2))
        for name, lam, ref in cases:
            rel = abs(lam * R * R - ref) / ref
            kids.append(VerificationReport.from_margin(
                f"calibration:{name}", CALIBRATION_TOL - rel, 0.0, space=sp,
                parameters={"radius": R, "lambda_R2": lam * R * R, "bessel_zero_squared": ref,
                            "relative_error": rel}))
    return VerificationReport.combine("euclidean_calibration", kids,
                                      notes=["Bessel zeros from an independent series and bisection"])


# ------------------------------------------------------------------ oracle equivalence

def _oracle_case(case) -> list[VerificationReport]:
    k, n, curv, R = case
    sp = _space(k, n, curv)
    out = []
    for name, harmonic, lam in (("lambda1", False, lambda1_ball(sp, R)), ("lambda2", True, lambda2_ball(sp, R))):
        ref = float(fd_extrapolated(sp, R, harmonic, 1, ORACLE_NODES)[0])
        rel = abs(lam - ref) / abs(ref)
        out.append(VerificationReport.from_margin(
            f"oracle:{name}", ORACLE_TOL - rel, 0.0, space=sp,
            parameters={"radius": R, "shooting": lam, "matrix_oracle": ref, "relative_error": rel},
            grid_meta={"nodes": [ORACLE_NODES, 2 * ORACLE_NODES], "extrapolation": "richardson"}))
    return out


def oracle_report(cases=ORACLE_CASES) -> VerificationReport:
    kids = [r for rows in parallel_map(_oracle_case, cases) for r in rows]
    return VerificationReport.combine("oracle_equivalence", kids,
                                      notes=["finite-volume matrix oracle, Richardson-extrapolated"])


# ------------------------------------------------------------------ gap grid and eigenvalue estimate

def _gap_point(args) -> GapRow:
    k, n, R = args
    return gap_row(SpaceSpec(k, n), R)


def gap_table(pairs=GAP_PAIRS, radii=GAP_RADII) -> dict[tuple[int, int], list[GapRow]]:
    jobs = [(k, n, R) for k, n in pairs for R in sorted(radii)]
    rows = parallel_map(_gap_point, jobs)
    out: dict[tuple[int, int], list[GapRow]] = {}
    for (k, n, _), row in zip(jobs, rows):
        out.setdefault((k, n), []).append(row)
    return out


def _worst_row(rows: list[GapRow], attr: str):
    i = int(np.argmin([getattr(r, attr) for r in rows]))
    return getattr(rows[i], attr), {"radius": rows[i].R}


def gap_report(table: dict) -> VerificationReport:
    kids = []
    for (k, n), rows in table.items():
        m, loc = _worst_row(rows, "margin")
        kids.append(VerificationReport.from_margin(
            "gap:lambda2-lambda1-lambda1(S_R)", m, GAP_TOL, space=SpaceSpec(k, n), location=loc,
            parameters={"radii": [r.R for r in rows]}))
    return VerificationReport.combine("gap_inequality", kids)


def estimate_report(table: dict) -> VerificationReport:
    kids = []
    for (k, n), rows in table.items():
        m, loc = _worst_row(rows, "estimate_margin")
        kids.append(VerificationReport.from_margin(
            "estimate:lambda2/(kn+2)-lambda1/kn+(2kn+3k-1)/(3(kn+2))", m, GAP_TOL, space=SpaceSpec(k, n),
            location=loc, parameters={"radii": [r.R for r in rows]}))
    return VerificationReport.combine("eigenvalue_estimate", kids)


# ------------------------------------------------------------------ monotonicity

def _monotonicity_case(args) -> VerificationReport:
    k, n, curv, R = args
    return verify_monotonicity(space=_space(k, n, curv), R=R, grid_size=2000)


def monotonicity_report(pairs=GAP_PAIRS, radii=MONOTONICITY_RADII, compact=True) -> VerificationReport:
    jobs = [(k, n, "noncompact", R) for k, n in pairs for R in radii]
    if compact:
        jobs.append((2, 2, "compact", math.pi / 4))
    return VerificationReport.combine("monotonicity_suite", parallel_map(_monotonicity_case, jobs))


# ------------------------------------------------------------------ appendix

APPENDIX_R2_TARGET = (1.35, 0.05)
APPENDIX_R1_TARGET = (1.57, 0.05)
PRINTED_EXACT = {1: "76832/45", 3: "-551936/135"}


def appendix_numbers_report() -> VerificationReport:
    r2 = ap.find_root_r2()
    r1 = ap.find_root_r1(2, 2)
    kids = [
        VerificationReport.from_margin("appendix:r2", APPENDIX_R2_TARGET[1] - abs(r2 - APPENDIX_R2_TARGET[0]), 0.0,
                                       parameters={"r2": r2, "printed": APPENDIX_R2_TARGET[0]}),
        VerificationReport.from_margin("appendix:r1(2,2)", APPENDIX_R1_TARGET[1] - abs(r1 - APPENDIX_R1_TARGET[0]),
                                       0.0, parameters={"r1": r1, "printed": APPENDIX_R1_TARGET[0]}),
        ap.f_poly_check(),
    ]
    cert = ap.series_certificate("appendix(4)_base_case_numerator", 12).coefficients
    for power, printed in PRINTED_EXACT.items():
        got = str(cert[power])
        kids.append(VerificationReport.from_margin(
            f"appendix:series_coefficient_r^{power}", 1.0 if got == printed else -1.0, 0.0,
            parameters={"computed": got, "printed": printed}))
    return VerificationReport.combine("appendix_numbers", kids, notes=[ap.b2_note()])


def _lemma_case(args) -> list[VerificationReport]:
    k, n, radii = args
    sp = SpaceSpec(k, n)
    out = [ap.verify_lemma_A(k, n)]
    for R in radii:
        l1, l2 = lambda1_ball(sp, R), lambda2_ball(sp, R)
        out.append(ap.z1_increasing_check(k, n, l1, l2, R))
        out.append(ap.no_bad_critical_points_scan(k, n, l1, l2, R=R))
    return out


def lemma_report(pairs=GAP_PAIRS, radii=LEMMA_RADII) -> VerificationReport:
    rows = parallel_map(_lemma_case, [(k, n, tuple(radii)) for k, n in pairs])
    return VerificationReport.combine("cross_products_and_scans", [r for rs in rows for r in rs])


def _decomposition_case(args) -> VerificationReport:
    k, n, R = args
    sp = SpaceSpec(k, n)
    return ap.decomposition_report(k, n, lambda1_ball(sp, R), lambda2_ball(sp, R))


def decomposition_suite(pairs=GAP_PAIRS, radii=LEMMA_RADII) -> VerificationReport:
    jobs = [(k, n, R) for k, n in pairs for R in radii]
    return VerificationReport.combine("decomposition_suite", parallel_map(_decomposition_case, jobs),
                                      notes=[ap.b2_note()])


# ------------------------------------------------------------------ PPW on annuli

def _ppw_case(args) -> VerificationReport:
    k, n, r_in, r_out = args
    return ppw_test(SpaceSpec(k, n), r_in, r_out)


def ppw_report(annuli=PPW_ANNULI + NEAR_BALL_ANNULI) -> VerificationReport:
    return VerificationReport.combine("ppw_annuli", parallel_map(_ppw_case, list(annuli)))


# ------------------------------------------------------------------ profiles

QUICK = {
    "oracle": ORACLE_CASES[:2] + ORACLE_CASES[7:8] + ORACLE_CASES[-1:],
    "gap_pairs": ((2, 2), (8, 2)),
    "gap_radii": (0.5, 1.0, 2.0, 5.0),
    "monotonicity_pairs": ((2, 2),),
    "monotonicity_radii": (1.0,),
    "lemma_pairs": ((2, 2),),
    "lemma_radii": (1.0,),
    "annuli": ((2, 2, 0.2, 1.0),),
}


def run_suite(profile: str = "quick") -> list[VerificationReport]:
    """Deterministically ordered reports for the quick or full acceptance grid."""
    if profile not in ("quick", "full"):
        raise ValueError(f"unknown profile {profile!r}")
    if profile == "quick":
        q = QUICK
        table = gap_table(q["gap_pairs"], q["gap_radii"])
        return [
            calibration_report(),
            oracle_report(q["oracle"]),
            gap_report(table),
            estimate_report(table),
            monotonicity_report(q["monotonicity_pairs"], q["monotonicity_radii"]),
            appendix_numbers_report(),
            lemma_report(q["lemma_pairs"], q["lemma_radii"]),
            decomposition_suite(q["lemma_pairs"], q["lemma_radii"]),
            ppw_report(q["annuli"]),
            chiti_report(SpaceSpec(2, 2), 0.3, 1.0),
        ]
    table = gap_table()
    return [
        calibration_report(),
        oracle_report(),
        gap_report(table),
        estimate_report(table),
        monotonicity_report(),
        appendix_numbers_report(),
        lemma_report(),
        decomposition_suite(),
        ppw_report(),
        chiti_report(SpaceSpec(2, 2), 0.3, 1.0),
    ]
