"""One test per acceptance criterion; each prints a single CRITERION line."""
import subprocess
import sys
import time

import pytest

from ross_spectra import suite
from ross_spectra.eigen import GAP_PAIRS, GAP_RADII


def _report(capsys, number, passed, detail, seconds, budget):
    ok = passed and seconds < budget
    with capsys.disabled():
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} {detail} ({seconds:.1f} s, budget {budget:.0f} s)")
    assert passed, detail
    assert seconds < budget, f"criterion {number} took {seconds:.1f} s"


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def gap_table():
    return _timed(suite.gap_table, GAP_PAIRS, GAP_RADII)


def _leaves(rep):
    return [r for r in rep.flatten() if not r.children]


def test_criterion_01_euclidean_calibration(capsys):
    rep, dt = _timed(suite.calibration_report)
    leaves = _leaves(rep)
    worst = max(c.parameters["relative_error"] for c in leaves)
    _report(capsys, 1, rep.passed and len(leaves) == 9,
            f"9 lambda R^2 values vs Bessel zeros, worst relative error {worst:.2e} (limit 5e-3)", dt, 5)


def test_criterion_02_oracle_equivalence(capsys):
    rep, dt = _timed(suite.oracle_report)
    leaves = _leaves(rep)
    worst = max(c.parameters["relative_error"] for c in leaves)
    _report(capsys, 2, rep.passed and len(leaves) == 24 and len(suite.ORACLE_CASES) == 12,
            f"12 (space, R) pairs, worst relative difference {worst:.2e} (limit 1e-6)", dt, 60)


def test_criterion_03_gap_inequality(capsys, gap_table):
    table, dt = gap_table
    rep = suite.gap_report(table)
    rows = [r for rs in table.values() for r in rs]
    worst = min(r.margin for r in rows)
    _report(capsys, 3, rep.passed and len(rows) == 300 and worst >= -1e-8,
            f"300 grid points, min margin {worst:.6g}", dt, 300)


def test_criterion_04_monotonicity(capsys):
    rep, dt = _timed(suite.monotonicity_report)
    compact = [c for c in rep.children if c.space.compact]
    g_compact = [k for c in compact for k in c.children if k.check_id == "G_increasing"]
    _report(capsys, 4, rep.passed and len(rep.children) == 19 and len(g_compact) == 1 and g_compact[0].passed,
            f"{len(rep.children)} spectra, worst slack {rep.worst_margin:.3g} at {rep.worst_location}", dt, 300)


def test_criterion_05_appendix_numbers(capsys):
    rep, dt = _timed(suite.appendix_numbers_report)
    p = {c.check_id: c.parameters for c in rep.children}
    detail = (f"r2 = {p['appendix:r2']['r2']:.4f}, r1(2,2) = {p['appendix:r1(2,2)']['r1']:.4f}, "
              f"coefficients {p['appendix:series_coefficient_r^1']['computed']} and "
              f"{p['appendix:series_coefficient_r^3']['computed']}")
    _report(capsys, 5, rep.passed, detail, dt, 60)


def test_criterion_06_lemma_grid(capsys):
    rep, dt = _timed(suite.lemma_report)
    scans = [c for c in rep.children if c.check_id == "no_bad_critical_points"]
    violations = sum(0 if "0 violations" in c.notes[1] else 1 for c in scans)
    _report(capsys, 6, rep.passed and len(scans) == 12 and violations == 0,
            f"{len(rep.children)} reports over 6 pairs x R in (1, 2), {violations} scans with violations", dt, 600)


def test_criterion_07_decomposition(capsys):
    rep, dt = _timed(suite.decomposition_suite)
    worst = max(k.parameters["scaled_spread"] for c in rep.children for k in c.children)
    _report(capsys, 7, rep.passed and len(rep.children) == 12,
            f"worst scaled r-spread of Z_y minus the decomposition {worst:.2e} (limit 1e-9)", dt, 30)


def test_criterion_08_ppw(capsys):
    rep, dt = _timed(suite.ppw_report)
    annuli = rep.children[: len(suite.PPW_ANNULI)]
    near = rep.children[len(suite.PPW_ANNULI):]
    margins = [a.parameters["margin"] / a.parameters["lambda2_ball"] for a in rep.children]
    chiti = [next(k for k in a.children if k.check_id == "chiti_single_crossing") for a in rep.children]
    single = all(len(c.parameters["crossings"]) == 1 for c in chiti[: len(annuli)])
    near_ok = all(-1e-8 <= a.parameters["margin"] / a.parameters["lambda2_ball"] <= 1e-3 for a in near)
    _report(capsys, 8, rep.passed and len(annuli) == 20 and single and near_ok and min(margins) >= -1e-8,
            f"20 annuli + {len(near)} near-ball, min relative margin {min(margins):.4g}, "
            f"single Chiti crossing on all 20", dt, 600)


def test_criterion_09_estimate(capsys, gap_table):
    table, _ = gap_table
    rep, dt = _timed(suite.estimate_report, table)
    worst = min(r.estimate_margin for rs in table.values() for r in rs)
    _report(capsys, 9, rep.passed and worst >= -1e-8, f"min estimate margin {worst:.6g} on the gap grid", dt, 30)


def test_criterion_10_determinism(capsys, tmp_path):
    t0 = time.perf_counter()
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        proc = subprocess.run([sys.executable, "-m", "ross_spectra", "suite", "--profile", "quick",
                               "--out", str(path)], capture_output=True, text=True)
        outs.append((proc.returncode, path.read_bytes()))
    dt = time.perf_counter() - t0
    same = outs[0][1] == outs[1][1]
    _report(capsys, 10, same and outs[0][0] == 0 and outs[1][0] == 0,
            f"two quick-suite runs, byte-identical: {same}, exit codes {outs[0][0]}, {outs[1][0]}", dt, 600)
