from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ross_spectra import appendix as ap
from ross_spectra.eigen import lambda1_ball, lambda2_ball
from ross_spectra.geometry import SpaceSpec, sphere_lambda1
from ross_spectra.quotient import Z_y_direct

S, C = mpmath.sinh, mpmath.cosh
MP_CATALOG = {
    "A1": lambda r: -(C(r) / S(r)) ** 2,
    "A2": lambda r: -1 / r**2,
    "A3": lambda r: r**2 / S(r) ** 4,
    "A4": lambda r: -r**2 / S(r) ** 2,
    "A5": lambda r: -(r * C(r) / S(r) - 1) / S(r) ** 2,
    "A6": lambda r: r**2,
    "B1": lambda r: -(S(r) / C(r)) ** 2,
    "B2": lambda r: -r**2 / S(2 * r) ** 2,
    "B3": lambda r: r**2 / C(r) ** 4,
    "B4": lambda r: r**2 / C(r) ** 2,
    "B5": lambda r: (r * S(r) / C(r) - 1) / C(r) ** 2,
}


@pytest.fixture(scope="module")
def lam22():
    sp = SpaceSpec(2, 2)
    return lambda1_ball(sp, 1.0), lambda2_ball(sp, 1.0)


def test_selected_b2_form():
    assert ap.selected_b2_form() is ap.B2Form.DERIVED
    diag = ap.b2_form_diagnostics()
    ok = [name for name, d in diag.items() if d["residual_constant"]]
    assert ok == [ap.B2Form.DERIVED.value]
    assert diag[ap.B2Form.DERIVED.value]["roots_reproduced"]
    assert "minus_r2_csch2_2r" in ap.b2_note()


@pytest.mark.parametrize("name", sorted(MP_CATALOG))
def test_catalog_derivatives_against_mpmath(name):
    entry = ap.catalog()[name]
    with mpmath.workdps(40):
        for r in np.linspace(0.1, 5.0, 25):
            v, d1, d2 = entry(np.array(r))
            f = MP_CATALOG[name]
            ref = [float(mpmath.diff(f, mpmath.mpf(r), j)) for j in range(3)]
            for got, want in zip((v, d1, d2), ref):
                assert float(got) == pytest.approx(want, rel=1e-7, abs=1e-300)


def test_cross2_basics():
    cat = ap.catalog()
    for r in (0.3, 1.0, 2.7):
        x = cat["A3"](np.array(r))
        assert ap.cross2(x, x) == 0
    assert ap.cross2(cat["A1"](np.array(1.0)), cat["A2"](np.array(1.0))) > 0


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 5.0), st.sampled_from(sorted(MP_CATALOG)), st.sampled_from(sorted(MP_CATALOG)),
       st.sampled_from(sorted(MP_CATALOG)), st.floats(-3, 3), st.floats(-3, 3))
def test_cross2_antisymmetric_bilinear(r, a, b, c, s, t):
    cat = ap.catalog()
    u, v, w = (cat[x](np.array(r)) for x in (a, b, c))
    assert ap.cross2(u, v) == pytest.approx(-ap.cross2(v, u), rel=1e-12, abs=1e-300)
    comb = tuple(s * p + t * q for p, q in zip(v, w))
    lhs = ap.cross2(u, comb)
    rhs = s * ap.cross2(u, v) + t * ap.cross2(u, w)
    scale = abs(s * ap.cross2(u, v)) + abs(t * ap.cross2(u, w))
    assert abs(lhs - rhs) <= 1e-12 * scale + 1e-300


def test_roots():
    r2 = ap.find_root_r2()
    r1 = ap.find_root_r1(2, 2)
    assert r2 == pytest.approx(1.35, abs=0.05)
    assert r1 == pytest.approx(1.57, abs=0.05)
    assert ap.root_uniqueness() == 1
    # residual at the root against the local scale
    cat = ap.catalog()
    f = lambda x: ap.cross2(cat["B2"](x), cat["A2"](x))  # noqa: E731
    local = np.max(np.abs(f(np.linspace(r2 - 0.05, r2 + 0.05, 11))))
    assert abs(f(np.array(r2))) < 1e-6 * local


@pytest.mark.parametrize("k,n", ap.STANDARD_PAIRS)
def test_r1_above_thresholds(k, n):
    r1 = ap.find_root_r1(k, n)
    assert r1 > 1.4
    assert r1 > ap.find_root_r2()
    assert ap.roots_report(k, n).passed


def test_lemma_pre_side_k2n2():
    rep = ap.verify_lemma_A(2, 2, r_grid=np.arange(0.05, 1.4, 0.005))
    pre = [c for c in rep.children if c.check_id.startswith("cross:") and c.check_id.endswith(":pre")]
    assert len(pre) == 6 and all(c.passed and c.grid_meta.get("applicable", True) for c in pre)
    assert rep.passed


def test_lemma_post_side_k4n2():
    rep = ap.verify_lemma_A(4, 2, r_grid=np.arange(1.6, 6.0, 0.005))
    post = [c for c in rep.children if c.check_id.startswith("cross:") and c.check_id.endswith(":post")]
    assert len(post) == 6 and all(c.passed and c.grid_meta.get("applicable", True) for c in post)
    assert rep.passed


def test_lemma_real_hyperbolic():
    rep = ap.verify_lemma_A(1, 3)
    assert rep.passed
    terms = ap.decomposition_terms(1, 3, 10.0, 20.0, np.array(1.2), 0.5)
    assert all(v == 0 for v in terms["B2"])


@pytest.mark.parametrize("k,n", ap.STANDARD_PAIRS)
def test_lemma_all_pairs(k, n):
    assert ap.verify_lemma_A(k, n).passed


def test_f_poly():
    rep = ap.f_poly_check()
    assert rep.passed
    assert ap.printed_f(2, 2) == pytest.approx(0.03293 - 2 * 0.0423419 + 4 * 0.0211709 - 4 * 0.0235181 + 8 * 0.0117591)
    k2 = next(c for c in rep.children if c.check_id == "f_poly_coefficient:k^2")
    assert k2.parameters["computed"] == pytest.approx(0.0211709, abs=1e-4)
    n2 = next(c for c in rep.children if c.check_id == "f_poly_coefficient:k^2n^2")
    assert n2.parameters["computed"] == pytest.approx(0.0117591, abs=1e-4)
    vals = next(c for c in rep.children if c.check_id == "f_poly_positive_and_increasing:k=2").parameters
    assert np.all(np.diff(vals["values_n_from_2"]) > 0)


@pytest.mark.parametrize("y", [0.1, 0.5, 1.0])
def test_decomposition_constant(lam22, y):
    l1, l2 = lam22
    r = np.linspace(0.2, 3.0, 281)
    res = ap.decomposition_residual(2, 2, l1, l2, y, r)
    scale = max(1.0, np.max(np.abs(Z_y_direct(SpaceSpec(2, 2), l1, l2, r, y))))
    assert (res.max() - res.min()) / scale < 1e-9
    c = ap.decomposition_constant(2, 2, l1, l2, y)
    for x in (0.5, 2.5):
        assert ap.decomposition_residual(2, 2, l1, l2, y, np.array([x]))[0] == pytest.approx(c, abs=1e-9 * scale)


def test_decomposition_a2_vanishes_at_y1():
    t = ap.decomposition_terms(2, 2, 10.0, 20.0, np.array(0.7), 1.0)
    assert all(v == 0 for v in t["A2"])


def test_decomposition_report(lam22):
    assert ap.decomposition_report(2, 2, *lam22).passed


def test_series_leading_coefficients():
    cert = ap.series_certificate("appendix(4)_base_case_numerator", 12)
    assert cert.coefficients[1] == Fraction(76832, 45)
    assert cert.coefficients[3] == Fraction(-551936, 135)
    assert cert.first_negative_index == 3 and not cert.all_nonnegative


def test_series_a5b5_numerator():
    cert = ap.series_certificate("appendix(2)_A5B5_numerator", 30)
    c = cert.coefficients
    assert c[0] == c[1] == c[2] == 0
    # the r^3 terms cancel (8 r + 4 r - 12 r, then 32 r^3 - 32 r^3); r^5: 4*256/24 - 3*1024/120 = 512/30
    assert c[3] == 0 and c[4] == 0
    assert c[5] == Fraction(4 * 256, 24) - Fraction(3 * 1024, 120)
    assert cert.all_nonnegative
    audit = ap.third_derivative_audit()
    assert audit["256 r sinh 4r"] and not audit["266 r sinh 4r"]


def test_series_against_mpmath_taylor():
    # exact coefficients of the closed form vs high-precision Taylor coefficients
    f = lambda r: 8 * r + 4 * r * mpmath.cosh(4 * r) - 3 * mpmath.sinh(4 * r)  # noqa: E731
    with mpmath.workdps(50):
        ref = mpmath.taylor(f, 0, 11)
    s = ap.series_certificate("appendix(2)_A5B5_numerator", 11).coefficients
    for e in range(12):
        assert float(s[e]) == pytest.approx(float(ref[e]), rel=1e-30, abs=1e-30)


def test_series_zero():
    cert = ap.series_certificate("zero", 20)
    assert cert.all_nonnegative and cert.first_negative_index is None
    assert cert.coefficients.is_zero()


def test_series_certificate_bounds():
    with pytest.raises(ValueError):
        ap.series_certificate("zero", 61)
    with pytest.raises(KeyError):
        ap.series_certificate("nope", 5)


@settings(max_examples=5, deadline=None)
@given(st.sampled_from(sorted(ap.CLOSED_FORMS)), st.sampled_from(sorted(ap.CLOSED_FORMS)),
       st.sampled_from(sorted(ap.CLOSED_FORMS)))
def test_series_distributive(a, b, c):
    f, g, h = (ap.expression_series(x, 30) for x in (a, b, c))
    assert ((f + g) * h - (f * h + g * h)).is_zero()


def test_printed_identities():
    rows = {(r["catalog_expression"], r["printed_form"]): r["exact_match"] for r in ap.printed_identity_audit(16)}
    assert rows[("appendix(2)_A5B5_cleared", "appendix(2)_A5B5_numerator")]
    assert not rows[("(3 A5 + 1 B5)' 4 sinh^4 cosh^4", "appendix(2)_A5B5_numerator")]
    assert rows[("section5(4)_g", "cosh^4 X + sinh^4 Y")]


def test_closed_form_eval_matches_series():
    terms = ap.CLOSED_FORMS["appendix(8)_B2A4_bracket"]
    s = ap.closed_form_series(terms, 40)
    for r in (0.2, 0.6):
        assert ap.closed_form_eval(terms, r) == pytest.approx(s.evaluate(r), rel=1e-10, abs=1e-14)


def test_group_three_identity():
    for k, n in ap.STANDARD_PAIRS:
        sp = SpaceSpec(k, n)
        r = np.linspace(0.1, 4, 50)
        cat = ap.catalog()
        lhs = (k * n - 1) * cat["A4"](r)[0] + (k - 1) * cat["B4"](r)[0]
        assert np.allclose(lhs, -r**2 * sphere_lambda1(sp, r), rtol=1e-12)
        assert np.all(np.diff(lhs) > 0)


def test_z1_increasing(lam22):
    assert ap.z1_increasing_check(2, 2, *lam22, 1.0).passed


def test_g_ranges():
    rep = ap.g_ranges_check()
    assert rep.passed
    r = np.linspace(0.05, 5, 200)
    assert np.all(ap.g_section5(r) > 0)


def test_no_bad_critical_points(lam22):
    rep = ap.no_bad_critical_points_scan(2, 2, *lam22, R=1.0)
    assert rep.passed and "0 violations" in rep.notes[1]
    sp = SpaceSpec(4, 2)
    rep = ap.no_bad_critical_points_scan(4, 2, lambda1_ball(sp, 2.0), lambda2_ball(sp, 2.0), R=2.0)
    assert rep.passed
    for cp in rep.parameters["critical_points"]:
        assert cp["Z2"] > 0 and cp["reference_cross_Z"] > 0
