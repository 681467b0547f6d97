"""Cross-product positivity, root localisation and Taylor certificates for Z_y.

The function catalog A1..A6, B1..B5 splits Z_y into pieces with
nonnegative coefficients.  Positivity of cross products u' v'' - u'' v'
against a reference vector shows that Z_y' = 0 forces Z_y'' > 0.
Everything here is for the noncompact type.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import series as ser
from .geometry import SpaceSpec, sphere_lambda1
from .quotient import Z_y_direct
from .report import VerificationReport
from .series import RationalSeries

Triple = tuple[np.ndarray, np.ndarray, np.ndarray]


class B2Form(str, enum.Enum):
    DERIVED = "minus_r2_csch2_2r"      # -r^2 / sinh^2(2r)
    TABLE = "minus_r2_sinh2_2r"        # -r^2 sinh^2(2r)
    INVERSE_DOUBLE = "minus_inv_r2_sinh2_2r"  # -1 / (r^2 sinh^2(2r))
    INVERSE_SINGLE = "minus_inv_r2_sinh2_r"   # -1 / (r^2 sinh^2 r)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    value: Callable
    d1: Callable
    d2: Callable

    def __call__(self, r) -> Triple:
        r = np.asarray(r, dtype=float)
        return self.value(r), self.d1(r), self.d2(r)


def _entry(name, v, d1, d2):
    return CatalogEntry(name, v, d1, d2)


def _inv_entry(name, u, du, ddu):
    """Entry for -1/u given u and its derivatives."""
    return _entry(name, lambda r: -1 / u(r), lambda r: du(r) / u(r) ** 2,
                  lambda r: ddu(r) / u(r) ** 2 - 2 * du(r) ** 2 / u(r) ** 3)


sh, ch = np.sinh, np.cosh


def _S(r):
    return sh(2 * r)


def _C(r):
    return ch(2 * r)


# Second derivatives are rewritten with cosh^2 = 1 + sinh^2 to avoid cancellation at large r.
_A = {
    "A1": _entry("A1", lambda r: -(ch(r) / sh(r)) ** 2,
                 lambda r: 2 * ch(r) / sh(r) ** 3,
                 lambda r: -2 * (3 + 2 * sh(r) ** 2) / sh(r) ** 4),
    "A2": _entry("A2", lambda r: -r ** -2.0, lambda r: 2 * r ** -3.0, lambda r: -6 * r ** -4.0),
    "A3": _entry("A3", lambda r: r**2 / sh(r) ** 4,
                 lambda r: 2 * r / sh(r) ** 4 - 4 * r**2 * ch(r) / sh(r) ** 5,
                 lambda r: (2 + 16 * r**2) / sh(r) ** 4 - 16 * r * ch(r) / sh(r) ** 5 + 20 * r**2 / sh(r) ** 6),
    "A4": _entry("A4", lambda r: -r**2 / sh(r) ** 2,
                 lambda r: -2 * r / sh(r) ** 2 + 2 * r**2 * ch(r) / sh(r) ** 3,
                 lambda r: (-2 - 4 * r**2) / sh(r) ** 2 + 8 * r * ch(r) / sh(r) ** 3 - 6 * r**2 / sh(r) ** 4),
    "A5": _entry("A5", lambda r: -(r * ch(r) / sh(r) - 1) / sh(r) ** 2,
                 lambda r: -3 * ch(r) / sh(r) ** 3 + 2 * r / sh(r) ** 2 + 3 * r / sh(r) ** 4,
                 lambda r: 8 / sh(r) ** 2 + 12 / sh(r) ** 4 - 4 * r * ch(r) / sh(r) ** 3
                 - 12 * r * ch(r) / sh(r) ** 5),
    "A6": _entry("A6", lambda r: r**2, lambda r: 2 * r, lambda r: 2 + 0 * r),
}
_B = {
    "B1": _entry("B1", lambda r: -(sh(r) / ch(r)) ** 2,
                 lambda r: -2 * sh(r) / ch(r) ** 3,
                 lambda r: -2 * (3 - 2 * ch(r) ** 2) / ch(r) ** 4),
    "B3": _entry("B3", lambda r: r**2 / ch(r) ** 4,
                 lambda r: 2 * r / ch(r) ** 4 - 4 * r**2 * sh(r) / ch(r) ** 5,
                 lambda r: (2 + 16 * r**2) / ch(r) ** 4 - 16 * r * sh(r) / ch(r) ** 5 - 20 * r**2 / ch(r) ** 6),
    "B4": _entry("B4", lambda r: r**2 / ch(r) ** 2,
                 lambda r: 2 * r / ch(r) ** 2 - 2 * r**2 * sh(r) / ch(r) ** 3,
                 lambda r: (2 + 4 * r**2) / ch(r) ** 2 - 8 * r * sh(r) / ch(r) ** 3 - 6 * r**2 / ch(r) ** 4),
    "B5": _entry("B5", lambda r: (r * sh(r) / ch(r) - 1) / ch(r) ** 2,
                 lambda r: 3 * sh(r) / ch(r) ** 3 - 2 * r / ch(r) ** 2 + 3 * r / ch(r) ** 4,
                 lambda r: -8 / ch(r) ** 2 + 12 / ch(r) ** 4 + 4 * r * sh(r) / ch(r) ** 3
                 - 12 * r * sh(r) / ch(r) ** 5),
}
_B2 = {
    B2Form.DERIVED: _entry("B2", lambda r: -r**2 / _S(r) ** 2,
                           lambda r: -2 * r / _S(r) ** 2 + 4 * r**2 * _C(r) / _S(r) ** 3,
                           lambda r: (-2 - 16 * r**2) / _S(r) ** 2 + 16 * r * _C(r) / _S(r) ** 3
                           - 24 * r**2 / _S(r) ** 4),
    B2Form.TABLE: _entry("B2", lambda r: -r**2 * _S(r) ** 2,
                         lambda r: -2 * r * _S(r) ** 2 - 4 * r**2 * _S(r) * _C(r),
                         lambda r: -(2 * _S(r) ** 2 + 16 * r * _S(r) * _C(r)
                                     + 8 * r**2 * (_C(r) ** 2 + _S(r) ** 2))),
    B2Form.INVERSE_DOUBLE: _inv_entry("B2", lambda r: r**2 * _S(r) ** 2,
                                      lambda r: 2 * r * _S(r) ** 2 + 4 * r**2 * _S(r) * _C(r),
                                      lambda r: 2 * _S(r) ** 2 + 16 * r * _S(r) * _C(r)
                                      + 8 * r**2 * (_C(r) ** 2 + _S(r) ** 2)),
    B2Form.INVERSE_SINGLE: _inv_entry("B2", lambda r: r**2 * sh(r) ** 2,
                                      lambda r: 2 * r * sh(r) ** 2 + 2 * r**2 * sh(r) * ch(r),
                                      lambda r: 2 * sh(r) ** 2 + 8 * r * sh(r) * ch(r)
                                      + 2 * r**2 * (ch(r) ** 2 + sh(r) ** 2)),
}


def catalog(b2_form: B2Form | None = None) -> dict[str, CatalogEntry]:
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    out = dict(_A)
    out.update(_B)
    out["B2"] = _B2[form]
    return dict(sorted(out.items()))


def cross2(u: Triple, v: Triple):
    """u' v'' - u'' v' for triples (value, first, second derivative)."""
    return u[1] * v[2] - u[2] * v[1]


def _lin(parts: list[tuple[float, Triple]]) -> Triple:
    return tuple(sum(c * t[i] for c, t in parts) for i in range(3))  # type: ignore[return-value]


def _check_kn(k: int, n: int):
    SpaceSpec(k, n)  # validation only


def group_vectors(k: int, n: int, r, b2_form: B2Form | None = None) -> dict[str, Triple]:
    """The vectors appearing in the cross-product lemma, evaluated at r."""
    _check_kn(k, n)
    cat = catalog(b2_form)
    a, b = k * n - 1, k - 1
    e = {name: entry(r) for name, entry in cat.items()}
    return {
        "V": _lin([(a * a, e["A1"]), (b * b, e["B1"])]),
        "A2": e["A2"],
        "B2": e["B2"],
        "G3": _lin([(a * a, e["A3"]), (b * b, e["B3"])]),
        "G4": _lin([(a, e["A4"]), (b, e["B4"])]),
        "G5": _lin([(a, e["A5"]), (b, e["B5"])]),
        "A6": e["A6"],
    }


# ------------------------------------------------------------------ decomposition

def decomposition_terms(k, n, lambda1, lambda2, r, y, b2_form: B2Form | None = None) -> dict[str, Triple]:
    """Coefficient-weighted pieces of Z_y (each a triple), keyed by group."""
    g = group_vectors(k, n, r, b2_form)
    gap = lambda2 - lambda1
    scale = {
        "V": y / 2,
        "A2": (y - y**3) / 2,
        "B2": 8 * (k - 1) * (k * n - 1) / (2 * y),
        "G3": 1 / (2 * y),
        "G4": gap / y,
        "G5": 2.0,
        "A6": gap**2 / (2 * y),
    }
    return {name: tuple(scale[name] * part for part in g[name]) for name in scale}  # type: ignore[misc]


def decomposition_sum(k, n, lambda1, lambda2, r, y, b2_form: B2Form | None = None):
    """All r-dependent decomposition terms of Z_y (the constant C excluded)."""
    terms = decomposition_terms(k, n, lambda1, lambda2, r, y, b2_form)
    out = sum(t[0] for t in terms.values())
    return float(out) if np.ndim(out) == 0 else out


def decomposition_constant(k, n, lambda1, lambda2, y) -> float:
    """The constant C, derived by hand from Z_y and the catalog."""
    return -(k * n - 1) * (k - 1) * y - (lambda2 - lambda1) * (2 - y) + 2 * lambda1 * y


def decomposition_residual(k, n, lambda1, lambda2, y, r_grid, b2_form: B2Form | None = None) -> np.ndarray:
    sp = SpaceSpec(k, n)
    r_grid = np.asarray(r_grid, dtype=float)
    return (Z_y_direct(sp, lambda1, lambda2, r_grid, y)
            - decomposition_sum(k, n, lambda1, lambda2, r_grid, y, b2_form))


# ------------------------------------------------------------------ roots

def _sign_changes(f, lo, hi, points=500):
    xs = np.linspace(lo, hi, points)
    v = f(xs)
    idx = np.nonzero(np.signbit(v[1:]) != np.signbit(v[:-1]))[0]
    return xs, v, idx


class NoSignChangeError(ValueError):
    pass


def _root(f, lo, hi, what):
    xs, v, idx = _sign_changes(f, lo, hi)
    if idx.size == 0:
        raise NoSignChangeError(f"{what} has no sign change on [{lo}, {hi}]; check the B2 form")
    i = idx[0]
    return brentq(lambda x: float(f(np.array(x))), xs[i], xs[i + 1], xtol=1e-12, rtol=1e-15), int(idx.size)


def _r2_fn(form):
    cat = catalog(form)
    return lambda x: cross2(cat["B2"](x), cat["A2"](x))


def _r1_fn(k, n, form):
    return lambda x: cross2(group_vectors(k, n, x, form)["V"], group_vectors(k, n, x, form)["B2"])


def find_root_r2(b2_form: B2Form | None = None) -> float:
    """Sign change of B2 x A2 on [0.5, 3]."""
    return _root(_r2_fn(b2_form), 0.5, 3.0, "B2 x A2")[0]


def find_root_r1(k: int, n: int, b2_form: B2Form | None = None) -> float:
    """Sign change of ((kn-1)^2 A1 + (k-1)^2 B1) x B2 on [0.5, 4]."""
    _check_kn(k, n)
    return _root(_r1_fn(k, n, b2_form), 0.5, 4.0, "V x B2")[0]


def root_uniqueness(k: int | None = None, n: int | None = None, b2_form: B2Form | None = None) -> int:
    """Number of sign changes seen by a 500-point scan (r2 when k is None, else r1)."""
    if k is None:
        return _sign_changes(_r2_fn(b2_form), 0.5, 3.0)[2].size
    return _sign_changes(_r1_fn(k, n, b2_form), 0.5, 4.0)[2].size


# ------------------------------------------------------------------ B2 selection

@lru_cache(maxsize=None)
def _reference_lambdas() -> tuple[float, float]:
    from .eigen import lambda1_ball, lambda2_ball
    sp = SpaceSpec(2, 2)
    return lambda1_ball(sp, 1.0), lambda2_ball(sp, 1.0)


@lru_cache(maxsize=None)
def b2_form_diagnostics() -> dict:
    """Score every B2 candidate on residual constancy and on the printed roots."""
    lam1, lam2 = _reference_lambdas()
    grid = np.linspace(0.2, 3.0, 57)
    out = {}
    for form in B2Form:
        spread = []
        for y in (0.3, 0.7, 1.0):
            res = decomposition_residual(2, 2, lam1, lam2, y, grid, form)
            spread.append(float((res.max() - res.min()) / max(1.0, np.abs(res).max())))
        try:
            r2 = find_root_r2(form)
        except NoSignChangeError:
            r2 = None
        try:
            r1 = find_root_r1(2, 2, form)
        except NoSignChangeError:
            r1 = None
        constant = max(spread) < 1e-9
        roots_ok = r2 is not None and r1 is not None and abs(r2 - 1.35) <= 0.05 and abs(r1 - 1.57) <= 0.05
        out[form.value] = {"residual_spread": max(spread), "r2": r2, "r1_2_2": r1,
                           "residual_constant": constant, "roots_reproduced": roots_ok}
    return out


@lru_cache(maxsize=None)
def selected_b2_form() -> B2Form:
    """The unique B2 candidate with an r-constant residual and the printed roots."""
    lam1, lam2 = _reference_lambdas()
    grid = np.linspace(0.2, 3.0, 57)
    ok = []
    for form in B2Form:
        res = decomposition_residual(2, 2, lam1, lam2, 0.5, grid, form)
        if (res.max() - res.min()) / max(1.0, np.abs(res).max()) < 1e-9:
            ok.append(form)
    if len(ok) != 1:
        raise RuntimeError(f"B2 selection is not unique: {ok}")
    return ok[0]


def b2_note() -> str:
    return f"B2 form: {selected_b2_form().value} (selected by residual constancy)"


# ------------------------------------------------------------------ cross-product lemma

@dataclass(frozen=True)
class CrossCheckSpec:
    name: str
    left: str
    right: str
    side: str  # "pre" (r < r0) or "post" (r > r0)
    in_lemma: bool = True


def lemma_checks(k: int) -> list[CrossCheckSpec]:
    if k == 1:
        # B terms vanish: reference A1 (same as V up to a positive factor) on the whole range
        return [CrossCheckSpec(f"V x {w}", "V", w, "all", w != "A6") for w in ("A2", "G3", "G4", "G5", "A6")]
    pre = [CrossCheckSpec(f"V x {w}", "V", w, "pre", w != "A6") for w in ("A2", "B2", "G3", "G4", "G5", "A6")]
    post = [CrossCheckSpec(f"B2 x {w}", "B2", w, "post", w != "A6") for w in ("V", "G3", "G4", "G5", "A2", "A6")]
    return pre + post


def default_r_grid(r_max: float = 8.0, step: float = 0.005, r_min: float = 0.05) -> np.ndarray:
    return np.arange(r_min, r_max + step / 2, step)


def verify_lemma_A(k: int, n: int, r_grid=None, y_grid=None, b2_form: B2Form | None = None) -> VerificationReport:
    """Positivity of every cross product against the reference vector on its side of r0.

    The coefficients of the decomposition depend on y only through positive
    factors, so ``y_grid`` is recorded but does not change the products.
    Margins are normalised by |u'||v''| + |u''||v'|, so a margin of 1 means
    no cancellation and a margin near 0 means the sign is fragile.
    """
    _check_kn(k, n)
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    r = default_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)
    y = np.round(np.arange(0.1, 0.95, 0.1), 10) if y_grid is None else np.asarray(y_grid, dtype=float)
    sp = SpaceSpec(k, n)
    notes = [f"B2 form: {form.value}"]
    if k == 1:
        r0 = None
        notes.append("k = 1: all B terms vanish, reference vector A1 on the whole range")
    else:
        r1 = find_root_r1(k, n, form)
        r2 = find_root_r2(form)
        r0 = max(r1, r2)
        if r0 != r1:
            notes.append("r0 = max(r1, r2) is r2, not r1")
    params = {"k": k, "n": n, "r0": r0, "y_grid": y.tolist()}
    meta = {"r_min": float(r.min()), "r_max": float(r.max()), "r_points": int(r.size), "y_points": int(y.size)}
    vecs = group_vectors(k, n, r, form)
    kids = []
    for spec in lemma_checks(k):
        if spec.side == "pre":
            mask = r < r0
        elif spec.side == "post":
            mask = r > r0
        else:
            mask = np.ones_like(r, dtype=bool)
        if not mask.any():
            kids.append(VerificationReport.skipped(f"cross:{spec.name}:{spec.side}",
                                                   "no grid points on this side of r0", space=sp, parameters=params))
            continue
        u, v = vecs[spec.left], vecs[spec.right]
        val = cross2(u, v)[mask]
        scale = (np.abs(u[1] * v[2]) + np.abs(u[2] * v[1]))[mask]
        rel = np.where(scale > 0, val / np.where(scale > 0, scale, 1), 0.0)
        i = int(np.argmin(rel))
        rep = VerificationReport.from_margin(
            f"cross:{spec.name}:{spec.side}", rel[i], 0.0, space=sp, parameters=params,
            location={"r": float(r[mask][i]), "raw_value": float(val[i])}, grid_meta=meta,
            notes=None if spec.in_lemma else ["extra check: A6 appears with a positive coefficient"],
            strict=True)
        kids.append(rep)
    # the negative Y-axis must lie on the other side: reference' > 0
    for ref, side in (("V", "pre"), ("B2", "post")) if k > 1 else (("V", "all"),):
        mask = (r < r0) if side == "pre" else (r > r0) if side == "post" else np.ones_like(r, dtype=bool)
        if not mask.any():
            kids.append(VerificationReport.skipped(f"reference_slope:{ref}:{side}",
                                                   "no grid points on this side of r0", space=sp, parameters=params))
            continue
        d = vecs[ref][1][mask]
        rel = d / np.maximum(np.abs(d), 1e-300)
        i = int(np.argmin(d))
        kids.append(VerificationReport.from_margin(
            f"reference_slope:{ref}:{side}", rel[i], 0.0, space=sp, parameters=params,
            location={"r": float(r[mask][i]), "raw_value": float(d[i])}, grid_meta=meta,
            notes=["negative Y-axis lies opposite the reference vector"], strict=True))
    return VerificationReport.combine("lemma_cross_products", kids, space=sp, parameters=params,
                                      grid_meta=meta, notes=notes)


# ------------------------------------------------------------------ printed polynomial at r = 1.4

PRINTED_F_POLY = {"1": 0.03293, "k": -0.0423419, "k^2": 0.0211709, "kn": -0.0235181, "k^2n^2": 0.0117591}


def printed_f(k: float, n: float, literal: bool = True) -> float:
    """The printed polynomial; ``literal`` reads its last monomial as k n^2, else as k^2 n^2."""
    c = PRINTED_F_POLY
    last = k * n * n if literal else k * k * n * n
    return c["1"] + c["k"] * k + c["k^2"] * k * k + c["kn"] * k * n + c["k^2n^2"] * last


def f_poly_check(r: float = 1.4, b2_form: B2Form | None = None, tolerance: float = 1e-4) -> VerificationReport:
    """Expand the r = 1.4 cross products in the monomials of k and n and match the printed polynomial.

    ((kn-1)^2 a + (k-1)^2 b) with numeric cross products a, b gives coefficients
    1: a + b, k: -2b, k^2: b, kn: -2a, k^2 n^2: a.  The printed numbers match
    this expansion for V x B2 (the product whose root is r1); the G3 product is
    reported alongside for comparison.
    """
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    cat = catalog(form)
    e = {name: entry(np.array(r)) for name, entry in cat.items()}
    a = float(cross2(e["A1"], e["B2"]))
    b = float(cross2(e["B1"], e["B2"]))
    derived = {"1": a + b, "k": -2 * b, "k^2": b, "kn": -2 * a, "k^2n^2": a}
    kids = []
    for mono, printed in PRINTED_F_POLY.items():
        err = abs(derived[mono] - printed)
        kids.append(VerificationReport.from_margin(
            f"f_poly_coefficient:{mono}", tolerance - err, 0.0,
            parameters={"r": r, "computed": derived[mono], "printed": printed, "abs_error": err}))
    # claim: f(2, n) and f(4, n) increase for n >= 2 and are positive at n = 2
    ns = np.arange(2, 21)
    for k in (2, 4, 8):
        vals = [float(cross2(group_vectors(k, int(nn), np.array(r), form)["V"],
                             group_vectors(k, int(nn), np.array(r), form)["B2"])) for nn in (ns if k < 8 else [2])]
        mono = float(np.min(np.diff(vals))) if len(vals) > 1 else math.inf
        kids.append(VerificationReport.from_margin(
            f"f_poly_positive_and_increasing:k={k}", min(vals[0], mono), 0.0,
            parameters={"r": r, "k": k, "values_n_from_2": vals}, strict=True))
    g3 = {f"{k},{n}": float(cross2(group_vectors(k, n, np.array(r), form)["V"],
                                   group_vectors(k, n, np.array(r), form)["G3"]))
          for k, n in STANDARD_PAIRS}
    notes = [f"B2 form: {form.value}",
             "printed coefficients match V x B2 at r = 1.4 with the last monomial read as k^2 n^2",
             f"V x G3 at r = 1.4 for comparison: {g3}",
             f"printed polynomial taken literally (k n^2) at (2,2): {printed_f(2, 2):.6g}"]
    return VerificationReport.combine("f_poly_check", kids, parameters={"r": r, "a_A1xB2": a, "b_B1xB2": b},
                                      notes=notes)


STANDARD_PAIRS = ((2, 2), (2, 3), (2, 5), (4, 2), (4, 3), (8, 2))


# ------------------------------------------------------------------ Taylor certificates

def _series_catalog(W: int) -> dict[str, RationalSeries]:
    S, C = ser.sinh(W), ser.cosh(W)
    r = ser.r_power(1, W)
    coth, tanh = C / S, S / C
    return {
        "A1": -(coth**2), "A2": -(r**-2), "A3": r**2 / S**4, "A4": -(r**2) / S**2,
        "A5": -(r * coth - 1) / S**2, "A6": r**2,
        "B1": -(tanh**2), "B2": -(r**2) / ser.sinh(W, 2) ** 2, "B3": r**2 / C**4, "B4": r**2 / C**2,
        "B5": (r * tanh - 1) / C**2,
    }


def _scross(f: RationalSeries, g: RationalSeries) -> RationalSeries:
    fp, gp = f.derivative(), g.derivative()
    return fp * gp.derivative() - fp.derivative() * gp


# closed forms as lists of (coefficient, power of r, kind, frequency), kind in {"1", "sinh", "cosh"}
ClosedForm = list[tuple[Fraction, int, str, int]]


def _closed(terms) -> ClosedForm:
    return [(Fraction(c), p, kind, m) for c, p, kind, m in terms]


CLOSED_FORMS: dict[str, ClosedForm] = {
    "appendix(1)_A1_bracket": _closed([(2, 1, "cosh", 2), (4, 1, "1", 0), (-3, 0, "sinh", 2)]),
    "appendix(2)_A5B5_numerator": _closed([(8, 1, "1", 0), (4, 1, "cosh", 4), (-3, 0, "sinh", 4)]),
    "appendix(3)_base_case_numerator": _closed([
        (-7000, 1, "1", 0), (-12292, 1, "cosh", 2), (-10400, 1, "cosh", 4), (-2734, 1, "cosh", 6),
        (-360, 1, "cosh", 8), (-142, 1, "cosh", 10), (2868, 0, "sinh", 2), (2985, 0, "sinh", 4),
        (1252, 0, "sinh", 6), (720, 0, "sinh", 8), (192, 0, "sinh", 10), (5, 0, "sinh", 12)]),
    "appendix(3)_A1_cross_7A5_3B5_numerator": _closed([
        (136, 1, "1", 0), (-496, 1, "cosh", 2), (56, 1, "cosh", 4), (-32, 1, "cosh", 6),
        (150, 0, "sinh", 2), (-50, 0, "sinh", 4), (38, 0, "sinh", 6), (1, 0, "sinh", 8)]),
    "appendix(7)_B2A3_numerator": _closed([
        (-3, 0, "cosh", 1), (4, 2, "cosh", 1), (3, 0, "cosh", 3), (12, 2, "cosh", 3),
        (2, 1, "sinh", 1), (-10, 1, "sinh", 3)]),
    "appendix(7)_base_case_bracket": _closed([
        (-75, 0, "1", 0), (500, 2, "1", 0), (-87, 0, "cosh", 2), (1392, 2, "cosh", 2),
        (60, 0, "cosh", 4), (720, 2, "cosh", 4), (87, 0, "cosh", 6), (464, 2, "cosh", 6),
        (15, 0, "cosh", 8), (60, 2, "cosh", 8), (-580, 1, "sinh", 2), (-460, 1, "sinh", 4),
        (-348, 1, "sinh", 6), (-50, 1, "sinh", 8)]),
    "appendix(8)_B2A4_bracket": _closed([(-6, 1, "cosh", 2), (3, 0, "sinh", 2), (4, 2, "sinh", 2)]),
}


def closed_form_series(terms: ClosedForm, order: int) -> RationalSeries:
    out = RationalSeries.zero(order)
    for c, p, kind, m in terms:
        if kind == "1":
            base = RationalSeries.constant(1, order)
        elif kind == "sinh":
            base = ser.sinh(order, m)
        else:
            base = ser.cosh(order, m)
        out = out + (base.shift(p) if p else base).truncate(order).scale(c)
    return out


def closed_form_eval(terms: ClosedForm, r):
    r = np.asarray(r, dtype=float)
    fn = {"1": lambda m, x: np.ones_like(x), "sinh": lambda m, x: np.sinh(m * x), "cosh": lambda m, x: np.cosh(m * x)}
    return sum(float(c) * r**p * fn[kind](m, r) for c, p, kind, m in terms)


def closed_form_tail_bound(terms: ClosedForm, order: int, rho: float = 1.0) -> float:
    """Bound on |sum of the terms of degree >= order| for 0 <= r <= rho."""
    total = 0.0
    for c, p, kind, m in terms:
        if kind == "1":
            continue
        j = max(order - p, 0)
        total += abs(float(c)) * rho**p * (m * rho) ** j / math.factorial(j) * math.exp(m * rho)
    return total


def _catalog_expression(expression_id: str, W: int) -> RationalSeries:
    """Denominator-cleared expressions assembled from the catalog series."""
    cat = _series_catalog(W)
    S, C = ser.sinh(W), ser.cosh(W)
    r = ser.r_power(1, W)
    if expression_id == "appendix(4)_base_case_numerator":
        return S**4 * C**4 * _scross(cat["A1"] * 49 + cat["B1"] * 9, cat["A3"] * 49 + cat["B3"] * 9) / 4
    if expression_id == "appendix(4)_A1_cross_44A3_B3":
        return S**6 * _scross(cat["A1"], cat["A3"] * 44 + cat["B3"])
    if expression_id == "section5(4)_g":
        f = (cat["A1"] + cat["A3"]) * 9 + (cat["B1"] + cat["B3"])
        return f.derivative() * S**4 * C**4
    if expression_id == "appendix(1)_k2n2_cleared":
        return _scross(cat["A1"] * 9 + cat["B1"], cat["A2"]) * r**4 * C**4 * S**4 / 2
    if expression_id == "appendix(2)_A5B5_cleared":
        return (cat["A5"] + cat["B5"]).derivative() * S**4 * C**4 * 4
    if expression_id == "appendix(3)_base_case_cleared":
        return _scross(cat["A1"] * 49 + cat["B1"] * 9, cat["A5"] * 7 + cat["B5"] * 3) * S**8 * C**8 * 16
    if expression_id == "appendix(3)_A1_cross_7A5_3B5_cleared":
        return _scross(cat["A1"], cat["A5"] * 7 + cat["B5"] * 3) * S**8 * C**4 * 8
    if expression_id == "appendix(7)_B2A3_cleared":
        return _scross(cat["B2"], cat["A3"]) * S**9 * C**4 * 4 / r**2
    if expression_id == "appendix(7)_base_case_cleared":
        return _scross(cat["B2"], cat["A3"] * 49 + cat["B3"] * 9) * S**9 * C**9 * 16 / r**2
    if expression_id == "appendix(8)_B2A4_cleared":
        return _scross(cat["B2"], cat["A4"] * 7 + cat["B4"] * 3) * S**4 * C**4 / (r**2 * 2)
    raise KeyError(expression_id)


CATALOG_EXPRESSIONS = (
    "appendix(4)_base_case_numerator", "appendix(4)_A1_cross_44A3_B3", "section5(4)_g",
    "appendix(1)_k2n2_cleared", "appendix(2)_A5B5_cleared", "appendix(3)_base_case_cleared",
    "appendix(3)_A1_cross_7A5_3B5_cleared", "appendix(7)_B2A3_cleared", "appendix(7)_base_case_cleared",
    "appendix(8)_B2A4_cleared",
)
SERIES_EXPRESSIONS = ("zero",) + tuple(CLOSED_FORMS) + CATALOG_EXPRESSIONS


class SeriesCertificate(NamedTuple):
    coefficients: RationalSeries
    all_nonnegative: bool
    first_negative_index: int | None


def expression_series(expression_id: str, order: int) -> RationalSeries:
    """Exact Taylor coefficients of r^0 .. r^order (the returned series has order ``order + 1``)."""
    target = order + 1
    if expression_id == "zero":
        return RationalSeries.zero(target)
    if expression_id in CLOSED_FORMS:
        return closed_form_series(CLOSED_FORMS[expression_id], target)
    if expression_id not in CATALOG_EXPRESSIONS:
        raise KeyError(f"unknown expression id {expression_id!r}; known: {', '.join(SERIES_EXPRESSIONS)}")
    W = target + 12
    for _ in range(6):
        s = _catalog_expression(expression_id, W)
        if s.order >= target:
            return s.truncate(target)
        W += target - s.order + 4
    raise RuntimeError(f"could not reach order {order} for {expression_id}")


def series_certificate(expression_id: str, order: int = 40) -> SeriesCertificate:
    if not 0 <= order <= 60:
        raise ValueError("order must lie in [0, 60]")
    s = expression_series(expression_id, order)
    coeffs = s.coefficient_list(0)
    neg = ser.first_negative(coeffs)
    return SeriesCertificate(s, neg is None, neg)


PRINTED_SERIES = {
    "appendix(4)_base_case_numerator": {1: Fraction(76832, 45), 3: Fraction(-551936, 135),
                                        5: Fraction(2609152, 675), 7: Fraction(7491328, 22275)},
    "appendix(4)_A1_cross_44A3_B3": {3: Fraction(6352, 45), 5: Fraction(-22384, 1315), 7: Fraction(25040, 189)},
    "section5(4)_g": {1: Fraction(4), 3: Fraction(28, 3) + Fraction(112, 9)},
}

# printed closed forms that should equal catalog expressions exactly
PRINTED_IDENTITIES = {
    "appendix(2)_A5B5_cleared": "appendix(2)_A5B5_numerator",
    "appendix(3)_base_case_cleared": "appendix(3)_base_case_numerator",
    "appendix(3)_A1_cross_7A5_3B5_cleared": "appendix(3)_A1_cross_7A5_3B5_numerator",
    "appendix(7)_B2A3_cleared": "appendix(7)_B2A3_numerator",
    "appendix(7)_base_case_cleared": "appendix(7)_base_case_bracket",
    "appendix(8)_B2A4_cleared": "appendix(8)_B2A4_bracket",
}

# which coefficient-positivity statements are actually claimed
POSITIVITY_CLAIMED = {
    "zero": True,
    "appendix(1)_A1_bracket": True,
    "appendix(2)_A5B5_numerator": True,
    "appendix(3)_base_case_numerator": True,
    "appendix(3)_A1_cross_7A5_3B5_numerator": True,
    "appendix(7)_B2A3_numerator": True,
    "appendix(8)_B2A4_bracket": True,
}


def certificate_report(expression_id: str, order: int = 40) -> VerificationReport:
    """Bounded-order certificate: exact coefficients up to ``order`` and their signs."""
    cert = series_certificate(expression_id, order)
    s = cert.coefficients
    terms = {e: str(c) for e, c in sorted(s.terms().items())}
    notes = ["bounded-order certificate: nonnegative exact coefficients up to the stated order, not a proof"]
    params: dict = {"expression_id": expression_id, "order": order, "leading_terms": dict(list(terms.items())[:6]),
                    "first_negative_index": cert.first_negative_index, "all_nonnegative": cert.all_nonnegative}
    if expression_id in CLOSED_FORMS:
        params["tail_bound_r_le_1"] = closed_form_tail_bound(CLOSED_FORMS[expression_id], order + 1)
    printed = PRINTED_SERIES.get(expression_id)
    if printed:
        mism = {e: {"printed": str(p), "computed": str(s[e])} for e, p in printed.items() if s[e] != p}
        params["printed_coefficients_match"] = not mism
        if mism:
            notes.append(f"printed coefficients differ from the exact expansion: {mism}")
    claimed = POSITIVITY_CLAIMED.get(expression_id, False)
    params["positivity_claimed"] = claimed
    if claimed:
        margin = 1.0 if cert.all_nonnegative else -1.0
        rep = VerificationReport.from_margin(f"series:{expression_id}", margin, 0.0, parameters=params, notes=notes)
    else:
        notes.append("no coefficient-positivity claim for this expression; coefficients reported only")
        rep = VerificationReport.from_margin(f"series:{expression_id}", 1.0, 0.0, parameters=params, notes=notes)
    return rep


def third_derivative_audit(order: int = 30) -> dict:
    """f''' of 8r + 4r cosh 4r - 3 sinh 4r against 256 r sinh 4r and the printed 266 r sinh 4r."""
    f = closed_form_series(CLOSED_FORMS["appendix(2)_A5B5_numerator"], order + 3)
    d3 = f.derivative().derivative().derivative()
    out = {}
    for c in (256, 266):
        cand = (ser.sinh(order, 4).shift(1)).truncate(d3.order).scale(c)
        out[f"{c} r sinh 4r"] = (d3 - cand).is_zero()
    return out


def printed_identity_audit(order: int = 24) -> list[dict]:
    """Compare printed closed forms against the catalog-built expressions, exactly, to ``order``."""
    rows = []
    for cat_id, printed_id in PRINTED_IDENTITIES.items():
        a = expression_series(cat_id, order)
        b = expression_series(printed_id, order)
        rows.append({"catalog_expression": cat_id, "printed_form": printed_id, "order": order,
                     "exact_match": (a - b).is_zero()})
    # appendix (2) closed form for general (k, n): only A5 + B5 matches
    W = order + 14
    cat = _series_catalog(W)
    S, C = ser.sinh(W), ser.cosh(W)
    num = closed_form_series(CLOSED_FORMS["appendix(2)_A5B5_numerator"], W)
    for a_, b_ in ((1, 1), (3, 1), (7, 3)):
        lhs = (cat["A5"] * a_ + cat["B5"] * b_).derivative() * S**4 * C**4 * 4
        diff = (lhs - num).truncate(min(lhs.order, order + 1))
        rows.append({"catalog_expression": f"({a_} A5 + {b_} B5)' 4 sinh^4 cosh^4",
                     "printed_form": "appendix(2)_A5B5_numerator", "order": order, "exact_match": diff.is_zero()})
    # section 5(4): X, Y form of g against the catalog g
    g = expression_series("section5(4)_g", order)
    Wg = order + 14
    S, C = ser.sinh(Wg), ser.cosh(Wg)
    r = ser.r_power(1, Wg)
    X = (C * S) * 18 + r * 18 - (r**2) * (C / S) * 36
    Y = r * 2 - (C * S) * 2 - (r**2) * (S / C) * 4
    gx = (C**4 * X + S**4 * Y).truncate(order + 1)
    rows.append({"catalog_expression": "section5(4)_g", "printed_form": "cosh^4 X + sinh^4 Y", "order": order,
                 "exact_match": (g - gx).is_zero()})
    d3 = third_derivative_audit(order)
    rows.append({"catalog_expression": "appendix(2) numerator third derivative",
                 "printed_form": "266 r sinh 4r", "order": order, "exact_match": d3["266 r sinh 4r"],
                 "exact_match_256": d3["256 r sinh 4r"]})
    return rows


def appendix2_general_audit(k: int, n: int, r_grid=None) -> dict:
    """Relative gap between V x G4 and the printed five-line expansion (sin read as sinh)."""
    r = np.linspace(0.2, 3.0, 15) if r_grid is None else np.asarray(r_grid, dtype=float)
    g = group_vectors(k, n, r)
    lhs = cross2(g["V"], g["G4"])
    a, b = k * n - 1, k - 1
    s, c = np.sinh(r), np.cosh(r)
    c2, s2 = np.cosh(2 * r), np.sinh(2 * r)
    rhs = (4 * b * a * a * r * (2 + c2) / s**4 / c**2 + 4 * b * b * a * r * (c2 - 2) / s**2 / c**4
           + 2 * a**3 / s**6 * (2 * r * c2 - s2) + 2 * b**3 / c**6 * (2 * r * c2 - s2)
           + 2 * a * b / (s**3 * c**3) * (k * (n - 1) * (1 - 8 * r * r) + (k * n + k - 2) * (c2 + 4 * r * s2)))
    return {"k": k, "n": n, "max_relative_gap": float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))}


# ------------------------------------------------------------------ Lemma 5.3 (b): Z1 increasing

def _group_slopes(k, n, r, form):
    """Derivatives of the five monotone pieces of Z1 (y = 1)."""
    cat = catalog(form)
    e = {name: entry(r) for name, entry in cat.items()}
    a, b = k * n - 1, k - 1
    return {
        "(1)_A6": e["A6"][1],
        "(2)_A5_group": a * e["A5"][1] + b * e["B5"][1],
        "(3)_A4_group": a * e["A4"][1] + b * e["B4"][1],
        "(4)_A1A3_group": a * a * (e["A1"][1] + e["A3"][1]) + b * b * (e["B1"][1] + e["B3"][1]),
        "(5)_B2": (e["B2"][1] if k > 1 else np.zeros_like(r)),
    }


def g_section5(r):
    """g = f' sinh^4 cosh^4 for f = 9(A1 + A3) + (B1 + B3), from the printed X and Y."""
    r = np.asarray(r, dtype=float)
    s, c = np.sinh(r), np.cosh(r)
    X = 18 * c * s + 18 * r - 36 * r**2 * c / s
    Y = 2 * r - 2 * c * s - 4 * r**2 * s / c
    return c**4 * X + s**4 * Y


def g_lower_bound_large_r(r):
    """The lower bound for X + Y used for r >= 2."""
    r = np.asarray(r, dtype=float)
    return 4 * (np.exp(2 * r) - np.exp(-4.0)) + 20 * r - 36 * 1.05 * r**2 - 4 * r**2


def z1_increasing_check(k: int, n: int, lambda1: float, lambda2: float, R: float,
                        points: int = 400, b2_form: B2Form | None = None) -> VerificationReport:
    sp = SpaceSpec(k, n)
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    params = {"k": k, "n": n, "lambda1": lambda1, "lambda2": lambda2, "radius": R}
    r = np.linspace(R / points, R, points)
    meta = {"points": points, "r_min": float(r[0]), "r_max": float(r[-1])}
    z = Z_y_direct(sp, lambda1, lambda2, r, 1.0)
    slope = np.diff(z) / np.diff(r)
    scale = np.max(np.abs(slope))
    i = int(np.argmin(slope))
    kids = [VerificationReport.from_margin("Z1_increasing", slope[i] / scale, 0.0, space=sp, parameters=params,
                                           location={"r": float(r[i])}, grid_meta=meta, strict=True)]
    # per-group monotonicity on (0, R]; groups are independent of the eigenvalues
    for name, d in _group_slopes(k, n, r, form).items():
        if name == "(5)_B2" and k == 1:
            kids.append(VerificationReport.skipped(name, "B2 has coefficient zero when k = 1", space=sp))
            continue
        rel = d / np.maximum(np.abs(d), 1e-300)
        j = int(np.argmin(d))
        kids.append(VerificationReport.from_margin(f"group_increasing:{name}", rel[j], 0.0, space=sp,
                                                   parameters=params, location={"r": float(r[j]), "slope": float(d[j])},
                                                   grid_meta=meta, strict=True))
    # (3) identity: (kn-1) A4 + (k-1) B4 = -r^2 lambda1(S_r)
    cat = catalog(form)
    lhs = (k * n - 1) * cat["A4"](r)[0] + (k - 1) * cat["B4"](r)[0]
    rhs = -r**2 * sphere_lambda1(sp, r)
    err = float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(rhs), 1e-300)))
    kids.append(VerificationReport.from_margin("(3)_identity", -err, 1e-12, space=sp,
                                               parameters={"max_relative_error": err}))
    return VerificationReport.combine("z1_increasing", kids, space=sp, parameters=params, grid_meta=meta,
                                      notes=[f"B2 form: {form.value}"])


def g_ranges_check(order: int = 40) -> VerificationReport:
    """The three r-ranges used to show g > 0 for k = n = 2."""
    cert = certificate_report("section5(4)_g", order)
    # on (0, 1] the partial sum is at least r^v (a_v - sum of |negative coefficients|)
    coeffs = series_certificate("section5(4)_g", order).coefficients
    lead_e = coeffs.valuation
    lead = float(coeffs[lead_e])
    neg = sum(-float(c) for e, c in coeffs.terms().items() if c < 0)
    dominance = VerificationReport.from_margin(
        "g_taylor_dominance_r_le_1", (lead - neg) / lead, 0.0,
        parameters={"leading_power": lead_e, "leading_coefficient": lead, "sum_negative_coefficients": neg,
                    "order": order},
        notes=["bounded-order certificate: terms beyond the stated order are not bounded"], strict=True)
    small = np.linspace(1e-3, 1.0, 1000)
    gs = g_section5(small) / small**lead_e
    k = int(np.argmin(gs))
    small_rep = VerificationReport.from_margin("g_positive_0_to_1", gs[k] / lead, 0.0,
                                               location={"r": float(small[k])}, grid_meta={"points": small.size},
                                               notes=["g / r^5 sampled, compared with its limit"], strict=True)
    mid = np.linspace(1.0, 2.0, 1001)
    gm = g_section5(mid)
    i = int(np.argmin(gm))
    grid_rep = VerificationReport.from_margin("g_positive_1_to_2", gm[i] / np.max(np.abs(gm)), 0.0,
                                              location={"r": float(mid[i])}, grid_meta={"points": mid.size},
                                              strict=True)
    big = np.linspace(2.0, 20.0, 1801)
    lb = g_lower_bound_large_r(big)
    j = int(np.argmin(lb))
    s, c = np.sinh(big), np.cosh(big)
    # X + Y minus the bound, written so that every piece is visibly nonnegative for r >= 2
    gap = (4 * (np.exp(-4.0) - np.exp(-2 * big)) + 36 * big**2 * (1.05 - c / s) + 4 * big**2 * (1 - s / c))
    gap_rel = gap / (4 * np.exp(-4.0) + 41.8 * big**2)
    asym = VerificationReport.from_margin("g_large_r_lower_bound", min(lb[j] / (4 * np.exp(2 * big[j])), gap_rel.min()),
                                          0.0, parameters={"min_relative_gap_X_plus_Y_over_bound": float(gap_rel.min())},
                                          location={"r": float(big[j])}, grid_meta={"points": big.size},
                                          strict=True)
    return VerificationReport.combine("section5_g_ranges", [cert, dominance, small_rep, grid_rep, asym])


# ------------------------------------------------------------------ Lemma 5.3 (a): no bad critical points

def no_bad_critical_points_scan(k: int, n: int, lambda1: float, lambda2: float, r_grid=None, y_grid=None,
                                R: float | None = None, b2_form: B2Form | None = None) -> VerificationReport:
    """Find every sign change of Z_y' along r and require Z_y'' > 0 there."""
    sp = SpaceSpec(k, n)
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    if r_grid is None:
        if R is None:
            raise ValueError("pass r_grid or R")
        r_grid = np.linspace(R / 400, R, 400)
    r = np.asarray(r_grid, dtype=float)
    ys = np.round(np.arange(0.1, 0.95, 0.1), 10) if y_grid is None else np.asarray(y_grid, dtype=float)
    if k > 1:
        r0 = max(find_root_r1(k, n, form), find_root_r2(form))
    else:
        r0 = math.inf
    params = {"k": k, "n": n, "lambda1": lambda1, "lambda2": lambda2, "r0": r0 if math.isfinite(r0) else None}
    violations = []
    critical = []
    worst = math.inf
    worst_loc: dict = {}
    fd_err = 0.0
    for y in ys:
        terms = decomposition_terms(k, n, lambda1, lambda2, r, y, form)
        z1 = sum(t[1] for t in terms.values())
        z2 = sum(t[2] for t in terms.values())
        # cross-check the analytic Z_y' against central differences of the direct Z_y
        probe = r[r.size // 10::max(r.size // 20, 1)]
        h = 1e-5 * probe
        fd = (Z_y_direct(sp, lambda1, lambda2, probe + h, y) - Z_y_direct(sp, lambda1, lambda2, probe - h, y)) / (2 * h)
        an = sum(t[1] for t in decomposition_terms(k, n, lambda1, lambda2, probe, y, form).values())
        fd_err = max(fd_err, float(np.max(np.abs(fd - an)) / np.max(np.abs(an))))
        idx = np.nonzero(np.signbit(z1[1:]) != np.signbit(z1[:-1]))[0]
        for i in idx:
            t = z1[i] / (z1[i] - z1[i + 1])
            rc = float(r[i] + t * (r[i + 1] - r[i]))
            zz = float(z2[i] + t * (z2[i + 1] - z2[i]))
            ref = group_vectors(k, n, np.array(rc), form)["V" if rc < r0 else "B2"]
            tz = decomposition_terms(k, n, lambda1, lambda2, np.array(rc), y, form)
            zvec = (None, float(sum(v[1] for v in tz.values())), float(sum(v[2] for v in tz.values())))
            side = float(cross2(ref, zvec))
            side_scale = abs(ref[1] * zvec[2]) + abs(ref[2] * zvec[1])
            critical.append({"y": float(y), "r": rc, "Z2": zz, "reference_cross_Z": side})
            local = float(sum(abs(v[2]) for v in tz.values()))
            m = min(zvec[2] / local, side / side_scale if side_scale else 0.0)
            if m < worst:
                worst, worst_loc = m, {"y": float(y), "r": rc}
            if zz <= 0 or side <= 0:
                violations.append({"y": float(y), "r": rc, "Z2": zz, "reference_cross_Z": side})
    meta = {"r_points": int(r.size), "y_values": ys.tolist(), "fd_relative_error": fd_err}
    notes = [f"B2 form: {form.value}", f"{len(critical)} critical points found, {len(violations)} violations"]
    if not critical:
        worst = 1.0
    rep = VerificationReport.from_margin("no_bad_critical_points", worst, 0.0, space=sp, parameters=params,
                                         location=worst_loc, grid_meta=meta, notes=notes, strict=True)
    if violations:
        rep.notes.append(f"violations: {violations[:10]}")
    rep.parameters["critical_points"] = critical[:50]
    return rep


def catalog_curve(name: str, r, b2_form: B2Form | None = None) -> np.ndarray:
    """Named curves for plot data: cross products and the section-5 g."""
    r = np.asarray(r, dtype=float)
    if name == "g_section5":
        return g_section5(r)
    if name == "B2xA2":
        c = catalog(b2_form)
        return cross2(c["B2"](r), c["A2"](r))
    k, n, what = name.split(":")
    g = group_vectors(int(k), int(n), r, b2_form)
    left, right = what.split("x")
    return cross2(g[left], g[right])


# ------------------------------------------------------------------ aggregate reports

def roots_report(k: int, n: int, b2_form: B2Form | None = None) -> VerificationReport:
    """r2, r1(k, n) and the orderings the cross-product argument relies on."""
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    sp = SpaceSpec(k, n)
    r2 = find_root_r2(form)
    r1 = find_root_r1(k, n, form)
    f2, f1 = _r2_fn(form), _r1_fn(k, n, form)
    res2 = abs(float(f2(np.array(r2)))) / float(np.max(np.abs(f2(np.linspace(r2 - 0.05, r2 + 0.05, 11)))))
    res1 = abs(float(f1(np.array(r1)))) / float(np.max(np.abs(f1(np.linspace(r1 - 0.05, r1 + 0.05, 11)))))
    params = {"k": k, "n": n, "r1": r1, "r2": r2, "r0": max(r1, r2)}
    kids = [
        VerificationReport.from_margin("r2_unique", 1 - root_uniqueness(None, None, form), 0.0, parameters=params),
        VerificationReport.from_margin("r1_unique", 1 - root_uniqueness(k, n, form), 0.0, parameters=params),
        VerificationReport.from_margin("r2_residual", 1e-6 - res2, 0.0, parameters=params),
        VerificationReport.from_margin("r1_residual", 1e-6 - res1, 0.0, parameters=params),
        VerificationReport.from_margin("r1_above_1.4", r1 - 1.4, 0.0, parameters=params, strict=True),
        VerificationReport.from_margin("r1_above_r2", r1 - r2, 0.0, parameters=params, strict=True),
    ]
    return VerificationReport.combine("roots", kids, space=sp, parameters=params, notes=[f"B2 form: {form.value}"])


def decomposition_report(k: int, n: int, lambda1: float, lambda2: float, y_values=(0.1, 0.5, 0.9, 1.0),
                         r_grid=None, tolerance: float = 1e-9, b2_form: B2Form | None = None) -> VerificationReport:
    """Z_y_direct - decomposition_sum must not depend on r; it should equal the derived C."""
    form = selected_b2_form() if b2_form is None else B2Form(b2_form)
    sp = SpaceSpec(k, n)
    r = np.linspace(0.2, 3.0, 281) if r_grid is None else np.asarray(r_grid, dtype=float)
    kids = []
    for y in y_values:
        res = decomposition_residual(k, n, lambda1, lambda2, y, r, form)
        scale = max(1.0, float(np.max(np.abs(Z_y_direct(sp, lambda1, lambda2, r, y)))))
        spread = float(res.max() - res.min()) / scale
        c_derived = decomposition_constant(k, n, lambda1, lambda2, y)
        c_err = abs(float(np.median(res)) - c_derived) / scale
        at = {float(x): float(v) for x, v in zip((0.5, 2.5), decomposition_residual(k, n, lambda1, lambda2, y,
                                                                                      np.array([0.5, 2.5]), form))}
        kids.append(VerificationReport.from_margin(
            f"residual_constant:y={y}", tolerance - max(spread, c_err), 0.0, space=sp,
            parameters={"y": y, "C_numeric": float(np.median(res)), "C_derived": c_derived, "C_at_r": at,
                        "scaled_spread": spread, "scaled_C_error": c_err}))
    return VerificationReport.combine("decomposition_identity", kids, space=sp,
                                      parameters={"k": k, "n": n, "lambda1": lambda1, "lambda2": lambda2},
                                      notes=[f"B2 form: {form.value}",
                                             "C = -(kn-1)(k-1) y - (lambda2-lambda1)(2-y) + 2 lambda1 y"])


def verify_appendix(k: int, n: int, series_order: int = 40, radii=(1.0, 2.0), r_grid=None,
                    y_grid=None) -> list[VerificationReport]:
    """Every appendix check for one (k, n), with eigenvalues from genuine ball spectra."""
    from .eigen import lambda1_ball, lambda2_ball
    sp = SpaceSpec(k, n)
    reports = [verify_lemma_A(k, n, r_grid, y_grid)]
    if k > 1:
        reports.append(roots_report(k, n))
    reports.append(f_poly_check())
    for R in radii:
        l1, l2 = lambda1_ball(sp, R), lambda2_ball(sp, R)
        reports.append(decomposition_report(k, n, l1, l2))
        reports.append(z1_increasing_check(k, n, l1, l2, R))
        reports.append(no_bad_critical_points_scan(k, n, l1, l2, R=R, y_grid=y_grid))
    certs = [certificate_report(e, series_order) for e in SERIES_EXPRESSIONS]
    reports.append(VerificationReport.combine("series_certificates", certs,
                                              notes=["bounded-order certificates, not proofs"]))
    reports.append(g_ranges_check(series_order))
    return reports
