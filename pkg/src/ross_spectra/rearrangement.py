"""Spherical decreasing rearrangement, Chiti comparison and the PPW pipeline on annuli.

Radial functions are interpolated with cubic Hermite splines built from the
sampled values and derivatives, and weighted integrals use Gauss-Legendre
rules on every grid cell.  Volumes are normalised with the area of the unit
Euclidean sphere, matching :func:`ross_spectra.geometry.ball_volume`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .eigen import BallSpectrum, annulus_spectrum, ball_spectrum, radius_for_lambda1
from .geometry import DomainError, SpaceSpec, sphere_lambda1, unit_sphere_area
from .integrator import OdeMode, RadialProfile, seed_series
from .quotient import build_quotient_curves
from .report import VerificationReport

LEVELS = 2000
TEST_LEVELS = 200
GL_POINTS = 8
NEAR_BALL_R_IN = 1e-4

_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)


# ------------------------------------------------------------------ volumes

def _density(space: SpaceSpec, r):
    a, b = space.dim - 1, space.k - 1
    if space.compact:
        return np.sin(r) ** a * np.cos(r) ** b
    return np.sinh(r) ** a * np.cosh(r) ** b


def cumulative_volume(space: SpaceSpec, r) -> np.ndarray:
    """Vectorised ball volume omega * int_0^r J, by 40-point Gauss-Legendre on [0, r]."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    x, w = np.polynomial.legendre.leggauss(40)
    nodes = 0.5 * r[:, None] * (x[None, :] + 1)
    vals = _density(space, nodes) @ w * 0.5 * r
    return unit_sphere_area(space.dim) * vals


def inverse_cumulative_volume(space: SpaceSpec, volume, tol: float = 1e-14) -> np.ndarray:
    """Radii with the given ball volumes, by vectorised bisection."""
    v = np.atleast_1d(np.asarray(volume, dtype=float))
    if np.any(v < 0):
        raise DomainError("volume must be nonnegative")
    hi = np.ones_like(v)
    cap = math.pi / 2 if space.compact else 50.0
    while True:
        short = cumulative_volume(space, hi) < v
        if not short.any():
            break
        if np.any(hi[short] >= cap):
            raise DomainError("volume exceeds the largest admissible ball")
        hi[short] = np.minimum(2 * hi[short], cap)
    lo = np.zeros_like(v)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = cumulative_volume(space, mid) < v
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= tol * np.maximum(hi, 1.0)):
            break
    out = 0.5 * (lo + hi)
    out[v == 0] = 0.0
    return out


# ------------------------------------------------------------------ weighted profiles

def _spline(p: RadialProfile) -> CubicHermiteSpline:
    return CubicHermiteSpline(p.grid, p.values, p.derivs)


def _cells(grid: np.ndarray, extra=()) -> np.ndarray:
    pts = np.union1d(grid, [x for x in extra if grid[0] < x < grid[-1]])
    return pts


def _gl_nodes(edges: np.ndarray):
    lo, hi = edges[:-1], edges[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
    weights = half[:, None] * _GL_W[None, :]
    return nodes.ravel(), weights.ravel()


@dataclass(frozen=True)
class WeightedProfile:
    profile: RadialProfile
    space: SpaceSpec
    l2_norm: float = field(default=float("nan"))

    def __post_init__(self):
        if math.isnan(self.l2_norm):
            object.__setattr__(self, "l2_norm", math.sqrt(self.integral(lambda r, u: u * u)))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.profile.grid[0]), float(self.profile.grid[-1])

    def __call__(self, r):
        return _spline(self.profile)(r)

    def integral(self, f, breaks=()) -> float:
        """omega * int f(r, u(r)) J(r) dr over the profile's grid."""
        edges = _cells(self.profile.grid, breaks)
        nodes, weights = _gl_nodes(edges)
        u = _spline(self.profile)(nodes)
        return float(unit_sphere_area(self.space.dim) * np.sum(f(nodes, u) * _density(self.space, nodes) * weights))

    def lp_norm(self, p: float) -> float:
        return self.integral(lambda r, u: np.abs(u) ** p) ** (1.0 / p)

    def volume(self) -> float:
        lo, hi = self.domain
        v = cumulative_volume(self.space, [lo, hi])
        return float(v[1] - v[0])

    def scaled(self, factor: float) -> WeightedProfile:
        return WeightedProfile(self.profile.scaled(factor), self.space)


def ball_ground_state(spectrum: BallSpectrum) -> WeightedProfile:
    """g1 on [0, R], with the node r = 0 filled in from the series seed."""
    g1 = spectrum.g1
    a = seed_series(spectrum.space, OdeMode.RADIAL, spectrum.lambda1)
    r0 = g1.grid[0]
    seed_val = sum(aj * r0**j for j, aj in enumerate(a))
    scale = g1.values[0] / seed_val
    grid = np.concatenate(([0.0], g1.grid))
    vals = np.concatenate(([scale], g1.values))
    ders = np.concatenate(([0.0], g1.derivs))
    vals[-1] = 0.0  # Dirichlet value; the shot residue is below solver tolerance
    return WeightedProfile(RadialProfile(grid, vals, ders, (0.0, spectrum.R)), spectrum.space)


def annulus_ground_state(u1: RadialProfile, space: SpaceSpec) -> WeightedProfile:
    vals = np.array(u1.values, dtype=float)
    vals[0] = 0.0
    vals[-1] = 0.0
    return WeightedProfile(RadialProfile(u1.grid, vals, u1.derivs, u1.domain), space)


# ------------------------------------------------------------------ rearrangement

def _level_crossings(sp: CubicHermiteSpline, grid: np.ndarray, values: np.ndarray, t: float) -> np.ndarray:
    """All r with u(r) = t, refined by bisection inside each bracketing cell."""
    d = values - t
    idx = np.nonzero((d[:-1] > 0) != (d[1:] > 0))[0]
    if idx.size == 0:
        return np.empty(0)
    lo, hi = grid[idx].copy(), grid[idx + 1].copy()
    flo = d[idx] > 0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = sp(mid) - t > 0
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def distribution_function(u: WeightedProfile, t: float) -> tuple[float, np.ndarray]:
    """Vol{u > t} and the crossing radii of the level t."""
    p = u.profile
    sp = _spline(p)
    cross = _level_crossings(sp, p.grid, p.values, t)
    pts = np.concatenate(([p.grid[0]], cross, [p.grid[-1]]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    above = sp(mids) > t
    V = cumulative_volume(u.space, pts)
    return float(np.sum((V[1:] - V[:-1])[above])), cross


def decreasing_rearrangement(u: WeightedProfile, domain_volume: float | None = None,
                             levels: int = LEVELS) -> WeightedProfile:
    """Radial nonincreasing u* on the ball of the same volume as u's domain."""
    p = u.profile
    vmax = float(np.max(p.values))
    if np.any(p.values < -1e-12 * max(vmax, 1.0)):
        raise DomainError("rearrangement is implemented for nonnegative profiles only")
    vol = u.volume() if domain_volume is None else float(domain_volume)
    R_star = float(inverse_cumulative_volume(u.space, vol)[0])
    vmin = float(np.min(p.values))
    if vmax - vmin <= 1e-14 * max(abs(vmax), 1.0):
        grid = np.array([0.0, R_star])
        prof = RadialProfile(grid, np.full(2, vmax), np.zeros(2), (0.0, R_star))
        return WeightedProfile(prof, u.space)
    sp = _spline(p)
    dsp = sp.derivative()
    # uniform levels plus levels clustered at the top, where u* is very flat near rho = 0
    half = max(levels // 2, 1)
    frac = np.arange(1, half + 1) / half
    ts = np.unique(np.concatenate((vmax - (vmax - vmin) * frac, vmax - (vmax - vmin) * frac**8)))[::-1]
    mus, slopes = [], []
    for t in ts:
        mu, cross = distribution_function(u, t)
        mus.append(mu)
        # coarea: d mu / dt = -sum J(c) / |u'(c)| over the crossing points
        if cross.size:
            slopes.append(float(np.sum(_density(u.space, cross) / np.abs(dsp(cross)))))
        else:
            slopes.append(math.inf)
    mus = np.minimum(np.array(mus), vol)
    rho = inverse_cumulative_volume(u.space, mus)
    with np.errstate(divide="ignore"):
        der = -_density(u.space, rho) / np.array(slopes)
    der[~np.isfinite(der)] = 0.0
    grid = np.concatenate(([0.0], rho))
    vals = np.concatenate(([vmax], ts))
    ders = np.concatenate(([0.0], der))
    if R_star > grid[-1] * (1 + 1e-12):
        # the lowest level is attained on a set of positive measure
        grid = np.append(grid, R_star)
        vals = np.append(vals, vmin)
        ders = np.append(ders, 0.0)
    keep = np.concatenate(([True], np.diff(grid) > 1e-15 * max(R_star, 1.0)))
    grid, vals, ders = grid[keep], vals[keep], ders[keep]
    grid[-1] = min(grid[-1], R_star)
    return WeightedProfile(RadialProfile(grid, vals, ders, (0.0, R_star)), u.space)


def level_set_volume_oracle(u: WeightedProfile, levels, cells: int = 200_000) -> np.ndarray:
    """Brute-force Vol{u > t}: linear level-set fractions on a fine uniform grid."""
    lo, hi = u.domain
    edges = np.linspace(lo, hi, cells + 1)
    f = u(edges)
    cell_vol = np.diff(cumulative_volume(u.space, edges))
    a, b = f[:-1], f[1:]
    out = []
    for t in np.atleast_1d(levels):
        da, db = a - t, b - t
        frac = np.where((da > 0) & (db > 0), 1.0, 0.0)
        mixed = (da > 0) != (db > 0)
        frac[mixed] = np.maximum(da[mixed], db[mixed]) / np.abs(da[mixed] - db[mixed])
        out.append(float(np.sum(frac * cell_vol)))
    return np.array(out)


def rearrangement_checks(u: WeightedProfile, u_star: WeightedProfile, tests: int = TEST_LEVELS) -> VerificationReport:
    vol = u.volume()
    vmax = float(np.max(u.profile.values))
    vmin = float(np.min(u.profile.values))
    ts = vmin + (vmax - vmin) * (np.arange(1, tests + 1) - 0.5) / tests
    lhs = level_set_volume_oracle(u, ts)
    rhs = level_set_volume_oracle(u_star, ts)
    err = float(np.max(np.abs(lhs - rhs))) / vol
    kids = [VerificationReport.from_margin("equimeasurable", 1e-6 - err, 0.0, space=u.space,
                                           parameters={"levels": tests, "max_volume_error_fraction": err})]
    for p, tol in ((1, 1e-7), (2, 1e-8)):
        a, b = u.lp_norm(p), u_star.lp_norm(p)
        rel = abs(a - b) / a
        kids.append(VerificationReport.from_margin(f"L{p}_norm_preserved", tol - rel, 0.0, space=u.space,
                                                   parameters={"original": a, "rearranged": b, "relative_error": rel}))
    d = np.diff(u_star.profile.values)
    kids.append(VerificationReport.from_margin("nonincreasing", -float(np.max(d)) / vmax, 0.0, space=u.space))
    return VerificationReport.combine("rearrangement", kids, space=u.space)


# ------------------------------------------------------------------ Chiti comparison

@dataclass(frozen=True)
class ChitiResult:
    r0: float
    pattern_ok: bool
    degenerate: bool
    crossings: tuple[float, ...]
    R_star: float
    R_ball: float
    worst_violation: float

    def __iter__(self):
        return iter((self.r0, self.pattern_ok))


def normalized_ball_state(ball: BallSpectrum, l2: float) -> WeightedProfile:
    z = ball_ground_state(ball)
    return z.scaled(l2 / z.l2_norm)


def chiti_crossing(u_star: WeightedProfile, ball: BallSpectrum, points: int = 4001,
                   tol: float = 1e-8) -> ChitiResult:
    """First crossing r0 of z - u* on (0, R) and whether z >= u* before it and z <= u* after."""
    R = ball.R
    R_star = u_star.domain[1]
    if R_star < R * (1 - 1e-9):
        raise DomainError(f"Faber-Krahn violation: rearranged radius {R_star} is below the ball radius {R}")
    z = normalized_ball_state(ball, u_star.l2_norm)
    r = np.linspace(0.0, R, points)
    d = z(r) - u_star(r)
    scale = float(np.max(np.abs(z.profile.values)))
    if np.max(np.abs(d)) <= 1e-6 * scale:
        return ChitiResult(math.nan, True, True, (), R_star, R, 0.0)
    sig = np.where(np.abs(d) <= tol * scale, 0, np.sign(d))
    nz = np.nonzero(sig)[0]
    crossings = []
    for i, j in zip(nz[:-1], nz[1:]):
        if sig[i] != sig[j]:
            crossings.append(float(r[i] + (r[j] - r[i]) * d[i] / (d[i] - d[j])))
    if not crossings:
        # the crossing sits inside the noise band: z >= u* up to tol, then z = u* up to tol
        worst = float(d.min()) / scale
        r0 = float(r[nz[-1]]) if nz.size else math.nan
        return ChitiResult(r0, worst >= -tol, True, (), R_star, R, worst)
    r0 = crossings[0]
    before = d[r < r0]
    after = d[r > r0]
    worst = min(float(before.min(initial=0.0)), float(-after.max(initial=0.0))) / scale
    ok = len(crossings) == 1 and worst >= -tol
    return ChitiResult(r0, ok, False, tuple(crossings), R_star, R, worst)


# ------------------------------------------------------------------ Rayleigh pipeline

@dataclass(frozen=True)
class ExtendedQuotient:
    """G and B of a ball on [0, inf): G is frozen at G(R) beyond R."""
    G: CubicHermiteSpline
    Gp: CubicHermiteSpline
    R: float
    G_R: float
    space: SpaceSpec

    def values(self, r):
        r = np.asarray(r, dtype=float)
        inside = r < self.R
        G = np.where(inside, self.G(np.minimum(r, self.R)), self.G_R)
        Gp = np.where(inside, self.Gp(np.minimum(r, self.R)), 0.0)
        return G, Gp

    def B(self, r):
        G, Gp = self.values(r)
        return Gp**2 + sphere_lambda1(self.space, np.asarray(r, dtype=float)) * G**2


def extended_quotient(ball: BallSpectrum) -> ExtendedQuotient:
    c = build_quotient_curves(ball)
    R = ball.R
    G_R = float(ball.g2.derivs[-1] / ball.g1.derivs[-1])
    Gpp_R = G_R * (ball.lambda1 - ball.lambda2 + float(sphere_lambda1(ball.space, R))) / 3.0
    g = c.grid
    Gp0 = float(c.Gp.values[0] - g[0] * c.Gp.derivs[0])
    grid = np.concatenate(([0.0], g, [R]))
    G = np.concatenate(([0.0], c.G.values, [G_R]))
    Gp = np.concatenate(([Gp0], c.Gp.values, [0.0]))
    Gpp = np.concatenate(([0.0], c.Gp.derivs, [Gpp_R]))
    return ExtendedQuotient(CubicHermiteSpline(grid, G, Gp), CubicHermiteSpline(grid, Gp, Gpp), R, G_R, ball.space)


def rayleigh_gap_bound(omega_u1: WeightedProfile, omega_domain: tuple[float, float], ball: BallSpectrum,
                       lambda1_omega: float | None = None, tol: float = 1e-6) -> float:
    """int (G'^2 + lambda1(S_r) G^2) u1^2 / int G^2 u1^2 over the domain, with G from the ball."""
    if lambda1_omega is not None and abs(lambda1_omega - ball.lambda1) > tol * ball.lambda1:
        raise DomainError(f"lambda1 mismatch: domain {lambda1_omega} vs ball {ball.lambda1}")
    lo, hi = omega_domain
    if abs(omega_u1.domain[0] - lo) > 1e-12 or abs(omega_u1.domain[1] - hi) > 1e-12:
        raise DomainError("profile does not live on the stated domain")
    ext = extended_quotient(ball)
    num = omega_u1.integral(lambda r, u: ext.B(r) * u * u, breaks=(ball.R,))
    den = omega_u1.integral(lambda r, u: ext.values(r)[0] ** 2 * u * u, breaks=(ball.R,))
    return num / den


def section4_chain(u1: WeightedProfile, u_star: WeightedProfile, z: WeightedProfile, ball: BallSpectrum) -> dict:
    """Integrals of u^2 B and u^2 G^2 over the domain, its rearrangement and the ball (all unit L2)."""
    ext = extended_quotient(ball)
    out = {}
    for name, prof in (("omega", u1), ("omega_star", u_star), ("ball", z)):
        w = prof.scaled(1.0 / prof.l2_norm)
        out[f"B_{name}"] = w.integral(lambda r, u: ext.B(r) * u * u, breaks=(ball.R,))
        out[f"G2_{name}"] = w.integral(lambda r, u: ext.values(r)[0] ** 2 * u * u, breaks=(ball.R,))
    out["ball_ratio"] = out["B_ball"] / out["G2_ball"]
    return out


@dataclass(frozen=True)
class PPWResult:
    report: VerificationReport
    chain: dict
    chiti: ChitiResult
    u_star: WeightedProfile
    z: WeightedProfile
    u1: WeightedProfile


SYMMETRY_NOTE = ("annulus centred at the pole: the orthogonality constraints hold at the pole by odd symmetry, "
                 "so no centre-of-mass search is run")
CANDIDATE_NOTE = ("lambda2(Omega) is a candidate from the radial and first-harmonic families; it is a genuine "
                  "eigenvalue, hence at least the true lambda2, which makes the comparison conservative")


def ppw_pipeline(space: SpaceSpec, r_in: float, r_out: float) -> PPWResult:
    ann = annulus_spectrum(space, r_in, r_out)
    R1 = radius_for_lambda1(space, ann.lambda1)
    ball = ball_spectrum(space, R1)
    lam2_ball = ball.lambda2
    margin = lam2_ball - ann.lambda2_candidate
    params = {"r_in": r_in, "r_out": r_out, "lambda1_omega": ann.lambda1,
              "lambda2_omega_candidate": ann.lambda2_candidate, "lambda2_source": ann.lambda2_source.value,
              "ball_radius": R1, "lambda1_ball": ball.lambda1, "lambda2_ball": lam2_ball, "margin": margin}
    kids = [VerificationReport.from_margin("ppw_margin", margin / lam2_ball, 1e-8, space=space, parameters=params,
                                           notes=[CANDIDATE_NOTE])]
    if r_in <= NEAR_BALL_R_IN:
        kids.append(VerificationReport.from_margin("near_ball_equality", 1e-3 - margin / lam2_ball, 0.0,
                                                   space=space, parameters=params,
                                                   notes=["near-ball annulus: margin must be small"]))
    u1 = annulus_ground_state(ann.u1, space)
    u_star = decreasing_rearrangement(u1)
    kids.append(rearrangement_checks(u1, u_star))
    chiti = chiti_crossing(u_star, ball)
    kids.append(VerificationReport.from_margin(
        "chiti_single_crossing", 1.0 if chiti.pattern_ok else -1.0, 0.0, space=space,
        parameters={"r0": None if chiti.degenerate else chiti.r0, "crossings": list(chiti.crossings),
                    "degenerate": chiti.degenerate, "R_star": chiti.R_star, "R_ball": chiti.R_ball,
                    "worst_violation": chiti.worst_violation}))
    kids.append(VerificationReport.from_margin("faber_krahn_radius", chiti.R_star - chiti.R_ball, 1e-9 * R1,
                                               space=space))
    z = normalized_ball_state(ball, u_star.l2_norm)
    chain = section4_chain(u1, u_star, z, ball)
    quotient = chain["B_omega"] / chain["G2_omega"]
    gap_ball = ball.lambda2 - ball.lambda1
    chain.update({"rayleigh_quotient": quotient, "gap_omega": ann.lambda2_candidate - ann.lambda1,
                  "gap_ball": gap_ball})
    scale = gap_ball
    links = [
        ("chain_B_omega_le_star", chain["B_omega_star"] - chain["B_omega"]),
        ("chain_B_star_le_ball", chain["B_ball"] - chain["B_omega_star"]),
        ("chain_G2_omega_ge_star", chain["G2_omega"] - chain["G2_omega_star"]),
        ("chain_G2_star_ge_ball", chain["G2_omega_star"] - chain["G2_ball"]),
        ("quotient_ge_domain_gap", quotient - chain["gap_omega"]),
        ("quotient_le_ball_gap", gap_ball + 1e-8 - quotient),
        ("ball_ratio_is_ball_gap", 1e-6 - abs(chain["ball_ratio"] - gap_ball) / scale),
    ]
    for name, val in links:
        kids.append(VerificationReport.from_margin(name, val / scale, 1e-8, space=space, parameters={"value": val}))
    # quotient_ge_domain_gap holds for the true second eigenvalue; a failure would mean the
    # candidate from the two searched families is not the true lambda2(Omega)
    report = VerificationReport.combine("ppw_annulus", kids, space=space, parameters=params,
                                        notes=[SYMMETRY_NOTE, CANDIDATE_NOTE])
    return PPWResult(report, chain, chiti, u_star, z, u1)


def ppw_test(space: SpaceSpec, r_in: float, r_out: float) -> VerificationReport:
    return ppw_pipeline(space, r_in, r_out).report


def chiti_report(space: SpaceSpec, r_in: float, r_out: float) -> VerificationReport:
    """Chiti comparison and its weighted-integral consequence for one annulus."""
    res = ppw_pipeline(space, r_in, r_out)
    keep = {"chiti_single_crossing", "faber_krahn_radius", "rearrangement",
            "chain_B_star_le_ball", "chain_G2_star_ge_ball"}
    kids = [c for c in res.report.children if c.check_id in keep]
    return VerificationReport.combine("chiti", kids, space=space, parameters=res.report.parameters)
