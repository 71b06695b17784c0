"""Two-sided bounds for approximation numbers of composition operators.

Upper bounds take a Blaschke product ``B`` of degree ``n - 1`` and a radius
``r``; lower bounds take ``n`` points ``Z`` and use the interpolation
constant of their images.  All arithmetic is in the log domain.  The
radius is parametrised by the boundary angle ``t_r`` at which
``|phi(e^{it_r})| = r``: every catalogue symbol has ``|phi(e^{it})|``
decreasing on ``(0, pi)``, so ``E_r = {|t| >= t_r}``.

Bounds are rigorous only relative to the configured Carleson constant.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .blaschke import (
    BlaschkeProduct,
    best_curve_blaschke,
    build_curve_blaschke,
    curve_m_grid,
    build_radial_blaschke,
    monomial_blaschke,
)
from .carleson import (
    CarlesonEstimate,
    PointMassMeasure,
    carleson_norm_upper,
    lattice_Z,
    log_delta,
    log_interp_const_upper,
    halfplane_lattice,
    select_points_on_curve,
    upsilon,
)
from .config import DEFAULT, Config
from .disc_geometry import DiscPoints, SampledCurve, one_minus_abs2
from .errors import ConvergenceError, DomainError
from .operator_numerics import operator_norm_bound
from .symbols import (
    AnalyticSymbol,
    CornerSymbol,
    ProfileSymbol,
    herglotz,
    log_graded_nodes,
    membership_check,
    psi_curve,
)

LOG_TINY = math.log(1e-300)


def _lin(logv: float) -> float:
    return 0.0 if not logv > LOG_TINY else math.exp(logv)


@dataclass(frozen=True)
class BoundReport:
    n: int
    log_upper: float = math.nan
    log_lower: float = math.nan
    ingredients: dict = field(default_factory=dict)

    @property
    def upper_value(self) -> float:
        return math.inf if math.isnan(self.log_upper) else _lin(self.log_upper)

    @property
    def lower_value(self) -> float:
        return 0.0 if math.isnan(self.log_lower) else _lin(self.log_lower)

    def merge(self, other: "BoundReport") -> "BoundReport":
        ing = dict(self.ingredients)
        ing.update(other.ingredients)
        return BoundReport(self.n,
                           other.log_upper if math.isnan(self.log_upper) else self.log_upper,
                           other.log_lower if math.isnan(self.log_lower) else self.log_lower, ing)


# ---------------------------------------------------------------------------
# upper bounds


TABLE_TMIN = 1e-200


@dataclass(frozen=True)
class BoundaryTable:
    """Boundary values of a symbol on log-graded Gauss nodes in ``(tmin, pi)``."""

    t: np.ndarray
    w: np.ndarray
    co: np.ndarray


_TABLES: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def boundary_table(phi: AnalyticSymbol, cfg: Config = DEFAULT) -> BoundaryTable | None:
    """Cached table for symbols whose boundary values are expensive (profile symbols)."""
    if not isinstance(phi, ProfileSymbol):
        return None
    width = 0.5 / cfg.measure_panels_per_unit
    key = (width, TABLE_TMIN)
    cache = _TABLES.setdefault(phi, {})
    if key not in cache:
        t, w = log_graded_nodes(TABLE_TMIN, np.pi, width)
        cache[key] = BoundaryTable(t, w, phi.boundary_co(t))
    return cache[key]


def graded_pullback_measure(phi: AnalyticSymbol, t_r: float, cfg: Config = DEFAULT,
                            decades: float = 30.0) -> PointMassMeasure:
    """Boundary measure carried by ``{|t| < t_r}`` pushed forward by ``phi``.

    Atoms sit at Gauss nodes graded in ``log t`` down to ``t_r 10^-decades``;
    the leftover arc is lumped into one atom at its outer end.
    """
    if t_r <= 0:
        return PointMassMeasure()
    lo = max(t_r * 10.0 ** -decades, 1e-300)
    table = boundary_table(phi, cfg)
    if table is not None and lo >= TABLE_TMIN:
        # table nodes inside [lo, t_r); the mass of the partial panels goes to atoms at both ends
        sel = (table.t >= lo) & (table.t < t_r)
        t, w, co = table.t[sel], table.w[sel], table.co[sel]
        gap = max(t_r - lo - float(w.sum()), 0.0)
        ends = np.array([t_r])
        co_end = phi.boundary_co(ends)
        co_half = np.concatenate([co, co_end])
        w_half = np.concatenate([w, [gap]])
        co_all = np.concatenate([co_half, np.conj(co_half), phi.boundary_co(np.array([lo]))])
        mass = np.concatenate([w_half, w_half, [2 * lo]]) / (2 * np.pi)
        return PointMassMeasure(DiscPoints(co_all), mass)
    t, w = log_graded_nodes(lo, t_r, 1.0 / cfg.measure_panels_per_unit)
    tt = np.concatenate([t, -t, [lo]])
    mass = np.concatenate([w, w, [2 * lo]]) / (2 * np.pi)
    return PointMassMeasure(DiscPoints(phi.boundary_co(tt)), mass)


def boundary_samples(t_r: float, count: int) -> np.ndarray:
    """Angles in ``E_r = {t_r <= |t| <= pi}``, log-graded toward ``t_r``."""
    half = np.geomspace(t_r, np.pi, max(count // 2, 2))
    return np.concatenate([half, -half])


def _er_boundary_co(phi: AnalyticSymbol, t_r: float, grid: int, cfg: Config) -> np.ndarray:
    """``1 - phi`` on a sample of ``E_r``."""
    table = boundary_table(phi, cfg)
    if table is not None and t_r >= TABLE_TMIN:
        co = np.concatenate([table.co[table.t >= t_r], phi.boundary_co(np.array([t_r, np.pi]))])
        return np.concatenate([co, np.conj(co)])
    return phi.boundary_co(boundary_samples(t_r, grid))


def upper_bound(phi: AnalyticSymbol, B: BlaschkeProduct, r: float | None = None, cfg: Config = DEFAULT,
                t_r: float | None = None, grid: int | None = None) -> BoundReport:
    """``sqrt(sup_{E_r} |B o phi|^2 ||C_phi||^2 + C box_sup(mu_{phi,r}))``.

    ``||C_phi||`` is replaced by its subordination bound.  The sup runs over
    a log-graded sample of ``E_r`` (``grid`` points, or the cached node table
    of a profile symbol); the pullback measure is discretised on nodes graded
    toward the contact point.
    """
    if t_r is None:
        if r is None or not 0 < r < 1:
            raise DomainError("r must lie in (0, 1)")
        t_r = phi.level_angle(1.0 - r * r)
    grid = grid or cfg.upper_grid
    co = _er_boundary_co(phi, t_r, grid, cfg)
    log_sup = float(B.log_abs(DiscPoints(co)).max())
    d_r = float(one_minus_abs2(phi.boundary_co(np.array([t_r])))[0])
    log_r = 0.5 * math.log1p(-d_r)
    mu = graded_pullback_measure(phi, t_r, cfg)
    est = carleson_norm_upper(mu, cfg)
    norm = operator_norm_bound(phi.phi0)
    a = 2 * log_sup + 2 * math.log(norm)
    b = est.log_norm_upper
    log_up = 0.5 * float(np.logaddexp(a, b))
    ing = {
        "sup_B_on_Er": log_sup,
        "carleson_pullback": est,
        "r": math.exp(log_r),
        "log_r": log_r,
        "t_r": t_r,
        "norm_bound": norm,
        "degree": B.degree,
        "upper_grid": int(co.size),
    }
    return BoundReport(B.degree + 1, log_upper=log_up, ingredients=ing)


def _omega_curve(phi: AnalyticSymbol, t_r: float, count: int) -> SampledCurve:
    """``phi(e^{it})`` for ``t`` from ``t_r`` to ``2 pi - t_r`` (through ``pi``), log-graded at both ends."""
    half = np.geomspace(t_r, np.pi, count // 2)
    t = np.concatenate([half, 2 * np.pi - half[::-1][1:]])
    tt = np.where(t > np.pi, t - 2 * np.pi, t)
    return SampledCurve(DiscPoints(phi.boundary_co(tt)), t)


def curve_upper(phi: AnalyticSymbol, n: int, t_r: float, cfg: Config = DEFAULT, m="best") -> BoundReport:
    """Curve placement on ``Omega_r``; ``m="best"`` scans the end-cluster size."""
    count = max(cfg.curve_samples, 40 * n)
    curve = _omega_curve(phi, t_r, count)
    if m == "best":
        B, m, _ = best_curve_blaschke(curve, n, DiscPoints(_er_boundary_co(phi, t_r, cfg.upper_grid, cfg)),
                                      curve_m_grid(n, 6))
    else:
        B = build_curve_blaschke(curve, n, m)
    rep = upper_bound(phi, B, cfg=cfg, t_r=t_r)
    rep.ingredients.update({"strategy_upper": "curve", "ell_P": curve.length, "m": m})
    return rep


def radial_upper(phi: AnalyticSymbol, n: int, r_co: float, cfg: Config = DEFAULT, m="auto") -> BoundReport:
    B = build_radial_blaschke(1.0 - r_co, n, m, r_co=r_co)
    t_r = phi.level_angle(r_co * (2.0 - r_co))
    rep = upper_bound(phi, B, cfg=cfg, t_r=t_r)
    rep.ingredients.update({"strategy_upper": "radial", "ell_P": math.log((2.0 - r_co) / r_co)})
    return rep


def monomial_upper(phi: AnalyticSymbol, n: int, t_r: float, cfg: Config = DEFAULT) -> BoundReport:
    rep = upper_bound(phi, monomial_blaschke(n), cfg=cfg, t_r=t_r)
    rep.ingredients["strategy_upper"] = "monomial"
    return rep


def _best(reports):
    reports = [r for r in reports if r is not None and not math.isnan(r.log_upper)]
    if not reports:
        return None
    return min(reports, key=lambda r: r.log_upper)


def _contact_scale(phi: AnalyticSymbol) -> float:
    """Smallest angle at which ``1 - |phi|^2`` is still resolved in double precision."""
    return 1e-300 if phi.touches_boundary else np.pi


def best_upper_monomial(phi: AnalyticSymbol, n: int, cfg: Config = DEFAULT) -> BoundReport:
    if not phi.touches_boundary:
        # |phi| < 1 on the closed disc: E_r is the whole circle for r = max |phi|
        t = np.linspace(-np.pi, np.pi, 4096, endpoint=False)
        d = float(one_minus_abs2(phi.boundary_co(t)).min())
        log_r = 0.5 * math.log1p(-d) if d < 1 else -math.inf
        norm = operator_norm_bound(phi.phi0)
        log_up = (n - 1) * log_r + math.log(norm) if n > 1 else math.log(norm)
        est = CarlesonEstimate(0.0, cfg.carleson_constant)
        return BoundReport(n, log_upper=log_up, ingredients={
            "sup_B_on_Er": (n - 1) * log_r, "carleson_pullback": est, "r": math.exp(log_r), "log_r": log_r,
            "t_r": 0.0, "norm_bound": norm, "strategy_upper": "monomial"})
    # radii whose level angle underflows past the resolved range carry no information
    floor = TABLE_TMIN if boundary_table(phi, cfg) is not None else 1e-290
    d_grid = np.geomspace(0.5, 1e-8, cfg.param_grid)
    angles = np.array([phi.level_angle(d) for d in d_grid])
    keep = angles >= floor
    if not keep.any():
        raise DomainError("no resolvable radius for the monomial strategy")
    d_grid, angles = d_grid[keep], angles[keep]
    reps = [monomial_upper(phi, n, a, cfg) for a in angles]
    i = int(np.argmin([r.log_upper for r in reps]))
    lo = d_grid[max(i - 1, 0)]
    hi = d_grid[min(i + 1, d_grid.size - 1)]
    fine = [phi.level_angle(d) for d in np.geomspace(lo, hi, cfg.param_grid)]
    reps += [monomial_upper(phi, n, a, cfg) for a in fine if a >= floor]
    return _best(reps)


def best_upper_curve(phi: AnalyticSymbol, n: int, cfg: Config = DEFAULT) -> BoundReport | None:
    if n < 16:
        return None
    if isinstance(phi, CornerSymbol):
        recipe = math.pi * math.sqrt(n / (2 * phi.alpha))
    elif isinstance(phi, ProfileSymbol):
        recipe = -math.log(phi.U.aux.gamma_inverse(float(n)))
    else:
        return None
    reps = []
    for f in np.geomspace(0.5, 2.0, cfg.param_grid):
        t_r = math.exp(-recipe * f)
        if t_r < 1e-250:
            continue
        try:
            rep = curve_upper(phi, n, t_r, cfg)
        except DomainError:
            continue
        rep.ingredients["recipe_log_eps"] = recipe
        reps.append(rep)
    return _best(reps)


def best_upper_radial(phi: AnalyticSymbol, n: int, cfg: Config = DEFAULT) -> BoundReport | None:
    if n < 7 or not isinstance(phi, ProfileSymbol):
        return None
    omega = phi.U.aux.omega(float(n))
    reps = []
    for tau in np.geomspace(0.5, 2.0, cfg.param_grid):
        r_co = math.exp(-tau * omega)
        try:
            rep = radial_upper(phi, n, r_co, cfg)
        except DomainError:
            continue
        rep.ingredients.update({"tau": float(tau), "omega": omega})
        reps.append(rep)
    return _best(reps)


def symbol_kind(phi: AnalyticSymbol) -> str:
    if isinstance(phi, CornerSymbol):
        return "corner"
    if isinstance(phi, ProfileSymbol):
        rep = membership_check(phi.U)
        if rep.in_Us:
            return "smooth"
        if rep.in_Uc:
            return "cusp"
        return "profile"
    return "generic"


def best_upper(phi: AnalyticSymbol, n: int, strategy: str = "auto", cfg: Config = DEFAULT) -> BoundReport:
    """Minimal upper bound over the recipe grids of the applicable strategies."""
    kind = symbol_kind(phi)
    if strategy == "auto":
        names = {"corner": ["curve", "monomial"], "smooth": ["curve", "monomial"],
                 "cusp": ["radial", "monomial"]}.get(kind, ["monomial"])
    else:
        names = [strategy]
    builders = {"curve": best_upper_curve, "radial": best_upper_radial, "monomial": best_upper_monomial}
    if any(s not in builders for s in names):
        raise DomainError(f"unknown upper strategy {strategy!r}")
    rep = _best([builders[s](phi, n, cfg) for s in names])
    if rep is None:
        raise DomainError(f"strategy {strategy!r} is not applicable at n={n}")
    return replace(rep, n=n)


# ---------------------------------------------------------------------------
# lower bounds


def lower_bound(phi: AnalyticSymbol, Z, cfg: Config = DEFAULT, W: DiscPoints | None = None) -> BoundReport:
    """``M(phi(Z))^{-1} ||upsilon_Z||_C^{-1/2} min_j ((1-|z_j|^2)/(1-|phi(z_j)|^2))^{1/2}``.

    ``M`` and the Carleson norm are replaced by their computable upper
    bounds, so the result is a lower bound for ``a_n`` with ``n = |Z|``.
    """
    Z = Z if isinstance(Z, DiscPoints) else DiscPoints.from_z(Z)
    if W is None:
        W = DiscPoints(phi.co_points(Z))
    log_delta(Z)  # raises on repeated points
    try:
        log_m = log_interp_const_upper(W, cfg)
    except DomainError as exc:
        raise DomainError("images of Z must be distinct") from exc
    est_z = carleson_norm_upper(upsilon(Z), cfg)
    ratio = np.log(Z.one_minus_abs2()) - np.log(W.one_minus_abs2())
    log_min_ratio = float(ratio.min())
    log_low = -log_m - 0.5 * est_z.log_norm_upper + 0.5 * log_min_ratio
    ing = {
        "M_upper": log_m,
        "carleson_Z": est_z,
        "min_ratio": log_min_ratio,
        "log_delta_W": log_delta(W),
    }
    return BoundReport(len(Z), log_lower=log_low, ingredients=ing)


def corner_theta_interval(alpha: float):
    """Admissible ``theta``: ``(1-alpha) pi/2 < theta < theta*`` with ``pi theta* - theta*^2 = (1-alpha) pi^2/2``."""
    lo = (1 - alpha) * math.pi / 2
    hi = math.pi * (1 - math.sqrt(max(2 * alpha - 1, 0.0))) / 2
    return lo, hi


@dataclass(frozen=True)
class LatticePlan:
    Z: DiscPoints
    W: DiscPoints
    lam: float
    j0: int
    params: dict


def strategy_corner_lower(alpha: float, n: int, theta: float | None = None, eps: float | None = None,
                          margin: float = 1e-8, max_j0: int = 100000) -> LatticePlan:
    """Half-plane lattice ``W`` pulled back through the exact inverse of the corner map."""
    phi = CornerSymbol(alpha)
    lo, hi = corner_theta_interval(alpha)
    if theta is None:
        theta = 0.5 * (lo + hi)
    if eps is None:
        eps = math.pi * math.sqrt(2 * alpha / n)
    lam = math.exp(-eps)
    # lattice points move toward 1 as j grows, so scan j0 upward
    for j0 in range(max_j0):
        W = halfplane_lattice(theta, lam, n, j0)
        if np.all(phi.in_range(W.co, margin)):
            Z = DiscPoints(phi.inverse_co(W.co))
            return LatticePlan(Z, W, lam, j0, {"theta": theta, "eps": eps})
        ok = phi.in_range(W.co, margin)
        if not ok[-1]:
            continue
        # jump straight to the first admissible index
        first_ok = int(np.argmax(ok))
        if np.all(ok[first_ok:]):
            return _corner_plan_from(phi, theta, lam, n, j0 + first_ok, eps, margin)
    raise ConvergenceError("no admissible lattice window found")


def _corner_plan_from(phi, theta, lam, n, j0, eps, margin):
    while True:
        W = halfplane_lattice(theta, lam, n, j0)
        if np.all(phi.in_range(W.co, margin)):
            return LatticePlan(DiscPoints(phi.inverse_co(W.co)), W, lam, j0, {"theta": theta, "eps": eps})
        j0 += 1


def _real_f(U, co_x: float) -> float:
    return herglotz(U, co_x, 0.0).real


def strategy_cusp_lower(U, n: int, nu: float = 1.0, phi: ProfileSymbol | None = None) -> LatticePlan:
    """Real lattice ``Z(lambda)`` window pulled back along ``(0, 1)``.

    ``lambda`` solves ``lambda^{j0+n} = (1 - w_t)/(1 + w_t)`` with
    ``w_t = phi(1 - exp(-nu n/omega_U(nu n)))``; ``j0`` is the first index
    whose lattice window lies in ``phi((0, 1)) = (phi(0), 1)``.
    """
    phi = phi or ProfileSymbol(U)
    om = U.aux.omega(nu * n)
    co_xt = math.exp(-nu * n / om)
    f_t = _real_f(U, co_xt)
    co_wt = -math.expm1(-f_t)
    f_0 = _real_f(U, 1.0)
    co_w0 = -math.expm1(-f_0)
    q = co_wt / (2.0 - co_wt)  # (1 - w)/(1 + w)
    for j0 in range(10000):
        lam = q ** (1.0 / (j0 + n))
        co_first = 2 * lam ** (j0 + 1) / (1 + lam ** (j0 + 1))
        if co_first < co_w0:
            break
    else:
        raise ConvergenceError("lattice never enters the image of (0, 1)")
    j = np.arange(j0 + 1, j0 + n + 1)
    p = np.exp(j * math.log(lam))
    co_w = 2 * p / (1 + p)
    co_z = np.empty(n)
    for i, cw in enumerate(co_w):
        target = -math.log1p(-cw)  # f value with exp(-f) = w

        def g(y):
            return _real_f(U, math.exp(-y)) - target

        hi = max(1.0, -math.log(co_xt)) + 1.0
        while g(hi) > 0:
            hi *= 2.0
            if hi > 690:
                raise ConvergenceError("preimage leaves the representable range")
        co_z[i] = math.exp(-brentq(g, 0.0, hi, xtol=1e-13, rtol=1e-14, maxiter=200))
    Z = DiscPoints(co_z.astype(complex))
    W = DiscPoints(co_w.astype(complex))
    return LatticePlan(Z, W, lam, j0, {"nu": nu, "omega": om, "log_lambda": math.log(lam)})


def _gamma_curve(phi: ProfileSymbol, t: np.ndarray) -> np.ndarray:
    """Co-form of ``phi_U(psi_U(e^{it}))`` for ``t`` in ``(0, pi)`` (upper half only)."""
    U = phi.U
    psi = psi_curve(U, t)
    delta = -np.expm1(-U(t) / U.aux.h(t))  # 1 - |psi|
    f = np.array([herglotz(U, d, th) for d, th in zip(delta, t)])
    return -np.expm1(-f), psi


@dataclass(frozen=True)
class CurvePlan:
    Z: DiscPoints
    W: DiscPoints
    theta: np.ndarray
    params: dict


def strategy_smooth_lower(U, n: int, phi: ProfileSymbol | None = None, eps: float | None = None,
                          samples: int = 600) -> CurvePlan:
    """Points on ``Gamma = phi_U o psi_U`` selected by the covering construction."""
    phi = phi or ProfileSymbol(U)
    eps = eps if eps is not None else math.exp(-math.sqrt(n))
    for _ in range(60):
        co_eps, _ = _gamma_curve(phi, np.array([eps]))
        probe = np.geomspace(eps, np.pi * 0.999, 64)
        co_p, _ = _gamma_curve(phi, probe)
        d_r = float(one_minus_abs2(co_p).min())
        r = math.sqrt(1.0 - d_r)
        half = 0.5 * (1.0 + r)
        d_half = 1.0 - half * half

        def g(s):
            c, _ = _gamma_curve(phi, np.array([math.exp(s)]))
            return float(one_minus_abs2(c)[0]) - d_half

        lo = math.log(eps)
        while g(lo) > 0 and lo > math.log(1e-280):
            lo -= 1.0
        t_lo = math.exp(brentq(g, lo, math.log(eps), xtol=1e-10)) if g(lo) <= 0 else math.exp(lo)
        half_t = np.geomspace(t_lo, np.pi * 0.999, samples)
        co_h, _ = _gamma_curve(phi, half_t)
        t_all = np.concatenate([-half_t[::-1], half_t])
        co_all = np.concatenate([np.conj(co_h[::-1]), co_h])
        curve = SampledCurve(DiscPoints(co_all), t_all)
        try:
            sel = select_points_on_curve(curve, r, n)
        except DomainError as exc:
            if "n >=" in str(exc):
                eps *= 2.0
                continue
            raise
        theta = sel.param
        Z = psi_curve(U, theta)
        W, _ = _gamma_curve(phi, np.abs(theta))
        W = np.where(theta < 0, np.conj(W), W)
        return CurvePlan(Z, DiscPoints(W), theta, {"eps": eps, "r": r, "xi": sel.xi, "nu": sel.nu,
                                                    "covering_constant": sel.covering_constant,
                                                    "ell_P_r": sel.length_r})
    raise ConvergenceError("could not fit n points on the curve")


def strategy_gamma_lattice_lower(phi: ProfileSymbol, n: int, t_lo: float, t_hi: float) -> CurvePlan:
    """``n`` points on ``psi_U`` at angles ``+-theta_j`` geometric in ``[t_lo, t_hi]``.

    The images lie on ``Gamma = phi_U o psi_U``; wide geometric spacing keeps
    their separation constant bounded, which the covering construction trades
    for a shorter curve.
    """
    if n < 2 or not 0 < t_lo < t_hi < np.pi:
        raise DomainError("need n >= 2 and 0 < t_lo < t_hi < pi")
    k_up = (n + 1) // 2
    th_up = np.geomspace(t_lo, t_hi, k_up)
    theta = np.concatenate([th_up, -th_up[: n - k_up]])
    co_up, _ = _gamma_curve(phi, th_up)
    if not np.all(one_minus_abs2(co_up) > 0):
        raise DomainError("image points are not resolved inside the disc")
    W = np.concatenate([co_up, np.conj(co_up[: n - k_up])])
    Z = psi_curve(phi.U, theta)
    return CurvePlan(Z, DiscPoints(W), theta, {"t_lo": t_lo, "t_hi": t_hi})


def _best_gamma_lattice(phi: ProfileSymbol, n: int, cfg: Config) -> BoundReport | None:
    best = None
    for t_lo in 10.0 ** -np.arange(2.0, 121.0, 6.0):
        for t_hi in (0.3, 1.0):
            try:
                plan = strategy_gamma_lattice_lower(phi, n, t_lo, t_hi)
                rep = lower_bound(phi, plan.Z, cfg, plan.W)
            except DomainError:
                continue
            if best is None or rep.log_lower > best.log_lower:
                rep.ingredients.update({"strategy_lower": "gamma_lattice", **plan.params})
                best = rep
    return best


def _generic_lower(phi: AnalyticSymbol, n: int, cfg: Config) -> BoundReport:
    if n == 1:
        Z = DiscPoints(np.array([1.0 + 0j]))
        rep = lower_bound(phi, Z, cfg)
        rep.ingredients["strategy_lower"] = "origin"
        return rep
    best = None
    for lam in (0.2, 0.4, 0.6, 0.8):
        Z = lattice_Z(lam, n)
        try:
            rep = lower_bound(phi, Z, cfg)
        except DomainError:
            continue
        rep.ingredients.update({"strategy_lower": "radial_lattice", "lambda": lam})
        if best is None or rep.log_lower > best.log_lower:
            best = rep
    if best is None:
        return BoundReport(n, log_lower=-math.inf, ingredients={"strategy_lower": "none"})
    return best


def best_lower(phi: AnalyticSymbol, n: int, strategy: str = "auto", cfg: Config = DEFAULT) -> BoundReport:
    """Largest lower bound over small parameter grids of the applicable strategy."""
    kind = symbol_kind(phi) if strategy == "auto" else strategy
    if kind == "corner":
        lo, hi = corner_theta_interval(phi.alpha)
        best = None
        for frac in (0.2, 0.35, 0.5, 0.65, 0.8):
            theta = lo + frac * (hi - lo)
            for f in np.geomspace(0.5, 2.0, cfg.param_grid):
                eps = f * math.pi * math.sqrt(2 * phi.alpha / n)
                plan = strategy_corner_lower(phi.alpha, n, theta, eps)
                rep = lower_bound(phi, plan.Z, cfg, plan.W)
                rep.ingredients.update({"strategy_lower": "corner_lattice", "theta": theta, "eps": eps,
                                        "j0": plan.j0})
                if best is None or rep.log_lower > best.log_lower:
                    best = rep
        return best
    if kind == "cusp":
        best = None
        for nu in (0.5, 0.75, 1.0, 1.5, 2.0):
            try:
                plan = strategy_cusp_lower(phi.U, n, nu, phi)
            except (DomainError, ConvergenceError):
                continue
            rep = lower_bound(phi, plan.Z, cfg, plan.W)
            rep.ingredients.update({"strategy_lower": "cusp_lattice", "nu": nu, "j0": plan.j0,
                                    "log_lambda": plan.params["log_lambda"]})
            if best is None or rep.log_lower > best.log_lower:
                best = rep
        if best is None:
            raise ConvergenceError("no cusp lattice could be built")
        return best
    if kind == "smooth":
        if n == 1:
            return _generic_lower(phi, n, cfg)
        plan = strategy_smooth_lower(phi.U, n, phi)
        rep = lower_bound(phi, plan.Z, cfg, plan.W)
        rep.ingredients.update({"strategy_lower": "smooth_curve", **plan.params})
        alt = _best_gamma_lattice(phi, n, cfg)
        if alt is not None and alt.log_lower > rep.log_lower:
            return alt
        return rep
    if kind in ("generic", "profile"):
        return _generic_lower(phi, n, cfg)
    raise DomainError(f"unknown lower strategy {strategy!r}")


def bound_report(phi: AnalyticSymbol, n: int, cfg: Config = DEFAULT) -> BoundReport:
    return best_upper(phi, n, cfg=cfg).merge(best_lower(phi, n, cfg=cfg))
