"""Named numerical checks with measured margins.

Each check returns a :class:`CheckResult`; ``run_check`` looks them up by
id.  The same functions back the ``check`` subcommand and the acceptance
test suite.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .blaschke import best_curve_blaschke, curve_m_grid
from .bounds import _omega_curve, best_lower, best_upper, boundary_samples
from .carleson import (
    carleson_norm_upper,
    gram_norm,
    lattice_Z,
    log_delta,
    log_interp_const_upper,
    upsilon,
)
from .config import DEFAULT, Config
from .disc_geometry import DiscPoints
from .errors import DomainError
from .experiments import bound_rows, build_symbol, emit_csv, fit_decay, parse_symbol_spec, singular_values
from .operator_numerics import (
    AliasingWarning,
    adjoint_kernel_check,
    approximation_numbers,
    galerkin_matrix,
    reference_singular_values,
)
from .symbols import (
    ConstantSymbol,
    CornerSymbol,
    ProfileSymbol,
    ScalarSymbol,
    conjugate_series,
    cusp_profile,
    poisson_eval,
    power_profile,
    prescribed_profile,
)

HALF_PI2 = math.pi ** 2 / 2


@dataclass(frozen=True)
class CheckResult:
    id: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.id}: {self.summary}"


def _galerkin(phi, K, M, cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        return galerkin_matrix(phi, K, M, cfg=cfg)


def check_diagonal_exact(cfg: Config = DEFAULT) -> CheckResult:
    """``phi(z) = s z``: ``sigma_n = s^{n-1}`` for ``n <= 30`` within 1e-12, in under a second."""
    t0 = time.perf_counter()
    err = 0.0
    for s in (0.3, 0.9):
        sv = approximation_numbers(_galerkin(ScalarSymbol(s), 8 * 32, 32, cfg), 30)
        err = max(err, float(np.max(np.abs(sv - s ** np.arange(30)))))
    dt = time.perf_counter() - t0
    return CheckResult("diagonal-exact", err < 1e-12 and dt < 1.0, f"max error {err:.2e}, {dt:.2f} s",
                       {"max_error": err, "seconds": dt})


def check_rank_one(cfg: Config = DEFAULT) -> CheckResult:
    """``phi = 1/2``: ``sigma_1 = 2/sqrt(3)`` within 1e-10 and ``sigma_2 < 1e-12``."""
    sv = approximation_numbers(_galerkin(ConstantSymbol(0.5), 8 * 64, 64, cfg), 2)
    e1 = abs(sv[0] - 2 / math.sqrt(3))
    return CheckResult("rank-one", e1 < 1e-10 and sv[1] < 1e-12, f"|sigma_1 - 2/sqrt3| = {e1:.2e}, sigma_2 = {sv[1]:.2e}",
                       {"sigma1_error": e1, "sigma2": float(sv[1])})


def check_adjoint_identity(cfg: Config = DEFAULT) -> CheckResult:
    """``C_phi^* k_a = k_{phi(a)}`` for the corner symbol, ``a = 0.3``, ``K = 512``."""
    res = adjoint_kernel_check(CornerSymbol(0.5), 0.3, 512, cfg=cfg)
    return CheckResult("adjoint-identity", res < 1e-8, f"relative residual {res:.2e}", {"residual": res})


def check_conjugate_exact(cfg: Config = DEFAULT) -> CheckResult:
    """FFT conjugate maps ``cos kt -> sin kt`` and ``sin kt -> -cos kt`` for ``k <= 50``."""
    t = (np.arange(256) + 0.5) * (2 * np.pi / 256)
    err = 0.0
    for k in range(51):
        err = max(err, float(np.max(np.abs(conjugate_series(np.cos(k * t)) - (np.sin(k * t) if k else 0)))))
        err = max(err, float(np.max(np.abs(conjugate_series(np.sin(k * t)) + (np.cos(k * t) if k else 0)))))
    return CheckResult("conjugate-exact", err < 1e-12, f"max error {err:.2e}", {"max_error": err})


def check_lattice_separation(cfg: Config = DEFAULT) -> CheckResult:
    """``log delta(Z(lambda)) >= -(pi^2/2)/(1 - lambda)`` for 200-point lattices."""
    margins = {}
    for lam in (0.3, 0.5, 0.7, 0.9):
        margins[lam] = log_delta(lattice_Z(lam, 200)) + HALF_PI2 / (1 - lam)
    ok = all(m >= 0 for m in margins.values())
    worst = min(margins.values())
    return CheckResult("lattice-separation", ok, f"smallest log margin {worst:.3f}", {"margins": margins})


def curve_rate_case(ell_target: float, n: int, cfg: Config = DEFAULT, grid: int = 100000):
    """``(log sup |B o phi|, ell_P)`` for the corner symbol with ``ell_P(Omega_r)`` near ``ell_target``."""
    phi = CornerSymbol(0.5)
    s = brentq(lambda s: _omega_curve(phi, math.exp(s), 8192).length - ell_target, -30.0, -0.1, xtol=1e-6)
    t_r = math.exp(s)
    curve = _omega_curve(phi, t_r, max(cfg.curve_samples, 40 * n))
    # m is chosen on a coarser sample, the sup is then measured on the fine grid
    coarse = DiscPoints(phi.boundary_co(boundary_samples(t_r, grid // 5)))
    B, m, _ = best_curve_blaschke(curve, n, coarse, curve_m_grid(n))
    fine = DiscPoints(phi.boundary_co(boundary_samples(t_r, grid)))
    return B.log_abs(fine).max(), curve.length, m


def check_curve_blaschke_rate(cfg: Config = DEFAULT) -> CheckResult:
    """Corner ``alpha = 1/2``, ``ell_P(Omega_r) = 20``, ``n in {200, 400}``:
    ``log sup |B o phi| <= -(pi^2/2 - 1) n / ell_P`` on a 1e5-point grid, in under 30 s."""
    t0 = time.perf_counter()
    margins = {}
    for n in (200, 400):
        log_sup, ell, m = curve_rate_case(20.0, n, cfg)
        margins[n] = -(HALF_PI2 - 1) * n / ell - log_sup
    dt = time.perf_counter() - t0
    ok = all(v >= 0 for v in margins.values()) and dt < 30
    return CheckResult("curve-blaschke-rate", ok,
                       "margins " + ", ".join(f"n={n}: {v:.2f}" for n, v in margins.items()) + f", {dt:.1f} s",
                       {"margins": margins, "seconds": dt})


def corner_sandwich_rows(cfg: Config = DEFAULT, alpha: float = 0.5, n_lo: int = 10, n_hi: int = 60):
    """Reference ``sigma_n`` (basis of at least 512, doubled) and ``best_lower`` for ``n_lo..n_hi``."""
    c = cfg.replace(ref_basis=max(cfg.ref_basis, 512))
    spec = parse_symbol_spec(f"family=corner alpha={alpha:g}")
    phi = build_symbol(spec, c)
    sig = {r.n: r for r in singular_values(phi, n_hi, c)}
    return bound_rows(phi, range(n_lo, n_hi + 1), c, lower=True, upper=False, spec=spec, sigma=sig)


def check_corner_sandwich(cfg: Config = DEFAULT, rows=None) -> CheckResult:
    """``best_lower(n) <= sigma_n`` for ``n`` in ``[10, 60]`` and the ``sqrt(n)`` slope band."""
    t0 = time.perf_counter()
    rows = rows or corner_sandwich_rows(cfg)
    dt = time.perf_counter() - t0
    live = [r for r in rows if r.sigma_n >= 1e-12]
    bad = [r.n for r in live if not r.log_lower <= r.log_sigma_n]
    conv = all(r.converged_flag for r in live)
    fit = fit_decay([r for r in live if 20 <= r.n <= 60], "sqrt_n", cfg.replace(fit_n_min=1, fit_n_max=0))
    lo, hi = 0.9 * math.pi / 2, 1.1 * math.pi
    ok = not bad and conv and lo <= fit.B <= hi and dt <= 600 and rows[0].M >= 512
    return CheckResult("corner-sandwich", ok,
                       f"slope {fit.B:.3f} in [{lo:.3f}, {hi:.3f}], lower<=sigma violations {bad}, "
                       f"converged {conv}, M={rows[0].M}, {dt:.1f} s",
                       {"slope": fit.B, "violations": bad, "converged": conv, "seconds": dt})


def check_slow_decay(cfg: Config = DEFAULT) -> CheckResult:
    """Prescribed slow profile: ``sigma_n log n`` spread below 4 and 5% stability from M=256 to 512."""
    phi = ProfileSymbol(prescribed_profile(grid_size=cfg.boundary_grid))
    ns = np.array([16, 32, 64, 128])
    ref = reference_singular_values(phi, 128, 256, cfg)
    s512, s256 = ref.sigma[ns - 1], ref.sigma_coarse[ns - 1]
    v = s512 * np.log(ns)
    spread = float(v.max() / v.min())
    change = float(np.max(np.abs(s512 - s256) / s512))
    ok = spread < 4 and change < 0.05
    return CheckResult("slow-decay", ok, f"spread {spread:.3f}, max relative change {change:.2e}",
                       {"spread": spread, "change": change, "sigma": s512.tolist()})


def check_cusp_sandwich(cfg: Config = DEFAULT) -> CheckResult:
    """Sharp cusp, ``n = 3..8``: lower <= sigma <= upper, and the rate band for ``-log sigma_n/(n/omega(n))``."""
    U = cusp_profile(grid_size=cfg.boundary_grid)
    phi = ProfileSymbol(U)
    c = cfg.replace(carleson_constant=4.0)
    ref = reference_singular_values(phi, 8, 256, c)
    band = (HALF_PI2 / 2, 2 * (HALF_PI2 + 0.5))
    order_bad, ratios = [], {}
    for n in range(3, 9):
        ls = math.log(ref.sigma[n - 1])
        lo = best_lower(phi, n, cfg=c).log_lower
        up = best_upper(phi, n, cfg=c).log_upper
        if not lo <= ls <= up:
            order_bad.append(n)
        ratios[n] = -ls / (n / U.aux.omega(float(n)))
    in_band = all(band[0] <= r <= band[1] for r in ratios.values())
    ok = not order_bad and in_band
    return CheckResult("cusp-sandwich", ok,
                       f"ordering violations {order_bad}; rate ratios "
                       + ", ".join(f"{n}:{r:.2f}" for n, r in ratios.items())
                       + f" vs band [{band[0]:.3f}, {band[1]:.3f}]",
                       {"ordering_violations": order_bad, "ratios": ratios, "band": band})


def check_poisson_lower(cfg: Config = DEFAULT) -> CheckResult:
    """``u(r e^{i theta}) >= (1 - r) h_U(max(2|theta|, 1 - r))/pi`` with 2% slack."""
    worst = math.inf
    for U in (cusp_profile(grid_size=cfg.boundary_grid), power_profile(0.5, grid_size=cfg.boundary_grid)):
        for r in (0.9, 0.99, 0.999):
            for th in (1e-3, 1e-2, 1e-1):
                u = poisson_eval(U, r, th)
                rhs = (1 - r) * float(U.aux.h(np.array([max(2 * th, 1 - r)]))[0]) / math.pi
                worst = min(worst, u / (0.98 * rhs))
    return CheckResult("poisson-lower", worst >= 1, f"smallest u/(0.98 rhs) = {worst:.3f}", {"ratio": worst})


def check_gram_bounds(cfg: Config = DEFAULT, draws: int = 100) -> CheckResult:
    """Kernel-norm bounds on random point sets; the upper one may raise the constant up to 16."""
    rng = np.random.default_rng(cfg.seed)
    c = cfg.replace(carleson_constant=4.0)
    needed, lower_bad = c.carleson_constant, 0
    for _ in range(draws):
        k = int(rng.integers(1, 13))
        rad = 1.0 - 10.0 ** -rng.uniform(0.0, 3.0, k)
        Z = DiscPoints.from_z(rad * np.exp(1j * rng.uniform(-np.pi, np.pi, k)))
        b = rng.normal(size=k) + 1j * rng.normal(size=k)
        g = gram_norm(Z, b)
        weight = float(np.sum(np.abs(b) ** 2 / Z.one_minus_abs2()))
        est = carleson_norm_upper(upsilon(Z), c)
        if g > est.norm_upper * weight * (1 + 1e-12):
            needed = max(needed, g / (est.box_sup * weight))
        try:
            log_m = log_interp_const_upper(Z, c)
        except DomainError:
            continue
        if g < math.exp(-2 * log_m) * weight * (1 - 1e-12):
            lower_bad += 1
    ok = needed <= 16 and lower_bad == 0
    return CheckResult("gram-bounds", ok, f"admissible constant {needed:.3g}, lower-bound violations {lower_bad}",
                       {"admissible_constant": needed, "lower_violations": lower_bad})


def check_determinism(cfg: Config = DEFAULT) -> CheckResult:
    """Two runs of the corner sandwich produce byte-identical CSV."""
    a = emit_csv(corner_sandwich_rows(cfg))
    b = emit_csv(corner_sandwich_rows(cfg))
    return CheckResult("determinism", a == b, f"{len(a)} bytes, identical {a == b}", {"bytes": len(a)})


CHECKS = {
    "diagonal-exact": check_diagonal_exact,
    "rank-one": check_rank_one,
    "adjoint-identity": check_adjoint_identity,
    "conjugate-exact": check_conjugate_exact,
    "lattice-separation": check_lattice_separation,
    "curve-blaschke-rate": check_curve_blaschke_rate,
    "corner-sandwich": check_corner_sandwich,
    "slow-decay": check_slow_decay,
    "cusp-sandwich": check_cusp_sandwich,
    "poisson-lower": check_poisson_lower,
    "gram-bounds": check_gram_bounds,
    "determinism": check_determinism,
}


def run_check(check_id: str, cfg: Config = DEFAULT) -> CheckResult:
    try:
        fn = CHECKS[check_id]
    except KeyError:
        raise DomainError(f"unknown check id {check_id!r}; known: {', '.join(CHECKS)}") from None
    return fn(cfg)
