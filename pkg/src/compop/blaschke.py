"""Finite Blaschke products and zero-placement strategies for upper bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import spence

from .disc_geometry import (
    DiscPoints,
    SampledCurve,
    equal_hyp_spacing_indices,
    hyp_length,
    one_minus_abs2,
    radial_co,
)
from .errors import DomainError

_CHUNK = 1 << 22  # points x zeros per evaluation block


@dataclass(frozen=True)
class BlaschkeProduct:
    """``z^m * prod_j ((z_j - z)/(1 - conj(z_j) z))^{mult_j}``."""

    origin_order: int = 0
    zeros: DiscPoints = field(default_factory=lambda: DiscPoints(np.zeros(0, complex)))
    mult: np.ndarray = field(default_factory=lambda: np.zeros(0, int))

    def __post_init__(self):
        mult = np.atleast_1d(np.asarray(self.mult, dtype=int))
        object.__setattr__(self, "mult", mult)
        if self.origin_order < 0:
            raise DomainError("origin order must be nonnegative")
        if mult.size != len(self.zeros):
            raise DomainError("one multiplicity per zero is required")
        if np.any(mult < 1):
            raise DomainError("multiplicities must be positive")
        if len(self.zeros):
            d = one_minus_abs2(self.zeros.co)
            if np.any(~(d > 0)) or np.any(self.zeros.co == 1):
                raise DomainError("zeros must satisfy 0 < |z| < 1")

    @property
    def degree(self) -> int:
        return int(self.origin_order + self.mult.sum())

    def log_abs(self, points) -> np.ndarray:
        """``log |B|`` at points given as :class:`DiscPoints` or plain complex values."""
        pts = points if isinstance(points, DiscPoints) else DiscPoints.from_z(points)
        a = pts.co
        out = np.zeros(a.shape)
        if self.origin_order:
            absz = np.abs(1.0 - a)
            near = np.abs(a) < 0.5
            # log|z| = 0.5 log1p(-(1-|z|^2)) keeps precision near the contact point
            logz = np.where(near, 0.5 * np.log1p(-np.where(near, one_minus_abs2(a), 0.0)),
                            np.log(np.where(absz > 0, absz, 1.0)))
            logz = np.where(absz == 0, -np.inf, logz)
            out += self.origin_order * logz
        if len(self.zeros):
            zc = self.zeros.co
            zcc = np.conj(zc)
            step = max(1, _CHUNK // zc.size)
            for s in range(0, a.size, step):
                aa = a[s:s + step, None]
                with np.errstate(divide="ignore"):
                    f = np.log(np.abs(aa - zc)) - np.log(np.abs(aa + zcc - aa * zcc))
                out[s:s + step] += f @ self.mult
        return out

    def __call__(self, z):
        """Complex value of ``B`` (plain complex input, ``|z| <= 1``)."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-12):
            raise DomainError("Blaschke products are evaluated on the closed disc")
        val = z ** self.origin_order
        zj = self.zeros.z
        for w, k in zip(zj, self.mult):
            val = val * ((w - z) / (1 - np.conj(w) * z)) ** k
        return val


def eval_blaschke(B: BlaschkeProduct, z):
    return B(z)


def monomial_blaschke(n: int) -> BlaschkeProduct:
    """``B(z) = z^{n-1}``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return BlaschkeProduct(origin_order=n - 1)


def auto_m(n: int, ell: float) -> int:
    """End-cluster size ``ceil(n/sqrt(ell+1))`` clamped to ``[1, floor((n-1)/6)]``."""
    m = math.ceil(n / math.sqrt(ell + 1.0))
    return int(min(max(m, 1), max((n - 1) // 6, 1)))


@dataclass(frozen=True)
class CurvePlacementPlan:
    n: int
    m: int
    points: DiscPoints
    mult: np.ndarray

    @property
    def degree(self) -> int:
        return int(self.mult.sum())


def plan_curve_placement(omega_r: SampledCurve, n: int, m: int | str = "auto") -> CurvePlacementPlan:
    if n < 16:
        raise DomainError("the curve schedule needs n >= 16")
    ell = hyp_length(omega_r)
    if ell <= 0:
        raise DomainError("curve has zero hyperbolic length")
    if m == "auto" or m is None:
        m = auto_m(n, ell)
    m = int(m)
    if m < 1 or 5 * m >= n:
        raise DomainError("need m >= 1 and 5m < n")
    count = n - 2 * m - 1
    idx = equal_hyp_spacing_indices(omega_r, count)
    mult = np.ones(count, dtype=int)
    mult[:m] = 2
    mult[-m:] = 2
    return CurvePlacementPlan(n, m, omega_r.points[idx], mult)


def build_curve_blaschke(omega_r: SampledCurve, n: int, m: int | str = "auto") -> BlaschkeProduct:
    """Zeros along ``omega_r`` at equal hyperbolic spacing, doubled at both end clusters.

    ``n - 2m - 1`` placement points are snapped to curve samples; the ``m``
    points at each end carry double zeros, so the degree is ``n - 1``.
    """
    plan = plan_curve_placement(omega_r, n, m)
    pts, mult = _merge_duplicates(plan.points.co, plan.mult)
    return BlaschkeProduct(0, DiscPoints(pts), mult)


def curve_m_grid(n: int, count: int = 12) -> np.ndarray:
    """Geometric grid of admissible end-cluster sizes ``1 <= m <= (n-1)/6``."""
    top = max((n - 1) // 6, 1)
    return np.unique(np.geomspace(1, top, count).astype(int))


def best_curve_blaschke(omega_r: SampledCurve, n: int, points, m_grid=None):
    """Curve placement whose end-cluster size minimises ``max log|B|`` on ``points``.

    Returns ``(B, m, log_sup)``.  The auto schedule is always among the candidates.
    """
    if m_grid is None:
        m_grid = curve_m_grid(n)
    cands = sorted(set(int(m) for m in m_grid) | {auto_m(n, hyp_length(omega_r))})
    pts = points if isinstance(points, DiscPoints) else DiscPoints.from_z(points)
    best = None
    for m in cands:
        if 5 * m >= n:
            continue
        B = build_curve_blaschke(omega_r, n, m)
        val = log_sup_modulus(B, pts)
        if best is None or val < best[2]:
            best = (B, m, val)
    if best is None:
        raise DomainError("no admissible end-cluster size")
    return best


def _merge_duplicates(co: np.ndarray, mult: np.ndarray):
    # snapping to samples can map two placement points onto one sample
    keys, inv = np.unique(co, return_inverse=True)
    if keys.size == co.size:
        return co, mult
    total = np.zeros(keys.size, dtype=int)
    np.add.at(total, inv, mult)
    first = np.zeros(keys.size, dtype=int)
    first[inv[::-1]] = np.arange(co.size)[::-1]
    order = np.argsort(first)
    return keys[order], total[order]


def build_radial_blaschke(r: float, n: int, m: int | str = "auto", r_co: float | None = None) -> BlaschkeProduct:
    """Zeros on ``[0, r]``: order ``m`` at 0, ``n - 3m - 1`` further points.

    The ``n - 3m`` points ``0 = z_0 < ... < z_{n-3m-1} = r`` are equally
    hyperbolically spaced; the ``m`` innermost and ``m`` outermost nonzero
    points are double zeros.  ``r_co = 1 - r`` may be given directly when
    ``r`` is too close to 1 for double precision.
    """
    if r_co is None:
        if not 0 < r < 1:
            raise DomainError("r must lie in (0, 1)")
        r_co = 1.0 - r
    if not 0 < r_co < 1:
        raise DomainError("r must lie in (0, 1)")
    ell = math.log((2.0 - r_co) / r_co)  # hyperbolic length of [0, r]
    if m == "auto" or m is None:
        m = auto_m(n, ell)
    m = int(m)
    if m < 1 or 6 * m >= n:
        raise DomainError("need m >= 1 and n > 6m")
    co = radial_co(r_co, n - 3 * m)[1:]
    mult = np.ones(co.size, dtype=int)
    mult[:m] = 2
    mult[-m:] = 2
    return BlaschkeProduct(m, DiscPoints(co.astype(complex)), mult)


def beta_constant(lam: float) -> float:
    """``4 sum_j lam^{2j+1}/(2j+1)^2``, i.e. ``2 (Li2(lam) - Li2(-lam))``.

    The limit ``lam -> 1`` is ``pi^2/2``.
    """
    if not 0 <= lam <= 1:
        raise DomainError("lambda must lie in [0, 1]")
    # scipy's spence(x) is Li2(1 - x)
    return float(2.0 * (spence(1.0 - lam) - spence(1.0 + lam)))


def beta_series(lam: float, tol: float = 1e-15) -> float:
    """Direct partial sums of the series for :func:`beta_constant`."""
    if not 0 <= lam < 1:
        raise DomainError("lambda must lie in [0, 1)")
    total, j = 0.0, 0
    while True:
        term = lam ** (2 * j + 1) / (2 * j + 1) ** 2
        total += term
        if term < tol:
            return 4.0 * total
        j += 1


def sup_modulus_on_samples(B: BlaschkeProduct, points) -> float:
    """``max |B(p)|`` over a nonempty point list."""
    lg = B.log_abs(points)
    if lg.size == 0:
        raise DomainError("empty point list")
    return float(np.exp(lg.max()))


def log_sup_modulus(B: BlaschkeProduct, points) -> float:
    lg = B.log_abs(points)
    if lg.size == 0:
        raise DomainError("empty point list")
    return float(lg.max())
