"""Carleson squares and norms, separation constants and interpolating sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Config
from .disc_geometry import (
    DiscPoints,
    SampledCurve,
    as_points,
    hyp_dist_co,
    one_minus_abs2,
    pseudo_dist_co,
)
from .errors import DomainError

LOG_UNDERFLOW = -700.0


@dataclass(frozen=True)
class CarlesonSquare:
    """``{r e^{it} : r >= r0, |t - t0| <= (1 - r0) pi}``."""

    r0: float
    t0: float

    @property
    def side(self) -> float:
        return 1.0 - self.r0

    def contains(self, points) -> np.ndarray:
        pts = as_points(points) if not isinstance(points, DiscPoints) else points
        gap = _one_minus_abs(pts.co)
        dt = np.angle(pts.z * np.exp(-1j * self.t0))
        return (gap <= self.side) & (np.abs(dt) <= self.side * np.pi)


@dataclass(frozen=True)
class PointMassMeasure:
    points: DiscPoints = field(default_factory=lambda: DiscPoints(np.zeros(0, complex)))
    mass: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        pts = self.points if isinstance(self.points, DiscPoints) else as_points(self.points)
        mass = np.atleast_1d(np.asarray(self.mass, dtype=float))
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "mass", mass)
        if mass.size != len(pts):
            raise DomainError("one mass per atom is required")
        if np.any(mass < 0) or not np.all(np.isfinite(mass)):
            raise DomainError("masses must be finite and nonnegative")

    def __len__(self) -> int:
        return self.mass.size

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def measure_of(self, square: CarlesonSquare) -> float:
        if not len(self):
            return 0.0
        return float(self.mass[square.contains(self.points)].sum())


@dataclass(frozen=True)
class CarlesonEstimate:
    box_sup: float
    constant: float

    @property
    def norm_upper(self) -> float:
        return self.constant * self.box_sup

    @property
    def log_norm_upper(self) -> float:
        return math.log(self.constant) + math.log(self.box_sup) if self.box_sup > 0 else -math.inf


def _one_minus_abs(co: np.ndarray) -> np.ndarray:
    d = one_minus_abs2(co)
    return d / (1.0 + np.sqrt(np.maximum(1.0 - d, 0.0)))


def _angles(co: np.ndarray) -> np.ndarray:
    # angle of z = 1 - co in [0, 2 pi)
    t = np.arctan2(-co.imag, 1.0 - co.real)
    return np.where(t < 0, t + 2 * np.pi, t)


def upsilon(Z) -> PointMassMeasure:
    """``sum_j (1 - |z_j|^2) delta_{z_j}``."""
    pts = Z if isinstance(Z, DiscPoints) else as_points(Z)
    return PointMassMeasure(pts, one_minus_abs2(pts.co))


def box_sup(mu: PointMassMeasure, depth: int = DEFAULT.carleson_depth) -> float:
    """Max of ``mu(Q)/l(Q)`` over dyadic squares of side ``2^-k``, ``k = 0..depth``.

    Generation ``k`` has centres ``t0 = j pi 2^-k``, ``j < 2^(k+1)``, so
    neighbouring squares overlap by half their angular width.  Generation 0
    is the whole disc.
    """
    if depth < 1:
        raise DomainError("depth must be at least 1")
    if not len(mu):
        return 0.0
    keep = mu.mass > 0
    if not np.any(keep):
        return 0.0
    co = mu.points.co[keep]
    mass = mu.mass[keep]
    gap = _one_minus_abs(co)
    theta = _angles(co)
    best = mass.sum()  # k = 0
    for k in range(1, depth + 1):
        side = 2.0 ** -k
        sel = gap <= side
        if not np.any(sel):
            break
        u = theta[sel] / (np.pi * side)
        w = mass[sel]
        nsq = 2 ** (k + 1)
        base = np.floor(u).astype(np.int64)
        keys, weights = [], []
        for off in (-1, 0, 1, 2):
            j = base + off
            inside = np.abs(u - j) <= 1.0
            keys.append(np.mod(j[inside], nsq))
            weights.append(w[inside])
        keys = np.concatenate(keys)
        weights = np.concatenate(weights)
        uk, inv = np.unique(keys, return_inverse=True)
        sums = np.bincount(inv, weights=weights, minlength=uk.size)
        best = max(best, sums.max() / side)
    return float(best)


def carleson_norm_upper(mu: PointMassMeasure, cfg: Config = DEFAULT) -> CarlesonEstimate:
    if cfg.carleson_constant < 1:
        raise DomainError("the Carleson constant must be at least 1")
    return CarlesonEstimate(box_sup(mu, cfg.carleson_depth), float(cfg.carleson_constant))


def pullback_measure(phi, r: float, grid_size: int) -> PointMassMeasure:
    """Atoms ``(phi(e^{it_k}), 1/N)`` on the offset grid where ``|phi| > r``."""
    if not 0 < r < 1:
        raise DomainError("r must lie in (0, 1)")
    t = (np.arange(grid_size) + 0.5) * (2 * np.pi / grid_size)
    t = np.where(t > np.pi, t - 2 * np.pi, t)
    co = phi.boundary_co(t)
    d = one_minus_abs2(co)
    keep = d < 1.0 - r * r
    return PointMassMeasure(DiscPoints(co[keep]), np.full(int(keep.sum()), 1.0 / grid_size))


def log_delta(Z) -> float:
    """``log inf_j prod_{k != j} rho(z_j, z_k)``."""
    pts = Z if isinstance(Z, DiscPoints) else as_points(Z)
    co = pts.co
    n = co.size
    if n <= 1:
        return 0.0
    sums = np.zeros(n)
    step = max(1, (1 << 22) // n)
    for s in range(0, n, step):
        rho = pseudo_dist_co(co[s:s + step, None], co[None, :])
        idx = np.arange(s, min(s + step, n))
        rho[idx - s, idx] = 1.0
        if np.any(rho == 0):
            raise DomainError("duplicate points")
        sums[s:s + step] = np.log(rho).sum(axis=1)
    return float(sums.min())


def delta(Z) -> float:
    return math.exp(log_delta(Z))


def log_interp_const_upper(Z, cfg: Config = DEFAULT) -> float:
    """``log( sqrt(C box_sup(upsilon_Z)) / delta(Z) )``."""
    est = carleson_norm_upper(upsilon(Z), cfg)
    return 0.5 * est.log_norm_upper - log_delta(Z)


def interp_const_upper(Z, cfg: Config = DEFAULT) -> float:
    ld = log_delta(Z)
    if ld < LOG_UNDERFLOW:
        raise DomainError("delta(Z) underflows; use log_interp_const_upper")
    est = carleson_norm_upper(upsilon(Z), cfg)
    return math.sqrt(est.norm_upper) / math.exp(ld)


def gram_matrix(Z) -> np.ndarray:
    """``G_jk = <k_{z_k}, k_{z_j}> = 1/(1 - conj(z_k) z_j)``."""
    pts = Z if isinstance(Z, DiscPoints) else as_points(Z)
    a = pts.co
    ac = np.conj(a)
    return 1.0 / (a[:, None] + ac[None, :] - a[:, None] * ac[None, :])


def gram_norm(Z, b) -> float:
    """``|| sum_j b_j k_{z_j} ||^2``."""
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    pts = Z if isinstance(Z, DiscPoints) else as_points(Z)
    if b.size != len(pts):
        raise DomainError("Z and b must have the same length")
    G = gram_matrix(pts)
    return float(np.real(np.conj(b) @ G @ b))


def lattice_Z(lam: float, count: int) -> DiscPoints:
    """``(1 - lam^j)/(1 + lam^j)``, ``j = 1..count``."""
    if not 0 < lam < 1:
        raise DomainError("lambda must lie in (0, 1)")
    if count < 1:
        raise DomainError("count must be at least 1")
    p = np.exp(np.arange(1, count + 1) * math.log(lam))
    return DiscPoints((2 * p / (1 + p)).astype(complex))


def halfplane_lattice(theta: float, lam: float, count: int, j0: int = 0) -> DiscPoints:
    """``(1 - q_j)/(1 + q_j)`` with ``q_j = lam^j e^{i(theta - pi/2)}``, ``j = j0+1..j0+count``."""
    if not 0 < theta <= np.pi / 2:
        raise DomainError("theta must lie in (0, pi/2]")
    if not 0 < lam < 1:
        raise DomainError("lambda must lie in (0, 1)")
    j = np.arange(j0 + 1, j0 + count + 1)
    q = np.exp(j * math.log(lam) + 1j * (theta - np.pi / 2))
    return DiscPoints(2 * q / (1 + q))


@dataclass(frozen=True)
class PointSelection:
    points: DiscPoints
    param: np.ndarray | None
    centers: DiscPoints
    covering_constant: float
    xi: float
    nu: int
    length_r: float


def _walk(curve: SampledCurve, start: int, direction: int, target: float, limit: np.ndarray):
    """Point along the curve from sample ``start`` at hyperbolic distance ``target``."""
    co = curve.co
    i = start
    prev_d = 0.0
    while True:
        j = i + direction
        if j < 0 or j >= co.size or not limit[j]:
            return None
        d = float(hyp_dist_co(co[start], co[j])) if j != start else 0.0
        if d >= target:
            f = (target - prev_d) / (d - prev_d) if d > prev_d else 1.0
            pt = co[i] + f * (co[j] - co[i])
            par = None
            if curve.param is not None:
                par = curve.param[i] + f * (curve.param[j] - curve.param[i])
            return pt, par
        prev_d, i = d, j


def select_points_on_curve(curve: SampledCurve, r: float, n: int, covering_constant: float | None = None) -> PointSelection:
    """``n`` well-separated points on ``curve ∩ {|z| <= (1+r)/2}``.

    Greedy minimal-modulus covering of ``Γ_r`` by hyperbolic unit discs gives
    centres ``γ_1..γ_m``; from each centre the walk along the curve produces
    ``ν + 1`` points at hyperbolic steps ``ξ = ℓ_P(Γ_r)/(2Cn)``, where ``C``
    bounds the length of the curve inside any unit disc around a centre.
    Points are taken step-major: all centres, then all first steps, etc.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    co = curve.co
    d = one_minus_abs2(co)
    inner = d >= 1.0 - r * r
    half = 0.5 * (1.0 + r)
    reach = d >= 1.0 - half * half
    seg_in = inner[1:] & inner[:-1]
    seg_len = np.diff(curve.cumulative)
    length_r = float(seg_len[seg_in].sum())
    if length_r < 1.0:
        raise DomainError("curve too short: hyperbolic length of the r-part is below 1")
    if n < length_r and n > 1:
        raise DomainError("need n >= hyperbolic length of the r-part")
    # greedy covering, by decreasing 1 - |z|^2
    remaining = np.flatnonzero(inner)
    centers = []
    while remaining.size:
        k = remaining[np.argmax(d[remaining])]
        centers.append(k)
        far = hyp_dist_co(co[k], co[remaining]) >= 1.0
        remaining = remaining[far]
    if n == 1:
        c = centers[0]
        return PointSelection(DiscPoints(co[[c]]), None if curve.param is None else curve.param[[c]],
                              DiscPoints(co[centers]), float("nan"), float("nan"), 0, length_r)
    mid = 0.5 * (co[1:] + co[:-1])
    if covering_constant is None:
        covering_constant = max(float(seg_len[hyp_dist_co(co[c], mid) < 1.0].sum()) for c in centers)
    C = covering_constant
    xi = length_r / (2.0 * C * n)
    nu = int(math.floor(1.0 / (2.0 * xi)))
    pts, pars = [], []
    for ell in range(nu + 1):
        for c in centers:
            if ell == 0:
                hit = (co[c], None if curve.param is None else curve.param[c])
            else:
                hit = _walk(curve, c, 1, ell * xi, reach) or _walk(curve, c, -1, ell * xi, reach)
            if hit is None:
                continue
            pts.append(hit[0])
            pars.append(hit[1])
            if len(pts) == n:
                break
        if len(pts) == n:
            break
    if len(pts) < n:
        raise DomainError(f"only {len(pts)} points available on the curve, {n} requested")
    param = None if curve.param is None else np.array(pars, dtype=float)
    return PointSelection(DiscPoints(np.array(pts)), param, DiscPoints(co[centers]), C, xi, nu, length_r)
