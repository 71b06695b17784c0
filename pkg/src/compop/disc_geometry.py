"""Hyperbolic geometry of the unit disc.

Points near the boundary are carried in *co-form* ``a = 1 - z``.  Points
clustering at the contact point ``z = 1`` routinely have ``1 - |z|`` far
below machine epsilon, and every quantity used here can be written in ``a``
without cancellation:

    1 - |z|^2          = 2 Re a - |a|^2
    z - w              = b - a
    1 - conj(w) z      = a + conj(b) - a conj(b)
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: plain complex inputs closer than this to the circle are rejected
INTERIOR_GUARD = 1e-14


@dataclass(frozen=True)
class DiscPoints:
    """An ordered set of disc points stored in co-form ``co = 1 - z``."""

    co: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "co", np.atleast_1d(np.asarray(self.co, dtype=complex)))

    @classmethod
    def from_z(cls, z) -> "DiscPoints":
        return cls(1.0 - np.atleast_1d(np.asarray(z, dtype=complex)))

    @property
    def z(self) -> np.ndarray:
        return 1.0 - self.co

    def __len__(self) -> int:
        return self.co.size

    def __getitem__(self, idx) -> "DiscPoints":
        return DiscPoints(self.co[idx])

    def one_minus_abs2(self) -> np.ndarray:
        """``1 - |z|^2`` without cancellation near ``z = 1``."""
        return one_minus_abs2(self.co)

    def log_abs(self) -> np.ndarray:
        """``log |z|`` accurate when ``|z|`` is close to 1."""
        return 0.5 * np.log1p(-self.one_minus_abs2())

    def concat(self, other: "DiscPoints") -> "DiscPoints":
        return DiscPoints(np.concatenate([self.co, other.co]))


def as_points(p) -> DiscPoints:
    """Coerce plain complex input to :class:`DiscPoints`, applying the interior guard."""
    if isinstance(p, DiscPoints):
        return p
    z = np.atleast_1d(np.asarray(p, dtype=complex))
    if np.any(np.abs(z) > 1 - INTERIOR_GUARD):
        raise DomainError("point too close to or outside the unit circle")
    return DiscPoints.from_z(z)


def one_minus_abs2(co) -> np.ndarray:
    co = np.asarray(co, dtype=complex)
    return 2.0 * co.real - (co.real ** 2 + co.imag ** 2)


def _check_interior(pts: DiscPoints) -> None:
    if np.any(~(pts.one_minus_abs2() > 0)):
        raise DomainError("metric operations need points strictly inside the disc")


def pseudo_dist_co(a, b) -> np.ndarray:
    """Pseudohyperbolic distance between co-form points (broadcasting)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    bc = np.conj(b)
    return np.abs(a - b) / np.abs(a + bc - a * bc)


def log_one_minus_rho2_co(a, b) -> np.ndarray:
    """``log(1 - rho^2)`` via ``(1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    bc = np.conj(b)
    return (np.log(one_minus_abs2(a)) + np.log(one_minus_abs2(b))
            - 2.0 * np.log(np.abs(a + bc - a * bc)))


def pseudo_dist(z, w):
    """``|z - w| / |1 - conj(w) z|``; scalar in, scalar out."""
    zp, wp = as_points(z), as_points(w)
    _check_interior(zp)
    _check_interior(wp)
    out = pseudo_dist_co(zp.co, wp.co)
    return out[0] if np.ndim(z) == 0 and np.ndim(w) == 0 else out


def hyp_dist_co(a, b) -> np.ndarray:
    rho = pseudo_dist_co(a, b)
    # log((1+rho)/(1-rho)) = 2 log(1+rho) - log(1-rho^2), stable for rho near 1
    return 2.0 * np.log1p(rho) - log_one_minus_rho2_co(a, b)


def hyp_dist(z, w):
    """Hyperbolic distance normalised so that ``rho = tanh(d/2)``."""
    zp, wp = as_points(z), as_points(w)
    _check_interior(zp)
    _check_interior(wp)
    out = hyp_dist_co(zp.co, wp.co)
    out = np.where(pseudo_dist_co(zp.co, wp.co) == 0, 0.0, out)
    return out[0] if np.ndim(z) == 0 and np.ndim(w) == 0 else out


def mobius(a: complex, z):
    """Disc automorphism ``(z - a)/(1 - conj(a) z)``."""
    z = np.asarray(z, dtype=complex)
    return (z - a) / (1 - np.conj(a) * z)


@dataclass(frozen=True)
class SampledCurve:
    """Polyline through disc points, with cumulative hyperbolic arclength.

    ``param`` optionally records the parameter value of each sample (for
    example the boundary angle a curve point was produced from).
    """

    points: DiscPoints
    param: np.ndarray | None = None
    cumulative: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = as_points(self.points)
        object.__setattr__(self, "points", pts)
        if self.param is not None:
            object.__setattr__(self, "param", np.asarray(self.param, dtype=float))
        if len(pts) < 1:
            raise DomainError("a curve needs at least one point")
        _check_interior(pts)
        object.__setattr__(self, "cumulative", np.concatenate([[0.0], np.cumsum(_segment_lengths(pts.co))]))

    @classmethod
    def from_z(cls, z, param=None) -> "SampledCurve":
        return cls(as_points(z), param)

    @classmethod
    def from_co(cls, co, param=None) -> "SampledCurve":
        return cls(DiscPoints(co), param)

    @property
    def co(self) -> np.ndarray:
        return self.points.co

    @property
    def length(self) -> float:
        return float(self.cumulative[-1])

    def __len__(self) -> int:
        return len(self.points)


def _segment_lengths(co: np.ndarray) -> np.ndarray:
    """Midpoint rule for ``2 |dz| / (1 - |z|^2)`` on each polyline segment."""
    if co.size < 2:
        return np.zeros(0)
    mid = 0.5 * (co[1:] + co[:-1])
    return 2.0 * np.abs(np.diff(co)) / one_minus_abs2(mid)


def hyp_length(curve) -> float:
    """Hyperbolic length of a sampled curve (midpoint rule per segment)."""
    if not isinstance(curve, SampledCurve):
        curve = SampledCurve.from_z(curve)
    if len(curve) < 2:
        raise DomainError("a curve needs at least two points")
    return curve.length


def _interp_at_length(curve: SampledCurve, s: np.ndarray):
    """Points (co-form) and fractional sample index at arclengths ``s``."""
    cum = curve.cumulative
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2)
    seg = cum[idx + 1] - cum[idx]
    frac = np.divide(s - cum[idx], seg, out=np.zeros_like(s), where=seg > 0)
    frac = np.clip(frac, 0.0, 1.0)
    co = curve.co[idx] + frac * (curve.co[idx + 1] - curve.co[idx])
    return co, idx + frac


def equal_hyp_spacing(curve: SampledCurve, count: int) -> DiscPoints:
    """``count`` points along ``curve`` with equal hyperbolic arclength between neighbours.

    The first and last points are the curve endpoints.  Points between samples
    are linearly interpolated on the polyline.
    """
    if count < 2:
        raise DomainError("count must be at least 2")
    if len(curve) < 2 or curve.length <= 0:
        raise DomainError("degenerate curve")
    s = np.linspace(0.0, curve.length, count)
    co, _ = _interp_at_length(curve, s)
    return DiscPoints(co)


def equal_hyp_spacing_indices(curve: SampledCurve, count: int) -> np.ndarray:
    """Sample indices nearest (in arclength) to an equal hyperbolic spacing."""
    if count < 2:
        raise DomainError("count must be at least 2")
    if len(curve) < 2 or curve.length <= 0:
        raise DomainError("degenerate curve")
    s = np.linspace(0.0, curve.length, count)
    cum = curve.cumulative
    right = np.clip(np.searchsorted(cum, s), 1, len(cum) - 1)
    left = right - 1
    return np.where(s - cum[left] <= cum[right] - s, left, right)


def radial_co(r_co: float, count: int) -> np.ndarray:
    """Co-form of ``count`` equally hyperbolically spaced points on ``[0, r]``.

    ``r_co = 1 - r``.  Closed form: ``z_j = tanh(j artanh(r)/(count-1))``.
    """
    if count < 2:
        raise DomainError("count must be at least 2")
    big = 0.5 * np.log((2.0 - r_co) / r_co)  # artanh(r)
    x = big * np.arange(count) / (count - 1)
    e = np.exp(-2.0 * x)
    return 2.0 * e / (1.0 + e)
