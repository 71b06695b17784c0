"""Symbols of composition operators.

A profile ``U`` is an even, nondecreasing function on ``[0, pi]`` with
``U(0) = 0``.  It defines ``phi_U = exp(-u - i v)`` where ``u`` is the
Poisson extension of ``U`` and ``v`` its harmonic conjugate (normalised by
``v(0) = 0``).  All symbols touch the circle at most at ``z = 1`` and are
real-symmetric, ``phi(conj z) = conj phi(z)``.

Symbols expose *co-form* evaluators returning ``1 - phi``, which keeps full
relative precision where ``phi`` is within machine epsilon of 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT
from .disc_geometry import DiscPoints, one_minus_abs2
from .errors import ConfigError, ConvergenceError, DomainError

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL24_X, _GL24_W = np.polynomial.legendre.leggauss(24)

BLEND_START = 0.75 * np.pi
#: relative slack for monotonicity checks on sampled profiles
MONO_TOL = 1e-9
TINY = 1e-300


def _smoothstep_weight(x):
    """``1 - (3x^2 - 2x^3)``: 1 at 0, 0 at 1, flat at both ends."""
    x = np.clip(x, 0.0, 1.0)
    return 1.0 - x * x * (3.0 - 2.0 * x)


def _wrap(t):
    """Reduce angles to ``[-pi, pi]``, leaving in-range values bit-exact."""
    t = np.asarray(t, dtype=float)
    out = np.mod(t + np.pi, 2 * np.pi) - np.pi
    return np.where(np.abs(t) <= np.pi, t, out)


def _fold(t):
    """Map angles to ``|t|`` in ``[0, pi]``."""
    return np.abs(_wrap(t))


def _panels(lo: float, hi: float, width: float, order_x=_GL_X, order_w=_GL_W):
    """Gauss-Legendre nodes and weights on ``[lo, hi]`` split into panels of at most ``width``."""
    npan = max(1, int(math.ceil((hi - lo) / width)))
    edges = np.linspace(lo, hi, npan + 1)
    a, b = edges[:-1, None], edges[1:, None]
    x = (0.5 * (b - a) * order_x + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * order_w).ravel()
    return x, w


def log_edges(s_lo: float, s_hi: float, width: float = 0.5, offset: float = 0.0) -> np.ndarray:
    """Increasing panel edges in ``s = log t`` on ``[s_lo, s_hi]``.

    One edge sits at the blend start ``log(3pi/4)`` (where profiles are only
    ``C^2``); the rest are spaced ``width`` apart below it, shifted by ``offset``.
    """
    s_b = math.log(BLEND_START)
    anchor = min(s_b, s_hi)
    inner = anchor - offset - width * np.arange(int(math.ceil((anchor - s_lo) / width)) + 2)
    extra = [s_b] if s_lo < s_b < s_hi else []
    inner = np.concatenate([inner, extra])
    inner = inner[(inner > s_lo + 1e-9 * width) & (inner < s_hi - 1e-9 * width)]
    return np.unique(np.concatenate([[s_lo], inner, [s_hi]]))


def log_graded_nodes(tmin: float, tmax: float = np.pi, width: float = 0.5, offset: float = 0.0):
    """Nodes and weights for ``int_tmin^tmax g(t) dt`` on panels uniform in ``log t``."""
    edges = log_edges(math.log(tmin), math.log(tmax), width, offset)
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (b - a) * _GL_X + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * _GL_W).ravel()
    t = np.exp(s)
    return t, w * t


# ---------------------------------------------------------------------------
# profiles


@dataclass(eq=False)
class ProfileU:
    """Boundary profile ``U`` on ``[0, pi]``, extended evenly.

    ``raw`` and ``raw_deriv`` are the closed forms on ``(0, pi]``.  With
    ``blend`` set, ``U`` is replaced on ``[3pi/4, pi]`` by
    ``U(a) + int_a^t U'(s) w(s) ds`` with a smoothstep weight ``w``, which
    keeps ``U`` in ``C^2`` and makes ``U'(pi) = 0``.
    """

    family: str
    params: dict
    raw: Callable[[np.ndarray], np.ndarray]
    raw_deriv: Callable[[np.ndarray], np.ndarray] | None = None
    blend: bool = True
    grid_size: int = DEFAULT.boundary_grid
    fd_step: float = 1e-6  # relative step when U' has no closed form
    _aux: "AuxFunctions | None" = field(default=None, init=False, repr=False)

    @property
    def label(self) -> str:
        parts = [f"family={self.family}"] + [f"{k}={v}" for k, v in self.params.items()]
        return " ".join(parts)

    def _raw_d(self, t):
        if self.raw_deriv is not None:
            return self.raw_deriv(t)
        h = self.fd_step * t
        return (self.raw(t + h) - self.raw(t - h)) / (2 * h)

    def __call__(self, t) -> np.ndarray:
        s = _fold(t)
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = self.raw(s[pos])
        if self.blend:
            tail = s > BLEND_START
            if np.any(tail):
                out[tail] = self._blended(s[tail])
        return out

    def _blended(self, t):
        a = BLEND_START
        x = 0.5 * (t[:, None] - a) * (_GL24_X + 1.0) + a
        w = 0.5 * (t[:, None] - a) * _GL24_W
        g = self._raw_d(x) * _smoothstep_weight((x - a) / (np.pi - a))
        return self.raw(np.array([a]))[0] + (g * w).sum(axis=1)

    def deriv(self, t) -> np.ndarray:
        """``U'(t)``, odd in ``t``."""
        t = np.asarray(t, dtype=float)
        s = _fold(t)
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = self._raw_d(s[pos])
        if self.blend:
            out *= np.where(s > BLEND_START, _smoothstep_weight((s - BLEND_START) / (np.pi - BLEND_START)), 1.0)
        wrapped = _wrap(t)
        return np.where(wrapped < 0, -out, out)

    @property
    def grid(self) -> np.ndarray:
        """Offset half-grid ``t_k = (k + 1/2) pi / N``; full circle uses ``2N`` points."""
        n = self.grid_size // 2
        return (np.arange(n) + 0.5) * (np.pi / n)

    @cached_property
    def grid_values(self) -> np.ndarray:
        return self(self.grid)

    @cached_property
    def grid_derivs(self) -> np.ndarray:
        return self.deriv(self.grid)

    def full_grid_values(self, size: int | None = None) -> np.ndarray:
        """``U`` on ``t_k = (k + 1/2) 2pi/size`` for ``k < size``."""
        size = size or self.grid_size
        t = (np.arange(size) + 0.5) * (2 * np.pi / size)
        return self(t)

    @property
    def aux(self) -> "AuxFunctions":
        if self._aux is None:
            self._aux = AuxFunctions(self)
        return self._aux


def power_profile(alpha: float, blend: bool = True, grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    """``U(t) = t^alpha``."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    return ProfileU("power", {"alpha": alpha}, lambda t: t ** alpha,
                    lambda t: alpha * t ** (alpha - 1), blend, grid_size)


def cusp_profile(blend: bool = True, grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    """Sharp cusp ``U(t) = 1/(1 + log(pi/t))``."""
    def u(t):
        return 1.0 / (1.0 + np.log(np.pi / t))

    def du(t):
        return u(t) ** 2 / t

    return ProfileU("cusp", {}, u, du, blend, grid_size)


def smooth_profile(c: float = 1.0, kappa: float = 0.0, blend: bool = True,
                   grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    """``U(t) = c t (1 + |log t|)^kappa`` with ``kappa >= -1``."""
    if kappa < -1:
        raise DomainError("kappa must be at least -1")
    if not c > 0:
        raise DomainError("c must be positive")

    def u(t):
        return c * t * (1.0 + np.abs(np.log(t))) ** kappa

    def du(t):
        L = 1.0 + np.abs(np.log(t))
        sgn = np.where(t < 1, -1.0, 1.0)
        return c * L ** kappa + c * kappa * L ** (kappa - 1) * sgn

    return ProfileU("smooth", {"c": c, "kappa": kappa}, u, du, blend, grid_size)


def corner_profile(alpha: float, grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    """Boundary profile ``-log|phi|`` of the corner map ``1/(1 + (1-z)^alpha)``."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")

    def u(t):
        w = np.exp(alpha * np.log(_corner_c(t)))
        return 0.5 * np.log1p(2.0 * w.real + (w.real ** 2 + w.imag ** 2))

    return ProfileU("corner", {"alpha": alpha}, u, None, False, grid_size)


def profile_from_hU(h: Callable[[np.ndarray], np.ndarray], family: str = "prescribed", params: dict | None = None,
                    blend: bool = True, grid_size: int = DEFAULT.boundary_grid, check: bool = True) -> ProfileU:
    """Profile with ``U(t) = -t^2 h'(t)``, so that ``h_U = h - h(pi)``.

    ``h'`` is taken by central differences with step ``1e-4 t``.
    """
    def u(t):
        # t^2/(2 dt) = t/2e-4 avoids forming t^2, which underflows for tiny t
        return -t * (h(t * (1 + 1e-4)) - h(t * (1 - 1e-4))) / 2e-4

    # u is itself a difference quotient, so differentiate it with a coarser step
    prof = ProfileU(family, dict(params or {}), u, None, blend, grid_size, fd_step=1e-3)
    if check:
        vals = u(np.geomspace(1e-200, np.pi, 4001))
        if np.any(np.diff(vals) < -MONO_TOL * np.abs(vals[1:])) or np.any(vals < 0):
            raise DomainError("profile from h is not nondecreasing")
    return prof


#: shift that makes the slow-decay profile monotone on all of (0, pi]
PRESCRIBED_SHIFT = np.pi * math.e ** 2


def invlog_h(t):
    """``h(t) = [g((log(t/c))^2)]^{-2}`` for ``g(x) = 1/log(e + x)``, ``c = pi e^2``."""
    s = np.log(np.asarray(t, dtype=float) / PRESCRIBED_SHIFT)
    return np.log(math.e + s * s) ** 2


def prescribed_profile(g: str = "invlog", blend: bool = True, grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    if g != "invlog":
        raise ConfigError(f"unknown decay function g={g!r}")
    return profile_from_hU(invlog_h, "prescribed", {"g": g}, blend, grid_size)


def invlog_profile_exact(t):
    """Closed form of ``-t^2 h'(t)`` for :func:`invlog_h` (test oracle)."""
    s = np.log(np.asarray(t, dtype=float) / PRESCRIBED_SHIFT)
    return -4.0 * t * s * np.log(math.e + s * s) / (math.e + s * s)


def function_profile(func, deriv=None, family="custom", params=None, blend=False,
                     grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    return ProfileU(family, dict(params or {}), func, deriv, blend, grid_size)


# ---------------------------------------------------------------------------
# conjugate function


def conjugate_series(U_grid) -> np.ndarray:
    """Conjugate of equispaced samples via the Fourier multiplier ``-i sgn(k)``."""
    u = np.asarray(U_grid, dtype=float)
    n = u.size
    if n < 2 or n & (n - 1):
        raise DomainError("grid size must be a power of two")
    c = np.fft.fft(u)
    k = np.fft.fftfreq(n, 1.0 / n)
    mult = -1j * np.sign(k)
    mult[n // 2] = 0.0
    return np.fft.ifft(c * mult).real


def conjugate_at(U: ProfileU, t, width: float = 0.5, rel_floor: float = 1e-20) -> np.ndarray:
    """Conjugate ``V(t)`` of an even profile at arbitrary angles.

    Uses ``V(t) = (sin t/pi) int_0^pi (U(x) - U(t))/(cos x - cos t) dx``,
    whose integrand is regular at ``x = t``, on panels uniform in ``log x``
    that resolve the singularity of ``U`` at the origin.
    """
    t = np.asarray(t, dtype=float)
    shape = t.shape
    t = _wrap(t.ravel())
    sgn = np.sign(t)
    s = np.abs(t)
    out = np.zeros_like(s)
    live = (s > 0) & (s < np.pi)
    if not np.any(live):
        return out.reshape(shape)
    s_live = s[live]
    xmin = max(float(s_live.min()) * rel_floor, TINY)
    # inner panels offset by a quarter width so nodes avoid typical outer grids
    x, wx = log_graded_nodes(xmin, np.pi, width, offset=0.25 * width)
    Ux = U(x)
    Ut = U(s_live)
    dUt = U.deriv(s_live)
    vals = np.empty_like(s_live)
    step = max(1, (1 << 21) // x.size)
    for a in range(0, s_live.size, step):
        tt = s_live[a:a + step, None]
        num = Ux[None, :] - Ut[a:a + step, None]
        # sin t/(cos x - cos t), divided in stages so tiny angles do not underflow
        close = np.abs(x - tt) < 1e-7 * tt
        half_diff = np.where(close, 1.0, np.sin(0.5 * (x - tt)))
        kern = np.sin(tt) / (-2.0 * np.sin(0.5 * (x + tt))) / half_diff
        g = np.where(close, -dUt[a:a + step, None], num * kern)
        vals[a:a + step] = (g @ wx) / np.pi
    out[live] = vals
    return (sgn * out).reshape(shape)


# ---------------------------------------------------------------------------
# analytic symbols


def _corner_c(t):
    """``1 - e^{it} = 2 sin(t/2) e^{i(t - pi)/2}``, accurate for small ``t``."""
    t = np.asarray(t, dtype=float)
    return 2.0 * np.sin(0.5 * t) * np.exp(0.5j * (t - np.pi))


class AnalyticSymbol:
    """Interface for analytic self-maps of the disc."""

    symbol_id: str = "symbol"
    real_symmetric: bool = True
    touches_boundary: bool = True

    def co(self, z) -> np.ndarray:
        """``1 - phi(z)`` for plain complex ``z`` in the closed disc."""
        return 1.0 - self(z)

    def co_points(self, pts: DiscPoints) -> np.ndarray:
        """``1 - phi(z)`` for points in co-form."""
        return self.co(pts.z)

    def __call__(self, z) -> np.ndarray:
        return 1.0 - self.co(z)

    def boundary_co(self, t) -> np.ndarray:
        return self.co(np.exp(1j * np.asarray(t, dtype=float)))

    def boundary(self, t) -> np.ndarray:
        return 1.0 - self.boundary_co(t)

    def boundary_log_abs(self, t) -> np.ndarray:
        """``log |phi(e^{it})|`` without cancellation near the contact point."""
        return 0.5 * np.log1p(-one_minus_abs2(self.boundary_co(t)))

    @property
    def phi0(self) -> complex:
        return complex(np.asarray(self(np.array([0.0 + 0j])))[0])

    def circle_samples(self, size: int, radius: float = 1.0) -> np.ndarray:
        """``phi(radius e^{2 pi i k/size})`` for ``k < size``."""
        theta = 2 * np.pi * np.arange(size) / size
        if radius == 1.0:
            return self.boundary(theta)
        return self(radius * np.exp(1j * theta))

    def level_angle(self, d_r: float, tmin: float = 1e-300) -> float:
        """Angle ``t`` in ``(0, pi)`` with ``1 - |phi(e^{it})|^2 = d_r``.

        Assumes ``|phi(e^{it})|`` decreases on ``(0, pi)``, which holds for
        every catalogue symbol.
        """
        def g(s):
            return float(one_minus_abs2(self.boundary_co(np.array([math.exp(s)])))[0]) - d_r

        lo, hi = math.log(tmin), math.log(np.pi)
        if g(lo) > 0:
            return tmin
        if g(hi) < 0:
            return np.pi
        return math.exp(brentq(g, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=300))


class FunctionSymbol(AnalyticSymbol):
    """Wrap a plain vectorised callable ``phi``."""

    def __init__(self, func, symbol_id="custom", real_symmetric=True, touches_boundary=False):
        self.func = func
        self.symbol_id = symbol_id
        self.real_symmetric = real_symmetric
        self.touches_boundary = touches_boundary

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=complex)

    def co(self, z):
        return 1.0 - self(z)


class ScalarSymbol(FunctionSymbol):
    """``phi(z) = s z``."""

    def __init__(self, s: float):
        if not abs(s) < 1:
            raise DomainError("|s| must be below 1")
        super().__init__(lambda z: s * z, f"scalar_s={s:g}", True, False)
        self.s = s


class ConstantSymbol(FunctionSymbol):
    """``phi(z) = c``."""

    def __init__(self, c: complex):
        if not abs(c) < 1:
            raise DomainError("|c| must be below 1")
        super().__init__(lambda z: np.full(np.shape(z), c, dtype=complex), f"constant_c={c:g}",
                         np.imag(c) == 0, False)
        self.c = c


class CornerSymbol(AnalyticSymbol):
    """``phi(z) = 1/(1 + (1 - z)^alpha)`` with the principal branch."""

    def __init__(self, alpha: float):
        if not 0 < alpha < 1:
            raise DomainError("alpha must lie in (0, 1)")
        self.alpha = alpha
        self.symbol_id = f"corner_alpha={alpha:g}"

    def _co_from_c(self, c):
        with np.errstate(divide="ignore", invalid="ignore"):
            ca = np.exp(self.alpha * np.log(c))
        ca = np.where(c == 0, 0.0, ca)
        return ca / (1.0 + ca)

    def co(self, z):
        return self._co_from_c(1.0 - np.asarray(z, dtype=complex))

    def co_points(self, pts: DiscPoints):
        return self._co_from_c(pts.co)

    def boundary_co(self, t):
        return self._co_from_c(_corner_c(t))

    def inverse_co(self, co_w) -> np.ndarray:
        """Co-form of ``phi^{-1}(w)`` from the co-form of ``w``: ``1 - z = (1/w - 1)^{1/alpha}``."""
        co_w = np.asarray(co_w, dtype=complex)
        q = co_w / (1.0 - co_w)
        return np.exp(np.log(q) / self.alpha)

    def in_range(self, co_w, margin: float = 0.0) -> np.ndarray:
        """Whether ``w`` lies in ``phi(D)``, with a relative margin on ``1 - |z|^2``."""
        co_w = np.asarray(co_w, dtype=complex)
        q = co_w / (1.0 - co_w)
        ok_arg = np.abs(np.angle(q)) < self.alpha * np.pi / 2
        c = self.inverse_co(co_w)
        return ok_arg & (one_minus_abs2(c) > margin * np.abs(c))


def corner_symbol(alpha: float) -> CornerSymbol:
    return CornerSymbol(alpha)


class ProfileSymbol(AnalyticSymbol):
    """``phi_U = exp(-f)`` with ``f = u + i v`` the analytic completion of ``U``.

    Interior values use an adaptive-grid Herglotz integral; ``series`` gives
    the truncated Taylor evaluation from the cosine coefficients of ``U``.
    """

    def __init__(self, U: ProfileU):
        self.U = U
        self.symbol_id = U.label.replace(" ", "_")

    # -- series representation
    @cached_property
    def coefficients(self) -> np.ndarray:
        """Cosine coefficients ``a_0..a_{N/2-1}`` of ``U`` from the offset grid."""
        n = self.U.grid_size
        vals = self.U.full_grid_values(n)
        k = np.arange(n // 2)
        c = np.fft.fft(vals)[: n // 2] / n * np.exp(-1j * np.pi * k / n)
        return c.real

    @cached_property
    def taylor(self) -> np.ndarray:
        """Taylor coefficients of ``f``: ``a_0, 2a_1, 2a_2, ...``."""
        c = 2.0 * self.coefficients
        c[0] *= 0.5
        return c

    def series_f(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.taylor)

    def series(self, z) -> np.ndarray:
        return np.exp(-self.series_f(z))

    def boundary_cache(self):
        """``U``, ``V`` (FFT conjugate) and ``|phi|`` on the full offset grid."""
        u = self.U.full_grid_values()
        v = conjugate_series(u)
        return u, v, np.exp(-u)

    def circle_samples(self, size: int, radius: float = 1.0) -> np.ndarray:
        c = self.taylor
        m = min(c.size, size)
        buf = np.zeros(size, dtype=complex)
        buf[:m] = c[:m] * radius ** np.arange(m)
        if c.size > size:
            # fold higher coefficients onto their aliases
            k = np.arange(size, c.size)
            np.add.at(buf, k % size, c[size:] * radius ** k)
        f = np.fft.ifft(buf) * size
        return np.exp(-f)

    # -- accurate evaluation
    def f(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(z.shape, dtype=complex)
        for i, zi in np.ndenumerate(z):
            r = abs(zi)
            if r >= 1.0:
                raise DomainError("use boundary evaluation on the circle")
            out[i] = herglotz(self.U, 1.0 - r, float(np.angle(zi)) if r > 0 else 0.0)
        return out

    def f_polar(self, delta, theta) -> np.ndarray:
        """``f`` at ``(1 - delta) e^{i theta}``; ``delta`` may be far below machine epsilon."""
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        theta = np.broadcast_to(np.asarray(theta, dtype=float), delta.shape)
        return np.array([herglotz(self.U, d, th) for d, th in zip(delta, theta)])

    def co(self, z):
        return -np.expm1(-self.f(z))

    def __call__(self, z):
        return np.exp(-self.f(z))

    def boundary_f(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.U(t) + 1j * conjugate_at(self.U, t)

    def boundary_co(self, t):
        return -np.expm1(-self.boundary_f(t))

    def boundary_log_abs(self, t):
        return -self.U(t)

    def level_angle(self, d_r: float, tmin: float = 1e-300) -> float:
        target = -0.5 * math.log1p(-d_r)

        def g(s):
            return float(self.U(np.array([math.exp(s)]))[0]) - target

        lo, hi = math.log(tmin), math.log(np.pi)
        if g(lo) > 0:
            return tmin
        if g(hi) < 0:
            return np.pi
        return math.exp(brentq(g, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=300))

    @property
    def phi0(self) -> complex:
        return complex(math.exp(-self.coefficients[0]))


def symbol_from_profile(U: ProfileU, check: bool = True) -> ProfileSymbol:
    if check:
        rep = membership_check(U)
        if not rep.in_U:
            raise DomainError(f"profile fails the class diagnostics: {rep.notes}")
    return ProfileSymbol(U)


def _graded_offsets(scale: float, span: float) -> np.ndarray:
    levels = int(math.ceil(math.log2(span / scale))) + 1
    k = scale * 2.0 ** np.arange(max(levels, 1))
    return k[k < span]


def herglotz(U: ProfileU, delta: float, theta: float) -> complex:
    """``(1/2pi) int U(x) (e^{ix} + z)/(e^{ix} - z) dx`` at ``z = (1 - delta) e^{i theta}``.

    The even profile is folded onto ``[0, pi]`` with the symmetrised kernel
    ``K(x) + K(-x)``, written so that its imaginary part carries an explicit
    factor ``sin(theta)``; with ``U(theta)`` subtracted this keeps relative
    precision for tiny ``delta`` and ``theta``.  Panels are graded
    geometrically toward ``x = |theta|`` and toward the origin.
    """
    if not 0 < delta <= 1:
        raise DomainError("delta must lie in (0, 1]")
    theta = float(_wrap(theta))
    if delta == 1.0:
        return complex(np.mean(U.full_grid_values(1024)))
    sgn = -1.0 if theta < 0 else 1.0
    th = abs(theta)
    r = 1.0 - delta
    x0 = max(1e-12 * min(delta, th if th else 1.0), TINY)
    g0 = _graded_offsets(delta, 2 * np.pi)
    g1 = _graded_offsets(x0, np.pi)
    g2 = _graded_offsets(1e-4, 1.0)
    pieces = [np.array([0.0, np.pi, th, BLEND_START]), th + g0, th - g0, g1, np.pi - g2]
    edges = np.unique(np.concatenate(pieces))
    edges = edges[(edges >= 0.0) & (edges <= np.pi)]
    a, b = edges[:-1, None], edges[1:, None]
    x = (0.5 * (b - a) * _GL_X + 0.5 * (a + b)).ravel()
    w = (0.5 * (b - a) * _GL_W).ravel()
    s_m = np.sin(0.5 * (x - th))
    s_p = np.sin(0.5 * (x + th))
    # |e^{ix} - z| and |e^{-ix} - z|; kernels are assembled from bounded ratios so
    # nothing underflows when delta and theta are far below machine epsilon
    a_m = np.hypot(delta, 2.0 * math.sqrt(r) * s_m)
    a_p = np.hypot(delta, 2.0 * math.sqrt(r) * s_p)
    re_k = (2.0 - delta) * ((delta / a_m) / a_m + (delta / a_p) / a_p)
    im_k = 4.0 * r * (math.sin(th) / a_p) * ((delta / a_m) ** 2 * np.cos(x) / a_p
                                              - 4.0 * r * (s_m / a_m) * (s_p / a_p) / a_m)
    Ut = float(U(np.array([th]))[0])
    diff = U(x) - Ut
    re = Ut + (diff * re_k) @ w / (2 * np.pi)
    im = (diff * im_k) @ w / (2 * np.pi)
    return complex(re, sgn * im)


def poisson_eval(U: ProfileU, r: float, theta: float) -> float:
    """Poisson integral of ``U`` at ``r e^{i theta}``."""
    if not 0 <= r < 1:
        raise DomainError("r must lie in [0, 1)")
    return float(herglotz(U, 1.0 - r, theta).real)


def psi_curve(U: ProfileU, t) -> DiscPoints:
    """``psi_U(e^{it}) = exp(-U(t)/h_U(t) + it)`` in co-form."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t) <= 0) or np.any(np.abs(t) >= np.pi):
        raise DomainError("t must lie in (0, pi) in absolute value")
    h = U.aux.h(np.abs(t))
    if np.any(~(h > 0)):
        raise DomainError("h_U vanishes or underflows")
    return DiscPoints(-np.expm1(-U(t) / h + 1j * t))


# ---------------------------------------------------------------------------
# auxiliary functions


class AuxFunctions:
    """Tabulated ``h_U``, ``gamma_U`` and helpers for ``eta_U``, ``omega_U``.

    Integrals are composite Gauss-Legendre on panels uniform in ``log x``
    from ``1e-300`` up, accumulated once into tail tables.
    """

    S_MIN = math.log(1e-300)
    WIDTH = 0.5

    def __init__(self, U: ProfileU):
        self.U = U
        self._h_edges = log_edges(self.S_MIN, math.log(np.pi), self.WIDTH)[::-1]  # decreasing
        a, b = self._h_edges[1:, None], self._h_edges[:-1, None]
        s = 0.5 * (b - a) * _GL_X + 0.5 * (a + b)
        w = 0.5 * (b - a) * _GL_W
        x = np.exp(s)
        panel = (U(x) / x * w).sum(axis=1)  # int U(x)/x^2 dx = int U(e^s) e^{-s} ds
        self._h_tail = np.concatenate([[0.0], np.cumsum(panel)])
        self._gamma_ready = False

    def _partial(self, f, s_lo, s_hi):
        x = 0.5 * (s_hi - s_lo)[:, None] * (_GL_X + 1.0) + s_lo[:, None]
        w = 0.5 * (s_hi - s_lo)[:, None] * _GL_W
        return (f(x) * w).sum(axis=1)

    def h(self, t) -> np.ndarray:
        """``h_U(t) = int_t^pi U(x)/x^2 dx``."""
        t = np.asarray(t, dtype=float)
        shape = t.shape
        t = t.ravel()
        if np.any(t <= 0) or np.any(t > np.pi * (1 + 1e-15)):
            raise DomainError("t must lie in (0, pi]")
        s = np.minimum(np.log(t), self._h_edges[0])
        if np.any(s < self.S_MIN):
            raise DomainError("t below the tabulated range")
        # panel i spans [edges[i+1], edges[i]] with edges decreasing
        idx = np.clip(np.searchsorted(-self._h_edges, -s, side="left") - 1, 0, self._h_edges.size - 2)
        upper = self._h_edges[idx]
        part = self._partial(lambda x: self.U(np.exp(x)) * np.exp(-x), s, upper)
        return (self._h_tail[idx] + part).reshape(shape)

    def eta(self, y) -> np.ndarray:
        """``eta_U(y) = -log U(e^{-y})``; defined where ``U(e^{-y}) <= 1/e``."""
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            val = -np.log(self.U(np.exp(-y)))
        if np.any(val < 1 - 1e-12):
            raise DomainError("eta_U is only used where eta_U >= 1")
        return val

    @cached_property
    def eta_start(self) -> float:
        """Smallest ``y >= 0`` with ``eta_U(y) >= 1``."""
        def g(y):
            return -math.log(float(self.U(np.array([math.exp(-y)]))[0])) - 1.0

        if g(0.0) >= 0:
            return 0.0
        hi = 1.0
        while g(hi) < 0:
            hi *= 2
            if hi > 690:
                raise DomainError("eta_U never reaches 1")
        return brentq(g, 0.0, hi, xtol=1e-14, maxiter=200)

    def omega(self, x: float) -> float:
        """Solution of ``eta_U(x/omega) = omega``."""
        y0 = self.eta_start
        if x <= max(y0, 0) or float(self.eta(np.array([x]))[0]) < 1.0:
            raise DomainError("omega_U(x) needs eta_U(x) >= 1")

        def g(w):
            with np.errstate(divide="ignore"):
                return float(-np.log(self.U(np.array([math.exp(-x / w)])))[0]) - w

        hi = x / y0 if y0 > 0 else x
        if g(1.0) < 0:
            raise DomainError("omega_U(x) below 1")
        if g(hi) > 0:
            raise ConvergenceError("omega_U bracket failed")
        try:
            return brentq(g, 1.0, hi, xtol=1e-13, rtol=1e-15, maxiter=200)
        except RuntimeError as exc:
            raise ConvergenceError(str(exc)) from exc

    # gamma_U
    def _build_gamma(self):
        n = int(math.floor(-self.S_MIN / self.WIDTH))
        self._g_edges = -self.WIDTH * np.arange(n + 1)  # 0 down
        a, b = self._g_edges[1:, None], self._g_edges[:-1, None]
        s = 0.5 * (b - a) * _GL_X + 0.5 * (a + b)
        w = 0.5 * (b - a) * _GL_W
        x = np.exp(s)
        panel = (self.h(x) / self.U(x) * x * w).sum(axis=1)
        self._g_tail = np.concatenate([[0.0], np.cumsum(panel)])
        self._h1 = float(self.h(np.array([1.0]))[0])
        if not self._h1 > 0:
            raise DomainError("h_U(1) must be positive")
        self._gamma_ready = True

    def gamma(self, t) -> np.ndarray:
        """``gamma_U(t) = int_t^1 h_U/U dx * (log h_U(t) - log h_U(1))`` on ``(0, 1]``."""
        if not self._gamma_ready:
            self._build_gamma()
        t = np.asarray(t, dtype=float)
        shape = t.shape
        t = t.ravel()
        if np.any(t <= 0) or np.any(t > 1):
            raise DomainError("t must lie in (0, 1]")
        s = np.log(t)
        if np.any(s < self._g_edges[-1]):
            raise DomainError("t below the tabulated range")
        idx = np.minimum(np.floor(-s / self.WIDTH).astype(int), self._g_edges.size - 2)
        upper = self._g_edges[idx]
        part = self._partial(lambda x: self.h(np.exp(x)) / self.U(np.exp(x)) * np.exp(x), s, upper)
        integral = self._g_tail[idx] + part
        return (integral * (np.log(self.h(t)) - math.log(self._h1))).reshape(shape)

    def gamma_inverse(self, y: float) -> float:
        if y < 0:
            raise DomainError("gamma_U^{-1} is defined on [0, inf)")
        if y == 0:
            return 1.0
        if not self._gamma_ready:
            self._build_gamma()
        lo = float(self._g_edges[-1])
        if float(self.gamma(np.array([math.exp(lo)]))[0]) < y:
            raise DomainError("gamma_U^{-1}(y) below the tabulated range")

        def g(s):
            return float(self.gamma(np.array([math.exp(s)]))[0]) - y

        try:
            return math.exp(brentq(g, lo, 0.0, xtol=1e-13, rtol=1e-15, maxiter=200))
        except RuntimeError as exc:
            raise ConvergenceError(str(exc)) from exc


def h_of(U: ProfileU, t):
    return U.aux.h(t)


def eta_of(U: ProfileU, x):
    return U.aux.eta(x)


def omega_of(U: ProfileU, x: float) -> float:
    return U.aux.omega(x)


def gamma_of(U: ProfileU, t):
    return U.aux.gamma(t)


def gamma_inverse(U: ProfileU, y: float) -> float:
    return U.aux.gamma_inverse(y)


# ---------------------------------------------------------------------------
# class diagnostics


@dataclass(frozen=True)
class ClassReport:
    in_U: bool
    in_Us: bool
    in_Uc: bool
    alpha_witness: float  # sup of t U'/U on (0, pi/2]
    alpha_limit: float  # t U'/U at the smallest probe
    smooth_ratio: np.ndarray  # U(t)/(t log h_U(t)) at the probes below
    smooth_probes: np.ndarray
    second_order_bound: float  # max of t U'/U and t^2 |U''|/U on (0, pi/2]
    notes: str = ""


#: U(t)/(t log h_U(t)) at t = 1e-64 must fall below this for the smooth class
SMOOTH_RATIO_CUTOFF = 0.1


def membership_check(U: ProfileU) -> ClassReport:
    """Heuristic class diagnostics on a logarithmic probe grid.

    Asymptotic conditions cannot be decided from samples; the report records
    the witness ratios so callers can apply their own thresholds.
    """
    notes = []
    grid = U.grid_values
    mono = bool(np.all(np.diff(grid) >= -MONO_TOL * np.abs(grid[1:])))
    if not mono:
        notes.append("U is not nondecreasing on the grid")
    probe = np.geomspace(1e-300, np.pi / 2, 2000)
    vals = U(probe)
    mono = mono and bool(np.all(np.diff(vals) >= -MONO_TOL * np.abs(vals[1:])))
    u_top = float(U(np.array([np.pi]))[0])
    vanish = bool(vals[0] < 0.1 * u_top) and bool(np.all(vals > 0))
    if not vanish:
        notes.append("U does not tend to 0 at the contact point")
    hs = U.aux.h(np.array([1e-6, 1e-300]))
    grows = bool(hs[1] > 2 * hs[0])
    if not grows:
        notes.append("h_U does not blow up")
    in_U = mono and vanish and grows

    with np.errstate(invalid="ignore", divide="ignore"):
        ratio_t = U.deriv(probe) * probe / vals
    alpha_w = float(ratio_t.max())
    alpha_l = float(ratio_t[0])
    eps = 1e-4  # relative step, so t^2 U''/U needs no t^2
    with np.errstate(invalid="ignore", divide="ignore"):
        d2 = (U(probe * (1 + eps)) - 2 * vals + U(probe * (1 - eps))) / (eps * eps * vals)
    second = float(max(alpha_w, np.max(np.abs(d2))))

    sp = 10.0 ** -np.arange(4, 68, 4, dtype=float)
    sr = U(sp) / (sp * np.log(U.aux.h(sp)))
    trend = bool(np.all(np.diff(sr) <= 1e-12))
    in_Us = in_U and U.blend and trend and bool(sr[-1] < SMOOTH_RATIO_CUTOFF) and second < 50
    if in_U and not in_Us:
        notes.append("smooth-class witness ratio not small")
    in_Uc = in_U and alpha_w < 1
    return ClassReport(in_U, in_Us, in_Uc, alpha_w, alpha_l, sr, sp, second, "; ".join(notes))


# ---------------------------------------------------------------------------
# specs


def profile_from_spec(family: str, params: dict, grid_size: int = DEFAULT.boundary_grid) -> ProfileU:
    if family == "corner":
        return corner_profile(float(params.get("alpha", 0.5)), grid_size)
    if family == "power":
        return power_profile(float(params.get("alpha", 0.5)), grid_size=grid_size)
    if family == "cusp":
        return cusp_profile(grid_size=grid_size)
    if family == "smooth":
        return smooth_profile(float(params.get("c", 1.0)), float(params.get("kappa", 0.0)), grid_size=grid_size)
    if family == "prescribed":
        return prescribed_profile(str(params.get("g", "invlog")), grid_size=grid_size)
    raise ConfigError(f"unknown profile family {family!r}")
