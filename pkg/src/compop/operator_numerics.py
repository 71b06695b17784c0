"""Approximation numbers of composition operators.

Two discretisations are provided.

``galerkin_matrix`` assembles the monomial section ``A[k, m] = [z^k] phi^m``.
It is exact for polynomial-like symbols and is what the operator identity
checks use.  Taylor coefficients are read off a circle of radius
``rho < 1`` when the symbol touches the unit circle: aliasing from the
slowly decaying coefficients of ``phi^m`` is then damped by ``rho^F``.

``reference_singular_values`` compresses ``C_phi`` to a model space
spanned by ``1, z, .., z^{M0-1}`` and Takenaka-Malmquist functions with
real poles clustering geometrically at 1, and integrates ``|f o phi|^2`` on
the circle with panels graded toward the contact point.  Its singular
values are those of ``C_phi P_E`` for a subspace ``E``, so ``sigma_n <= a_n``
holds for the exact compression; the monomial basis cannot resolve the
boundary layer of near-contact symbols at any practical size.
"""
from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT, Config
from .errors import DomainError
from .symbols import AnalyticSymbol, log_graded_nodes


class AliasingWarning(UserWarning):
    """Coefficient mass beyond the retained rows exceeds the configured threshold."""


@dataclass(frozen=True)
class GalerkinMatrix:
    A: np.ndarray
    fft_size: int
    radius: float
    tail_mass: np.ndarray  # per column: ||c_{K..F/2}|| / ||c_{0..F/2}||

    @property
    def K(self) -> int:
        return self.A.shape[0]

    @property
    def M(self) -> int:
        return self.A.shape[1]


def default_radius(phi: AnalyticSymbol, K: int) -> float:
    """Sampling radius: ``rho^K = 1e-3`` for symbols touching the circle, else 1."""
    if getattr(phi, "touches_boundary", True):
        return 10.0 ** (-3.0 / K)
    return 1.0


def galerkin_matrix(phi: AnalyticSymbol, K: int, M: int, fft_size: int | None = None,
                    radius: float | None = None, cfg: Config = DEFAULT, cache_dir: str | None = None) -> GalerkinMatrix:
    """``A[k, m]`` = ``k``-th Taylor coefficient of ``phi^m``, ``k < K``, ``m < M``.

    Powers are formed by repeated pointwise multiplication of circle samples,
    then transformed column by column.
    """
    if fft_size is None:
        fft_size = 1 << int(math.ceil(math.log2(cfg.fft_factor * K)))
    if K < M:
        raise DomainError("need K >= M")
    if fft_size < 4 * K or fft_size & (fft_size - 1):
        raise DomainError("fft_size must be a power of two and at least 4K")
    if radius is None:
        radius = default_radius(phi, K)
    cache = MatrixCache(cache_dir or cfg.cache_dir) if (cache_dir or cfg.cache_dir) else None
    key = None
    if cache is not None:
        key = (getattr(phi, "symbol_id", "custom"), K, M, fft_size, radius)
        hit = cache.load(key)
        if hit is not None:
            return hit
    samples = phi.circle_samples(fft_size, radius)
    half = fft_size // 2
    scale = radius ** -np.arange(half, dtype=float)
    A = np.empty((K, M), dtype=complex)
    tail = np.empty(M)
    power = np.ones(fft_size, dtype=complex)
    block = max(1, (1 << 22) // fft_size)
    for start in range(0, M, block):
        stop = min(M, start + block)
        cols = np.empty((stop - start, fft_size), dtype=complex)
        for i in range(stop - start):
            cols[i] = power
            power = power * samples
        coef = np.fft.fft(cols, axis=1)[:, :half] / fft_size * scale
        A[:, start:stop] = coef[:, :K].T
        total = np.linalg.norm(coef, axis=1)
        tail[start:stop] = np.linalg.norm(coef[:, K:], axis=1) / np.where(total > 0, total, 1.0)
    if getattr(phi, "real_symmetric", False):
        A = A.real.copy()
    bad = np.flatnonzero(tail > cfg.aliasing_threshold)
    if bad.size:
        warnings.warn(f"coefficient tail mass above {cfg.aliasing_threshold:g} in {bad.size} of {M} columns "
                      f"(first column {bad[0]}, max {tail.max():.3g})", AliasingWarning, stacklevel=2)
    out = GalerkinMatrix(A, fft_size, float(radius), tail)
    if cache is not None:
        cache.store(key, out)
    return out


def approximation_numbers(A, count: int | None = None) -> np.ndarray:
    """Singular values of a section, in decreasing order."""
    mat = A.A if isinstance(A, GalerkinMatrix) else np.asarray(A)
    sv = np.linalg.svd(mat, compute_uv=False)
    if count is None:
        return sv
    if count > min(mat.shape):
        raise DomainError("count exceeds the section size")
    return sv[:count]


def operator_norm_bound(phi0: complex) -> float:
    """``((1 + |phi(0)|)/(1 - |phi(0)|))^{1/2}``."""
    a = abs(phi0)
    if a >= 1:
        raise DomainError("|phi(0)| must be below 1")
    return math.sqrt((1 + a) / (1 - a))


def adjoint_kernel_check(phi: AnalyticSymbol, a: complex, K: int, M: int | None = None,
                         cfg: Config = DEFAULT) -> float:
    """Relative residual of ``C_phi^* k_a = k_{phi(a)}`` on the first ``M`` coefficients."""
    if abs(a) >= 1:
        raise DomainError("|a| must be below 1")
    M = M or max(1, K // cfg.rows_factor)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        G = galerkin_matrix(phi, K, M, cfg=cfg)
    ka = np.conj(a) ** np.arange(K)
    lhs = G.A.conj().T @ ka
    w = complex(np.asarray(phi(np.array([a], dtype=complex)))[0])
    rhs = np.conj(w) ** np.arange(M)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


class MatrixCache:
    """Assembled sections stored as ``.npz`` files keyed by their parameters."""

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)

    def _path(self, key) -> Path:
        digest = hashlib.sha256(repr(key).encode()).hexdigest()[:24]
        return self.dir / f"galerkin_{digest}.npz"

    def load(self, key) -> GalerkinMatrix | None:
        p = self._path(key)
        if not p.exists():
            return None
        with np.load(p) as z:
            if str(z["key"]) != repr(key):
                return None
            return GalerkinMatrix(z["A"], int(z["fft_size"]), float(z["radius"]), z["tail"])

    def store(self, key, G: GalerkinMatrix) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        np.savez(self._path(key), A=G.A, fft_size=G.fft_size, radius=G.radius, tail=G.tail_mass,
                 key=np.array(repr(key)))


# ---------------------------------------------------------------------------
# model-space reference


def pole_co(M: int, cfg: Config = DEFAULT) -> np.ndarray:
    """``1 - b_j`` for the ``M - M0`` real poles, geometric from 1/2 to the configured depth."""
    npole = M - cfg.ref_monomials
    if npole < 0:
        raise DomainError("M must be at least the number of monomials")
    if npole == 0:
        return np.zeros(0)
    return np.geomspace(0.5, cfg.ref_pole_depth, npole)


def model_basis(co_w: np.ndarray, nmono: int, beta: np.ndarray) -> np.ndarray:
    """Orthonormal basis functions evaluated at ``w = 1 - co_w``.

    Columns: ``w^k`` for ``k < nmono``, then
    ``w^nmono prod_{i<j} b_i(w) sqrt(1 - b_j^2)/(1 - b_j w)`` with
    ``b_i(w) = (b_i - w)/(1 - b_i w)`` up to sign, all in co-form.
    """
    co_w = np.asarray(co_w, dtype=complex)
    w = 1.0 - co_w
    out = np.empty((co_w.size, nmono + beta.size), dtype=complex)
    prod = np.ones_like(w)
    for k in range(nmono):
        out[:, k] = prod
        prod = prod * w
    for j, bt in enumerate(beta):
        den = bt + co_w - bt * co_w  # 1 - b w
        out[:, nmono + j] = prod * (math.sqrt(2 * bt - bt * bt) / den)
        prod = prod * ((bt - co_w) / den)
    return out


def boundary_quadrature(cfg: Config = DEFAULT, width: float | None = None):
    """Nodes on ``(0, pi]`` graded toward 0, weights for ``dt``."""
    return log_graded_nodes(cfg.ref_quad_tmin, np.pi, width or cfg.ref_quad_width)


def model_space_section(phi: AnalyticSymbol, M: int, cfg: Config = DEFAULT, width: float | None = None) -> np.ndarray:
    """Matrix whose singular values are those of ``C_phi`` compressed to the model space.

    Rows are weighted boundary samples of ``e_j o phi``.  For real-symmetric
    symbols only the upper half circle is sampled and the rows are split into
    real and imaginary parts.
    """
    t, w = boundary_quadrature(cfg, width)
    beta = pole_co(M, cfg)
    if phi.real_symmetric:
        S = model_basis(phi.boundary_co(t), cfg.ref_monomials, beta) * np.sqrt(w / np.pi)[:, None]
        return np.vstack([S.real, S.imag])
    tt = np.concatenate([t, -t])
    ww = np.concatenate([w, w])
    return model_basis(phi.boundary_co(tt), cfg.ref_monomials, beta) * np.sqrt(ww / (2 * np.pi))[:, None]


@dataclass(frozen=True)
class ReferenceResult:
    sigma: np.ndarray  # values from the finest section
    sigma_coarse: np.ndarray | None  # values before doubling
    M: int
    K: int
    converged: np.ndarray = field(repr=False)

    @property
    def rel_change(self) -> np.ndarray:
        if self.sigma_coarse is None:
            return np.full(self.sigma.size, np.nan)
        return np.abs(self.sigma - self.sigma_coarse) / self.sigma


def reference_singular_values(phi: AnalyticSymbol, count: int, M: int | None = None, cfg: Config = DEFAULT,
                              check: bool = True) -> ReferenceResult:
    """Model-space singular values with a doubling convergence check.

    The check recomputes with ``2M`` basis functions and half-width
    quadrature panels; ``converged[n]`` records a relative change below
    ``cfg.convergence_tol``.  The refined values are reported as ``sigma``
    together with the refined ``M`` and row count ``K``.
    """
    M = M or cfg.ref_basis
    if count > M:
        raise DomainError("count exceeds the basis size")
    S = model_space_section(phi, M, cfg)
    sv = np.linalg.svd(S, compute_uv=False)[:count]
    if not check:
        return ReferenceResult(sv, None, M, S.shape[0], np.zeros(count, dtype=bool))
    S2 = model_space_section(phi, 2 * M, cfg, width=0.5 * cfg.ref_quad_width)
    sv2 = np.linalg.svd(S2, compute_uv=False)[:count]
    conv = np.abs(sv - sv2) <= cfg.convergence_tol * sv2
    return ReferenceResult(sv2, sv, 2 * M, S2.shape[0], conv)
