import math

import numpy as np
import pytest

from compop.blaschke import (
    BlaschkeProduct,
    beta_constant,
    beta_series,
    best_curve_blaschke,
    build_curve_blaschke,
    build_radial_blaschke,
    curve_m_grid,
    log_sup_modulus,
    monomial_blaschke,
)
from compop.bounds import _omega_curve, boundary_samples
from compop.disc_geometry import DiscPoints, SampledCurve
from compop.errors import DomainError
from compop.symbols import CornerSymbol


def test_log_abs_matches_direct_product():
    zeros = np.array([0.5, 0.3 + 0.4j, -0.7j])
    B = BlaschkeProduct(2, DiscPoints.from_z(zeros), [1, 2, 1])
    z = np.array([0.1 + 0.2j, -0.6, 0.9j])
    direct = z ** 2
    for a, k in zip(zeros, (1, 2, 1)):
        direct = direct * ((a - z) / (1 - np.conj(a) * z)) ** k
    assert np.allclose(B.log_abs(z), np.log(np.abs(direct)), atol=1e-13)
    assert np.allclose(B(z), direct, atol=1e-14)


def test_unimodular_on_circle():
    B = build_radial_blaschke(0.9, 12)
    t = np.linspace(-np.pi, np.pi, 101)
    assert np.allclose(np.abs(B(np.exp(1j * t))), 1.0, atol=1e-12)


def test_degree_and_monomial():
    assert monomial_blaschke(7).degree == 6
    assert build_radial_blaschke(0.9, 20).degree == 19


def test_invalid_zeros():
    with pytest.raises(DomainError):
        BlaschkeProduct(0, DiscPoints.from_z([1.0]), [1])


def test_beta_constant_against_series_and_limit():
    for lam in (0.1, 0.5, 0.9):
        assert beta_constant(lam) == pytest.approx(beta_series(lam), rel=1e-12)
    assert beta_constant(1.0) == pytest.approx(math.pi ** 2 / 2, rel=1e-12)


def test_curve_m_grid_bounds():
    g = curve_m_grid(200)
    assert g[0] == 1 and g[-1] == (200 - 1) // 6


def test_curve_blaschke_small_on_far_boundary():
    phi = CornerSymbol(0.5)
    t_r = 1e-6
    curve = _omega_curve(phi, t_r, 4096)
    pts = DiscPoints(phi.boundary_co(boundary_samples(t_r, 5000)))
    B, m, val = best_curve_blaschke(curve, 60, pts)
    assert B.degree == 59
    assert val == pytest.approx(log_sup_modulus(B, pts))
    assert val <= log_sup_modulus(build_curve_blaschke(curve, 60), pts) + 1e-12
    assert val < -1.0
