import math

import numpy as np
import pytest
from scipy.integrate import quad

from compop.errors import DomainError
from compop.symbols import (
    CornerSymbol,
    ProfileSymbol,
    ScalarSymbol,
    conjugate_series,
    cusp_profile,
    herglotz,
    membership_check,
    poisson_eval,
    power_profile,
    prescribed_profile,
)


def _herglotz_quad(U, delta, theta):
    z = (1 - delta) * np.exp(1j * theta)

    def k(x, part):
        v = float(U(np.array([abs(x)]))[0]) * (np.exp(1j * x) + z) / (np.exp(1j * x) - z)
        return v.real if part == 0 else v.imag

    pts = sorted({theta, -theta, 0.0})
    re = quad(k, -np.pi, np.pi, args=(0,), points=pts, limit=400, epsabs=1e-13)[0]
    im = quad(k, -np.pi, np.pi, args=(1,), points=pts, limit=400, epsabs=1e-13)[0]
    return complex(re, im) / (2 * np.pi)


@pytest.mark.parametrize("make", [lambda: power_profile(0.5), cusp_profile])
@pytest.mark.parametrize("delta,theta", [(0.1, 0.3), (0.01, 0.05), (0.5, -1.0)])
def test_herglotz_matches_quadrature(make, delta, theta):
    U = make()
    assert herglotz(U, delta, theta) == pytest.approx(_herglotz_quad(U, delta, theta), abs=1e-8)


def test_poisson_positive_and_bounded():
    U = power_profile(0.5)
    u = poisson_eval(U, 0.99, 0.01)
    assert 0 < u < float(U(np.array([np.pi]))[0])


def test_conjugate_series_trig():
    t = (np.arange(128) + 0.5) * 2 * np.pi / 128
    assert np.allclose(conjugate_series(np.cos(3 * t)), np.sin(3 * t), atol=1e-13)
    assert np.allclose(conjugate_series(np.sin(5 * t)), -np.cos(5 * t), atol=1e-13)


def test_scalar_symbol():
    phi = ScalarSymbol(0.5)
    assert phi(np.array([0.4]))[0] == pytest.approx(0.2)


def test_corner_symbol_touches_at_one_only():
    phi = CornerSymbol(0.5)
    t = np.array([1e-8, 1e-3, 0.5, 3.0])
    mod = 1 - np.abs(phi.boundary(t))
    assert np.all(mod > 0)
    assert np.all(np.diff(mod) > 0)
    assert abs(phi.boundary(np.array([1e-12]))[0] - 1) < 1e-5


def test_profile_symbol_boundary_modulus():
    U = power_profile(0.5)
    phi = ProfileSymbol(U)
    t = np.array([1e-6, 0.1, 1.0])
    assert np.allclose(-phi.boundary_log_abs(t), U(t), rtol=1e-10)


def test_profile_shape_properties():
    for U in (cusp_profile(), power_profile(0.5), prescribed_profile()):
        t = np.geomspace(1e-200, 3.0, 400)
        v = U(t)
        assert np.all(v > 0)
        assert np.all(np.diff(v) >= -1e-9 * v[1:])


def test_membership_reports():
    assert membership_check(cusp_profile()).in_U
    rep = membership_check(power_profile(0.5))
    assert rep.in_U and rep.alpha_witness == pytest.approx(0.5, abs=0.05)


def test_herglotz_domain():
    with pytest.raises(DomainError):
        herglotz(power_profile(0.5), 0.0, 0.1)
