import math

import numpy as np
import pytest

from compop.disc_geometry import (
    DiscPoints,
    SampledCurve,
    equal_hyp_spacing,
    hyp_dist,
    hyp_length,
    mobius,
    one_minus_abs2,
    pseudo_dist,
)
from compop.errors import DomainError


def test_pseudo_dist_matches_direct_formula():
    rng = np.random.default_rng(1)
    z = 0.9 * rng.uniform(0, 1, 50) * np.exp(1j * rng.uniform(-np.pi, np.pi, 50))
    w = 0.9 * rng.uniform(0, 1, 50) * np.exp(1j * rng.uniform(-np.pi, np.pi, 50))
    direct = np.abs(z - w) / np.abs(1 - np.conj(w) * z)
    assert np.allclose(pseudo_dist(z, w), direct, rtol=1e-13)


def test_hyp_dist_radial_closed_form():
    for r in (0.1, 0.5, 0.99, 1 - 1e-9):
        assert hyp_dist(0.0, r) == pytest.approx(math.log((1 + r) / (1 - r)), rel=1e-9)


def test_hyp_dist_is_mobius_invariant():
    a, z, w = 0.3 + 0.4j, 0.5 - 0.2j, -0.1 + 0.7j
    assert hyp_dist(mobius(a, z), mobius(a, w)) == pytest.approx(hyp_dist(z, w), rel=1e-12)


def test_co_form_keeps_precision_near_one():
    co = np.array([1e-20 + 0j])
    assert one_minus_abs2(co)[0] == pytest.approx(2e-20, rel=1e-12)
    assert DiscPoints(co).log_abs()[0] == pytest.approx(-1e-20, rel=1e-12)


def test_boundary_points_rejected():
    with pytest.raises(DomainError):
        pseudo_dist(1.0, 0.0)


def test_hyp_length_of_radial_segment():
    r = np.linspace(0, 0.9, 20001)
    curve = SampledCurve.from_z(r.astype(complex))
    assert hyp_length(curve) == pytest.approx(math.log(1.9 / 0.1), rel=1e-6)


def test_equal_hyp_spacing_is_equidistant():
    r = np.linspace(0, 0.99, 40001)
    pts = equal_hyp_spacing(SampledCurve.from_z(r.astype(complex)), 11)
    d = hyp_dist(pts.z[:-1], pts.z[1:])
    assert np.ptp(d) < 1e-3 * d.mean()
