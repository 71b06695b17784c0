import math

import numpy as np
import pytest

from compop.carleson import (
    box_sup,
    carleson_norm_upper,
    gram_matrix,
    gram_norm,
    halfplane_lattice,
    lattice_Z,
    log_delta,
    upsilon,
)
from compop.disc_geometry import DiscPoints
from compop.errors import DomainError


def test_gram_matrix_is_kernel_matrix():
    z = np.array([0.1, 0.5j, -0.3 + 0.2j])
    G = gram_matrix(DiscPoints.from_z(z))
    assert np.allclose(G, 1 / (1 - np.conj(z)[None, :] * z[:, None]), atol=1e-14)
    assert np.all(np.linalg.eigvalsh(G) > 0)


def test_gram_norm_single_point():
    z = 0.6
    assert gram_norm(DiscPoints.from_z([z]), [2.0]) == pytest.approx(4 / (1 - z * z))


def test_log_delta_brute_force():
    Z = lattice_Z(0.5, 8)
    z = Z.z
    prods = [np.prod([abs(z[j] - z[k]) / abs(1 - np.conj(z[k]) * z[j]) for k in range(len(z)) if k != j])
             for j in range(len(z))]
    assert log_delta(Z) == pytest.approx(math.log(min(prods)), rel=1e-10)


def test_lattice_separation_inequality():
    for lam in (0.3, 0.5, 0.7, 0.9):
        assert log_delta(lattice_Z(lam, 200)) >= -(math.pi ** 2 / 2) / (1 - lam)


def test_halfplane_lattice_inside_disc():
    Z = halfplane_lattice(0.7, 0.5, 50)
    assert np.all(Z.one_minus_abs2() > 0)


def test_box_sup_single_point():
    # one point of mass 1-|z|^2 at radius r: the best square has side about 1-r
    Z = DiscPoints.from_z([0.9])
    s = box_sup(upsilon(Z))
    assert 0.5 <= s <= 4.0
    est = carleson_norm_upper(upsilon(Z))
    assert est.norm_upper == pytest.approx(est.constant * s)


def test_lattice_arguments_validated():
    with pytest.raises(DomainError):
        lattice_Z(1.0, 5)
