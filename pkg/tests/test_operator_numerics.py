import math
import warnings

import numpy as np
import pytest

from compop.errors import DomainError
from compop.operator_numerics import (
    AliasingWarning,
    adjoint_kernel_check,
    approximation_numbers,
    galerkin_matrix,
    model_basis,
    operator_norm_bound,
    reference_singular_values,
)
from compop.symbols import ConstantSymbol, CornerSymbol, FunctionSymbol, ScalarSymbol


def test_diagonal_symbol_exact():
    sv = approximation_numbers(galerkin_matrix(ScalarSymbol(0.9), 256, 32), 30)
    assert np.max(np.abs(sv - 0.9 ** np.arange(30))) < 1e-12


def test_rank_one_constant():
    sv = approximation_numbers(galerkin_matrix(ConstantSymbol(0.5), 512, 64), 2)
    assert sv[0] == pytest.approx(2 / math.sqrt(3), abs=1e-10)
    assert sv[1] < 1e-12


def test_galerkin_columns_are_power_coefficients():
    phi = FunctionSymbol(lambda z: 0.5 * z + 0.25 * z * z, "poly")
    A = galerkin_matrix(phi, 64, 4).A
    assert np.allclose(A[:5, 2], [0, 0, 0.25, 0.25, 0.0625], atol=1e-14)


def test_adjoint_identity_corner():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        assert adjoint_kernel_check(CornerSymbol(0.5), 0.3, 512) < 1e-8


def test_norm_bound_dominates_sigma1():
    phi = CornerSymbol(0.5)
    ref = reference_singular_values(phi, 4, 128, check=False)
    assert ref.sigma[0] <= operator_norm_bound(complex(phi(np.array([0j]))[0])) + 1e-12


def test_model_basis_orthonormal_on_circle():
    t = (np.arange(4096) + 0.5) * 2 * np.pi / 4096
    E = model_basis(1 - np.exp(1j * t), 4, np.array([0.5, 0.2, 0.05]))
    G = E.conj().T @ E / t.size
    assert np.allclose(G, np.eye(7), atol=1e-10)


def test_reference_agrees_with_galerkin_for_scalar_like_symbol():
    # a symbol with |phi| <= 0.9 on the circle is resolved by both discretisations
    phi = FunctionSymbol(lambda z: 0.45 * (1 + z), "half_shift", touches_boundary=False)
    g = approximation_numbers(galerkin_matrix(phi, 512, 64), 8)
    r = reference_singular_values(phi, 8, 64, check=False).sigma
    # the model space is a compression: never above, and equal where monomials dominate
    assert np.all(r <= g * (1 + 1e-10))
    assert np.allclose(r[:4], g[:4], rtol=1e-6)


def test_reference_convergence_flags_corner():
    ref = reference_singular_values(CornerSymbol(0.5), 10, 128)
    assert ref.converged.all()
    assert np.all(np.diff(ref.sigma) <= 0)


def test_count_validation():
    with pytest.raises(DomainError):
        galerkin_matrix(ScalarSymbol(0.5), 8, 16)
