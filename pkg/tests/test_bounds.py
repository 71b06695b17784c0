import math

import numpy as np
import pytest

from compop.blaschke import monomial_blaschke
from compop.bounds import best_lower, best_upper, lower_bound, symbol_kind, upper_bound
from compop.config import Config
from compop.errors import DomainError
from compop.operator_numerics import reference_singular_values
from compop.symbols import CornerSymbol, ProfileSymbol, ScalarSymbol, prescribed_profile


@pytest.fixture(scope="module")
def corner():
    phi = CornerSymbol(0.5)
    return phi, reference_singular_values(phi, 30, 256)


@pytest.mark.parametrize("n", [10, 20, 30])
def test_corner_sandwich(corner, n):
    phi, ref = corner
    s = math.log(ref.sigma[n - 1])
    lo = best_lower(phi, n).log_lower
    up = best_upper(phi, n).log_upper
    assert lo <= s <= up


def test_lower_bound_single_point_kernel():
    # n = 1 with one point: lower bound is a valid lower bound for the norm
    phi = ScalarSymbol(0.5)
    rep = lower_bound(phi, np.array([0.3]))
    assert rep.log_lower <= 0.0 + 1e-12


def test_upper_bound_monomial_dominates(corner):
    phi, ref = corner
    for t_r in (1e-6, 1e-3, 0.1):
        rep = upper_bound(phi, monomial_blaschke(10), t_r=t_r)
        assert rep.log_upper >= math.log(ref.sigma[9])


def test_kinds():
    assert symbol_kind(CornerSymbol(0.5)) == "corner"


def test_prescribed_lower_beats_target():
    phi = ProfileSymbol(prescribed_profile())
    lo = best_lower(phi, 16).log_lower
    ref = reference_singular_values(phi, 16, 128, check=False)
    assert lo <= math.log(ref.sigma[15])
    assert lo > -6.0


def test_unknown_strategy():
    with pytest.raises(DomainError):
        best_upper(CornerSymbol(0.5), 10, strategy="nope")
