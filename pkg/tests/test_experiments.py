import math

import numpy as np
import pytest

from compop.config import Config
from compop.errors import ConfigError, DomainError
from compop.experiments import (
    SweepRow,
    bound_rows,
    build_symbol,
    emit_csv,
    fit_decay,
    parse_csv,
    parse_symbol_spec,
    singular_values,
)


def test_spec_parsing_and_canonical_id():
    spec = parse_symbol_spec("family=corner alpha=0.5 n_max=40")
    assert spec.symbol_id == "family=corner;alpha=0.5"
    assert spec.option("n_max") == "40"
    assert parse_symbol_spec(spec.symbol_id) == parse_symbol_spec("family=corner alpha=0.5")


@pytest.mark.parametrize("text,line,col", [
    ("family=corner alpha=x", 1, 21),
    ("family=corner\nbeta=1", 2, 1),
    ("family=nope", 1, 8),
    ("family=corner junk", 1, 15),
])
def test_spec_errors_carry_position(text, line, col):
    with pytest.raises(ConfigError) as e:
        parse_symbol_spec(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_scalar_singular_values_exact():
    rows = singular_values(build_symbol("family=scalar s=0.5"), 20)
    assert max(abs(r.sigma_n - 2.0 ** -(r.n - 1)) for r in rows) < 1e-14
    assert len(singular_values(build_symbol("family=scalar s=0.5"), 1)) == 1


def test_corner_column_monotone_and_converged():
    rows = singular_values(build_symbol("family=corner alpha=0.5"), 40)
    s = np.array([r.sigma_n for r in rows])
    assert np.all(np.diff(s) < 0) and s[-1] > Config().sv_floor
    assert all(r.converged_flag for r in rows)


def test_csv_round_trip_with_nan_and_inf():
    rows = [SweepRow("family=scalar;s=0.5", 1, 1.0, math.nan, 2.0, 8, 4, 32, True, 0, 0.0, math.nan, math.log(2)),
            SweepRow("family=scalar;s=0.5", 2, 0.1 + 0.2, 0.0, math.nan, 8, 4, 32, False, 5, math.log(0.3), -math.inf)]
    text = emit_csv(rows, {"seed": 1})
    assert text.startswith("# compop v1\n")
    assert parse_csv(text) == rows


def test_empty_bound_list_gives_header_only():
    text = emit_csv(bound_rows(build_symbol("family=corner alpha=0.5"), []))
    assert text.count("\n") == 2


def test_scalar_bounds_bracket_sigma1():
    rows = bound_rows(build_symbol("family=scalar s=0.5"), [1])
    assert rows[0].log_lower <= 0.0 + 1e-12


def test_fit_exact_synthetic():
    n = np.arange(1, 40)
    rows = [SweepRow("x", int(k), math.exp(3 - 2 * math.sqrt(k)), log_sigma_n=3 - 2 * math.sqrt(k)) for k in n]
    fit = fit_decay(rows, "sqrt_n", Config(sv_floor=0.0))
    assert fit.A == pytest.approx(3, abs=1e-10) and fit.B == pytest.approx(2, abs=1e-10)
    assert fit.residual_rms < 1e-12


def test_fit_needs_six_rows():
    rows = [SweepRow("x", k, 0.5 ** k, log_sigma_n=k * math.log(0.5)) for k in range(1, 5)]
    with pytest.raises(DomainError):
        fit_decay(rows, "sqrt_n")
