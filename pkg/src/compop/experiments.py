"""Sweeps over ``n``, CSV emission and decay-model fits.

A sweep row records a singular value ``sigma_n`` next to the two-sided
bounds.  Rows are written as CSV under a ``# compop v1`` header line; every
float is written with ``repr`` so that parsing the file gives back the rows
exactly.
"""
from __future__ import annotations

import csv
import io
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .bounds import best_lower, best_upper
from .config import DEFAULT, Config
from .errors import ConfigError, ConvergenceError, DomainError
from .operator_numerics import (
    AliasingWarning,
    approximation_numbers,
    galerkin_matrix,
    reference_singular_values,
)
from .symbols import (
    AnalyticSymbol,
    ConstantSymbol,
    CornerSymbol,
    ProfileSymbol,
    ScalarSymbol,
    profile_from_spec,
)

CSV_HEADER = "# compop v1"

# ---------------------------------------------------------------------------
# symbol specs

_FAMILY_KEYS = {
    "corner": {"alpha"},
    "power": {"alpha"},
    "cusp": set(),
    "smooth": {"c", "kappa"},
    "prescribed": {"g"},
    "scalar": {"s"},
    "constant": {"c"},
}
_OPTION_KEYS = {"n_max"}


@dataclass(frozen=True)
class SymbolSpec:
    family: str
    params: tuple  # sorted (key, value-string) pairs
    options: tuple = ()

    @property
    def symbol_id(self) -> str:
        return ";".join([f"family={self.family}"] + [f"{k}={v}" for k, v in self.params])

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)

    def option(self, key: str, default=None):
        return dict(self.options).get(key, default)


def parse_symbol_spec(text: str) -> SymbolSpec:
    """Parse ``key=value`` tokens such as ``family=corner alpha=0.5``.

    Tokens may be separated by whitespace, newlines or ``;``.  Errors carry
    the 1-based line and column of the offending token.
    """
    fam = None
    params, options = {}, {}
    seen_at = {}
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        body = line.split("#", 1)[0].replace(";", " ")
        pos = 0
        for tok in body.split():
            col = body.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            if "=" not in tok:
                raise ConfigError(f"expected key=value, got {tok!r}", lineno, col)
            key, val = tok.split("=", 1)
            key = key.replace("-", "_")
            if not val:
                raise ConfigError(f"missing value for {key!r}", lineno, col + len(key) + 1)
            if key in seen_at:
                raise ConfigError(f"duplicate key {key!r}", lineno, col)
            seen_at[key] = (lineno, col)
            if key == "family":
                if val not in _FAMILY_KEYS:
                    raise ConfigError(f"unknown family {val!r}", lineno, col + len(key) + 1)
                fam = val
            elif key in _OPTION_KEYS:
                options[key] = val
            else:
                params[key] = val
    if fam is None:
        raise ConfigError("missing family=...", 1, 1)
    for key, val in params.items():
        line, col = seen_at[key]
        if key not in _FAMILY_KEYS[fam]:
            raise ConfigError(f"unknown parameter {key!r} for family {fam!r}", line, col)
        try:
            float(val) if key != "g" else None
        except ValueError:
            raise ConfigError(f"bad number {val!r} for {key!r}", line, col + len(key) + 1) from None
    for key, val in options.items():
        line, col = seen_at[key]
        try:
            int(val)
        except ValueError:
            raise ConfigError(f"bad integer {val!r} for {key!r}", line, col + len(key) + 1) from None
    return SymbolSpec(fam, tuple(sorted(params.items())), tuple(sorted(options.items())))


def build_symbol(spec: SymbolSpec | str, cfg: Config = DEFAULT) -> AnalyticSymbol:
    """Symbol object for a parsed (or textual) spec; ``symbol_id`` is the canonical spec."""
    if isinstance(spec, str):
        spec = parse_symbol_spec(spec)
    p = {k: v for k, v in spec.params}
    try:
        if spec.family == "scalar":
            phi = ScalarSymbol(float(p.get("s", 0.5)))
        elif spec.family == "constant":
            phi = ConstantSymbol(float(p.get("c", 0.5)))
        elif spec.family == "corner":
            phi = CornerSymbol(float(p.get("alpha", 0.5)))
        else:
            phi = ProfileSymbol(profile_from_spec(spec.family, p, cfg.boundary_grid))
    except DomainError as exc:
        raise ConfigError(str(exc), 1, 1) from exc
    phi.symbol_id = spec.symbol_id
    return phi


# ---------------------------------------------------------------------------
# rows and CSV


@dataclass(frozen=True, eq=False)
class SweepRow:
    symbol_id: str
    n: int
    sigma_n: float = math.nan
    lower: float = math.nan
    upper: float = math.nan
    K: int = 0
    M: int = 0
    fft_size: int = 0
    converged_flag: bool = False
    wall_ms: int = 0
    log_sigma_n: float = math.nan
    log_lower: float = math.nan
    log_upper: float = math.nan

    def cells(self) -> list[str]:
        return [_fmt(c, getattr(self, c)) for c in COLUMNS]

    def __eq__(self, other):
        # exact comparison of the serialised fields; NaN equals NaN
        return isinstance(other, SweepRow) and self.cells() == other.cells()

    def __hash__(self):
        return hash(tuple(self.cells()))


COLUMNS = [f.name for f in fields(SweepRow)]
_INT_COLS = {"n", "K", "M", "fft_size", "wall_ms"}
_STR_COLS = {"symbol_id"}


def _fmt(name, v) -> str:
    if name in _STR_COLS:
        return v
    if name == "converged_flag":
        return "1" if v else "0"
    if name in _INT_COLS:
        return str(int(v))
    return repr(float(v))


def emit_csv(rows, meta: dict | None = None) -> str:
    """CSV text: the version line, optional ``# key=value`` lines, header and rows."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for k, v in (meta or {}).items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


def parse_csv(text: str) -> list[SweepRow]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ConfigError(f"missing {CSV_HEADER!r} header", 1, 1)
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    reader = csv.reader(body)
    header = next(reader, None)
    if header != COLUMNS:
        raise ConfigError("unexpected CSV columns", 2, 1)
    rows = []
    for i, rec in enumerate(reader, start=1):
        if len(rec) != len(COLUMNS):
            raise ConfigError(f"row {i} has {len(rec)} fields", None, None)
        vals = {}
        for c, raw in zip(COLUMNS, rec):
            if c in _STR_COLS:
                vals[c] = raw
            elif c == "converged_flag":
                vals[c] = raw == "1"
            elif c in _INT_COLS:
                vals[c] = int(raw)
            else:
                vals[c] = float(raw)
        rows.append(SweepRow(**vals))
    return rows


def read_csv(path) -> list[SweepRow]:
    return parse_csv(Path(path).read_text())


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


# ---------------------------------------------------------------------------
# singular values


def singular_values(phi: AnalyticSymbol, n_max: int, cfg: Config = DEFAULT) -> list[SweepRow]:
    """``sigma_1..sigma_{n_max}`` with a doubling convergence flag.

    Symbols bounded away from the circle use the monomial section with
    ``M = max(n_max, 32)`` columns and ``K = rows_factor * M`` rows; symbols
    touching the circle use the model-space reference with ``cfg.ref_basis``
    basis functions.  Doubling means ``(K, M) -> (2K, 2M)`` in both cases.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    t0 = time.perf_counter()
    if phi.touches_boundary:
        ref = reference_singular_values(phi, n_max, max(cfg.ref_basis, n_max), cfg)
        sigma, conv, K, M, F = ref.sigma, ref.converged, ref.K, ref.M, 0
    else:
        M = max(n_max, 32)
        K = cfg.rows_factor * M
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AliasingWarning)
            G1 = galerkin_matrix(phi, K, M, cfg=cfg)
            G2 = galerkin_matrix(phi, 2 * K, 2 * M, cfg=cfg)
        s1 = approximation_numbers(G1, n_max)
        sigma = approximation_numbers(G2, n_max)
        conv = np.abs(sigma - s1) <= cfg.convergence_tol * np.abs(sigma)
        # entries below the floor carry no relative information
        conv |= (sigma < cfg.sv_floor) & (s1 < cfg.sv_floor)
        K, M, F = G2.K, G2.M, G2.fft_size
    wall = int(round(1000 * (time.perf_counter() - t0))) if cfg.record_timing else 0
    sym = getattr(phi, "symbol_id", "custom")
    return [SweepRow(sym, i + 1, float(s), K=K, M=M, fft_size=F, converged_flag=bool(c), wall_ms=wall,
                     log_sigma_n=_log(float(s)))
            for i, (s, c) in enumerate(zip(sigma, conv))]


# ---------------------------------------------------------------------------
# bounds


def _bound_pair(phi: AnalyticSymbol, n: int, cfg: Config, lower: bool, upper: bool):
    lo = up = math.nan
    if lower:
        lo = best_lower(phi, n, cfg=cfg).log_lower
    if upper:
        try:
            up = best_upper(phi, n, cfg=cfg).log_upper
        except DomainError:
            up = math.nan
    return lo, up


def _bound_worker(args):
    spec, n, cfg, lower, upper = args
    phi = build_symbol(spec, cfg)
    return _bound_pair(phi, n, cfg, lower, upper)


def bound_rows(phi: AnalyticSymbol, ns, cfg: Config = DEFAULT, lower: bool = True, upper: bool = True,
               spec: SymbolSpec | None = None, sigma: dict | None = None) -> list[SweepRow]:
    """One row per ``n`` with ``log_lower``/``log_upper`` (and ``sigma_n`` when given).

    With ``cfg.jobs > 1`` and a ``spec`` the evaluations run in a process
    pool; rows are always returned in increasing ``n``.
    """
    ns = sorted(int(n) for n in ns)
    if len(set(ns)) != len(ns):
        raise DomainError("n values must be distinct")
    if ns and ns[0] < 1:
        raise DomainError("n must be at least 1")
    t0 = time.perf_counter()
    if cfg.jobs > 1 and spec is not None and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            pairs = list(pool.map(_bound_worker, [(spec, n, cfg, lower, upper) for n in ns]))
    else:
        pairs = [_bound_pair(phi, n, cfg, lower, upper) for n in ns]
    wall = int(round(1000 * (time.perf_counter() - t0) / max(len(ns), 1))) if cfg.record_timing else 0
    sym = getattr(phi, "symbol_id", "custom")
    rows = []
    for n, (lo, up) in zip(ns, pairs):
        base = (sigma or {}).get(n)
        kw = {}
        if base is not None:
            kw = {"sigma_n": base.sigma_n, "K": base.K, "M": base.M, "fft_size": base.fft_size,
                  "converged_flag": base.converged_flag, "log_sigma_n": base.log_sigma_n}
        rows.append(SweepRow(sym, n, lower=_lin(lo), upper=_lin(up), wall_ms=wall, log_lower=lo, log_upper=up, **kw))
    return rows


def _lin(logv: float) -> float:
    if math.isnan(logv):
        return math.nan
    return 0.0 if logv < math.log(1e-300) else math.exp(logv)


def sweep(phi: AnalyticSymbol, ns, cfg: Config = DEFAULT, lower: bool = True, upper: bool = True,
          spec: SymbolSpec | None = None) -> list[SweepRow]:
    """Singular values and bounds for every ``n`` in ``ns``."""
    ns = sorted(int(n) for n in ns)
    if not ns:
        return []
    sig = {r.n: r for r in singular_values(phi, ns[-1], cfg)}
    return bound_rows(phi, ns, cfg, lower, upper, spec, sig)


# ---------------------------------------------------------------------------
# fits


@dataclass(frozen=True)
class DecayFit:
    model: str
    A: float
    B: float
    residual_rms: float
    n_used: tuple


def _omega_for(symbol_id: str):
    spec = parse_symbol_spec(symbol_id)
    phi = build_symbol(spec)
    if not isinstance(phi, ProfileSymbol):
        raise DomainError("the cusp model needs a profile symbol")
    return phi.U.aux.omega


def fit_decay(rows, model: str, cfg: Config = DEFAULT, omega=None) -> DecayFit:
    """Least squares in the log domain over the configured ``n`` window.

    Models: ``sqrt_n`` (``log a = A - B sqrt(n)``), ``cusp``
    (``log a = A - B n/omega_U(n)``) and ``slow`` (``log a = A - B log log n``,
    i.e. ``a = e^A/(log n)^B``).
    """
    hi = cfg.fit_n_max or math.inf
    use = [r for r in rows if cfg.fit_n_min <= r.n <= hi and r.sigma_n > cfg.sv_floor]
    if model == "slow":
        use = [r for r in use if r.n >= 2]
    if len(use) < 6:
        raise DomainError(f"insufficient data: {len(use)} rows above the floor, need 6")
    n = np.array([r.n for r in use], dtype=float)
    y = np.array([r.log_sigma_n for r in use])
    if model == "sqrt_n":
        x = np.sqrt(n)
    elif model == "cusp":
        omega = omega or _omega_for(use[0].symbol_id)
        x = np.array([v / omega(v) for v in n])
    elif model == "slow":
        x = np.log(np.log(n))
    else:
        raise DomainError(f"unknown model {model!r}")
    X = np.column_stack([np.ones_like(x), -x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    rms = float(np.sqrt(np.mean(res ** 2)))
    if not math.isfinite(rms):
        raise ConvergenceError("non-finite fit residual")
    return DecayFit(model, float(coef[0]), float(coef[1]), rms, tuple(int(v) for v in n))

