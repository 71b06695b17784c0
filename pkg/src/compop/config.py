"""Run configuration: a flat set of typed keys with documented defaults.

Config files are plain ``key=value`` lines; ``#`` starts a comment.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError


@dataclass(frozen=True)
class Config:
    # disc geometry
    curve_samples: int = 4096
    # symbols
    boundary_grid: int = 2 ** 16
    # carleson
    carleson_constant: float = 4.0
    carleson_depth: int = 24
    # galerkin (monomial sections)
    rows_factor: int = 8
    fft_factor: int = 4
    aliasing_threshold: float = 1e-3
    sv_floor: float = 1e-12
    # model-space reference
    ref_basis: int = 512
    ref_monomials: int = 32
    ref_pole_depth: float = 1e-30
    ref_quad_tmin: float = 1e-120
    ref_quad_width: float = 0.5
    convergence_tol: float = 0.01
    # bounds engine
    param_grid: int = 16
    upper_grid: int = 20000
    measure_panels_per_unit: int = 2
    # experiments
    seed: int = 12345
    jobs: int = 1
    record_timing: bool = False
    fit_n_min: int = 1
    fit_n_max: int = 0  # 0: no upper limit
    cache_dir: str = ""

    def replace(self, **changes) -> "Config":
        return dataclasses.replace(self, **changes)

    def items(self):
        for f in fields(self):
            yield f.name, getattr(self, f.name)

    def dump(self) -> str:
        return "".join(f"{k}={_fmt(v)}\n" for k, v in self.items())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _coerce(name: str, raw: str, kind, line=None, column=None):
    try:
        if kind is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(float(raw)) if "e" in raw.lower() else int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for key {name!r}", line, column) from None


_KINDS = {f.name: {"int": int, "float": float, "bool": bool, "str": str}[f.type] for f in fields(Config)}


def parse_overrides(pairs: dict[str, str], base: Config | None = None) -> Config:
    base = base or Config()
    changes = {}
    for key, raw in pairs.items():
        name = key.replace("-", "_")
        if name not in _KINDS:
            raise ConfigError(f"unknown config key {key!r}")
        changes[name] = _coerce(name, raw, _KINDS[name])
    cfg = base.replace(**changes)
    validate(cfg)
    return cfg


def load_config(path: str | Path, base: Config | None = None) -> Config:
    pairs = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError("expected key=value", lineno, col)
        key, raw = body.split("=", 1)
        name = key.strip().replace("-", "_")
        if name not in _KINDS:
            raise ConfigError(f"unknown config key {key.strip()!r}", lineno, body.index(key.strip()) + 1)
        pairs[name] = _coerce(name, raw.strip(), _KINDS[name], lineno, body.index("=") + 2)
    cfg = (base or Config()).replace(**pairs)
    validate(cfg)
    return cfg


def validate(cfg: Config) -> None:
    if cfg.carleson_constant < 1:
        raise ConfigError("carleson_constant must be >= 1")
    if cfg.carleson_depth < 1:
        raise ConfigError("carleson_depth must be >= 1")
    g = cfg.boundary_grid
    if g < 8 or g & (g - 1):
        raise ConfigError("boundary_grid must be a power of two >= 8")
    if cfg.rows_factor < 1 or cfg.fft_factor < 4:
        raise ConfigError("rows_factor must be >= 1 and fft_factor >= 4")
    if cfg.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if cfg.ref_basis < cfg.ref_monomials:
        raise ConfigError("ref_basis must be at least ref_monomials")
    if not 0 < cfg.convergence_tol < 1:
        raise ConfigError("convergence_tol must lie in (0, 1)")
    if not 0 < cfg.ref_pole_depth < 1:
        raise ConfigError("ref_pole_depth must lie in (0, 1)")


DEFAULT = Config()
