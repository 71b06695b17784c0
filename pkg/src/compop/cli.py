"""Command line interface: ``compop <subcommand> [options]``.

Exit codes: 0 success, 2 configuration or spec error, 3 numerical
non-convergence, 4 a check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checks import CHECKS, run_check
from .config import Config, load_config, validate
from .errors import ConfigError, ConvergenceError, DomainError
from .experiments import (
    bound_rows,
    build_symbol,
    emit_csv,
    fit_decay,
    parse_symbol_spec,
    read_csv,
    singular_values,
    sweep,
)

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE, EXIT_CHECK = 0, 2, 3, 4

# flag name -> config key
_OVERRIDES = {
    "rows_factor": "rows_factor",
    "grid": "upper_grid",
    "carleson_constant": "carleson_constant",
    "jobs": "jobs",
    "seed": "seed",
}


def _parse_n_list(text: str) -> list[int]:
    """``"10,20,30"`` or ranges ``"10-60"`` / ``"10-60:5"``; empty text gives an empty list."""
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            if "-" in part:
                rng, _, step = part.partition(":")
                lo, hi = rng.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1, int(step or 1)))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"bad n-list entry {part!r}") from None
    return sorted(set(out))


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--rows-factor", type=int)
    p.add_argument("--grid", type=int, help="boundary sample count for upper bounds")
    p.add_argument("--carleson-constant", type=float)
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output file (default: stdout)")


def _symbol_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--symbol", required=True, help="symbol spec, e.g. 'family=corner alpha=0.5'")
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-list", help="comma list or ranges, e.g. 10-60 or 5,10,20")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="compop", description="Approximation numbers of composition operators")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, hlp in (("singvals", "singular values sigma_1..sigma_n_max"),
                      ("bounds", "lower and upper bounds for each n"),
                      ("sweep", "singular values together with both bounds")):
        p = sub.add_parser(name, help=hlp)
        _common(p)
        _symbol_args(p)
    p = sub.add_parser("fit", help="fit a decay model to a sweep CSV")
    _common(p)
    p.add_argument("csv")
    p.add_argument("--model", choices=["sqrt_n", "cusp", "slow"], default="sqrt_n")
    p = sub.add_parser("check", help="run a named check (or 'all')")
    _common(p)
    p.add_argument("id", help="check id, one of: " + ", ".join(CHECKS) + ", all")
    p = sub.add_parser("config-dump", help="print the effective configuration")
    _common(p)
    return ap


def _config(args) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    changes = {key: getattr(args, flag) for flag, key in _OVERRIDES.items() if getattr(args, flag, None) is not None}
    cfg = cfg.replace(**changes)
    validate(cfg)
    return cfg


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _ns(args, spec) -> list[int]:
    if args.n_list is not None:
        return _parse_n_list(args.n_list)
    n_max = args.n_max if args.n_max is not None else spec.option("n_max")
    if n_max is None:
        raise ConfigError("give --n-list, --n-max or n_max=... in the symbol spec")
    return list(range(1, int(n_max) + 1))


def _meta(spec, cfg: Config) -> dict:
    return {"symbol": spec.symbol_id, "seed": cfg.seed}


def _run(args) -> int:
    cfg = _config(args)
    if args.command == "config-dump":
        _write(cfg.dump(), args.out)
        return EXIT_OK
    if args.command == "check":
        ids = list(CHECKS) if args.id == "all" else [args.id]
        if args.id != "all" and args.id not in CHECKS:
            raise ConfigError(f"unknown check id {args.id!r}; known: {', '.join(CHECKS)}")
        results = [run_check(i, cfg) for i in ids]
        _write("".join(r.line() + "\n" for r in results), args.out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK
    if args.command == "fit":
        fit = fit_decay(read_csv(args.csv), args.model, cfg)
        _write(f"model={fit.model} A={fit.A!r} B={fit.B!r} residual_rms={fit.residual_rms!r} "
               f"n_used={len(fit.n_used)}\n", args.out)
        return EXIT_OK
    spec = parse_symbol_spec(args.symbol)
    phi = build_symbol(spec, cfg)
    ns = _ns(args, spec)
    if args.command == "singvals":
        rows = singular_values(phi, max(ns), cfg) if ns else []
        keep = set(ns)
        rows = [r for r in rows if r.n in keep]
    elif args.command == "bounds":
        rows = bound_rows(phi, ns, cfg, spec=spec)
    else:
        rows = sweep(phi, ns, cfg, spec=spec)
    _write(emit_csv(rows, _meta(spec, cfg)), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
