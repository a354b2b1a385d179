"""
Quantum Wire Transport CLI
==========================
Sweeps the nonequilibrium one-particle correlation C_ij and the current I of
a biased lead-wire-lead system and writes CSV tables.

Usage:
    python run_kwire.py sweep-bias --i 4 --j 8 --ev 0:2:0.05 --out c48.csv
    python run_kwire.py profile --mode distance --i 4 --ev 1.6
    python run_kwire.py profile --mode position --d 4 --ev 1 --net-enhancement
    python run_kwire.py iv --ev 0:2:0.1
    python run_kwire.py iv --ev=-2:2:0.1         # "=" form for grids starting below zero
    python run_kwire.py period --scan L --values 20,40
    python run_kwire.py validate
    python run_kwire.py analyze c48.csv

Exit status: 0 success, 1 validation failure, 2 configuration error,
3 quadrature failure (CSV still written, failed rows hold nan).
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from .analysis import net_enhancement, summarize_sweep
from .model import ModelParams
from .observables import (
    SCANNABLE,
    crossing_scan,
    sweep_bias,
    sweep_distance,
    sweep_iv,
    sweep_position,
)
from .quadrature import DEFAULT_REL_TOL
from .storage import read_sweep_csv, write_sweep_csv
from .validation import ValidationContext, run_validation


# ─────────────────────────────────────────────
# Configuration
# ─────────────────────────────────────────────

DEFAULT_W = 2.0
DEFAULT_T_PRIME = 0.5
DEFAULT_WIRE_LENGTH = 20
DEFAULT_I = 4
DEFAULT_J = 8
DEFAULT_D = 4
DEFAULT_BIAS_GRID = "0:2:0.05"
DEFAULT_IV_GRID = "0:2:0.1"
DEFAULT_PROFILE_EV = "1"
DEFAULT_SCAN_VALUES = "20,40"
DEFAULT_SEED = 1234
DEFAULT_SAMPLES = 100

THREADS_ENV = "KWIRE_THREADS"

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3


class ConfigError(ValueError):
    """Invalid command-line or environment configuration."""


def _err(message: str) -> None:
    print(message, file=sys.stderr)


# ─────────────────────────────────────────────
# Run configuration
# ─────────────────────────────────────────────

def parse_grid(text: str) -> list[float]:
    """`start:stop:step` (stop included within half a step) or a single value."""
    parts = text.split(":")
    try:
        numbers = [float(x) for x in parts]
    except ValueError:
        raise ConfigError(f"bad grid {text!r}; expected start:stop:step or a number")
    if len(numbers) == 1:
        return numbers
    if len(numbers) != 3:
        raise ConfigError(f"bad grid {text!r}; expected start:stop:step")
    start, stop, step = numbers
    if not step > 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    if start > stop:
        raise ConfigError(f"grid start {start} exceeds stop {stop}")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [start + k * step for k in range(count)]


def parse_values(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"bad value list {text!r}; expected comma-separated numbers")


def threads_from_env() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV}={raw!r} is not an integer")
    if threads < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {threads}")
    return threads


@dataclass
class RunConfig:
    command: str
    W: float = DEFAULT_W
    t_prime: float = DEFAULT_T_PRIME
    L: int = DEFAULT_WIRE_LENGTH
    ev_grid: list[float] = field(default_factory=lambda: [0.0])
    i: int = DEFAULT_I
    j: int = DEFAULT_J
    d: int = DEFAULT_D
    mode: str = "distance"
    rel_tol: float = DEFAULT_REL_TOL
    out: Optional[str] = None
    threads: int = 1
    check_tol: Optional[float] = None
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    scan: str = "L"
    scan_values: list[float] = field(default_factory=list)
    net_enhancement: bool = False
    path: Optional[str] = None

    def params(self, eV: float = 0.0) -> ModelParams:
        try:
            return ModelParams(W=self.W, t_prime=self.t_prime, L=self.L, eV=eV)
        except ValueError as e:
            raise ConfigError(str(e))

    def validate(self) -> None:
        self.params()
        if not self.ev_grid:
            raise ConfigError("empty eV grid")
        if not 0 < self.rel_tol < 1:
            raise ConfigError(f"rel-tol must lie in (0, 1), got {self.rel_tol}")
        if self.command == "profile":
            if len(self.ev_grid) != 1:
                raise ConfigError("profile takes a single --ev value")
            if self.mode == "distance" and not 1 <= self.i <= self.L:
                raise ConfigError(f"--i {self.i} outside 1..{self.L}")
            if self.mode == "position" and not 1 <= self.d < self.L:
                raise ConfigError(f"--d {self.d} must satisfy 1 <= d < {self.L}")
        if self.command == "sweep-bias":
            for site in (self.i, self.j):
                if not 1 <= site <= self.L:
                    raise ConfigError(f"site {site} outside 1..{self.L}")
        if self.command == "period":
            if self.scan not in SCANNABLE:
                raise ConfigError(f"--scan must be one of {', '.join(SCANNABLE)}")
            if not self.scan_values:
                raise ConfigError("--values is empty")
            if len(self.ev_grid) < 2:
                raise ConfigError("period needs an eV grid with at least two points")
            for value in self.scan_values:
                try:
                    scanned = self.params().replace(**{self.scan: int(value) if self.scan == "L" else value})
                except ValueError as e:
                    raise ConfigError(f"--values {value:g}: {e}")
                if not (1 <= self.i <= scanned.L and 1 <= self.j <= scanned.L):
                    raise ConfigError(f"sites {self.i},{self.j} outside 1..{scanned.L}")
        if self.samples < 1:
            raise ConfigError(f"--samples must be >= 1, got {self.samples}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        defaults = {
            "sweep-bias": DEFAULT_BIAS_GRID,
            "profile": DEFAULT_PROFILE_EV,
            "iv": DEFAULT_IV_GRID,
            "period": DEFAULT_BIAS_GRID,
        }
        ev_text = getattr(args, "ev", None) or defaults.get(args.command, "0")
        cfg = cls(
            command=args.command,
            W=args.w,
            t_prime=args.t_prime,
            L=args.wire_length,
            ev_grid=parse_grid(ev_text),
            i=getattr(args, "i", DEFAULT_I),
            j=getattr(args, "j", DEFAULT_J),
            d=getattr(args, "d", DEFAULT_D),
            mode=getattr(args, "mode", "distance"),
            rel_tol=args.rel_tol,
            out=args.out,
            threads=threads_from_env(),
            check_tol=getattr(args, "check_tol", None),
            seed=getattr(args, "seed", DEFAULT_SEED),
            samples=getattr(args, "samples", DEFAULT_SAMPLES),
            scan=getattr(args, "scan", "L"),
            scan_values=parse_values(getattr(args, "values", None) or DEFAULT_SCAN_VALUES),
            net_enhancement=getattr(args, "net_enhancement", False),
            path=getattr(args, "path", None),
        )
        cfg.validate()
        return cfg


# ─────────────────────────────────────────────
# Output helpers
# ─────────────────────────────────────────────

def print_summary(summary: dict) -> None:
    _err("\n📊 Quick Summary:")
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        _err(f"   {key}: {value}")


def _finish_sweep(result, cfg: RunConfig) -> int:
    write_sweep_csv(result, cfg.out)
    if cfg.out:
        _err(f"✅ Saved: {cfg.out} ({len(result.rows)} rows)")
    print_summary(summarize_sweep(result))
    if result.failed:
        _err(f"❌ {len(result.failed)} row(s) failed; first: {result.failed[0].error}")
        return EXIT_QUADRATURE
    return EXIT_OK


# ─────────────────────────────────────────────
# Commands
# ─────────────────────────────────────────────

def cmd_sweep_bias(cfg: RunConfig) -> int:
    result = sweep_bias(cfg.i, cfg.j, cfg.ev_grid, cfg.params(), cfg.rel_tol, cfg.threads)
    return _finish_sweep(result, cfg)


def cmd_profile(cfg: RunConfig) -> int:
    eV = cfg.ev_grid[0]
    p = cfg.params()
    if cfg.mode == "distance":
        result = sweep_distance(cfg.i, p, eV, cfg.rel_tol, cfg.threads)
        return _finish_sweep(result, cfg)

    result = sweep_position(cfg.d, p, eV, cfg.rel_tol, cfg.threads)
    status = _finish_sweep(result, cfg)
    if cfg.net_enhancement and status == EXIT_OK:
        baseline = sweep_position(cfg.d, p, 0.0, cfg.rel_tol, cfg.threads)
        if baseline.failed:
            _err("⚠️  baseline profile at eV=0 failed; net enhancement skipped")
            return EXIT_QUADRATURE
        report = net_enhancement(result.values, baseline.values)
        _err(f"   net enhancement: total={report['total']:.6g} "
             f"amplitude={report['amplitude']:.6g} ratio={report['ratio']:.3g}")
    return status


def cmd_iv(cfg: RunConfig) -> int:
    result = sweep_iv(cfg.ev_grid, cfg.params(), cfg.rel_tol, cfg.threads)
    return _finish_sweep(result, cfg)


def cmd_period(cfg: RunConfig) -> int:
    result = crossing_scan(cfg.scan, cfg.scan_values, cfg.i, cfg.j, cfg.ev_grid,
                           cfg.params(), cfg.rel_tol, cfg.threads)
    write_sweep_csv(result, cfg.out)
    for row in result.rows:
        if row.ok:
            _err(f"   {cfg.scan}={row.x:g}: eV* = {row.value:.6g}")
        else:
            _err(f"   {cfg.scan}={row.x:g}: ⚠️  {row.error}")
    return EXIT_OK if not result.failed else EXIT_QUADRATURE


def cmd_validate(cfg: RunConfig) -> int:
    ctx = ValidationContext(
        params=cfg.params(),
        tolerance_floor=cfg.check_tol or 0.0,
        rel_tol=cfg.rel_tol,
        seed=cfg.seed,
        samples=cfg.samples,
    )

    def show(result):
        icon = "✅" if result.status == "PASS" else "❌"
        line = f"  {icon} {result.name:<32} {result.duration_ms:>9.0f}ms"
        if result.error:
            line += f"  {result.error}"
        _err(line)

    _err(f"\n{'=' * 60}")
    _err(f"  VALIDATION  W={cfg.W:g} T'={cfg.t_prime:g} L={cfg.L}")
    _err(f"{'=' * 60}")
    report = run_validation(ctx, on_result=show)

    if cfg.out:
        with open(cfg.out, "w") as f:
            json.dump(report.to_dict(), f, indent=2, default=str)
        _err(f"✅ Saved: {cfg.out}")

    print(report.summary_line())
    return EXIT_OK if report.ok else EXIT_VALIDATION_FAILED


def cmd_analyze(cfg: RunConfig) -> int:
    kind = "position" if cfg.mode == "position" else None
    try:
        result = read_sweep_csv(cfg.path, kind=kind)
    except (OSError, ValueError) as e:
        _err(f"❌ Could not read {cfg.path}: {e}")
        return EXIT_CONFIG
    print_summary(summarize_sweep(result))
    return EXIT_OK


COMMANDS = {
    "sweep-bias": cmd_sweep_bias,
    "profile": cmd_profile,
    "iv": cmd_iv,
    "period": cmd_period,
    "validate": cmd_validate,
    "analyze": cmd_analyze,
}


# ─────────────────────────────────────────────
# Entry point
# ─────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--w", type=float, default=DEFAULT_W, help="Lead band width W")
    common.add_argument("--t-prime", type=float, default=DEFAULT_T_PRIME, help="Lead-wire coupling T'")
    common.add_argument("--wire-length", type=int, default=DEFAULT_WIRE_LENGTH, help="Number of wire sites L")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL, help="Romberg relative tolerance")
    common.add_argument("--out", default=None, help="Output path (stdout when omitted)")

    parser = argparse.ArgumentParser(
        description="Nonequilibrium correlation and current of a biased quantum wire",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep-bias", parents=[common], help="C_ij against eV")
    p.add_argument("--i", type=int, default=DEFAULT_I)
    p.add_argument("--j", type=int, default=DEFAULT_J)
    p.add_argument("--ev", default=None,
                   help=f"eV grid start:stop:step (default {DEFAULT_BIAS_GRID}); use --ev=-1:1:0.05 for negative starts")

    p = sub.add_parser("profile", parents=[common], help="C over the wire at fixed eV")
    p.add_argument("--mode", choices=["distance", "position"], default="distance")
    p.add_argument("--i", type=int, default=DEFAULT_I, help="Fixed site for distance mode")
    p.add_argument("--d", type=int, default=DEFAULT_D, help="Separation for position mode")
    p.add_argument("--ev", default=None, help=f"Single eV value (default {DEFAULT_PROFILE_EV}); --ev=-1 when negative")
    p.add_argument("--net-enhancement", action="store_true",
                   help="Position mode: also report the enhancement over eV=0 summed over the wire")

    p = sub.add_parser("iv", parents=[common], help="Current against eV")
    p.add_argument("--ev", default=None,
                   help=f"eV grid (default {DEFAULT_IV_GRID}); write --ev=-1:1:0.1 when it starts below zero")

    p = sub.add_parser("period", parents=[common], help="First zero crossing of C_ij(eV) against a parameter")
    p.add_argument("--scan", choices=list(SCANNABLE), default="L")
    p.add_argument("--values", default=None, help=f"Comma-separated values (default {DEFAULT_SCAN_VALUES})")
    p.add_argument("--i", type=int, default=DEFAULT_I)
    p.add_argument("--j", type=int, default=DEFAULT_J)
    p.add_argument("--ev", default=None, help=f"eV grid (default {DEFAULT_BIAS_GRID}); --ev=START:STOP:STEP form for negative starts")

    p = sub.add_parser("validate", parents=[common], help="Run oracle and symmetry checks")
    p.add_argument("--check-tol", type=float, default=None, help="Loosen every check to at least this tolerance")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Random tuples for the oracle check")

    p = sub.add_parser("analyze", parents=[common], help="Summarize a CSV written by a sweep")
    p.add_argument("path")
    p.add_argument("--mode", choices=["distance", "position"], default="distance")

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
    except ConfigError as e:
        _err(f"❌ {e}")
        return EXIT_CONFIG
    return COMMANDS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
