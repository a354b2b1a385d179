"""
Correlation Function, Current and Parameter Sweeps
==================================================
C_ij = -int dw/2pi (i/2)(F_ij(w) + F_ji(w))
I    = (T'^4/2) int dw/2pi |G^a_L1|^2 {(g^a - g^r) f_alpha'alpha' + f_alphaalpha (g^r - g^a)}

Sweeps evaluate rows concurrently (ThreadPoolExecutor) and always return them
in grid order. A failing row is recorded with value nan and its message.

Usage:
    from kwire.observables import correlation, current, sweep_bias

    correlation(4, 8, p).value
    sweep_bias(4, 8, [0.0, 0.5, 1.0], p, workers=4)
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .analysis import first_zero_crossing
from .dyson import DysonChain
from .model import ModelParams, Side, f_lead, g_lead_a, g_lead_r
from .quadrature import DEFAULT_REL_TOL, ConvergenceError, Integrand, integrate_line, window

# Imaginary residue allowed in integrands that must be real
REALITY_TOL = 1e-12
SPOT_SAMPLES = 64


@dataclass(frozen=True)
class CorrelationPoint:
    i: int
    j: int
    eV: float
    value: float
    est_error: float


@dataclass(frozen=True)
class CurrentPoint:
    eV: float
    value: float
    est_error: float


@dataclass(frozen=True)
class SweepRow:
    x: float
    value: float
    est_error: float
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SweepResult:
    """Tagged table of (independent variable, observable) rows."""
    kind: str     # "bias", "distance", "position", "iv", "crossing"
    x_name: str   # CSV header of the independent column
    y_name: str   # CSV header of the observable column
    rows: list[SweepRow] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def xs(self) -> np.ndarray:
        return np.array([r.x for r in self.rows], dtype=float)

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows], dtype=float)

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.est_error for r in self.rows], dtype=float)

    @property
    def failed(self) -> list[SweepRow]:
        return [r for r in self.rows if not r.ok]


# ─────────────────────────────────────────────
# Integrands
# ─────────────────────────────────────────────

def _jumps(p: ModelParams) -> tuple:
    return tuple(sorted({-p.eV / 2, 0.0, p.eV / 2}))


def _spot_check_real(raw, context: str) -> None:
    residue = float(np.max(np.abs(np.imag(raw))))
    if residue > REALITY_TOL:
        raise ArithmeticError(f"{context}: integrand has imaginary residue {residue:.3e}")


def _spot_grid(p: ModelParams) -> np.ndarray:
    omega_max = window(p) / 10
    return np.concatenate([np.linspace(-omega_max, omega_max, SPOT_SAMPLES), _jumps(p)])


def _correlation_raw(i: int, j: int, p: ModelParams):
    def raw(omega):
        chain = DysonChain(omega, p)
        return -0.5j * (chain.f_full(i, j) + chain.f_full(j, i)) / (2 * math.pi)
    return raw


def correlation_integrand(i: int, j: int, p: ModelParams) -> Integrand:
    raw = _correlation_raw(i, j, p)
    # |F| <= |f| + O(T') terms, all carrying the cutoff envelope
    return Integrand(
        evaluate=raw,
        jump_points=_jumps(p),
        tail_scale=p.omega_c,
        tail_const=(4.0 + 4.0 * p.t_prime) / (2 * math.pi),
        real=True,
    )


def _current_raw(p: ModelParams):
    def raw(omega):
        omega = np.asarray(omega, dtype=float)
        _, Ga_L1 = DysonChain(omega, p).gr_1L_and_ga_L1()
        ga = g_lead_a(omega, p)
        gr = g_lead_r(omega, p)
        braces = (ga - gr) * f_lead(omega, Side.RIGHT, p) + f_lead(omega, Side.LEFT, p) * (gr - ga)
        return p.t_prime ** 4 / 2 * np.abs(Ga_L1) ** 2 * braces / (2 * math.pi)
    return raw


def current_integrand(p: ModelParams) -> Integrand:
    # braces vanish outside [-|eV|/2, |eV|/2]; the envelope is the wire cutoff
    return Integrand(
        evaluate=_current_raw(p),
        jump_points=_jumps(p),
        tail_scale=p.omega_c,
        tail_const=p.t_prime ** 4 * 8.0 / p.W ** 2,
        real=True,
    )


# ─────────────────────────────────────────────
# Observables
# ─────────────────────────────────────────────

def correlation(i: int, j: int, p: ModelParams, rel_tol: float = DEFAULT_REL_TOL) -> CorrelationPoint:
    # symmetric in (i, j) by construction of the integrand
    a, b = (i, j) if i <= j else (j, i)
    integrand = correlation_integrand(a, b, p)
    context = f"C[{i},{j}] at eV={p.eV:g}"

    spot = _spot_grid(p)
    raw = integrand.evaluate(spot)
    _spot_check_real(raw, context)
    chain = DysonChain(spot, p)
    im_form = np.imag(chain.f_full(a, b)) / (2 * math.pi)
    if np.max(np.abs(np.real(raw) - im_form)) > REALITY_TOL:
        raise ArithmeticError(f"{context}: symmetrized integrand disagrees with Im F_ij / 2pi")

    try:
        result = integrate_line(integrand, rel_tol, p)
    except ConvergenceError as e:
        raise ConvergenceError(f"{context}: {e}", best=e.best, est_error=e.est_error,
                               panel=e.panel, context=context) from e
    return CorrelationPoint(i, j, p.eV, float(np.real(result.value)), result.est_error)


def current(p: ModelParams, rel_tol: float = DEFAULT_REL_TOL) -> CurrentPoint:
    integrand = current_integrand(p)
    context = f"I at eV={p.eV:g}"
    _spot_check_real(integrand.evaluate(_spot_grid(p)), context)
    try:
        result = integrate_line(integrand, rel_tol, p)
    except ConvergenceError as e:
        raise ConvergenceError(f"{context}: {e}", best=e.best, est_error=e.est_error,
                               panel=e.panel, context=context) from e
    return CurrentPoint(p.eV, float(np.real(result.value)), result.est_error)


# ─────────────────────────────────────────────
# Sweeps
# ─────────────────────────────────────────────

def _run_rows(xs, compute: Callable[[float], tuple[float, float]], workers: int = 1) -> list[SweepRow]:
    def one(x):
        try:
            value, est_error = compute(x)
            return SweepRow(x, value, est_error)
        except (ConvergenceError, ArithmeticError) as e:
            return SweepRow(x, math.nan, math.nan, str(e))

    if workers <= 1 or len(xs) <= 1:
        return [one(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, xs))


def _params_dict(p: ModelParams, **extra) -> dict:
    return {"W": p.W, "t_prime": p.t_prime, "L": p.L, "eV": p.eV, **extra}


def sweep_bias(i: int, j: int, eV_grid, p: ModelParams,
               rel_tol: float = DEFAULT_REL_TOL, workers: int = 1) -> SweepResult:
    grid = [float(x) for x in eV_grid]
    if not grid:
        raise ValueError("eV grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("eV grid must be sorted")

    def compute(eV):
        point = correlation(i, j, p.with_bias(eV), rel_tol)
        return point.value, point.est_error

    return SweepResult("bias", "eV", "C", _run_rows(grid, compute, workers),
                       _params_dict(p, i=i, j=j))


def sweep_distance(i0: int, p: ModelParams, eV: float,
                   rel_tol: float = DEFAULT_REL_TOL, workers: int = 1) -> SweepResult:
    biased = p.with_bias(eV)

    def compute(i):
        point = correlation(i0, int(i), biased, rel_tol)
        return point.value, point.est_error

    rows = _run_rows(list(range(1, p.L + 1)), compute, workers)
    return SweepResult("distance", "i", "C", rows, _params_dict(biased, i0=i0))


def sweep_position(d: int, p: ModelParams, eV: float,
                   rel_tol: float = DEFAULT_REL_TOL, workers: int = 1) -> SweepResult:
    if not 1 <= d < p.L:
        raise ValueError(f"distance d={d} must satisfy 1 <= d < L={p.L}")
    biased = p.with_bias(eV)

    def compute(i):
        point = correlation(int(i), int(i) + d, biased, rel_tol)
        return point.value, point.est_error

    rows = _run_rows(list(range(1, p.L - d + 1)), compute, workers)
    return SweepResult("position", "i", "C", rows, _params_dict(biased, d=d))


def sweep_iv(eV_grid, p: ModelParams, rel_tol: float = DEFAULT_REL_TOL,
             workers: int = 1) -> SweepResult:
    grid = [float(x) for x in eV_grid]
    if not grid:
        raise ValueError("eV grid is empty")

    def compute(eV):
        point = current(p.with_bias(eV), rel_tol)
        return point.value, point.est_error

    return SweepResult("iv", "eV", "I", _run_rows(grid, compute, workers), _params_dict(p))


SCANNABLE = ("L", "W", "t_prime")


def crossing_scan(name: str, values, i: int, j: int, eV_grid, p: ModelParams,
                  rel_tol: float = DEFAULT_REL_TOL, workers: int = 1) -> SweepResult:
    """First zero crossing eV* of C_ij(eV) as one parameter varies.

    est_error holds half the grid step, the resolution of the crossing.
    """
    if name not in SCANNABLE:
        raise ValueError(f"cannot scan {name!r}; choose one of {', '.join(SCANNABLE)}")
    grid = [float(x) for x in eV_grid]
    resolution = (grid[1] - grid[0]) / 2 if len(grid) > 1 else math.nan

    rows = []
    for value in values:
        scanned = p.replace(**{name: int(value) if name == "L" else float(value)})
        sweep = sweep_bias(i, j, grid, scanned, rel_tol, workers)
        if sweep.failed:
            rows.append(SweepRow(float(value), math.nan, math.nan, sweep.failed[0].error))
            continue
        crossing = first_zero_crossing(sweep.xs, sweep.values, sweep.errors)
        if crossing is None:
            rows.append(SweepRow(float(value), math.nan, math.nan, "no zero crossing on grid"))
        else:
            rows.append(SweepRow(float(value), crossing, resolution))
    return SweepResult("crossing", name, "eV_star", rows, _params_dict(p, i=i, j=j))
