"""
Romberg Quadrature on the Frequency Axis
========================================
Trapezoid refinement with Richardson extrapolation, applied panel by panel
between the jump points of the integrand and truncated to a finite window
whose tail is bounded analytically.

Integrands are vectorized: `evaluate` receives a NumPy array of frequencies.

Usage:
    from kwire.quadrature import Integrand, integrate_line

    f = Integrand(evaluate=lambda w: np.exp(-np.abs(w)), jump_points=(0.0,), tail_scale=1.0)
    result = integrate_line(f, 1e-10, p)
    result.value, result.est_error
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .model import ModelParams

DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_LEVEL = 22
DEFAULT_MIN_LEVEL = 5
ABS_FLOOR = 1e-15
WINDOW_FACTOR = 30.0


class ConvergenceError(RuntimeError):
    """Romberg table did not converge; carries the best available estimate."""

    def __init__(self, message: str, best=None, est_error: float = math.inf,
                 panel: Optional[tuple[float, float]] = None, context: str = ""):
        super().__init__(message)
        self.best = best
        self.est_error = est_error
        self.panel = panel
        self.context = context


@dataclass(frozen=True)
class Integrand:
    """A function of frequency with declared discontinuities and tail decay.

    The integrand is bounded by tail_const * exp(-|w| / tail_scale) for
    large |w|. With real=True only the real part is integrated.
    """
    evaluate: Callable[[np.ndarray], np.ndarray]
    jump_points: tuple = ()
    tail_scale: float = 1.0
    tail_const: float = 1.0
    real: bool = False

    def __post_init__(self):
        points = tuple(float(x) for x in self.jump_points)
        if any(b <= a for a, b in zip(points, points[1:])):
            raise ValueError(f"jump_points must be strictly increasing, got {points}")
        object.__setattr__(self, "jump_points", points)

    def __call__(self, omega):
        values = self.evaluate(np.asarray(omega, dtype=float))
        return np.real(values) if self.real else values


@dataclass
class QuadratureResult:
    value: complex
    est_error: float
    panels: int = 1
    levels_used: list[int] = field(default_factory=list)


# ─────────────────────────────────────────────
# Romberg table
# ─────────────────────────────────────────────

def _romberg_rows(func, lo: float, hi: float):
    """Yield successive Romberg rows; row k has k+1 entries.

    Endpoints are sampled one ulp inside the panel so a jump sitting on the
    boundary contributes its one-sided limit.
    """
    width = hi - lo
    ends = np.array([np.nextafter(lo, hi), np.nextafter(hi, lo)])
    end_values = func(ends)
    trapezoid = 0.5 * width * (end_values[0] + end_values[1])
    row = [trapezoid]
    yield row

    n = 1
    while True:
        h = width / (2 * n)
        midpoints = lo + h * (2.0 * np.arange(n) + 1.0)
        trapezoid = 0.5 * trapezoid + h * np.sum(func(midpoints))
        new_row = [trapezoid]
        for k in range(1, len(row) + 1):
            factor = 4.0 ** k
            new_row.append(new_row[k - 1] + (new_row[k - 1] - row[k - 1]) / (factor - 1.0))
        row = new_row
        n *= 2
        yield row


def richardson_table(func, lo: float, hi: float, levels: int) -> list:
    """Diagonal entries R[k][k] for levels 1..levels."""
    diagonal = []
    for row in _romberg_rows(func, lo, hi):
        diagonal.append(row[-1])
        if len(diagonal) == levels:
            return diagonal
    return diagonal


def romberg_panel(f, lo: float, hi: float, rel_tol: float = DEFAULT_REL_TOL,
                  max_level: int = DEFAULT_MAX_LEVEL,
                  min_level: int = DEFAULT_MIN_LEVEL) -> QuadratureResult:
    """Integrate f over one smooth panel [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"empty panel [{lo}, {hi}]")
    if max_level < 1:
        raise ValueError(f"max_level must be >= 1, got {max_level}")

    previous = None
    level = 0
    for row in _romberg_rows(f, lo, hi):
        level += 1
        current = row[-1]
        if previous is not None:
            est_error = float(abs(current - previous))
            tolerance = max(rel_tol * abs(current), ABS_FLOOR)
            if level >= min(min_level, max_level) and est_error <= tolerance:
                return QuadratureResult(current, est_error, 1, [level])
        if level >= max_level:
            est_error = float(abs(current - previous)) if previous is not None else math.inf
            raise ConvergenceError(
                f"Romberg did not converge on [{lo:.6g}, {hi:.6g}] within {max_level} levels "
                f"(estimate {current!r}, error {est_error:.3e})",
                best=current, est_error=est_error, panel=(lo, hi),
            )
        previous = current


# ─────────────────────────────────────────────
# Whole frequency axis
# ─────────────────────────────────────────────

def window(p: ModelParams) -> float:
    """Half-width of the truncated integration window."""
    return WINDOW_FACTOR * max(p.omega_c, p.W)


def panel_edges(f: Integrand, p: ModelParams, splits=()) -> list[float]:
    omega_max = window(p)
    interior = {x for x in (*f.jump_points, *splits) if -omega_max < x < omega_max}
    return [-omega_max, *sorted(interior), omega_max]


def tail_bound(f: Integrand, p: ModelParams) -> float:
    """Both tails beyond the window, from the declared exponential envelope."""
    return 2.0 * f.tail_const * f.tail_scale * math.exp(-window(p) / f.tail_scale)


def integrate_line(f: Integrand, rel_tol: float, p: ModelParams,
                   max_level: int = DEFAULT_MAX_LEVEL, splits=()) -> QuadratureResult:
    edges = panel_edges(f, p, splits)
    total = 0.0
    est_error = tail_bound(f, p)
    levels = []

    for lo, hi in zip(edges, edges[1:]):
        try:
            panel = romberg_panel(f, lo, hi, rel_tol, max_level)
        except ConvergenceError as e:
            raise ConvergenceError(
                f"panel {len(levels) + 1}/{len(edges) - 1}: {e}",
                best=total + e.best, est_error=est_error + e.est_error, panel=e.panel,
            ) from e
        total = total + panel.value
        est_error += panel.est_error
        levels.extend(panel.levels_used)

    return QuadratureResult(total, est_error, len(edges) - 1, levels)


def midpoint_reference(f: Integrand, p: ModelParams, n: int = 2 ** 20,
                       chunk: int = 2 ** 16, splits=()):
    """Brute-force mid-point rule with n points per panel over the same window."""
    edges = panel_edges(f, p, splits)
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        h = (hi - lo) / n
        for start in range(0, n, chunk):
            k = np.arange(start, min(start + chunk, n))
            total = total + h * np.sum(f(lo + (k + 0.5) * h))
    return total
