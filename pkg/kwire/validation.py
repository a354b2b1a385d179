"""
Validation Suite
================
Cross-checks the closed-form Green functions against the dense oracle and
runs the identity, null and symmetry checks on the observables.

Every module-level function named `check_*` is a check. It receives a
ValidationContext, raises AssertionError on failure and may return a dict of
details for the report.

Usage:
    from kwire.validation import ValidationContext, run_validation

    report = run_validation(ValidationContext(params))
    print(report.summary_line())          # PASS 9/9
"""

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import dyson, oracle
from .model import ModelParams, Side, f_lead, g_lead_a, g_lead_r, sgn
from .observables import correlation, current
from .quadrature import DEFAULT_REL_TOL, Integrand, integrate_line, romberg_panel


# ─────────────────────────────────────────────
# Result Data Structures
# ─────────────────────────────────────────────

@dataclass
class CheckResult:
    """Result of a single check."""
    name: str
    status: str  # "PASS" or "FAIL"
    duration_ms: float = 0
    error: Optional[str] = None
    details: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    """Results from the full suite."""
    results: list[CheckResult] = field(default_factory=list)
    total_duration_ms: float = 0

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.status == "PASS")

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if r.status == "FAIL")

    @property
    def ok(self) -> bool:
        return self.failed == 0 and bool(self.results)

    def summary_line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.passed}/{len(self.results)}"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "total": len(self.results),
            "duration_ms": self.total_duration_ms,
            "results": [
                {
                    "name": r.name,
                    "status": r.status,
                    "duration_ms": r.duration_ms,
                    "error": r.error,
                    "details": r.details,
                }
                for r in self.results
            ],
        }


@dataclass
class ValidationContext:
    """Parameters and tolerances shared by all checks.

    `tolerance_floor` loosens every check: a check with nominal tolerance
    `t` uses max(t, tolerance_floor).
    """
    params: ModelParams
    tolerance_floor: float = 0.0
    rel_tol: float = DEFAULT_REL_TOL
    seed: int = 1234
    samples: int = 100

    def tol(self, nominal: float) -> float:
        return max(nominal, self.tolerance_floor)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def _close(actual, expected, rel: float, abs_floor: float) -> bool:
    """Relative agreement, absolute below 1e-6."""
    actual = complex(actual)
    expected = complex(expected)
    if abs(expected) < 1e-6:
        return abs(actual - expected) <= abs_floor
    return abs(actual - expected) <= rel * abs(expected)


# ─────────────────────────────────────────────
# Checks
# ─────────────────────────────────────────────

def check_oracle_equivalence(ctx: ValidationContext) -> dict:
    p0 = ctx.params
    rng = ctx.rng()
    rel = ctx.tol(1e-10)
    abs_floor = ctx.tol(1e-12)
    L = p0.L
    worst = 0.0

    for _ in range(ctx.samples):
        omega = float(rng.uniform(-3 * p0.omega_c, 3 * p0.omega_c))
        i, j = (int(x) for x in rng.integers(1, L + 1, size=2))
        p = p0.with_bias(float(rng.uniform(-2.0, 2.0)))
        G_r, G_a, F = oracle.solve_dyson(omega, p)
        a, ap = 0, L + 1

        chain = dyson.DysonChain(omega, p)
        pairs = [
            (chain.ga_boundary(j), (G_a[1, j], G_a[L, j])),
            (chain.ga_terminal(j), (G_a[a, j], G_a[ap, j])),
            (chain.f_terminal(j), (F[a, j], F[ap, j])),
            ((chain.f_full(i, j),), (F[i, j],)),
            (chain.gr_1L_and_ga_L1(), (G_r[1, L], G_a[L, 1])),
        ]
        for closed, reference in pairs:
            for c, r in zip(closed, reference):
                if not _close(c, r, rel, abs_floor):
                    raise AssertionError(
                        f"closed form {complex(c)!r} != oracle {complex(r)!r} "
                        f"at omega={omega:.6g}, i={i}, j={j}, eV={p.eV:.6g}"
                    )
                if abs(r) >= 1e-6:
                    worst = max(worst, abs(complex(c) - complex(r)) / abs(r))
    return {"samples": ctx.samples, "worst_relative": worst}


def check_conjugation_identities(ctx: ValidationContext) -> dict:
    p = ctx.params.with_bias(1.0)
    tol = ctx.tol(1e-12)
    rng = ctx.rng()
    for omega in rng.uniform(-3 * p.omega_c, 3 * p.omega_c, size=10):
        G_r, G_a, F = oracle.solve_dyson(float(omega), p)
        assert np.abs(G_r.dagger() - G_a.values).max() < tol, "G_r^dagger != G_a"
        assert np.abs(F.dagger() + F.values).max() < tol, "F^dagger != -F"

        chain = dyson.DysonChain(float(omega), p)
        for i, j in ((1, p.L), (2, max(2, p.L - 3)), (p.L // 2, 1)):
            total = chain.f_full(i, j) + np.conj(chain.f_full(j, i))
            assert abs(total) < tol, f"F_full not anti-Hermitian at ({i},{j})"
        assert abs(chain.retarded_denominator - np.conj(chain.advanced_denominator)) < tol
    return {}


def check_dyson_residuals(ctx: ValidationContext) -> dict:
    p = ctx.params.with_bias(1.0)
    tol = ctx.tol(1e-12)
    worst = 0.0
    for omega in np.linspace(-3 * p.omega_c, 3 * p.omega_c, 13):
        residuals = oracle.dyson_residuals(float(omega), p)
        worst = max(worst, *residuals)
    assert worst < tol, f"Dyson residual {worst:.3e} exceeds {tol:.1e}"
    return {"worst_residual": worst}


def check_lead_consistency(ctx: ValidationContext) -> dict:
    p = ctx.params.with_bias(1.0)
    tol = ctx.tol(1e-14)
    omega = ctx.rng().uniform(-10, 10, size=100)
    for side in Side:
        mu = side.chemical_potential(p)
        expected = (g_lead_r(omega, p) - g_lead_a(omega, p)) * sgn(omega - mu)
        worst = float(np.max(np.abs(f_lead(omega, side, p) - expected)))
        assert worst < tol, f"lead consistency off by {worst:.3e} on {side.value}"
    return {}


def check_reduced_solver(ctx: ValidationContext) -> dict:
    p = ctx.params.with_bias(0.7)
    tol = ctx.tol(1e-12)
    for omega in (-2.5, -0.35, 0.0, 0.35, 1.1, 4.0):
        full = oracle.solve_dyson(omega, p)
        reduced = oracle.solve_dyson_reduced(omega, p)
        for a, b in zip(full, reduced):
            assert np.abs(a.values - b.values).max() < tol, f"reduced solve differs at omega={omega}"
    return {}


def check_quadrature_analytic(ctx: ValidationContext) -> dict:
    p = ctx.params
    cases = [
        (Integrand(lambda x: x ** 2), 0.0, 1.0, 1.0 / 3.0, 1e-12),
        (Integrand(np.sin), 0.0, math.pi, 2.0, 1e-10),
        (Integrand(lambda x: np.exp(-x)), 0.0, 1.0, 1.0 - math.exp(-1.0), 1e-10),
    ]
    for f, lo, hi, exact, tol in cases:
        value = romberg_panel(f, lo, hi, ctx.rel_tol).value
        assert abs(value - exact) < ctx.tol(tol), f"romberg on [{lo}, {hi}] gave {value!r}"

    odd = Integrand(lambda w: np.sign(w) * np.exp(-np.abs(w)), jump_points=(0.0,))
    value = integrate_line(odd, ctx.rel_tol, p).value
    assert abs(value) < ctx.tol(1e-12), f"odd integrand gave {value!r}"
    return {}


def check_null_coupling(ctx: ValidationContext) -> dict:
    p = ctx.params.replace(t_prime=0.0, eV=1.0)
    tol = ctx.tol(1e-12)
    for i, j in ((4 if p.L >= 4 else 1, min(8, p.L)), (1, p.L)):
        value = correlation(i, j, p, ctx.rel_tol).value
        assert abs(value) < tol, f"C[{i},{j}] = {value!r} with T'=0"
    value = current(p, ctx.rel_tol).value
    assert abs(value) < tol, f"I = {value!r} with T'=0"
    return {}


def check_current_symmetry(ctx: ValidationContext) -> dict:
    p = ctx.params
    tol = ctx.tol(1e-10)
    zero = current(p.with_bias(0.0), ctx.rel_tol).value
    assert abs(zero) < tol, f"I(0) = {zero!r}"
    for eV in (0.5, 1.0):
        forward = current(p.with_bias(eV), ctx.rel_tol).value
        backward = current(p.with_bias(-eV), ctx.rel_tol).value
        assert abs(forward + backward) < tol, f"I(-{eV}) != -I({eV})"
    return {"I(1.0)": forward}


def check_mirror_bias(ctx: ValidationContext) -> dict:
    p = ctx.params
    tol = ctx.tol(1e-8)
    i, j = (4, 8) if p.L >= 8 else (1, p.L)
    for eV in (0.2, 1.0):
        here = correlation(i, j, p.with_bias(eV), ctx.rel_tol).value
        there = correlation(p.mirror_site(i), p.mirror_site(j), p.with_bias(-eV), ctx.rel_tol).value
        assert abs(here - there) < tol, f"C[{i},{j}]({eV}) = {here!r} vs mirror {there!r}"
    return {}


def discover_checks() -> list:
    return [(name, func) for name, func in globals().items()
            if name.startswith("check_") and callable(func)]


# ─────────────────────────────────────────────
# Runner
# ─────────────────────────────────────────────

def run_single_check(func, name: str, ctx: ValidationContext) -> CheckResult:
    start = time.time()
    try:
        details = func(ctx) or {}
        return CheckResult(name=name, status="PASS",
                           duration_ms=(time.time() - start) * 1000, details=details)
    except Exception as e:
        return CheckResult(name=name, status="FAIL",
                           duration_ms=(time.time() - start) * 1000,
                           error=f"{type(e).__name__}: {e}")


def run_validation(ctx: ValidationContext, on_result=None) -> ValidationReport:
    """Run every check; `on_result` is called after each one (for progress output)."""
    suite_start = time.time()
    report = ValidationReport()
    for name, func in discover_checks():
        result = run_single_check(func, name, ctx)
        report.results.append(result)
        if on_result is not None:
            on_result(result)
    report.total_duration_ms = (time.time() - suite_start) * 1000
    return report
