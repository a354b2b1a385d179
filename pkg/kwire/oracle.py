"""
Dense Dyson Oracle
==================
Brute-force solution of the retarded, advanced and Keldysh Dyson equations
over the full basis {alpha, 1..L, alpha'} at one real frequency. Used as the
independent reference for the closed forms in kwire.dyson.

Basis ordering: alpha -> 0, wire site i -> i, alpha' -> L+1.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .dyson import SingularPointError
from .model import ModelParams, Side, f_lead, f_wire, g_lead_a, g_lead_r, g_wire_a, g_wire_r

RCOND_LIMIT = 1e-14
STRUCTURE_TOL = 1e-10

ALPHA = "alpha"
ALPHA_PRIME = "alpha_prime"


@dataclass(frozen=True)
class GreenMatrix:
    """Dense (L+2)x(L+2) Green function at one frequency."""
    values: np.ndarray
    role: str  # "retarded", "advanced" or "keldysh"

    def dagger(self) -> np.ndarray:
        return self.values.conj().T

    def __getitem__(self, key):
        return self.values[key]


def basis_index(label, p: ModelParams) -> int:
    if label == ALPHA:
        return 0
    if label == ALPHA_PRIME:
        return p.L + 1
    if isinstance(label, (int, np.integer)) and not isinstance(label, bool) and 1 <= label <= p.L:
        return int(label)
    raise ValueError(f"unknown basis label {label!r} for L={p.L}")


# ─────────────────────────────────────────────
# Assembly
# ─────────────────────────────────────────────

def unperturbed_matrices(omega: float, p: ModelParams):
    """(g_r, g_a, f) of the disconnected initial state; cross blocks are zero."""
    n = p.L + 2
    g_r = np.zeros((n, n), dtype=complex)
    g_a = np.zeros((n, n), dtype=complex)
    f = np.zeros((n, n), dtype=complex)

    for idx, side in ((0, Side.LEFT), (n - 1, Side.RIGHT)):
        g_r[idx, idx] = g_lead_r(omega, p)
        g_a[idx, idx] = g_lead_a(omega, p)
        f[idx, idx] = f_lead(omega, side, p)

    for i in range(1, p.L + 1):
        for j in range(1, p.L + 1):
            g_r[i, j] = g_wire_r(omega, i, j, p)
            g_a[i, j] = g_wire_a(omega, i, j, p)
            f[i, j] = f_wire(omega, i, j, p)

    return (
        GreenMatrix(g_r, "retarded"),
        GreenMatrix(g_a, "advanced"),
        GreenMatrix(f, "keldysh"),
    )


def sigma_matrix(p: ModelParams) -> np.ndarray:
    n = p.L + 2
    sigma = np.zeros((n, n))
    for k, l in ((0, 1), (1, 0), (n - 1, p.L), (p.L, n - 1)):
        sigma[k, l] = p.t_prime
    return sigma


# ─────────────────────────────────────────────
# Solvers
# ─────────────────────────────────────────────

def _factor(matrix: np.ndarray, omega: float):
    rcond = 1.0 / np.linalg.cond(matrix, 1)
    if not rcond >= RCOND_LIMIT:
        raise SingularPointError(
            f"Dyson system singular at omega={omega!r} (rcond={rcond:.3e})", omega=omega,
        )
    return la.lu_factor(matrix)


def _assert_structure(G_r: np.ndarray, G_a: np.ndarray, F: np.ndarray, omega: float) -> None:
    scale = max(1.0, np.abs(G_r).max(), np.abs(F).max())
    if np.abs(G_r.conj().T - G_a).max() > STRUCTURE_TOL * scale:
        raise ArithmeticError(f"G_r^dagger != G_a at omega={omega!r}")
    if np.abs(F.conj().T + F).max() > STRUCTURE_TOL * scale:
        raise ArithmeticError(f"F is not anti-Hermitian at omega={omega!r}")


def solve_dyson(omega: float, p: ModelParams):
    """(G_r, G_a, F) from dense LU solves with partial pivoting."""
    g_r, g_a, f = unperturbed_matrices(omega, p)
    sigma = sigma_matrix(p)
    eye = np.eye(p.L + 2)

    lu_r = _factor(eye - g_r.values @ sigma, omega)
    lu_a = _factor(eye - g_a.values @ sigma, omega)

    G_r = la.lu_solve(lu_r, g_r.values)
    G_a = la.lu_solve(lu_a, g_a.values)
    F = la.lu_solve(lu_r, f.values + f.values @ sigma @ G_a)

    _assert_structure(G_r, G_a, F, omega)
    return (
        GreenMatrix(G_r, "retarded"),
        GreenMatrix(G_a, "advanced"),
        GreenMatrix(F, "keldysh"),
    )


def solve_dyson_reduced(omega: float, p: ModelParams):
    """Same result as solve_dyson via the 4x4 coupled subspace {alpha, 1, L, alpha'}."""
    g_r, g_a, f = (m.values for m in unperturbed_matrices(omega, p))
    sigma = sigma_matrix(p)
    coupled = [0, 1, p.L, p.L + 1]
    s_cc = sigma[np.ix_(coupled, coupled)]
    eye = np.eye(len(coupled))

    def propagate(g):
        lu = _factor(eye - g[np.ix_(coupled, coupled)] @ s_cc, omega)
        G_c = la.lu_solve(lu, g[coupled, :])
        return lu, G_c, g + g[:, coupled] @ s_cc @ G_c

    lu_r, _, G_r = propagate(g_r)
    _, Ga_c, G_a = propagate(g_a)

    rhs = f[coupled, :] + f[np.ix_(coupled, coupled)] @ s_cc @ Ga_c
    F_c = la.lu_solve(lu_r, rhs)
    F = f + g_r[:, coupled] @ s_cc @ F_c + f[:, coupled] @ s_cc @ Ga_c

    return (
        GreenMatrix(G_r, "retarded"),
        GreenMatrix(G_a, "advanced"),
        GreenMatrix(F, "keldysh"),
    )


def dyson_residuals(omega: float, p: ModelParams, solution=None) -> tuple[float, float, float]:
    """Infinity-norm residuals of the three Dyson equations as written."""
    g_r, g_a, f = (m.values for m in unperturbed_matrices(omega, p))
    G_r, G_a, F = (m.values for m in (solution or solve_dyson(omega, p)))
    sigma = sigma_matrix(p)

    res_r = G_r - g_r - g_r @ sigma @ G_r
    res_a = G_a - g_a - g_a @ sigma @ G_a
    res_f = F - f - g_r @ sigma @ F - f @ sigma @ G_a
    return tuple(float(np.linalg.norm(r, np.inf)) for r in (res_r, res_a, res_f))
