"""
Closed-form Perturbed Green Functions
=====================================
Solves the Dyson equations of the lead-wire-lead system algebraically.
The self energy only couples alpha <-> 1 and alpha' <-> L, so every perturbed
quantity reduces to unperturbed values at the four coupled orbitals.

Evaluation order: Ga_boundary -> Ga_terminal -> F_terminal -> F_full.
Retarded quantities come from conjugating the advanced chain.

Usage:
    from kwire.dyson import DysonChain, F_full

    F_full(0.3, 4, 8, p)                # one-off
    chain = DysonChain(omegas, p)       # several quantities on one grid
    chain.f_full(4, 8) + chain.f_full(8, 4)
"""

import numpy as np

from .model import (
    ModelParams,
    Side,
    check_site,
    f_lead,
    f_wire,
    g_lead_a,
    g_lead_r,
    g_wire_a,
    g_wire_r,
)

# Denominators below this modulus are treated as poles on the real axis
SINGULAR_THRESHOLD = 1e-300


class SingularPointError(ArithmeticError):
    """The Dyson system is singular at a real frequency."""

    def __init__(self, message: str, omega=None):
        super().__init__(message)
        self.omega = omega


class DysonChain:
    """Per-frequency evaluation context.

    Small-letter factors at the coupled orbitals and both denominators are
    computed once; site-dependent pieces are computed on demand.
    """

    def __init__(self, omega, p: ModelParams):
        self.omega = np.asarray(omega, dtype=float)
        self.p = p
        L = p.L
        t2 = p.t_prime ** 2

        self.ga_lead = g_lead_a(self.omega, p)
        self.gr_lead = g_lead_r(self.omega, p)
        self.f_left = f_lead(self.omega, Side.LEFT, p)
        self.f_right = f_lead(self.omega, Side.RIGHT, p)

        self.ga_11 = g_wire_a(self.omega, 1, 1, p)
        self.ga_1L = g_wire_a(self.omega, 1, L, p)
        # diagonal and cross entries only depend on |i-j|
        self.ga_LL = self.ga_11
        self.ga_L1 = self.ga_1L

        # alpha side, alpha' side and the two cross-couplings of the advanced chain
        self._a_left = self.ga_11 * t2 * self.ga_lead
        self._a_right = self.ga_LL * t2 * self.ga_lead
        self._a_cross_1L = self.ga_1L * t2 * self.ga_lead
        self._a_cross_L1 = self.ga_L1 * t2 * self.ga_lead

        self.advanced_denominator = (
            (1 - self._a_left) * (1 - self._a_right)
            - self._a_cross_1L * self._a_cross_L1
        )
        self.retarded_denominator = np.conj(self.advanced_denominator)
        self._check_denominator(self.advanced_denominator)

    def _check_denominator(self, denominator) -> None:
        small = np.abs(denominator) < SINGULAR_THRESHOLD
        if np.any(small):
            bad = self.omega[small] if self.omega.ndim else self.omega
            raise SingularPointError(
                f"Dyson denominator vanishes at omega={np.ravel(bad)[0]!r}",
                omega=float(np.ravel(bad)[0]),
            )

    def ga_boundary(self, j: int):
        """(G^a_{1j}, G^a_{Lj})."""
        p = self.p
        check_site(j, p)
        ga_1j = g_wire_a(self.omega, 1, j, p)
        ga_Lj = g_wire_a(self.omega, p.L, j, p)
        d = self.advanced_denominator
        G_1j = (ga_1j * (1 - self._a_right) + self._a_cross_1L * ga_Lj) / d
        G_Lj = (ga_Lj * (1 - self._a_left) + self._a_cross_L1 * ga_1j) / d
        return G_1j, G_Lj

    def ga_terminal(self, j: int, boundary=None):
        """(G^a_{alpha j}, G^a_{alpha' j})."""
        G_1j, G_Lj = boundary if boundary is not None else self.ga_boundary(j)
        tp = self.p.t_prime
        return self.ga_lead * tp * G_1j, self.ga_lead * tp * G_Lj

    def f_terminal(self, j: int, boundary=None, terminal=None):
        """(F_{alpha j}, F_{alpha' j})."""
        p = self.p
        L = p.L
        tp = p.t_prime
        t2 = tp ** 2
        omega = self.omega

        G_1j, G_Lj = boundary if boundary is not None else self.ga_boundary(j)
        Ga_alpha, Ga_alpha_p = (
            terminal if terminal is not None
            else self.ga_terminal(j, boundary=(G_1j, G_Lj))
        )

        f_11 = f_wire(omega, 1, 1, p)
        f_1L = f_wire(omega, 1, L, p)
        f_LL = f_11
        f_L1 = f_1L

        # wire-side Keldysh sources at sites 1 and L
        source_1 = f_wire(omega, 1, j, p) + f_11 * tp * Ga_alpha + f_1L * tp * Ga_alpha_p
        source_L = f_wire(omega, L, j, p) + f_L1 * tp * Ga_alpha + f_LL * tp * Ga_alpha_p

        gr = self.gr_lead
        b_alpha = gr * tp * source_1 + self.f_left * tp * G_1j
        b_alpha_p = gr * tp * source_L + self.f_right * tp * G_Lj

        gr_11 = np.conj(self.ga_11)
        gr_LL = np.conj(self.ga_LL)
        gr_1L = np.conj(self.ga_L1)
        r_left = gr * t2 * gr_11
        r_right = gr * t2 * gr_LL
        r_cross_1L = gr * t2 * gr_1L
        r_cross_L1 = r_cross_1L

        d = self.retarded_denominator
        F_alpha = (b_alpha * (1 - r_right) + r_cross_1L * b_alpha_p) / d
        F_alpha_p = (b_alpha_p * (1 - r_left) + r_cross_L1 * b_alpha) / d
        return F_alpha, F_alpha_p

    def f_full(self, i: int, j: int):
        """F_{ij} for wire sites i, j."""
        p = self.p
        check_site(i, p)
        check_site(j, p)
        tp = p.t_prime
        omega = self.omega

        boundary = self.ga_boundary(j)
        Ga_alpha, Ga_alpha_p = self.ga_terminal(j, boundary=boundary)
        F_alpha, F_alpha_p = self.f_terminal(j, boundary=boundary, terminal=(Ga_alpha, Ga_alpha_p))

        return (
            f_wire(omega, i, j, p)
            + g_wire_r(omega, i, 1, p) * tp * F_alpha
            + g_wire_r(omega, i, p.L, p) * tp * F_alpha_p
            + f_wire(omega, i, 1, p) * tp * Ga_alpha
            + f_wire(omega, i, p.L, p) * tp * Ga_alpha_p
        )

    def gr_1L_and_ga_L1(self):
        """(G^r_{1L}, G^a_{L1}); G^r_{1L} is the conjugate of G^a_{L1}."""
        _, Ga_L1 = self.ga_boundary(1)
        return np.conj(Ga_L1), Ga_L1


# ─────────────────────────────────────────────
# Module-level operations
# ─────────────────────────────────────────────

def advanced_denominator(omega, p: ModelParams):
    return DysonChain(omega, p).advanced_denominator


def retarded_denominator(omega, p: ModelParams):
    return DysonChain(omega, p).retarded_denominator


def Ga_boundary(omega, j: int, p: ModelParams):
    return DysonChain(omega, p).ga_boundary(j)


def Ga_terminal(omega, j: int, p: ModelParams):
    return DysonChain(omega, p).ga_terminal(j)


def F_terminal(omega, j: int, p: ModelParams):
    return DysonChain(omega, p).f_terminal(j)


def F_full(omega, i: int, j: int, p: ModelParams):
    return DysonChain(omega, p).f_full(i, j)


def Gr_1L_and_Ga_L1(omega, p: ModelParams):
    return DysonChain(omega, p).gr_1L_and_ga_L1()
