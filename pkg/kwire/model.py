"""
Model Parameters and Unperturbed Green Functions
================================================
Lorentzian leads at terminals alpha (site 1) and alpha' (site L), coupled by
T' to a wire with linearized dispersion and an exponential cutoff.

Every Green function here accepts a scalar frequency or a NumPy array of
frequencies and broadcasts elementwise.

Usage:
    from kwire.model import ModelParams, Side, g_wire_r

    p = ModelParams(W=2.0, t_prime=0.5, L=20, eV=1.0)
    g_wire_r(0.3, 4, 8, p)
"""

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np


class SiteIndexError(ValueError):
    """A wire site index outside 1..L."""


# ─────────────────────────────────────────────
# Parameters
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the lead-wire-lead system (units e = hbar = 1)."""
    W: float
    t_prime: float
    L: int
    eV: float = 0.0
    v_F: float = 1.0
    a: float = 1.0

    def __post_init__(self):
        if not self.W > 0:
            raise ValueError(f"W must be positive, got {self.W}")
        if not self.t_prime >= 0:
            raise ValueError(f"t_prime must be non-negative, got {self.t_prime}")
        if isinstance(self.L, bool) or int(self.L) != self.L or self.L < 2:
            raise ValueError(f"L must be an integer >= 2, got {self.L}")
        if not self.v_F > 0:
            raise ValueError(f"v_F must be positive, got {self.v_F}")
        if not self.a > 0:
            raise ValueError(f"a must be positive, got {self.a}")
        if not math.isfinite(self.eV):
            raise ValueError(f"eV must be finite, got {self.eV}")
        object.__setattr__(self, "L", int(self.L))

    @property
    def omega_c(self) -> float:
        return self.v_F * math.pi / self.a

    @property
    def rho(self) -> float:
        return 1.0 / (2.0 * math.pi)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def with_bias(self, eV: float) -> "ModelParams":
        return dataclasses.replace(self, eV=eV)

    def mirror_site(self, i: int) -> int:
        """Site index under the reflection i -> L+1-i."""
        return self.L + 1 - i


class Side(enum.Enum):
    """Left: terminal alpha, site 1, mu = +eV/2. Right: alpha', site L, mu = -eV/2."""
    LEFT = "left"
    RIGHT = "right"

    def mirror(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    def chemical_potential(self, p: ModelParams) -> float:
        return p.eV / 2 if self is Side.LEFT else -p.eV / 2

    def site(self, p: ModelParams) -> int:
        return 1 if self is Side.LEFT else p.L


def sgn(x):
    """Sign with sgn(0) = 0."""
    return np.sign(x)


def check_site(i: int, p: ModelParams) -> None:
    if isinstance(i, bool) or int(i) != i or not 1 <= i <= p.L:
        raise SiteIndexError(f"site index {i} outside 1..{p.L}")


# ─────────────────────────────────────────────
# Lead Green functions (Lorentzian)
# ─────────────────────────────────────────────

def g_lead_r(omega, p: ModelParams):
    return 1.0 / (np.asarray(omega) + 1j * p.W)


def g_lead_a(omega, p: ModelParams):
    return 1.0 / (np.asarray(omega) - 1j * p.W)


def f_lead(omega, side: Side, p: ModelParams):
    omega = np.asarray(omega, dtype=float)
    mu = side.chemical_potential(p)
    return -2j * p.W * sgn(omega - mu) / (omega ** 2 + p.W ** 2)


# ─────────────────────────────────────────────
# Wire Green functions (linearized, cutoff omega_c)
# ─────────────────────────────────────────────

def _wire_prefactor(p: ModelParams) -> float:
    return 2 * math.pi * p.rho / p.v_F


def _cutoff(omega, p: ModelParams):
    return np.exp(-np.abs(omega) / p.omega_c)


def g_wire_r(omega, i: int, j: int, p: ModelParams):
    check_site(i, p)
    check_site(j, p)
    omega = np.asarray(omega, dtype=float)
    distance = abs(i - j) * p.a
    return -1j * _wire_prefactor(p) * np.exp(1j * omega * distance / p.v_F) * _cutoff(omega, p)


def g_wire_a(omega, i: int, j: int, p: ModelParams):
    check_site(i, p)
    check_site(j, p)
    omega = np.asarray(omega, dtype=float)
    distance = abs(i - j) * p.a
    return 1j * _wire_prefactor(p) * np.exp(-1j * omega * distance / p.v_F) * _cutoff(omega, p)


def f_wire(omega, i: int, j: int, p: ModelParams):
    check_site(i, p)
    check_site(j, p)
    omega = np.asarray(omega, dtype=float)
    phase = omega * (i - j) * p.a / p.v_F
    return -2j * _wire_prefactor(p) * np.cos(phase) * sgn(omega) * _cutoff(omega, p)
