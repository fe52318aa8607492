"""Conventions, constants and complex-Gaussian helpers shared by every module.

Everything here is natural units (hbar = c = 1) with metric signature
(+1, -1, -1, -1).  Complex square roots use the principal branch, cut along
the negative real axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "METRIC_SIGNATURE",
    "MetricConvention",
    "FourVector",
    "PhysicalConstants",
    "CONSTANTS",
    "FFactor",
    "complex_sqrt",
    "minkowski_dot",
    "f_factor",
    "gaussian_integral_nd",
]

# fixed by the equations implemented here; not configurable
METRIC_SIGNATURE = (1.0, -1.0, -1.0, -1.0)


@dataclass(frozen=True)
class MetricConvention:
    """Fixed (+,-,-,-) metric in natural units."""

    signature: tuple = METRIC_SIGNATURE
    hbar: float = 1.0
    c: float = 1.0


@dataclass(frozen=True)
class FourVector:
    """Event (t, x, y, z); t is quantum time, all components natural units."""

    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"FourVector.{name} must be finite, got {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    def __add__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t + other.t, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t - other.t, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def scaled(self, a: float) -> "FourVector":
        return FourVector(a * self.t, a * self.x, a * self.y, a * self.z)


# FourMomentum shares the layout: component 0 is the quantum energy E.
FourMomentum = FourVector


@dataclass(frozen=True)
class PhysicalConstants:
    """SI-valued constants, used only by unit-conversion helpers."""

    planck_time: float = 5.39e-44        # s
    planck_length: float = 1.62e-35      # m
    electron_compton_time: float = 1.29e-21   # s
    c: float = 299792458.0               # m/s
    hbar_ev_s: float = 6.582119569e-16   # eV s
    electron_mass_ev: float = 0.511e6    # eV

    def compton_time(self, mass_ev: float) -> float:
        """hbar / (m c^2) in seconds."""
        return self.hbar_ev_s / mass_ev

    def seconds_from_length(self, length_m: float) -> float:
        """Light-crossing time of a length, in seconds."""
        return length_m / self.c


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class FFactor:
    """Complex dispersion-growth factor 1 -/+ i tau/(m sigma^2)."""

    axis: str  # "time" or "space"
    value: complex

    @property
    def abs_sq(self) -> float:
        return abs(self.value) ** 2


def complex_sqrt(z: complex) -> complex:
    """Principal square root, branch cut from zero to negative infinity.

    The result argument lies in (-pi/2, pi/2]; in particular
    complex_sqrt(-1) = +1j.
    """
    z = complex(z)
    if z.imag == 0.0:
        # normalize -0.0 so the negative real axis maps to +i sqrt(|z|)
        z = complex(z.real, 0.0)
    return cmath.sqrt(z)


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    """a.b with signature (+,-,-,-)."""
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z


def f_factor(axis: str, tau: float, m: float, sigma_sq: float) -> FFactor:
    """Dispersion factor f_tau: 1 - i tau/(m sigma^2) on the time axis,
    1 + i tau/(m sigma^2) on a space axis."""
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")
    if sigma_sq <= 0:
        raise ValueError(f"dispersion sigma^2 must be positive, got {sigma_sq}")
    ratio = tau / (m * sigma_sq)
    if axis == "time":
        return FFactor(axis, 1.0 - 1j * ratio)
    if axis == "space":
        return FFactor(axis, 1.0 + 1j * ratio)
    raise ValueError(f"axis must be 'time' or 'space', got {axis!r}")


def gaussian_integral_nd(P: np.ndarray, q: np.ndarray, r: complex = 0.0) -> complex:
    """Exact n-dimensional complex Gaussian integral.

    Evaluates  integral d^n v  exp(-1/2 v.P.v + q.v + r)
             = sqrt((2 pi)^n / det P) exp(1/2 q.P^-1.q + r)

    P must have positive-semidefinite real part (convergence comes from the
    wave-function envelope).  The determinant square root is taken factor by
    factor through an LU-free product of eigenvalue roots to stay on the
    principal branch for the quadratic forms used here.
    """
    P = np.atleast_2d(np.asarray(P, dtype=complex))
    q = np.atleast_1d(np.asarray(q, dtype=complex))
    n = P.shape[0]
    sol = np.linalg.solve(P, q)
    # principal-branch sqrt of each eigenvalue; valid since Re(P) >= 0 keeps
    # eigenvalues off the negative real axis
    eig = np.linalg.eigvals(P)
    root = np.prod([complex_sqrt(2.0 * np.pi / lam) for lam in eig])
    return root * cmath.exp(0.5 * np.dot(q, sol) + r)
