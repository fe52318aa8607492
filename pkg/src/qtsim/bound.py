"""Bound-state bookkeeping: stationary-state quantum energies from standard
binding energies, the laboratory-energy relation for offshell states, and
the order-of-magnitude width-in-time estimate.

Spatial eigenfunctions are supplied externally (toy models in tests); this
module never solves eigenproblems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .foundation import CONSTANTS

__all__ = [
    "BoundStateSpec",
    "stationary_energies",
    "lab_energy_offshell",
    "width_in_time",
    "time_width_seconds",
]


@dataclass(frozen=True)
class BoundStateSpec:
    """Quantum numbers and expectation values of one bound level.

    binding_energy is negative for bound states; kinetic is <K> =
    <sqrt(m^2 + p^2)> - m >= 0; gamma = (m + <K>)/m; msr is the spatial
    mean-square radius <r^2>.
    """

    label: str
    binding_energy: float
    kinetic: float = 0.0
    msr: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.binding_energy + self.mass <= 0:
            raise ValueError("binding energy must exceed -m")
        if self.kinetic < 0:
            raise ValueError("kinetic expectation must be nonnegative")

    @property
    def gamma(self) -> float:
        return (self.mass + self.kinetic) / self.mass


def stationary_energies(spec: BoundStateSpec, m: float = None):
    """Quantum energies of the stationary (laboratory-energy-zero) states.

    Returns (E+, E-) with E+ = m + E_bind and E- = -m + E_bind - 2<K>;
    both are roots of the stationary-condition quadratic.
    """
    m = spec.mass if m is None else m
    e_plus = m + spec.binding_energy
    e_minus = -m + spec.binding_energy - 2 * spec.kinetic
    return e_plus, e_minus


def stationary_quadratic(E: float, spec: BoundStateSpec, m: float = None) -> float:
    """Residual of the stationary-state quadratic in the quantum energy E:
    -E^2 + 2 E E_bind - 2 E K - E_bind^2 + 2 K E_bind + 2 m K + m^2."""
    m = spec.mass if m is None else m
    b, K = spec.binding_energy, spec.kinetic
    return -E**2 + 2 * E * b - 2 * E * K - b**2 + 2 * K * b + 2 * m * K + m**2


def lab_energy_offshell(e_hat: float, spec: BoundStateSpec, m: float = None):
    """Laboratory energy of a state offshell by e_hat in quantum energy.

    Returns (block part, relative part):
      block     = -<gamma> e_hat - e_hat^2 / 2m
      relative  = E_bar - (<gamma> - 1) e_hat - e_hat^2 / 2m
    where E_bar is the positive stationary energy.  The penalty for going
    offshell is quadratic in e_hat.
    """
    m = spec.mass if m is None else m
    g = spec.gamma
    block = -g * e_hat - e_hat**2 / (2 * m)
    e_bar = stationary_energies(spec, m)[0]
    rel = e_bar - (g - 1.0) * e_hat - e_hat**2 / (2 * m)
    return block, rel


def width_in_time(msr: float) -> float:
    """Time dispersion sigma from the mean-square radius: sigma^2/2 = <r^2>
    in natural units."""
    if msr <= 0:
        raise ValueError("mean-square radius must be positive")
    return math.sqrt(2.0 * msr)


def time_width_seconds(width_m: float) -> float:
    """Order-of-magnitude width in time of an atomic state: its spatial
    width divided by the speed of light."""
    if width_m <= 0:
        raise ValueError("spatial width must be positive")
    return CONSTANTS.seconds_from_length(width_m)
