"""Analytic free-particle states: plane waves and Gaussian test functions.

A Gaussian test function is a product of four one-dimensional squeezed
states, one per axis of (t, x, y, z), with a diagonal dispersion matrix.
Free laboratory-time evolution is closed form: centroids drift with
p0/m, each dispersion picks up the complex factor f_tau and the state
gains the global phase (p0^2 - m^2) tau / 2m.

Axis sign conventions follow the forward Fourier transform
exp(+iEt - ip.x): the time axis carries exp(-i E0 t), space axes carry
exp(+i p0 x).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .foundation import FourMomentum, FourVector, complex_sqrt, minkowski_dot

__all__ = [
    "Representation",
    "GaussianTestFunction",
    "PlaneWave",
    "HybridGaussian",
    "evolve_gaussian",
    "lab_energy",
    "lab_energy_relative",
    "onshell_energy",
    "to_representation",
]

# per-axis sign eta: time exponent is eta*i*p*u with eta = -1, space +1
_ETA = (-1.0, 1.0, 1.0, 1.0)
_AXIS_KIND = ("time", "space", "space", "space")


class Representation(enum.Enum):
    BLOCK = "block"                      # psi(t, x)
    RELATIVE_TIME = "relative_time"      # psi(t_tau, x), t_tau = t - tau
    ENERGY_MOMENTUM = "energy_momentum"  # psi^(E, p)
    TIME_MOMENTUM = "time_momentum"      # hybrid chi(t) xi^(p)


@dataclass(frozen=True)
class GaussianTestFunction:
    """4D squeezed state with diagonal dispersion matrix.

    centroid   coordinate-space centers (t-bar, x-bar, ...)
    momentum   central four-momentum (E0, p0x, p0y, p0z)
    sigma0_sq  initial (real, positive) diagonal of the dispersion matrix
    ffactors   complex dispersion-growth factors, 1 at birth
    phase      accumulated global phase; the state carries exp(i phase)
    rep        current representation tag
    """

    centroid: FourVector
    momentum: FourMomentum
    sigma0_sq: tuple
    ffactors: tuple = (1.0 + 0j, 1.0 + 0j, 1.0 + 0j, 1.0 + 0j)
    phase: float = 0.0
    rep: Representation = Representation.BLOCK

    def __post_init__(self):
        if len(self.sigma0_sq) != 4 or len(self.ffactors) != 4:
            raise ValueError("sigma0_sq and ffactors must have 4 entries")
        for s in self.sigma0_sq:
            if isinstance(s, complex) or not s > 0:
                raise ValueError(f"diagonal dispersions must be real positive, got {s!r}")

    @property
    def sigma_sq(self) -> tuple:
        """Current complex dispersion diagonal sigma0^2 * f."""
        return tuple(s * f for s, f in zip(self.sigma0_sq, self.ffactors))

    def coordinate_variance(self, axis: int) -> float:
        """<(x^mu - xbar^mu)^2> = sigma^2 |f|^2 / 2 (coordinate reps only)."""
        if self.rep is Representation.ENERGY_MOMENTUM:
            raise ValueError("coordinate variance undefined in the momentum representation")
        return self.sigma0_sq[axis] * abs(self.ffactors[axis]) ** 2 / 2.0

    def momentum_variance(self, axis: int) -> float:
        """<(p^mu - p0^mu)^2> = 1/(2 sigma0^2), constant under free evolution."""
        return 1.0 / (2.0 * self.sigma0_sq[axis])

    def _axis_factor(self, axis: int, u):
        ubar = self.centroid.as_array()[axis]
        p0 = self.momentum.as_array()[axis]
        s0 = self.sigma0_sq[axis]
        f = self.ffactors[axis]
        eta = _ETA[axis]
        if self.rep is Representation.ENERGY_MOMENTUM:
            shat0 = 1.0 / s0
            return ((1.0 / (math.pi * shat0)) ** 0.25
                    * np.exp(-eta * 1j * (u - p0) * ubar - (u - p0) ** 2 * (s0 * f) / 2.0))
        return ((1.0 / (math.pi * s0)) ** 0.25 / complex_sqrt(f)
                * np.exp(eta * 1j * p0 * u - (u - ubar) ** 2 / (2.0 * s0 * f)))

    def __call__(self, t, x=0.0, y=0.0, z=0.0):
        """Evaluate the wave function; in ENERGY_MOMENTUM the arguments are
        (E, px, py, pz), in RELATIVE_TIME the first argument is t_tau."""
        out = np.exp(1j * self.phase) * np.ones_like(np.asarray(t, dtype=complex))
        for axis, u in enumerate((t, x, y, z)):
            out = out * self._axis_factor(axis, u)
        return out


@dataclass(frozen=True)
class PlaneWave:
    """Free plane wave labelled by its four-momentum."""

    momentum: FourMomentum
    rep: Representation = Representation.BLOCK

    @property
    def energy(self) -> float:
        return self.momentum.t

    def momentum_sq_spatial(self) -> float:
        p = self.momentum
        return p.x**2 + p.y**2 + p.z**2

    def __call__(self, t, x=0.0, y=0.0, z=0.0):
        p = self.momentum
        norm = 1.0 / (4.0 * math.pi**2)
        return norm * np.exp(-1j * p.t * np.asarray(t)
                             + 1j * (p.x * np.asarray(x) + p.y * np.asarray(y)
                                     + p.z * np.asarray(z)))


@dataclass(frozen=True)
class HybridGaussian:
    """Time/momentum hybrid: a Gaussian in relative quantum time riding on a
    momentum-space carrier Gaussian (one space axis).

    The time sector (t_bar, E0, sigma0_sq, f0) follows the relative-time
    conventions; the momentum sector (p_bar, x_bar, sigma1_hat_sq) stores the
    carrier.  Experiments parameterize the time Gaussian per momentum ray.
    """

    t_bar: float
    energy: float
    sigma0_sq: float
    p_bar: float
    x_bar: float
    sigma1_hat_sq: float
    f0: complex = 1.0 + 0j
    phase: float = 0.0
    rep: Representation = Representation.TIME_MOMENTUM

    def __call__(self, t_tau, p):
        chi = ((1.0 / (math.pi * self.sigma0_sq)) ** 0.25 / complex_sqrt(self.f0)
               * np.exp(-1j * self.energy * np.asarray(t_tau)
                        - (np.asarray(t_tau) - self.t_bar) ** 2
                        / (2.0 * self.sigma0_sq * self.f0)))
        xi = ((1.0 / (math.pi * self.sigma1_hat_sq)) ** 0.25
              * np.exp(-1j * (np.asarray(p) - self.p_bar) * self.x_bar
                       - (np.asarray(p) - self.p_bar) ** 2 / (2.0 * self.sigma1_hat_sq)))
        return np.exp(1j * self.phase) * chi * xi


def onshell_energy(p_spatial_sq: float, m: float) -> float:
    """E-bar_p = sqrt(p^2 + m^2)."""
    return math.sqrt(p_spatial_sq + m * m)


def lab_energy(p: PlaneWave, m: float) -> float:
    """Laboratory energy of a plane wave: -(E^2 - p^2 - m^2)/2m.

    Zero exactly on shell; stationary states are the Klein-Gordon solutions.
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    psq = minkowski_dot(p.momentum, p.momentum)
    return -(psq - m * m) / (2.0 * m)


def lab_energy_relative(p: PlaneWave, m: float):
    """Relative-time split of the laboratory energy.

    Returns (E-bar_p, script-E-hat) with
    E-hat = E - E-bar_p and script-E-hat = -(gamma - 1) E-hat - E-hat^2/2m.
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    ebar = onshell_energy(p.momentum_sq_spatial(), m)
    gamma = ebar / m
    ehat = p.energy - ebar
    return ebar, -(gamma - 1.0) * ehat - ehat**2 / (2.0 * m)


def evolve_gaussian(psi: GaussianTestFunction, tau: float, m: float) -> GaussianTestFunction:
    """Free evolution by laboratory time tau (exact closed form).

    Centroid drifts by (p0/m) tau, each dispersion factor advances by
    -/+ i tau/(m sigma0^2), and the global phase gains (p0^2 - m^2) tau/2m.
    Composes exactly: evolving by tau1 then tau2 equals tau1 + tau2.
    """
    if m <= 0:
        raise ValueError("mass must be positive")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if psi.rep not in (Representation.BLOCK, Representation.ENERGY_MOMENTUM):
        raise ValueError(f"evolve_gaussian expects BLOCK or ENERGY_MOMENTUM, got {psi.rep}")
    drift = psi.momentum.scaled(tau / m)
    new_f = []
    for axis in range(4):
        step = 1j * _ETA[axis] * tau / (m * psi.sigma0_sq[axis])
        # eta = -1 on time gives 1 - i tau/(m sigma^2)
        new_f.append(psi.ffactors[axis] + step)
    psq = minkowski_dot(psi.momentum, psi.momentum)
    dphase = (psq - m * m) * tau / (2.0 * m)
    return replace(psi,
                   centroid=psi.centroid + drift,
                   ffactors=tuple(new_f),
                   phase=psi.phase + dphase)


def _to_relative(psi: GaussianTestFunction, tau: float) -> GaussianTestFunction:
    c = psi.centroid
    return replace(psi,
                   centroid=FourVector(c.t - tau, c.x, c.y, c.z),
                   phase=psi.phase - psi.momentum.t * tau,
                   rep=Representation.RELATIVE_TIME)


def _from_relative(psi: GaussianTestFunction, tau: float) -> GaussianTestFunction:
    c = psi.centroid
    return replace(psi,
                   centroid=FourVector(c.t + tau, c.x, c.y, c.z),
                   phase=psi.phase + psi.momentum.t * tau,
                   rep=Representation.BLOCK)


def to_representation(psi: GaussianTestFunction, target: Representation,
                      tau: float = 0.0) -> GaussianTestFunction:
    """Convert a Gaussian test function between representations.

    Supported: BLOCK <-> ENERGY_MOMENTUM (four-dimensional Fourier transform
    with signs +iEt - ip.x) and BLOCK <-> RELATIVE_TIME at laboratory time
    tau.  Other pairs raise ValueError; the hybrid representation is built
    directly as HybridGaussian by the experiment calculators.
    """
    if psi.rep is target:
        return psi
    pair = (psi.rep, target)
    if pair == (Representation.BLOCK, Representation.ENERGY_MOMENTUM):
        return replace(psi, rep=Representation.ENERGY_MOMENTUM)
    if pair == (Representation.ENERGY_MOMENTUM, Representation.BLOCK):
        return replace(psi, rep=Representation.BLOCK)
    if pair == (Representation.BLOCK, Representation.RELATIVE_TIME):
        return _to_relative(psi, tau)
    if pair == (Representation.RELATIVE_TIME, Representation.BLOCK):
        return _from_relative(psi, tau)
    raise ValueError(
        f"unsupported representation conversion {psi.rep.value} -> {target.value}; "
        "hybrid states are constructed directly via HybridGaussian")
