"""Closed-form propagators and semi-classical machinery.

Covers the free kernel in each representation, constant potentials, the
constant-electric-field kernel in the (t, x) plane, the constant-magnetic
kernel in the (x, y) plane, the interpolating classical trajectories, and
the stationary-phase (van Vleck) construction from an action.

Conventions: the time-axis kernel carries sqrt(im/2 pi tau) and the mass
phase exp(-im tau/2); each space axis carries sqrt(m/2 pi i tau).  The
electric and magnetic kernels are quoted with the mass term gauged away,
so their field -> 0 limits are the 2D free kernels without the mass phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .foundation import FourVector, complex_sqrt, minkowski_dot

__all__ = [
    "KernelSingularityError",
    "AnalyticKernel",
    "ClassicalTrajectory",
    "free_kernel_time",
    "free_kernel_space",
    "free_kernel_space3",
    "free_kernel_4d",
    "free_kernel_2d",
    "relative_time_kernel",
    "momentum_kernel_phase",
    "relative_time_momentum_phase",
    "hybrid_kernel",
    "constant_potential_kernel",
    "electric_kernel",
    "electric_action",
    "electric_gauge_phase",
    "magnetic_kernel",
    "magnetic_action",
    "classical_trajectory",
    "van_vleck_matrix",
    "semiclassical_kernel",
    "apply_kernel_1d",
]

CAUSTIC_TOL = 1e-9


class KernelSingularityError(ValueError):
    """Raised when a kernel is evaluated at (or too close to) a caustic."""


def _check_tau_m(tau, m):
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if m <= 0:
        raise ValueError(f"mass must be positive, got {m}")


def free_kernel_time(t2, t1, tau: float, m: float):
    """Time-axis free kernel sqrt(im/2pi tau) exp(-im dt^2/2tau - im tau/2)."""
    _check_tau_m(tau, m)
    pref = complex_sqrt(1j * m / (2 * math.pi * tau))
    dt = np.asarray(t2) - np.asarray(t1)
    return pref * np.exp(-1j * m * dt**2 / (2 * tau) - 1j * m * tau / 2)


def free_kernel_space(x2, x1, tau: float, m: float):
    """One space axis: sqrt(m/2pi i tau) exp(+im dx^2/2tau)."""
    _check_tau_m(tau, m)
    pref = complex_sqrt(m / (2j * math.pi * tau))
    dx = np.asarray(x2) - np.asarray(x1)
    return pref * np.exp(1j * m * dx**2 / (2 * tau))


def free_kernel_space3(x2, x1, tau: float, m: float):
    """Three-space kernel, the usual nonrelativistic free kernel."""
    return (free_kernel_space(x2[0], x1[0], tau, m)
            * free_kernel_space(x2[1], x1[1], tau, m)
            * free_kernel_space(x2[2], x1[2], tau, m))


def free_kernel_4d(x2: FourVector, x1: FourVector, tau: float, m: float) -> complex:
    """Full kernel -im^2/(4 pi^2 tau^2) exp(-im (x2-x1)^2/2tau - im tau/2),
    with (x2-x1)^2 the Minkowski square."""
    _check_tau_m(tau, m)
    d = x2 - x1
    dsq = minkowski_dot(d, d)
    pref = -1j * m**2 / (4 * math.pi**2 * tau**2)
    return pref * cmath.exp(-1j * m * dsq / (2 * tau) - 1j * m * tau / 2)


def free_kernel_2d(t2, x2, t1, x1, tau: float, m: float):
    """(t, x) free kernel with the mass term gauged away:
    (m/2 pi tau) exp(i (m/2tau)(-dt^2 + dx^2)).  This is the alpha -> 0 limit
    of the electric kernel."""
    _check_tau_m(tau, m)
    dt = np.asarray(t2) - np.asarray(t1)
    dx = np.asarray(x2) - np.asarray(x1)
    return (m / (2 * math.pi * tau)) * np.exp(1j * m * (-dt**2 + dx**2) / (2 * tau))


def relative_time_kernel(t2_tau, t1_0, tau: float, m: float):
    """Relative-time form of the time-axis kernel."""
    _check_tau_m(tau, m)
    pref = complex_sqrt(1j * m / (2 * math.pi * tau))
    d = np.asarray(t2_tau) - np.asarray(t1_0) + tau
    return pref * np.exp(-1j * m * d**2 / (2 * tau) - 1j * m * tau / 2)


def momentum_kernel_phase(p: FourVector, tau: float, m: float) -> complex:
    """Energy/momentum kernel is delta^4(p''-p') times this phase,
    exp(i (p^2 - m^2) tau / 2m); zero phase on shell."""
    _check_tau_m(tau, m)
    psq = minkowski_dot(p, p)
    return cmath.exp(1j * (psq - m * m) * tau / (2 * m))


def relative_time_momentum_phase(p: FourVector, tau: float, m: float) -> complex:
    """Relative-time momentum kernel phase exp(-iE tau + i(p^2-m^2)tau/2m)."""
    return cmath.exp(-1j * p.t * tau) * momentum_kernel_phase(p, tau, m)


def hybrid_kernel(t2_tau, t1_0, p, tau: float, m: float):
    """Time/momentum hybrid kernel on the momentum diagonal p'' = p' = p."""
    return relative_time_kernel(t2_tau, t1_0, tau, m) * np.exp(
        -1j * np.asarray(p) ** 2 * tau / (2 * m))


def constant_potential_kernel(x2: FourVector, x1: FourVector, tau: float, m: float,
                              e: float, phi: float, A=(0.0, 0.0, 0.0)) -> complex:
    """Free 4D kernel times the pure phase exp(-ie dt Phi + ie dx.A)."""
    d = x2 - x1
    phase = -e * d.t * phi + e * (d.x * A[0] + d.y * A[1] + d.z * A[2])
    return free_kernel_4d(x2, x1, tau, m) * cmath.exp(1j * phase)


def electric_action(t2, x2, t1, x1, tau: float, m: float, alpha: float):
    """Classical action for a constant electric field in the (t, x) plane.

    S = (m/2)[(alpha/2) coth(alpha tau/2)(-dt^2 + dx^2) + alpha (x' t'' - x'' t')]
    with alpha = eE/m.  The alpha -> 0 limit is the free action (no mass term).
    """
    _check_tau_m(tau, m)
    dt = np.asarray(t2) - np.asarray(t1)
    dx = np.asarray(x2) - np.asarray(x1)
    if alpha == 0.0:
        quad = (-dt**2 + dx**2) / tau
        gauge = 0.0
    else:
        quad = (alpha / 2) / np.tanh(alpha * tau / 2) * (-dt**2 + dx**2)
        gauge = alpha * (np.asarray(x1) * np.asarray(t2) - np.asarray(x2) * np.asarray(t1))
    return (m / 2) * (quad + gauge)


def electric_kernel(t2, x2, t1, x1, tau: float, m: float, alpha: float):
    """Constant-electric-field kernel
    m alpha/(4 pi sinh(alpha tau/2)) exp(iS); exact (quadratic Lagrangian)."""
    _check_tau_m(tau, m)
    if alpha == 0.0:
        return free_kernel_2d(t2, x2, t1, x1, tau, m)
    pref = m * alpha / (4 * math.pi * np.sinh(alpha * tau / 2))
    return pref * np.exp(1j * electric_action(t2, x2, t1, x1, tau, m, alpha))


def electric_gauge_phase(d_t, d_x, t2, x2, t1, x1, m: float, alpha: float) -> complex:
    """Phase picked up by the electric kernel under (t,x) -> (t+d_t, x+d_x):
    exp(i (m alpha/2)(d_x dt - d_t dx))."""
    dt = t2 - t1
    dx = x2 - x1
    return cmath.exp(1j * (m * alpha / 2) * (d_x * dt - d_t * dx))


def magnetic_action(x2, y2, x1, y1, tau: float, m: float, omega: float):
    """Constant-magnetic-field action in the (x, y) plane,
    S = (m/2)[(omega/2) cot(omega tau/2)(dx^2 + dy^2) + omega (x' y'' - x'' y')]."""
    _check_tau_m(tau, m)
    dx = np.asarray(x2) - np.asarray(x1)
    dy = np.asarray(y2) - np.asarray(y1)
    if omega == 0.0:
        return (m / 2) * (dx**2 + dy**2) / tau
    half = omega * tau / 2
    quad = (omega / 2) / np.tan(half) * (dx**2 + dy**2)
    gauge = omega * (np.asarray(x1) * np.asarray(y2) - np.asarray(x2) * np.asarray(y1))
    return (m / 2) * (quad + gauge)


def magnetic_kernel(x2, y2, x1, y1, tau: float, m: float, omega: float):
    """Constant-magnetic-field kernel -(1/4pi) m omega/sin(omega tau/2) exp(iS).

    Raises KernelSingularityError at the caustics omega tau/2 = k pi (k != 0).
    Conventions give an overall -1 relative to the electric kernel under the
    substitution t, x, alpha -> ix, y, i omega.
    """
    _check_tau_m(tau, m)
    if omega == 0.0:
        return -(m / (2 * math.pi * tau)) * np.exp(
            1j * magnetic_action(x2, y2, x1, y1, tau, m, 0.0))
    half = omega * tau / 2
    s = math.sin(half)
    # caustics are the nonzero multiples of pi; omega tau -> 0 is regular
    if abs(s) < CAUSTIC_TOL and abs(half) > 0.5:
        raise KernelSingularityError(
            f"magnetic kernel caustic: |sin(omega tau/2)| = {abs(s):.2e} < {CAUSTIC_TOL}")
    pref = -(1 / (4 * math.pi)) * m * omega / s
    return pref * np.exp(1j * magnetic_action(x2, y2, x1, y1, tau, m, omega))


@dataclass(frozen=True)
class ClassicalTrajectory:
    """Interpolating classical path between fixed endpoints.

    kind is "free", "electric" (t, x plane, sinh interpolation) or
    "magnetic" (x, y plane, sin interpolation).  position(tau_prime) returns
    the pair of coordinates at intermediate laboratory time; constants holds
    the constants of motion ((t0, x0) or (x0, y0))."""

    kind: str
    endpoints: tuple            # ((u1, v1), (u2, v2))
    tau: float
    parameter: float = 0.0      # alpha or omega
    constants: tuple = ()

    def position(self, tau_prime):
        s = np.asarray(tau_prime, dtype=float)
        (u1, v1), (u2, v2) = self.endpoints
        if self.kind == "free":
            frac = s / self.tau
            return u1 + (u2 - u1) * frac, v1 + (v2 - v1) * frac
        if self.kind == "electric":
            # cancellation-free split: the constants of motion grow like
            # 1/alpha as alpha -> 0, so the naive interpolation loses digits
            a, tau = self.parameter, self.tau
            den = math.sinh(a * tau)
            A = np.sinh(a * s) / den
            B = np.sinh(a * (tau - s)) / den
            G = 4 * np.sinh(a * (tau - s) / 2) * math.sinh(a * tau / 2) * np.sinh(a * s / 2) / den
            Gc = 4 * math.cosh(a * tau / 2) * np.sinh(a * (tau - s) / 2) * np.sinh(a * s / 2) / den
            t = u2 * A + u1 * B + 0.5 * (u2 + u1) * G - 0.5 * (v2 - v1) * Gc
            x = v2 * A + v1 * B + 0.5 * (v2 + v1) * G - 0.5 * (u2 - u1) * Gc
            return t, x
        if self.kind == "magnetic":
            w, tau = self.parameter, self.tau
            den = math.sin(w * tau)
            A = np.sin(w * s) / den
            B = np.sin(w * (tau - s)) / den
            G = -4 * np.sin(w * (tau - s) / 2) * math.sin(w * tau / 2) * np.sin(w * s / 2) / den
            Gc = -4 * math.cos(w * tau / 2) * np.sin(w * (tau - s) / 2) * np.sin(w * s / 2) / den
            x = u2 * A + u1 * B + 0.5 * (u2 + u1) * G + 0.5 * (v2 - v1) * Gc
            y = v2 * A + v1 * B + 0.5 * (v2 + v1) * G - 0.5 * (u2 - u1) * Gc
            return x, y
        raise ValueError(f"unknown trajectory kind {self.kind!r}")

    def sample(self, n: int = 257):
        s = np.linspace(0.0, self.tau, n)
        u, v = self.position(s)
        return s, u, v


def classical_trajectory(kind: str, endpoint1, endpoint2, tau: float,
                         alpha: float = 0.0, omega: float = 0.0) -> ClassicalTrajectory:
    """Build the interpolating trajectory for the given field kind.

    endpoint1/endpoint2 are (t, x) pairs for "free"/"electric" and (x, y)
    pairs for "magnetic".  Raises KernelSingularityError near magnetic
    caustics where the interpolation is degenerate.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    u1, v1 = endpoint1
    u2, v2 = endpoint2
    for val in (u1, v1, u2, v2):
        if not math.isfinite(val):
            raise ValueError("endpoints must be finite")
    if kind == "free" or (kind == "electric" and alpha == 0.0) \
            or (kind == "magnetic" and omega == 0.0):
        return ClassicalTrajectory("free", ((u1, v1), (u2, v2)), tau)
    if kind == "electric":
        coth = 1.0 / math.tanh(alpha * tau / 2)
        t0 = 0.5 * ((u2 + u1) - (v2 - v1) * coth)
        x0 = 0.5 * ((v2 + v1) - (u2 - u1) * coth)
        return ClassicalTrajectory("electric", ((u1, v1), (u2, v2)), tau, alpha, (t0, x0))
    if kind == "magnetic":
        if abs(math.sin(omega * tau / 2)) < CAUSTIC_TOL and abs(omega * tau / 2) > 0.5:
            raise KernelSingularityError("magnetic trajectory caustic")
        cot = 1.0 / math.tan(omega * tau / 2)
        x0 = 0.5 * ((u2 + u1) + (v2 - v1) * cot)
        y0 = 0.5 * ((v2 + v1) - (u2 - u1) * cot)
        return ClassicalTrajectory("magnetic", ((u1, v1), (u2, v2)), tau, omega, (x0, y0))
    raise ValueError(f"unknown trajectory kind {kind!r}")


def van_vleck_matrix(action, x1, x2, step: float = 1e-4) -> np.ndarray:
    """Mixed second derivatives M[i, j] = -d2 S / dx1_i dx2_j by central
    finite differences."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    d = len(x1)
    M = np.empty((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e1 = np.zeros(d); e1[i] = step
            e2 = np.zeros(d); e2[j] = step
            M[i, j] = -(action(x1 + e1, x2 + e2) - action(x1 + e1, x2 - e2)
                        - action(x1 - e1, x2 + e2) + action(x1 - e1, x2 - e2)) / (4 * step**2)
    return M


def semiclassical_kernel(action, x1, x2, step: float = 1e-4) -> complex:
    """Stationary-phase kernel from an action S(x'; x''):

        K = (2 pi i)^(-d/2) sqrt(det(-d2S/dx' dx'')) exp(iS)

    action(x1, x2) takes start/end coordinate arrays of equal length d; the
    mixed second derivatives are central finite differences with the given
    step.  Exact for Lagrangians at most quadratic in the coordinates.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    d = len(x1)
    det = np.linalg.det(van_vleck_matrix(action, x1, x2, step))
    if abs(det) < 1e-300:
        raise KernelSingularityError("singular action determinant")
    pref = (1.0 / complex_sqrt(2j * math.pi)) ** d
    return pref * complex_sqrt(det) * cmath.exp(1j * complex(action(x1, x2)))


def apply_kernel_1d(kernel_vals: np.ndarray, psi_vals: np.ndarray, du: float) -> np.ndarray:
    """Trapezoid application of a sampled 1D kernel matrix K[i, j] ~ K(u_i; u_j)
    to a sampled wave function."""
    w = np.full(len(psi_vals), du)
    w[0] = w[-1] = du / 2
    return kernel_vals @ (w * psi_vals)


@dataclass(frozen=True)
class AnalyticKernel:
    """Descriptor for a closed-form propagator.

    kind: one of free-time | free-space | free-4d | free-2d |
    constant-potential | electric | magnetic | momentum-free |
    relative-time-free | hybrid.  Field parameters are read from params.
    """

    kind: str
    m: float
    tau: float
    params: dict = field(default_factory=dict)

    _DISPATCH = {
        "free-time": lambda self, a, b: free_kernel_time(a, b, self.tau, self.m),
        "free-space": lambda self, a, b: free_kernel_space(a, b, self.tau, self.m),
        "relative-time-free": lambda self, a, b: relative_time_kernel(a, b, self.tau, self.m),
    }

    def __call__(self, *args):
        if self.kind in self._DISPATCH:
            return self._DISPATCH[self.kind](self, *args)
        if self.kind == "free-4d":
            return free_kernel_4d(args[0], args[1], self.tau, self.m)
        if self.kind == "free-2d":
            return free_kernel_2d(*args, self.tau, self.m)
        if self.kind == "constant-potential":
            return constant_potential_kernel(
                args[0], args[1], self.tau, self.m,
                self.params.get("e", 1.0), self.params.get("phi", 0.0),
                self.params.get("A", (0.0, 0.0, 0.0)))
        if self.kind == "electric":
            return electric_kernel(*args, self.tau, self.m, self.params["alpha"])
        if self.kind == "magnetic":
            return magnetic_kernel(*args, self.tau, self.m, self.params["omega"])
        if self.kind == "momentum-free":
            return momentum_kernel_phase(args[0], self.tau, self.m)
        if self.kind == "hybrid":
            return hybrid_kernel(args[0], args[1], args[2], self.tau, self.m)
        raise ValueError(f"unknown kernel kind {self.kind!r}")
