"""Slit-in-time and field-interaction predictions as closed-form calculators.

Everything here works in the time/momentum hybrid picture: momentum rays
carry the standard-theory arrival-time statistics, the quantum-time factor
adds its own dispersion.  The nonrelativistic regime (gamma ~ 1) is assumed
throughout the slit formulas; deviations are flagged, not fatal.

Coordinate conventions: densities are either in detector arrival offset
d_tau (centered on the mean arrival) or in quantum time t (centered on the
mean arrival time tau_D).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExperimentConfig",
    "GateSpec",
    "DetectorDensity",
    "LindnerPrediction",
    "free_density",
    "single_slit_sqt",
    "single_slit_tq",
    "double_slit_sqt",
    "double_slit_tq",
    "lindner_predictions",
    "larmor_shift",
    "x_discrepancy_rate",
    "ab_time_phase",
    "momentum_from_arrival",
    "arrival_from_momentum",
    "kinetic_gate_phase",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Source / gate / detector geometry and beam parameters.

    Distances are measured from the source along the beam direction; the
    particle traverses L_G to the gate and L_D to the detector.  The gate
    is Gaussian with center T (or centers T -/+ dT for the double slit) and
    width Sigma_G.  sigma1_hat_sq is the momentum dispersion of the beam,
    sigma0_sq the intrinsic dispersion in quantum time.
    """

    m: float = 1.0
    p_bar: float = 0.1
    sigma1_hat_sq: float = 1e-4
    sigma0_sq: float = 1.0
    L_G: float = 1.0
    L_D: float = 10.0
    T: float = None           # defaults to the mean arrival at the gate
    dT: float = 0.0
    Sigma_G: float = 1.0
    dphi: float = 0.0
    tau_S: float = 0.0

    def __post_init__(self):
        if not (self.L_D > self.L_G > 0):
            raise ValueError("need L_D > L_G > 0")
        if self.sigma1_hat_sq <= 0 or self.sigma0_sq <= 0 or self.Sigma_G <= 0:
            raise ValueError("dispersions and gate width must be positive")
        if self.m <= 0 or self.p_bar <= 0:
            raise ValueError("mass and mean momentum must be positive")
        if self.p_bar / self.m > 0.2:
            warnings.warn(f"p/m = {self.p_bar / self.m:.2f}: outside the "
                          "nonrelativistic regime the slit formulas assume")

    @property
    def tau_G(self) -> float:
        return self.m * self.L_G / self.p_bar + self.tau_S

    @property
    def tau_D(self) -> float:
        return self.m * self.L_D / self.p_bar + self.tau_S

    @property
    def gate_center(self) -> float:
        return self.tau_G if self.T is None else self.T

    @property
    def T_G(self) -> float:
        """Gate center relative to the mean arrival at the gate."""
        return self.gate_center - self.tau_G

    @property
    def sigma_bar_G_sq(self) -> float:
        """Beam arrival-time variance parameter at the gate."""
        return self.sigma1_hat_sq / self.p_bar**2 * self.tau_G**2

    @property
    def sigma_bar_D_sq(self) -> float:
        """Beam arrival-time variance parameter at the detector."""
        return self.sigma1_hat_sq / self.p_bar**2 * self.tau_D**2

    @property
    def sigma_hat_D_sq(self) -> float:
        """Free quantum-time dispersion at the detector,
        sigma0^2 (1 + tau_D^2 / (m sigma0^2)^2)."""
        return self.sigma0_sq * (1 + self.tau_D**2 / (self.m * self.sigma0_sq) ** 2)

    def check_gate_assumptions(self):
        """Flag violations of the near-gate / far-detector approximations."""
        if self.tau_G > 0.1 * self.m * self.sigma0_sq:
            warnings.warn(
                f"near-gate assumption marginal: tau_G = {self.tau_G:.3g} vs "
                f"m sigma0^2 = {self.m * self.sigma0_sq:.3g}")
        if self.tau_D < 10 * self.tau_G:
            warnings.warn(
                f"far-detector assumption marginal: tau_D = {self.tau_D:.3g} "
                f"vs tau_G = {self.tau_G:.3g}")


@dataclass(frozen=True)
class GateSpec:
    """Gaussian gate; momentum-space image derived on demand, never stored."""

    center: float
    width: float

    def effective_momentum(self, cfg: ExperimentConfig) -> float:
        return -(self.center - cfg.tau_G) / cfg.tau_G * cfg.p_bar

    def momentum_width_sq(self, cfg: ExperimentConfig) -> float:
        return self.width**2 / cfg.tau_G**2 * cfg.p_bar**2

    def transmission(self, t):
        return np.exp(-(np.asarray(t) - self.center) ** 2 / (2 * self.width**2))


@dataclass(frozen=True)
class DetectorDensity:
    """Sampled 1D probability density with its closed-form parameters.

    norm_sq is the expected integral (the squared transmission norm for
    gated beams, 1 for normalized densities); construction checks the
    sampled integral against it.
    """

    coordinate: np.ndarray
    values: np.ndarray
    params: dict
    norm_sq: float
    density: object = None  # closed-form callable

    def __post_init__(self):
        if np.any(self.values < -1e-15):
            raise ValueError("densities must be nonnegative")
        got = float(np.trapezoid(self.values, self.coordinate))
        if abs(got - self.norm_sq) > 1e-6 * max(self.norm_sq, 1e-30):
            raise ValueError(
                f"density integrates to {got:.8g}, expected {self.norm_sq:.8g}")

    def __call__(self, t):
        return self.density(np.asarray(t))


def _sample(density, center, width, norm_sq, params, half_sigmas=8.0, n=2001):
    lo = center - half_sigmas * width
    hi = center + half_sigmas * width
    grid = np.linspace(lo, hi, n)
    return DetectorDensity(grid, density(grid), params, norm_sq, density)


def free_density(cfg: ExperimentConfig) -> DetectorDensity:
    """Arrival density without a gate: Gaussian in t centered on tau_D with
    variance parameter sigma_D^2 = sigma_hat_D^2 + sigma_bar_D^2."""
    s_hat = cfg.sigma_hat_D_sq
    s_bar = cfg.sigma_bar_D_sq
    s_tot = s_hat + s_bar
    center = cfg.tau_D

    def rho(t):
        return np.sqrt(1 / (math.pi * s_tot)) * np.exp(-(t - center) ** 2 / s_tot)

    params = {"sigma_hat_D_sq": s_hat, "sigma_bar_D_sq": s_bar,
              "sigma_D_sq": s_tot, "center": center}
    return _sample(rho, center, math.sqrt(s_tot / 2), 1.0, params)


def single_slit_sqt(cfg: ExperimentConfig,
                    gate_sq_override: float = None) -> DetectorDensity:
    """Standard-theory single slit in time, density in the arrival offset
    d_tau at the detector.

    gate_sq_override replaces Sigma_G^2 (used by the temporal-quantization
    replacement rule Sigma_G^2 -> Sigma_G^2 + sigma0^2)."""
    Ssq = cfg.Sigma_G**2 if gate_sq_override is None else gate_sq_override
    sbG = cfg.sigma_bar_G_sq
    ratio = cfg.tau_D**2 / cfg.tau_G**2
    disp = Ssq * sbG / (Ssq + sbG) * ratio
    offset = -sbG / (Ssq + sbG) * cfg.T_G / cfg.tau_G * cfg.tau_D
    norm_sq = math.sqrt(Ssq / (Ssq + sbG)) * math.exp(-cfg.T_G**2 / (Ssq + sbG))

    def rho(dtau):
        return norm_sq * np.sqrt(1 / (math.pi * disp)) * np.exp(
            -(dtau - offset) ** 2 / disp)

    params = {"sigma_D_sq": disp, "offset": offset, "norm_sq": norm_sq,
              "gate_sq": Ssq}
    return _sample(rho, offset, math.sqrt(disp / 2), norm_sq, params)


def single_slit_tq(cfg: ExperimentConfig) -> DetectorDensity:
    """Temporal-quantization single slit, density in quantum time t.

    The space part is the standard result with Sigma_G^2 -> Sigma_G^2 +
    sigma0^2; the time part is the free dispersion with sigma0^2 -> the
    gated width sigma_X^2 = Sigma_G^2 sigma0^2 / (Sigma_G^2 + sigma0^2).
    """
    cfg.check_gate_assumptions()
    Ssq, s0 = cfg.Sigma_G**2, cfg.sigma0_sq
    sbG = cfg.sigma_bar_G_sq
    eff = Ssq + s0
    ratio = cfg.tau_D**2 / cfg.tau_G**2
    disp_space = eff * sbG / (eff + sbG) * ratio
    offset = -sbG / (eff + sbG) * cfg.T_G / cfg.tau_G * cfg.tau_D
    # space part follows the replacement rule exactly; the total norm also
    # carries the gate-passage factor sqrt(Sigma^2/(Sigma^2 + sigma0^2))
    norm_space_sq = math.sqrt(eff / (eff + sbG)) * math.exp(-cfg.T_G**2 / (eff + sbG))
    sigma_X_sq = Ssq * s0 / (Ssq + s0)
    t_bar_X = cfg.T_G * s0 / (Ssq + s0)
    disp_time = sigma_X_sq + cfg.tau_D**2 / (cfg.m**2 * sigma_X_sq)
    disp = disp_time + disp_space
    gate_pass_sq = math.sqrt(Ssq / (Ssq + s0))
    norm_sq = gate_pass_sq * norm_space_sq
    center = cfg.tau_D + offset + t_bar_X

    def rho(t):
        return norm_sq * np.sqrt(1 / (math.pi * disp)) * np.exp(
            -(t - center) ** 2 / disp)

    params = {"sigma_D_sq": disp, "sigma_hat_D_sq": disp_time,
              "sigma_bar_D_sq": disp_space, "offset": offset,
              "sigma_X_sq": sigma_X_sq, "t_bar_X": t_bar_X,
              "space_norm_sq": norm_space_sq, "norm_sq": norm_sq,
              "center": center}
    return _sample(rho, center, math.sqrt(disp / 2), norm_sq, params)


def _double_slit_density(cfg: ExperimentConfig, hump_sq: float, fringe: float,
                         suppression: float):
    """Shared three-term comb: humps at -/+dT, cross term with the given
    fringe frequency and central suppression; normalized to unit integral."""
    sb = cfg.sigma_bar_D_sq
    dT = cfg.dT
    f_bar = 4 * (cfg.p_bar**2 / (2 * cfg.m)) * dT / cfg.tau_D
    phi_bar = 2 * (cfg.p_bar**2 / (2 * cfg.m)) * dT + 2 * cfg.dphi
    denom = 2 + 2 * math.exp(-dT**2 / sb - f_bar**2 * sb / 4) * math.cos(phi_bar)

    def rho(dtau):
        dtau = np.asarray(dtau)
        base = np.sqrt(1 / (math.pi * hump_sq))
        humps = (np.exp(-(dtau + dT) ** 2 / hump_sq)
                 + np.exp(-(dtau - dT) ** 2 / hump_sq))
        cross = (2 * suppression * np.exp(-(dtau**2 + dT**2 * hump_sq / sb) / hump_sq)
                 * np.cos(phi_bar + fringe * f_bar * dtau))
        return base * (humps + cross) / denom

    return rho, f_bar, phi_bar, denom


def double_slit_sqt(cfg: ExperimentConfig) -> DetectorDensity:
    """Standard-theory double slit in time (two correlated sources at
    -/+dT), normalized density in the arrival offset."""
    if cfg.dT <= 0:
        raise ValueError("double slit needs dT > 0")
    if cfg.dT > 0.1 * cfg.tau_D:
        warnings.warn("dT is not small against tau_D; the first-order "
                      "momentum map is marginal")
    sb = cfg.sigma_bar_D_sq
    rho, f_bar, phi_bar, denom = _double_slit_density(cfg, sb, 1.0, 1.0)
    params = {"sigma_D_sq": sb, "f_bar": f_bar, "phi_bar": phi_bar,
              "denominator": denom, "fringe_factor": 1.0, "suppression": 1.0}
    width = math.sqrt(sb / 2) + cfg.dT
    return _sample(rho, 0.0, width, 1.0, params, half_sigmas=10.0, n=4001)


def double_slit_tq(cfg: ExperimentConfig) -> DetectorDensity:
    """Temporal-quantization double slit: humps widened to sigma_D^2 =
    sigma_hat_D^2 + sigma_bar_D^2, fringe frequency reduced by
    sigma_bar^2/sigma_D^2, central hump suppressed by
    exp(-(sigma_hat^2 sigma_bar^2 / 4 sigma_D^2) f_bar^2)."""
    if cfg.dT <= 0:
        raise ValueError("double slit needs dT > 0")
    s_hat = cfg.sigma_hat_D_sq
    sb = cfg.sigma_bar_D_sq
    s_tot = s_hat + sb
    fringe_factor = sb / s_tot
    f_bar = 4 * (cfg.p_bar**2 / (2 * cfg.m)) * cfg.dT / cfg.tau_D
    suppression = math.exp(-s_hat * sb / (4 * s_tot) * f_bar**2)
    rho, f_bar, phi_bar, denom = _double_slit_density(
        cfg, s_tot, fringe_factor, suppression)
    params = {"sigma_D_sq": s_tot, "sigma_hat_D_sq": s_hat,
              "sigma_bar_D_sq": sb, "f_bar": f_bar, "phi_bar": phi_bar,
              "denominator": denom, "fringe_factor": fringe_factor,
              "suppression": suppression}
    width = math.sqrt(s_tot / 2) + cfg.dT
    return _sample(rho, 0.0, width, 1.0, params, half_sigmas=10.0, n=4001)


@dataclass(frozen=True)
class LindnerPrediction:
    """Relative predictions for the attosecond double slit: all three are
    ratios against the standard-theory pattern, independent of overall
    normalization."""

    widened_variance_factor: float
    fringe_factor: float
    central_suppression: float
    sigma_a_sq: float
    sigma_bar_D_sq: float
    f_bar: float


def lindner_predictions(sigma_a: float, cfg: ExperimentConfig) -> LindnerPrediction:
    """Predictions with the bound-state width in time sigma_a as the source
    dispersion: hump variances widen by (sigma_a^2 + sigma_bar^2)/sigma_bar^2,
    the fringe frequency scales by sigma_bar^2/(sigma_a^2 + sigma_bar^2),
    and the central hump gains exp(-(1/4) sigma_a^2 sigma_bar^2 f_bar^2 /
    (sigma_a^2 + sigma_bar^2))."""
    if sigma_a < 0:
        raise ValueError("sigma_a must be nonnegative")
    sb = cfg.sigma_bar_D_sq
    sa2 = sigma_a**2
    f_bar = 4 * (cfg.p_bar**2 / (2 * cfg.m)) * cfg.dT / cfg.tau_D if cfg.dT else 0.0
    return LindnerPrediction(
        widened_variance_factor=(sa2 + sb) / sb,
        fringe_factor=sb / (sa2 + sb),
        central_suppression=math.exp(-0.25 * sa2 * sb / (sa2 + sb) * f_bar**2),
        sigma_a_sq=sa2, sigma_bar_D_sq=sb, f_bar=f_bar)


def larmor_shift(B0: float, B1: float, B2: float, tau: float, t_avg: float,
                 sigma0_sq: float, m: float, e: float):
    """Effective Larmor frequency in a magnetic field B0 + B1 t + (B2/2) t^2.

    Returns (omega_bar, omega_hat): the standard part (e/m) B_tau(0) and the
    relative-time correction (e/m)(B1 + B2 tau/2) <t_tau> + (e/4m) B2
    sigma0^2, exactly as the source expansion prints them.
    """
    omega_bar = e / m * (B0 + B1 * tau + B2 * tau**2)
    omega_hat = e / m * (B1 + B2 * tau / 2) * t_avg + e / (4 * m) * B2 * sigma0_sq
    return omega_bar, omega_hat


def x_discrepancy_rate(E0: float, E1: float, E2: float, tau: float,
                       t_avg: float, t2_avg: float, r_perp_sq: float,
                       m: float, e: float) -> float:
    """Rate of change of the position discrepancy in a time-varying electric
    field E(t) = -(E0 + E1 t + E2 t^2 / 2):

        d<dx>/dtau = e (E2/4m) <y^2+z^2> <t> + e (E_tau^0/m) <t>
                     + e (E_tau^1/2m) <t^2>

    with E_tau^0 = E0 + E1 tau + E2 tau^2/2 and E_tau^1 = E1 + E2 tau.
    """
    e_tau_0 = E0 + E1 * tau + 0.5 * E2 * tau**2
    e_tau_1 = E1 + E2 * tau
    e_tau_2 = E2
    return (e * e_tau_2 / (4 * m) * r_perp_sq * t_avg
            + e * e_tau_0 / m * t_avg
            + e * e_tau_1 / (2 * m) * t2_avg)


def ab_time_phase(V: float, dtau: float, gamma: float, e: float = 1.0):
    """Aharonov-Bohm-in-time phases for a potential pulse V over lab time
    dtau: (temporal-quantization, standard-theory) = (-gamma e V dtau,
    -e V dtau); their ratio is gamma."""
    if dtau < 0:
        raise ValueError("dtau must be nonnegative")
    return -gamma * e * V * dtau, -e * V * dtau


def momentum_from_arrival(dtau: float, tau_bar: float, p_bar: float) -> float:
    """First-order map dp = -p_bar dtau / tau_bar."""
    return -p_bar * dtau / tau_bar


def arrival_from_momentum(dp: float, tau_bar: float, p_bar: float) -> float:
    """First-order inverse dtau = -tau_bar dp / p_bar."""
    return -tau_bar * dp / p_bar


def kinetic_gate_phase(p: float, m: float, gate_time: float, tau_S: float,
                       tau_D: float):
    """Kinetic-energy phase accumulated source -> gate -> detector for one
    momentum ray; independent of the gate time, so a single source shows no
    first-order interference between gate paths."""
    leg1 = p**2 / (2 * m) * (gate_time - tau_S)
    leg2 = p**2 / (2 * m) * (tau_D - gate_time)
    return leg1, leg2, leg1 + leg2
