import math

import numpy as np
import pytest

from qtsim.foundation import FourVector
from qtsim.wavepackets import (GaussianTestFunction, PlaneWave, Representation,
                               evolve_gaussian, lab_energy, lab_energy_relative,
                               onshell_energy, to_representation)


def unit_gaussian(E0=0.0, p=0.0, t0=0.0, x0=0.0, sig=(1.0, 1.0, 1.0, 1.0)):
    return GaussianTestFunction(centroid=FourVector(t0, x0),
                                momentum=FourVector(E0, p),
                                sigma0_sq=tuple(sig))


def grid_norm_4d(psi, half=9.0, n=41):
    """Independent quadrature oracle: trapezoid integral of |psi|^2 en bloc."""
    axes = [np.linspace(c - half, c + half, n) for c in psi.centroid.as_array()]
    T, X, Y, Z = np.meshgrid(*axes, indexing="ij")
    vals = np.abs(psi(T, X, Y, Z)) ** 2
    w = np.prod([a[1] - a[0] for a in axes])
    return vals.sum() * w


def test_norm_and_moments_at_birth():
    psi = unit_gaussian(E0=0.5, p=0.3, t0=0.2, x0=-0.4, sig=(1.0, 2.0, 0.5, 1.5))
    assert grid_norm_4d(psi, half=10.0, n=61) == pytest.approx(1.0, rel=1e-9)
    # 1D moment oracle on the time axis
    t = np.linspace(-12, 12, 4001)
    chi = psi._axis_factor(0, t)
    rho = np.abs(chi) ** 2
    norm = np.trapezoid(rho, t)
    tbar = np.trapezoid(t * rho, t) / norm
    var = np.trapezoid((t - tbar) ** 2 * rho, t) / norm
    assert tbar == pytest.approx(0.2, abs=1e-10)
    assert var == pytest.approx(psi.sigma0_sq[0] / 2, rel=1e-10)


def test_rejects_bad_dispersions():
    with pytest.raises(ValueError):
        unit_gaussian(sig=(1.0, -1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        unit_gaussian(sig=(1.0 + 0.1j, 1.0, 1.0, 1.0))


def test_evolve_tau_zero_is_identity():
    psi = unit_gaussian(E0=1.0, p=0.5)
    assert evolve_gaussian(psi, 0.0, 1.0) == psi


def test_evolve_rejects_bad_mass():
    with pytest.raises(ValueError):
        evolve_gaussian(unit_gaussian(), 1.0, -1.0)


def test_centroid_drift():
    # xbar_tau = xbar_0 + (p0/m) tau, checked for tau=3, p0=(E0, p, 0, 0)
    E0, p = 1.25, 0.5
    psi = evolve_gaussian(unit_gaussian(E0=E0, p=p), 3.0, 1.0)
    assert psi.centroid.t == pytest.approx(3 * E0)
    assert psi.centroid.x == pytest.approx(3 * p)
    assert psi.centroid.y == 0.0 and psi.centroid.z == 0.0


def test_time_axis_uncertainty_growth():
    # <(t - tbar)^2> = (sigma0^2/2)(1 + tau^2/(m^2 sigma0^4)) -> 2.5 at tau=2
    psi = evolve_gaussian(unit_gaussian(E0=1.0), 2.0, 1.0)
    assert psi.coordinate_variance(0) == pytest.approx(2.5, rel=1e-12)
    # cross-check by grid integration
    t = np.linspace(-20, 24, 8001)
    chi = psi._axis_factor(0, t)
    rho = np.abs(chi) ** 2
    norm = np.trapezoid(rho, t)
    tbar = np.trapezoid(t * rho, t) / norm
    var = np.trapezoid((t - tbar) ** 2 * rho, t) / norm
    assert var == pytest.approx(2.5, rel=1e-8)
    assert tbar == pytest.approx(2.0, abs=1e-8)


def test_norm_preserved_under_evolution():
    psi = evolve_gaussian(unit_gaussian(E0=0.8, p=0.4), 1.7, 1.0)
    assert grid_norm_4d(psi, half=12.0, n=61) == pytest.approx(1.0, abs=1e-8)


def test_evolution_composes_exactly():
    psi = unit_gaussian(E0=1.0, p=0.3, sig=(1.0, 2.0, 1.0, 0.7))
    a = evolve_gaussian(evolve_gaussian(psi, 0.6, 1.0), 0.9, 1.0)
    b = evolve_gaussian(psi, 1.5, 1.0)
    assert a.phase == pytest.approx(b.phase)
    assert np.allclose(a.ffactors, b.ffactors)
    assert a.centroid.as_array() == pytest.approx(b.centroid.as_array())


def test_quantum_time_velocity_is_gamma():
    # d<t>/dtau = E0/m = gamma, compared against finite differences
    m, p = 1.0, 0.6
    E0 = onshell_energy(p * p, m)
    psi = unit_gaussian(E0=E0, p=p)
    h = 1e-5
    tb1 = evolve_gaussian(psi, 1.0 + h, m).centroid.t
    tb0 = evolve_gaussian(psi, 1.0 - h, m).centroid.t
    gamma = E0 / m
    assert (tb1 - tb0) / (2 * h) == pytest.approx(gamma, rel=1e-9)


def test_lab_energy_examples():
    m = 1.0
    onshell = PlaneWave(FourVector(onshell_energy(0.25, m), 0.5))
    assert lab_energy(onshell, m) == pytest.approx(0.0, abs=1e-15)
    rest = PlaneWave(FourVector(0.0, 0.0))
    assert lab_energy(rest, m) == pytest.approx(0.5)
    pw = PlaneWave(FourVector(2.0, 1.0))
    assert lab_energy(pw, m) == pytest.approx(-1.0)


def test_lab_energy_relative_examples():
    m = 1.0
    # onshell: time part zero
    p = PlaneWave(FourVector(onshell_energy(0.25, m), 0.5))
    ebar, ehat_part = lab_energy_relative(p, m)
    assert ehat_part == pytest.approx(0.0, abs=1e-15)
    # p = 0 (gamma = 1): time part is -eps^2/2m
    eps = 0.01
    p = PlaneWave(FourVector(m + eps, 0.0))
    _, val = lab_energy_relative(p, m)
    assert val == pytest.approx(-(eps**2) / (2 * m))
    # m=1, p^2=3 (gamma=2), Ehat=0.1 -> -0.105
    ebar = onshell_energy(3.0, 1.0)
    p = PlaneWave(FourVector(ebar + 0.1, math.sqrt(3.0)))
    got_ebar, got = lab_energy_relative(p, 1.0)
    assert got_ebar == pytest.approx(2.0)
    assert got == pytest.approx(-0.105)


def test_representation_round_trips():
    psi = unit_gaussian(E0=0.7, p=0.2, t0=0.1, x0=-0.3, sig=(1.5, 0.8, 1.0, 1.0))
    via_mom = to_representation(to_representation(psi, Representation.ENERGY_MOMENTUM),
                                Representation.BLOCK)
    assert via_mom == psi
    via_rel = to_representation(to_representation(psi, Representation.RELATIVE_TIME, tau=1.3),
                                Representation.BLOCK, tau=1.3)
    assert via_rel.centroid.as_array() == pytest.approx(psi.centroid.as_array())
    assert via_rel.phase == pytest.approx(psi.phase)


def test_unsupported_conversion_rejected():
    psi = unit_gaussian()
    mom = to_representation(psi, Representation.ENERGY_MOMENTUM)
    with pytest.raises(ValueError, match="unsupported representation conversion"):
        to_representation(mom, Representation.RELATIVE_TIME)


def test_dispersions_reciprocal():
    # sigma0^2 = 4 -> sigma-hatated^2 = 0.25
    psi = unit_gaussian(sig=(4.0, 1.0, 1.0, 1.0))
    mom = to_representation(psi, Representation.ENERGY_MOMENTUM)
    assert mom.momentum_variance(0) == pytest.approx(1.0 / (2 * 4.0))
    # |psi^(E)|^2 is a Gaussian of variance sigma_hat^2/2 = 1/(2 sigma^2)
    E = np.linspace(-4, 4, 2001)
    rho = np.abs(mom._axis_factor(0, E)) ** 2
    var = np.trapezoid(E**2 * rho, E) / np.trapezoid(rho, E)
    assert var == pytest.approx(0.125, rel=1e-9)


def test_momentum_rep_matches_numeric_fourier_transform():
    """Parseval / transform oracle: the analytic momentum-space form equals the
    numerical Fourier transform with signs exp(+iEt) on the time axis."""
    psi = evolve_gaussian(unit_gaussian(E0=0.9, p=0.0, t0=0.3, sig=(1.2, 1.0, 1.0, 1.0)),
                          0.8, 1.0)
    mom = to_representation(psi, Representation.ENERGY_MOMENTUM)
    t = np.linspace(-26, 26, 20001)
    chi = psi._axis_factor(0, t)
    for E in (-0.5, 0.4, 0.9, 1.6):
        num = np.trapezoid(chi * np.exp(1j * E * t), t) / math.sqrt(2 * math.pi)
        ana = mom._axis_factor(0, E)
        assert abs(num - ana) < 1e-9
    # Parseval: L2 norms agree
    E = np.linspace(-8, 10, 4001)
    norm_mom = np.trapezoid(np.abs(mom._axis_factor(0, E)) ** 2, E)
    norm_coord = np.trapezoid(np.abs(chi) ** 2, t)
    assert norm_mom == pytest.approx(norm_coord, rel=1e-9)


def test_relative_time_centroid_shift():
    # t-bar^(rel) = t-bar_0 + (E0/m - 1) tau; nonrelativistic E0 ~ m keeps it ~ t-bar_0
    m, tau = 1.0, 2.0
    for p in (0.0, 0.05):
        E0 = onshell_energy(p * p, m)
        psi = evolve_gaussian(unit_gaussian(E0=E0, p=p), tau, m)
        rel = to_representation(psi, Representation.RELATIVE_TIME, tau=tau)
        assert rel.centroid.t == pytest.approx((E0 / m - 1.0) * tau, abs=1e-12)
    # exactly nonrelativistic limit: p=0 -> onshell E0=m -> no relative drift
    psi = evolve_gaussian(unit_gaussian(E0=m), tau, m)
    rel = to_representation(psi, Representation.RELATIVE_TIME, tau=tau)
    assert rel.centroid.t == 0.0


def test_plane_wave_values():
    pw = PlaneWave(FourVector(1.0, 0.5))
    v = pw(0.3, 0.2)
    expect = np.exp(-1j * 1.0 * 0.3 + 1j * 0.5 * 0.2) / (4 * np.pi**2)
    assert v == pytest.approx(expect)
