"""The 4D Schrodinger equation in laboratory time, on (t, x) grids.

    i d(psi)/d(tau) = H psi,   H = -(1/2m) ((p - eA)^2 - m^2),  p_mu = i d_mu

which expands to H = (1/2m) [ (d_t + ie Phi)^2 - (d_x - ie A_x)^2 + m^2 ].
Operator-ordering cross terms are symmetrized: the covariant derivative is
applied twice, giving the (E Phi + Phi E)/2m and (p A + A p)/2m orderings.

Grids are uniform in (t, x) with 1+0D (t only) supported throughout.  The
evolver is Crank-Nicolson (implicit midpoint for a tau-independent H),
norm-preserving by construction, with an absorbing boundary mask validated
after the run.  The relative-time form adds +i d/d(t_tau) to H and
evaluates fields at shifted arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .wavepackets import GaussianTestFunction, Representation

__all__ = [
    "EvolutionError",
    "GridWaveFunction",
    "FieldConfig",
    "CrossPotential",
    "free_fields",
    "from_gaussian",
    "hamiltonian_apply",
    "build_hamiltonian",
    "evolve",
    "gauge_transform",
    "time_gauge",
    "cross_potential_electric",
    "cross_potential_magnetic",
    "expectation_rate",
    "second_expectation_rate",
    "stationary_residual",
    "coordinate_grid",
]


class EvolutionError(RuntimeError):
    """Numerical failure during grid evolution (instability or leakage)."""


@dataclass(frozen=True)
class GridWaveFunction:
    """Complex amplitudes on a uniform (t,) or (t, x) lattice."""

    values: np.ndarray
    t: np.ndarray
    x: np.ndarray = None
    rep: str = "block"  # "block" | "relative"

    def __post_init__(self):
        v = np.asarray(self.values)
        if self.x is None:
            if v.shape != self.t.shape:
                raise ValueError("1+0D values must match the t grid")
        elif v.shape != (len(self.t), len(self.x)):
            raise ValueError("values shape must be (len(t), len(x))")

    @property
    def dt(self) -> float:
        return self.t[1] - self.t[0]

    @property
    def dx(self) -> float:
        return self.x[1] - self.x[0] if self.x is not None else None

    @property
    def cell(self) -> float:
        return self.dt if self.x is None else self.dt * self.dx

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.cell)

    def normalized(self) -> "GridWaveFunction":
        return replace(self, values=self.values / math.sqrt(self.norm_sq()))

    def expectation(self, grid_fn) -> complex:
        """<psi| f |psi> for a multiplicative operator sampled on the grid."""
        rho = np.abs(self.values) ** 2
        return complex(np.sum(grid_fn * rho) * self.cell / self.norm_sq())

    def mesh(self):
        if self.x is None:
            return (self.t,)
        return np.meshgrid(self.t, self.x, indexing="ij")


def coordinate_grid(wf: GridWaveFunction, axis: str) -> np.ndarray:
    """Sampled coordinate operator (multiplication by t or x)."""
    if axis == "t":
        return wf.t if wf.x is None else wf.mesh()[0]
    if axis == "x":
        if wf.x is None:
            raise ValueError("1+0D grid has no x axis")
        return wf.mesh()[1]
    raise ValueError(f"unknown axis {axis!r}")


@dataclass(frozen=True)
class FieldConfig:
    """Electromagnetic configuration Phi(t, x), A_x(t, x) plus charge/mass.

    alice_rate is the laboratory-time scalar potential dA_tau (a c-number
    function of tau) entering i d psi/d tau = (H + e * alice_rate) psi;
    zero by default.  gauge holds an optional gauge function Lambda(t, x).
    """

    m: float = 1.0
    e: float = 1.0
    phi: object = None    # callable (t, x) -> array, or None for 0
    a_x: object = None
    alice_rate: object = None  # callable (tau) -> float
    gauge: object = None

    def phi_at(self, t, x):
        if self.phi is None:
            return np.zeros(np.broadcast(t, x).shape)
        return np.broadcast_to(self.phi(t, x), np.broadcast(t, x).shape).astype(float)

    def a_x_at(self, t, x):
        if self.a_x is None:
            return np.zeros(np.broadcast(t, x).shape)
        return np.broadcast_to(self.a_x(t, x), np.broadcast(t, x).shape).astype(float)

    def field_strength(self, t, x, h: float = 1e-6):
        """F_{tx} = dA_x/dt - d(-Phi)/dx sampled by central differences.

        With A_mu = (Phi, -A_x) (lowered index), F_{0 1} = d_0 A_1 - d_1 A_0
        = -dA_x/dt - dPhi/dx = E_x.
        """
        da = (self.a_x_at(t + h, x) - self.a_x_at(t - h, x)) / (2 * h)
        dphi = (self.phi_at(t, x + h) - self.phi_at(t, x - h)) / (2 * h)
        return -da - dphi

    def lorentz_residual(self, t, x, h: float = 1e-6):
        """d_mu A^mu = dPhi/dt + dA_x/dx sampled by central differences."""
        dphi = (self.phi_at(t + h, x) - self.phi_at(t - h, x)) / (2 * h)
        da = (self.a_x_at(t, x + h) - self.a_x_at(t, x - h)) / (2 * h)
        return dphi + da

    def shifted(self, tau: float) -> "FieldConfig":
        """Fields in relative time: Phi_tau(t_tau, x) = Phi(tau + t_tau, x)."""
        phi = None if self.phi is None else (lambda t, x: self.phi(t + tau, x))
        a_x = None if self.a_x is None else (lambda t, x: self.a_x(t + tau, x))
        return replace(self, phi=phi, a_x=a_x)


def free_fields(m: float = 1.0, e: float = 1.0) -> FieldConfig:
    return FieldConfig(m=m, e=e)


def from_gaussian(psi: GaussianTestFunction, t: np.ndarray, x: np.ndarray = None,
                  rep: str = "block") -> GridWaveFunction:
    """Discretize the (t) or (t, x) factor of a Gaussian test function.

    Uses the time-axis and first space-axis factors; the state is normalized
    over the sampled axes (the y, z factors are dropped, not sliced).
    Rejects grids that cannot resolve the central momentum (Nyquist check).
    """
    t = np.asarray(t, float)
    h_t = t[1] - t[0]
    if abs(psi.momentum.t) * h_t > 2.5:
        raise ValueError(
            f"grid too coarse: |E0| dt = {abs(psi.momentum.t) * h_t:.2f} rad "
            "per step exceeds the Nyquist budget")
    phase = np.exp(1j * psi.phase)
    if x is None:
        vals = phase * psi._axis_factor(0, t)
        return GridWaveFunction(vals, t=t, rep=rep)
    x = np.asarray(x, float)
    if abs(psi.momentum.x) * (x[1] - x[0]) > 2.5:
        raise ValueError(
            f"grid too coarse: |p0| dx = {abs(psi.momentum.x) * (x[1] - x[0]):.2f} "
            "rad per step exceeds the Nyquist budget")
    vals = phase * np.multiply.outer(psi._axis_factor(0, t), psi._axis_factor(1, x))
    return GridWaveFunction(vals, t=t, x=x, rep=rep)


def _gradient(values, h, axis):
    out = np.empty_like(values)
    sl = [slice(None)] * values.ndim
    lo, hi, mid = list(sl), list(sl), list(sl)
    lo[axis], hi[axis], mid[axis] = slice(0, -2), slice(2, None), slice(1, -1)
    out[tuple(mid)] = (values[tuple(hi)] - values[tuple(lo)]) / (2 * h)
    first, second = list(sl), list(sl)
    first[axis], second[axis] = 0, 1
    out[tuple(first)] = (values[tuple(second)] - values[tuple(first)]) / h
    last, prev = list(sl), list(sl)
    last[axis], prev[axis] = -1, -2
    out[tuple(last)] = (values[tuple(last)] - values[tuple(prev)]) / h
    return out


def _laplacian(values, h, axis):
    out = np.empty_like(values)
    sl = [slice(None)] * values.ndim
    lo, hi, mid = list(sl), list(sl), list(sl)
    lo[axis], hi[axis], mid[axis] = slice(0, -2), slice(2, None), slice(1, -1)
    out[tuple(mid)] = (values[tuple(hi)] - 2 * values[tuple(mid)]
                       + values[tuple(lo)]) / h**2
    # one-sided fallback at the edges (second-order forward/backward)
    for edge, sgn in ((0, 1), (-1, -1)):
        idx = [list(sl) for _ in range(4)]
        for k in range(4):
            idx[k][axis] = edge + sgn * k
        out[tuple(idx[0])] = (2 * values[tuple(idx[0])] - 5 * values[tuple(idx[1])]
                              + 4 * values[tuple(idx[2])] - values[tuple(idx[3])]) / h**2
    return out


def hamiltonian_apply(wf: GridWaveFunction, fields: FieldConfig,
                      nyquist_check: bool = True) -> GridWaveFunction:
    """H psi on the grid: (1/2m)[(d_t + ie Phi)^2 - (d_x - ie A)^2 + m^2] psi,
    plus +i d_t psi in the relative-time representation.

    Central differences with one-sided fallback at the edges; the covariant
    derivative is applied twice so the Phi and A cross terms come out
    symmetrized.
    """
    v = wf.values
    m, e = fields.m, fields.e
    if wf.x is None:
        T = wf.t
        X = np.zeros_like(T)
        axes = [(0, wf.dt)]
    else:
        T, X = wf.mesh()
        axes = [(0, wf.dt), (1, wf.dx)]
    if nyquist_check:
        # roughness detector: ||D2 v|| h^2 / (2 ||D1 v|| h) equals
        # (1 - cos kh)/|sin kh| for a plane wave, which crosses 1 only when
        # the phase advance per step approaches the Nyquist limit
        for axis, h in axes:
            sl = [slice(None)] * v.ndim
            sl[axis] = slice(2, -2)
            g = _gradient(v, h, axis)[tuple(sl)]
            lap = _laplacian(v, h, axis)[tuple(sl)]
            num = np.sqrt(np.sum(np.abs(lap) ** 2)) * h * h
            den = 2 * np.sqrt(np.sum(np.abs(g) ** 2)) * h
            if num > 1.8 * den:
                raise ValueError(
                    f"grid too coarse on axis {axis}: second differences "
                    "dominate first differences (unresolved oscillation)")
    phi = fields.phi_at(T, X)
    d2t = (_laplacian(v, wf.dt, 0)
           + 1j * e * (_gradient(phi * v, wf.dt, 0) + phi * _gradient(v, wf.dt, 0))
           - e**2 * phi**2 * v)
    if wf.x is None:
        d2x = 0.0
    else:
        ax = fields.a_x_at(T, X)
        d2x = (_laplacian(v, wf.dx, 1)
               - 1j * e * (_gradient(ax * v, wf.dx, 1) + ax * _gradient(v, wf.dx, 1))
               - e**2 * ax**2 * v)
    out = (d2t - d2x + m**2 * v) / (2 * m)
    if wf.rep == "relative":
        # the frame-shift term is a plain derivative, not a covariant one
        out = out + 1j * _gradient(v, wf.dt, 0)
    return replace(wf, values=out)


def _diff_ops(n, h):
    lap = sp.diags([1, -2, 1], [-1, 0, 1], shape=(n, n), format="csr") / h**2
    d1 = sp.diags([-1, 1], [-1, 1], shape=(n, n), format="csr") / (2 * h)
    return lap, d1


def build_hamiltonian(wf: GridWaveFunction, fields: FieldConfig) -> sp.csr_matrix:
    """Sparse Hermitian H on the grid with Dirichlet boundaries."""
    m, e = fields.m, fields.e
    if wf.x is None:
        T = wf.t
        X = np.zeros_like(T)
        lap_t, d1_t = _diff_ops(len(wf.t), wf.dt)
        lap_t_full, d1_t_full = lap_t, d1_t
        lap_x_full = None
        n = len(wf.t)
    else:
        T, X = wf.mesh()
        lap_t, d1_t = _diff_ops(len(wf.t), wf.dt)
        lap_x, d1_x = _diff_ops(len(wf.x), wf.dx)
        ix = sp.identity(len(wf.x), format="csr")
        it = sp.identity(len(wf.t), format="csr")
        lap_t_full = sp.kron(lap_t, ix, format="csr")
        d1_t_full = sp.kron(d1_t, ix, format="csr")
        lap_x_full = sp.kron(it, lap_x, format="csr")
        d1_x_full = sp.kron(it, d1_x, format="csr")
        n = len(wf.t) * len(wf.x)
    phi = sp.diags(fields.phi_at(T, X).ravel())
    Kt = lap_t_full + 1j * e * (d1_t_full @ phi + phi @ d1_t_full) \
        - e**2 * (phi @ phi)
    if wf.x is None:
        H = (Kt + m**2 * sp.identity(n)) / (2 * m)
    else:
        ax = sp.diags(fields.a_x_at(T, X).ravel())
        Kx = lap_x_full - 1j * e * (d1_x_full @ ax + ax @ d1_x_full) \
            - e**2 * (ax @ ax)
        H = (Kt - Kx + m**2 * sp.identity(n)) / (2 * m)
    if wf.rep == "relative":
        H = H + 1j * d1_t_full
    return H.tocsc()


def _absorbing_mask(wf: GridWaveFunction, width: int = 8) -> np.ndarray:
    def ramp(n):
        r = np.ones(n)
        edge = 0.5 * (1 - np.cos(np.pi * np.arange(width) / width))
        r[:width] = edge
        r[-width:] = edge[::-1]
        return r

    if wf.x is None:
        return ramp(len(wf.t))
    return np.multiply.outer(ramp(len(wf.t)), ramp(len(wf.x)))


def evolve(wf: GridWaveFunction, fields: FieldConfig, tau: float, steps: int,
           absorbing: bool = True, mask_width: int = 8,
           check_leakage: bool = True) -> GridWaveFunction:
    """Advance i d(psi)/d(tau) = H psi by Crank-Nicolson (implicit midpoint
    for the static H used here); probability is conserved by construction.

    Aborts with EvolutionError if the norm drifts by more than 1e-3 or, when
    check_leakage is set, if more than 1e-6 probability sits inside the
    absorbing mask zone at the end of the run.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if steps == 0 or tau == 0.0:
        return wf
    dtau = tau / steps
    H = build_hamiltonian(wf, fields)
    # accuracy guard: implicit midpoint needs the occupied spectral radius
    # resolved within a safety factor of 4
    v0 = wf.values.ravel()
    rho_occ = float(np.sqrt(np.vdot(H @ v0, H @ v0).real / np.vdot(v0, v0).real))
    if dtau * rho_occ > 2.0:
        raise ValueError(
            f"steps too coarse: dtau * |H| = {dtau * rho_occ:.2f} > 2; "
            f"use at least {int(math.ceil(2 * tau * rho_occ))} steps")
    if dtau * rho_occ > 0.5:
        warnings.warn("marginal lab-time resolution: dtau * |H| = "
                      f"{dtau * rho_occ:.2f} (safety factor 4 not met)")
    n = H.shape[0]
    A = (sp.identity(n, format="csc") + 0.5j * dtau * H).tocsc()
    B = (sp.identity(n, format="csc") - 0.5j * dtau * H).tocsr()
    lu = spla.splu(A)
    mask = _absorbing_mask(wf, mask_width).ravel() if absorbing else None
    v = v0.copy()
    norm0 = np.vdot(v, v).real
    alice_phase = 0.0
    for k in range(steps):
        v = lu.solve(B @ v)
        if mask is not None:
            v = v * mask
        if fields.alice_rate is not None:
            # c-number term integrates to a pure phase (midpoint rule)
            alice_phase -= fields.e * fields.alice_rate((k + 0.5) * dtau) * dtau
        drift = abs(np.vdot(v, v).real - norm0) / norm0
        if drift > 1e-3:
            raise EvolutionError(
                f"norm drift {drift:.2e} after step {k + 1}/{steps}; "
                "the grid or step count is inadequate")
    if alice_phase:
        v = v * np.exp(1j * alice_phase)
    out = replace(wf, values=v.reshape(wf.values.shape))
    if absorbing and check_leakage:
        zone = _absorbing_mask(wf, mask_width).ravel() < 1.0
        leaked = float(np.sum(np.abs(v[zone]) ** 2) * wf.cell) / out.norm_sq()
        if leaked > 1e-6:
            raise EvolutionError(
                f"probability {leaked:.2e} inside the absorbing zone; "
                "enlarge the grid")
    return out


def gauge_transform(wf: GridWaveFunction, lam, fields: FieldConfig,
                    lam_rate=None):
    """psi' = exp(ie Lambda) psi with A'^mu = A^mu - d^mu Lambda.

    lam is Lambda(t, x); with the (+,-,-,-) metric, Phi' = Phi - dLambda/dt
    and A_x' = A_x + dLambda/dx.  lam_rate, if given, is dLambda/dtau and
    shifts the laboratory-time scalar: alice' = alice - dLambda/dtau.
    """
    if wf.x is None:
        T = wf.t
        X = np.zeros_like(T)
    else:
        T, X = wf.mesh()
    e = fields.e
    lam_vals = np.broadcast_to(lam(T, X), wf.values.shape)
    psi2 = replace(wf, values=np.exp(1j * e * lam_vals) * wf.values)
    h = 1e-6

    old_phi, old_ax = fields.phi, fields.a_x

    def phi2(t, x):
        base = old_phi(t, x) if old_phi is not None else 0.0
        return base - (lam(t + h, x) - lam(t - h, x)) / (2 * h)

    def ax2(t, x):
        base = old_ax(t, x) if old_ax is not None else 0.0
        return base + (lam(t, x + h) - lam(t, x - h)) / (2 * h)

    old_alice = fields.alice_rate

    def alice2(tau):
        base = old_alice(tau) if old_alice is not None else 0.0
        return base - lam_rate(tau)

    f2 = replace(fields, phi=phi2, a_x=ax2,
                 alice_rate=alice2 if lam_rate is not None else fields.alice_rate,
                 gauge=lam)
    return psi2, f2


def time_gauge(phi_tau, n_quad: int = 64, singular_tol: float = 1e8):
    """Lambda_tau(t_tau, x) = integral_0^{t_tau} Phi_tau(t', x) dt'.

    phi_tau is a callable (t, x); the integral runs by Gauss-Legendre
    quadrature per evaluation point (exact for the polynomial potentials
    used here).  Reduces to Phi(x) * t_tau for a static potential.
    Singular potentials (non-finite or blowing up near the origin, as the
    central 1/r^n cases do) are rejected.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_quad)

    def lam(t_tau, x):
        t_tau = np.asarray(t_tau, dtype=float)
        x = np.asarray(x, dtype=float)
        tt, xx = np.broadcast_arrays(t_tau, x)
        half = tt / 2.0
        # map [-1, 1] -> [0, t_tau]
        pts = half[..., None] * (nodes + 1.0)
        vals = phi_tau(pts, xx[..., None])
        vals = np.broadcast_to(vals, pts.shape)
        probe = np.asarray(phi_tau(np.array([1e-9, -1e-9]), np.zeros(2)))
        if (not np.all(np.isfinite(vals)) or np.max(np.abs(vals)) > singular_tol
                or not np.all(np.isfinite(probe))
                or np.max(np.abs(probe)) >= singular_tol):
            raise ValueError("time gauge is singular for this potential")
        return np.sum(vals * weights, axis=-1) * half

    return lam


@dataclass(frozen=True)
class CrossPotential:
    """Residual time/space coupling organized in powers of t_tau.

    v1_field(t_tau, x) samples the vector entering the symmetrized
    (p.<field> + <field>.p)/2m term; v2(t_tau, x) samples the scalar
    t_tau^2 coefficient.  kind records the source ("electric"/"magnetic").
    """

    kind: str
    v1_field: object
    v2: object
    e: float
    m: float

    def vanishes(self, t_samples, x_samples, tol: float = 1e-12) -> bool:
        tt, xx = np.meshgrid(t_samples, x_samples, indexing="ij")
        return (np.max(np.abs(self.v1_field(tt, xx))) < tol
                and np.max(np.abs(self.v2(tt, xx))) < tol)


def _time_average(f, t_tau, x, n_quad: int = 64):
    """(1/t_tau) integral_0^{t_tau} f(t', x) dt', with the t_tau -> 0 limit."""
    nodes, weights = np.polynomial.legendre.leggauss(n_quad)
    t_tau = np.asarray(t_tau, dtype=float)
    x = np.asarray(x, dtype=float)
    tt, xx = np.broadcast_arrays(t_tau, x)
    half = tt / 2.0
    pts = half[..., None] * (nodes + 1.0)
    vals = np.broadcast_to(f(pts, xx[..., None]), pts.shape)
    avg = np.sum(vals * weights, axis=-1) / 2.0
    small = np.abs(tt) < 1e-300
    if np.any(small):
        avg = np.where(small, np.broadcast_to(f(tt, xx), avg.shape), avg)
    return avg


def cross_potential_electric(efield, e: float, m: float) -> CrossPotential:
    """Cross potential for a longitudinal electric field E(t_tau, x).

    V^(1) couples through e (p.<E> + <E>.p)/2m with <E> the time-smoothed
    field; V^(2) = e^2 <E>^2 / 2m.  Static fields give <E> = E(x).
    """

    def smoothed(t_tau, x):
        return _time_average(efield, t_tau, x)

    def v2(t_tau, x):
        s = smoothed(t_tau, x)
        return e**2 * s**2 / (2 * m)

    return CrossPotential("electric", smoothed, v2, e, m)


def cross_potential_magnetic(a_field, e: float, m: float) -> CrossPotential:
    """Cross potential for a vector potential A(t_tau, x).

    <dA/dt_tau> = (A(t_tau) - A(0)) / t_tau exactly; V^(1) couples through
    -e ((p - e A_tau).<dA/dt> + h.c.)/2m and V^(2) = e^2 <dA/dt>^2 / 2m.
    Vanishes identically for time-independent A.
    """

    def avg_rate(t_tau, x):
        t_tau = np.asarray(t_tau, dtype=float)
        x = np.asarray(x, dtype=float)
        tt, xx = np.broadcast_arrays(t_tau, x)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = (np.asarray(a_field(tt, xx), dtype=float)
                   - np.asarray(a_field(np.zeros_like(tt), xx), dtype=float)) / tt
        small = np.abs(tt) < 1e-12
        if np.any(small):
            h = 1e-6
            rate0 = (np.asarray(a_field(tt + h, xx), float)
                     - np.asarray(a_field(tt - h, xx), float)) / (2 * h)
            out = np.where(small, rate0, out)
        return out

    def v2(t_tau, x):
        r = avg_rate(t_tau, x)
        return e**2 * r**2 / (2 * m)

    return CrossPotential("magnetic", avg_rate, v2, e, m)


def expectation_rate(wf: GridWaveFunction, fields: FieldConfig, op_grid) -> float:
    """d<O>/dtau = <-i [O, H]> for a multiplicative operator O sampled on the
    grid (operators here carry no explicit tau dependence)."""
    v = wf.values
    Hv = hamiltonian_apply(wf, fields, nyquist_check=False).values
    HOv = hamiltonian_apply(replace(wf, values=op_grid * v), fields,
                            nyquist_check=False).values
    w = wf.cell
    nrm = np.sum(np.abs(v) ** 2) * w
    val = -1j * (np.vdot(v, op_grid * Hv) - np.vdot(v, HOv)) * w / nrm
    return complex(val).real


def second_expectation_rate(wf: GridWaveFunction, fields: FieldConfig, op_grid) -> float:
    """d^2<O>/dtau^2 = <-[[O, H], H]>."""
    def H(vals):
        return hamiltonian_apply(replace(wf, values=vals), fields,
                                 nyquist_check=False).values

    v = wf.values
    Hv = H(v)
    # [[O,H],H] = O H^2 - 2 H O H + H^2 O acting inside the sandwich
    t1 = np.vdot(v, op_grid * H(Hv))
    t2 = np.vdot(Hv, op_grid * Hv)  # <psi|H O H|psi>, H Hermitian
    t3 = np.vdot(Hv, H(op_grid * v))
    w = wf.cell
    nrm = np.sum(np.abs(v) ** 2) * w
    val = -(t1 - 2 * t2 + t3) * w / nrm
    return complex(val).real


def stationary_residual(wf: GridWaveFunction, fields: FieldConfig,
                        trim: int = 3) -> float:
    """|| H psi || / || psi ||, interior points only; zero identifies the
    Klein-Gordon (stationary) solutions."""
    Hv = hamiltonian_apply(wf, fields, nyquist_check=False).values
    sl = (slice(trim, -trim),) * Hv.ndim
    num = np.sqrt(np.sum(np.abs(Hv[sl]) ** 2))
    den = np.sqrt(np.sum(np.abs(wf.values[sl]) ** 2))
    return float(num / den)
