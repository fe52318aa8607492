"""Command-line driver: run kernels, the sliced path integral, grid
evolution, slit experiments and the wavelet transform; emit deterministic
CSV plus a key=value parameters sidecar.

Exit codes: 0 success, 2 usage (argparse), 3 invalid configuration,
4 numerical failure.  Config files are INI-style key=value sections named
after the subcommand, mirrored 1:1 by the flags; flags override the file.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys

import numpy as np

from . import experiments, kernels, morlet, pathint, schrodinger
from .foundation import CONSTANTS, FourVector
from .schrodinger import EvolutionError
from .wavepackets import GaussianTestFunction, evolve_gaussian

EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


def worker_count() -> int:
    """Parallelism cap for sweep runs, from QTSIM_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("QTSIM_THREADS", "1")))
    except ValueError:
        return 1


def _fmt(x) -> str:
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path: str, header, columns):
    columns = [np.asarray(c) for c in columns]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_params(path: str, params: dict):
    with open(path + ".params", "w") as fh:
        for key in sorted(params):
            fh.write(f"{key}={_fmt(params[key])}\n")


def _experiment_config(args) -> experiments.ExperimentConfig:
    return experiments.ExperimentConfig(
        m=args.mass, p_bar=args.pbar, sigma1_hat_sq=args.sigma1hat**2,
        sigma0_sq=float(args.sigma0) ** 2, L_G=args.lg, L_D=args.ld,
        T=args.gate_center, dT=getattr(args, "dt", 0.0),
        Sigma_G=args.gate_width, dphi=getattr(args, "dphi", 0.0),
        tau_S=args.taus)


def _add_experiment_flags(p, gate=True):
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--pbar", type=float, default=0.1)
    p.add_argument("--sigma1hat", type=float, default=5e-3,
                   help="momentum dispersion sigma1-hat")
    p.add_argument("--sigma0", default="1.0",
                   help="quantum-time dispersion sigma0; slit sweeps accept "
                        "a comma list")
    p.add_argument("--lg", type=float, default=0.1)
    p.add_argument("--ld", type=float, default=1.0)
    p.add_argument("--taus", type=float, default=0.0)
    if gate:
        p.add_argument("--gate-center", type=float, default=None)
        p.add_argument("--gate-width", type=float, default=1.0)


def cmd_kernel(args) -> int:
    grid = np.linspace(args.lo, args.hi, args.n)
    m, tau = args.mass, args.tau
    if args.kind == "free-time":
        vals = kernels.free_kernel_time(grid, args.t1, tau, m)
        coord = "t2"
    elif args.kind == "free-space":
        vals = kernels.free_kernel_space(grid, args.x1, tau, m)
        coord = "x2"
    elif args.kind == "free":
        vals = kernels.free_kernel_2d(grid, args.x2, args.t1, args.x1, tau, m)
        coord = "t2"
    elif args.kind == "electric":
        vals = kernels.electric_kernel(grid, args.x2, args.t1, args.x1, tau, m,
                                       args.alpha)
        coord = "t2"
    elif args.kind == "magnetic":
        vals = np.array([kernels.magnetic_kernel(u, args.x2, args.t1, args.x1,
                                                 tau, m, args.omega)
                         for u in grid])
        coord = "x2"
    elif args.kind == "free-4d":
        vals = np.array([kernels.free_kernel_4d(FourVector(u, args.x2, 0, 0),
                                                FourVector(args.t1, args.x1, 0, 0),
                                                tau, m)
                         for u in grid])
        coord = "t2"
    elif args.kind == "constant":
        vals = np.array([kernels.constant_potential_kernel(
            FourVector(u, args.x2, 0, 0), FourVector(args.t1, args.x1, 0, 0),
            tau, m, args.charge, args.phi, (args.ax, 0.0, 0.0)) for u in grid])
        coord = "t2"
    else:
        raise ValueError(f"unknown kernel kind {args.kind!r}")
    write_csv(args.out, (coord, "re", "im"), (grid, vals.real, vals.imag))
    write_params(args.out, {"kind": args.kind, "tau": tau, "mass": m,
                            "alpha": args.alpha, "omega": args.omega,
                            "phi": args.phi, "ax": args.ax})
    return 0


def cmd_pathint(args) -> int:
    psi = GaussianTestFunction(centroid=FourVector(0.0),
                               momentum=FourVector(args.e0),
                               sigma0_sq=(args.sigma0**2, 1.0, 1.0, 1.0))
    m = args.mass
    ext, pts, ctr = pathint.suggested_grid(psi, args.tau, m, args.slices)
    cfg = pathint.SliceConfig(tau=args.tau, n_slices=args.slices,
                              extent=(ext,), points=(pts,), center=(ctr,))
    fields = pathint.DiscreteLagrangian(m=m, e=args.charge,
                                        phi=(None if args.phi == 0.0
                                             else (lambda t, x: args.phi)))
    out = pathint.propagate_sliced(psi, cfg, fields)
    rho = np.abs(out.values) ** 2
    write_csv(args.out, ("t", "re", "im", "rho"),
              (out.t, out.values.real, out.values.imag, rho))
    params = {"tau": args.tau, "slices": args.slices, "mass": m,
              "extent": ext, "points": pts, "norm": out.norm_sq()}
    if args.phi == 0.0:
        exact_state = evolve_gaussian(psi, args.tau, m)
        exact = (np.exp(1j * exact_state.phase)
                 * exact_state._axis_factor(0, out.t))
        params["l2_error_vs_analytic"] = math.sqrt(
            np.sum(np.abs(out.values - exact) ** 2) * out.dt)
    write_params(args.out, params)
    return 0


def cmd_evolve(args) -> int:
    psi = GaussianTestFunction(centroid=FourVector(0.0, 0.0),
                               momentum=FourVector(args.e0, args.p0),
                               sigma0_sq=(args.sigma0**2, args.sigma1**2, 1.0, 1.0))
    t = np.linspace(args.tlo, args.thi, args.tn)
    x = np.linspace(args.xlo, args.xhi, args.xn) if args.xn else None
    wf = schrodinger.from_gaussian(psi, t, x)
    fields = schrodinger.FieldConfig(
        m=args.mass, e=args.charge,
        phi=(None if args.phi == 0.0 else (lambda tt, xx: args.phi)),
        a_x=(None if args.ax == 0.0 else (lambda tt, xx: args.ax)))
    out = schrodinger.evolve(wf, fields, args.tau, args.steps)
    if x is None:
        rho = np.abs(out.values) ** 2
        write_csv(args.out, ("t", "x", "re", "im", "rho"),
                  (out.t, np.zeros_like(out.t), out.values.real,
                   out.values.imag, rho))
    else:
        T, X = out.mesh()
        rho = np.abs(out.values) ** 2
        write_csv(args.out, ("t", "x", "re", "im", "rho"),
                  (T.ravel(), X.ravel(), out.values.real.ravel(),
                   out.values.imag.ravel(), rho.ravel()))
    write_params(args.out, {"tau": args.tau, "steps": args.steps,
                            "mass": args.mass, "norm": out.norm_sq()})
    return 0


def _slit_density(args, cfg):
    if args.mode == "free":
        return experiments.free_density(cfg)
    if args.theory == "sqt":
        return experiments.single_slit_sqt(cfg)
    return experiments.single_slit_tq(cfg)


def cmd_slit(args) -> int:
    sigmas = [float(s) for s in str(args.sigma0).split(",")]
    runs = []
    for i, s0 in enumerate(sigmas):
        ns = argparse.Namespace(**vars(args))
        ns.sigma0 = s0
        cfg = _experiment_config(ns)
        suffix = "" if len(sigmas) == 1 else f".{i}"
        runs.append((ns, cfg, args.out + suffix))
    if len(runs) > 1 and worker_count() > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            list(pool.map(lambda r: _write_density(_slit_density(r[0], r[1]),
                                                   r[2], r[1]), runs))
    else:
        for r in runs:
            _write_density(_slit_density(r[0], r[1]), r[2], r[1])
    return 0


def _write_density(d, out, cfg):
    write_csv(out, ("coordinate", "density"), (d.coordinate, d.values))
    params = dict(d.params)
    params.update({"norm_sq": d.norm_sq, "tau_G": cfg.tau_G, "tau_D": cfg.tau_D,
                   "sigma0_sq": cfg.sigma0_sq, "gate_width": cfg.Sigma_G})
    write_params(out, params)


def cmd_doubleslit(args) -> int:
    cfg = _experiment_config(args)
    d = (experiments.double_slit_sqt(cfg) if args.theory == "sqt"
         else experiments.double_slit_tq(cfg))
    _write_density(d, args.out, cfg)
    return 0


def cmd_lindner(args) -> int:
    cfg = _experiment_config(args)
    pred = experiments.lindner_predictions(args.sigma_a, cfg)
    write_csv(args.out,
              ("widened_variance_factor", "fringe_factor", "central_suppression"),
              ([pred.widened_variance_factor], [pred.fringe_factor],
               [pred.central_suppression]))
    write_params(args.out, {"sigma_a_sq": pred.sigma_a_sq,
                            "sigma_bar_D_sq": pred.sigma_bar_D_sq,
                            "f_bar": pred.f_bar})
    return 0


def cmd_fields(args) -> int:
    taus = np.linspace(args.tau_lo, args.tau_hi, args.tau_n)
    if args.mode == "larmor":
        vals = [experiments.larmor_shift(args.b0, args.b1, args.b2, u,
                                         args.t_avg, args.sigma0**2,
                                         args.mass, args.charge)
                for u in taus]
        write_csv(args.out, ("tau", "omega_bar", "omega_hat"),
                  (taus, [v[0] for v in vals], [v[1] for v in vals]))
    else:
        rates = [experiments.x_discrepancy_rate(
            args.e0f, args.e1f, args.e2f, u, args.t_avg, args.t2_avg,
            args.r_perp_sq, args.mass, args.charge) for u in taus]
        write_csv(args.out, ("tau", "rate"), (taus, rates))
    write_params(args.out, {"mode": args.mode})
    return 0


def cmd_abtime(args) -> int:
    tq, sqt = experiments.ab_time_phase(args.v, args.dtau, args.gamma,
                                        args.charge)
    write_csv(args.out, ("phase_tq", "phase_sqt", "ratio"),
              ([tq], [sqt], [tq / sqt if sqt else float("nan")]))
    write_params(args.out, {"v": args.v, "dtau": args.dtau, "gamma": args.gamma})
    return 0


def cmd_wavelet(args) -> int:
    t = np.linspace(args.tlo, args.thi, args.tn)
    if args.input:
        data = np.genfromtxt(args.input, delimiter=",", names=True)
        t = np.asarray(data["t"], dtype=float)
        sig = np.asarray(data["re"], dtype=float) + 1j * np.asarray(
            data["im"], dtype=float)
    else:
        sig = morlet.reference_signal(t, width=args.width, carrier=args.carrier)
    grid = morlet.WaveletGrid(s_min=args.smin, s_max=args.smax,
                              n_scales=args.nscales)
    coef = morlet.analyze(sig, t, grid)
    C = morlet.admissibility_constant(grid, t)
    s_col, d_col, re_col, im_col = [], [], [], []
    for s, d, c in coef.iter_points():
        s_col.append(s)
        d_col.append(d)
        re_col.append(c.real)
        im_col.append(c.imag)
    write_csv(args.out, ("s", "d", "re", "im"), (s_col, d_col, re_col, im_col))
    write_params(args.out, {"admissibility_constant": C,
                            "s_min": args.smin, "s_max": args.smax,
                            "n_scales": args.nscales})
    return 0


def cmd_constants(args) -> int:
    rows = {"planck_time_s": CONSTANTS.planck_time,
            "planck_length_m": CONSTANTS.planck_length,
            "electron_compton_time_s": CONSTANTS.electron_compton_time}
    if args.mass_ev is not None:
        rows["compton_time_s"] = CONSTANTS.compton_time(args.mass_ev)
    if args.length_m is not None:
        rows["light_crossing_time_s"] = CONSTANTS.seconds_from_length(args.length_m)
    if args.natural_time is not None:
        if args.mass_ev is None:
            raise ValueError("converting natural time needs --mass-ev")
        rows["time_s"] = args.natural_time * CONSTANTS.compton_time(args.mass_ev)
    write_csv(args.out, tuple(sorted(rows)),
              tuple([rows[k]] for k in sorted(rows)))
    write_params(args.out, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qtsim",
        description="quantum-time simulation toolkit: kernels, path "
                    "integrals, grid evolution, slits in time, wavelets")
    ap.add_argument("--config", help="INI config file; section = subcommand")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="sample an analytic propagator")
    p.add_argument("--kind", required=True,
                   choices=["free", "free-time", "free-space", "free-4d",
                            "electric", "magnetic", "constant"])
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--ax", type=float, default=0.0)
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--t1", type=float, default=0.0)
    p.add_argument("--x1", type=float, default=0.0)
    p.add_argument("--x2", type=float, default=0.0)
    p.add_argument("--lo", type=float, default=-3.0)
    p.add_argument("--hi", type=float, default=3.0)
    p.add_argument("--n", type=int, default=241)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("pathint", help="sliced free/constant-potential run")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--slices", type=int, default=16)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--e0", type=float, default=1.0)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pathint)

    p = sub.add_parser("evolve", help="Crank-Nicolson grid evolution")
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--e0", type=float, default=0.5)
    p.add_argument("--p0", type=float, default=0.0)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--ax", type=float, default=0.0)
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--tlo", type=float, default=-10.0)
    p.add_argument("--thi", type=float, default=10.0)
    p.add_argument("--tn", type=int, default=301)
    p.add_argument("--xlo", type=float, default=-10.0)
    p.add_argument("--xhi", type=float, default=10.0)
    p.add_argument("--xn", type=int, default=0,
                   help="0 for a 1+0D run on the time axis only")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("slit", help="free or single-slit arrival density")
    p.add_argument("--mode", choices=["free", "single"], default="single")
    p.add_argument("--theory", choices=["sqt", "tq"], default="tq")
    _add_experiment_flags(p)
    p.add_argument("--dphi", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_slit)

    p = sub.add_parser("doubleslit", help="double-slit arrival density")
    p.add_argument("--theory", choices=["sqt", "tq"], default="tq")
    _add_experiment_flags(p)
    p.add_argument("--dt", type=float, default=0.25)
    p.add_argument("--dphi", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_doubleslit)

    p = sub.add_parser("lindner", help="attosecond double-slit predictions")
    _add_experiment_flags(p)
    p.add_argument("--dt", type=float, default=0.25)
    p.add_argument("--sigma-a", type=float, required=True,
                   help="bound-state width in time")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_lindner)

    p = sub.add_parser("fields", help="time-dependent field corrections")
    p.add_argument("--mode", choices=["larmor", "xdisc"], default="larmor")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--sigma0", type=float, default=1.0)
    p.add_argument("--b0", type=float, default=1.0)
    p.add_argument("--b1", type=float, default=0.0)
    p.add_argument("--b2", type=float, default=0.0)
    p.add_argument("--e0f", type=float, default=0.0)
    p.add_argument("--e1f", type=float, default=0.0)
    p.add_argument("--e2f", type=float, default=0.0)
    p.add_argument("--t-avg", type=float, default=0.0)
    p.add_argument("--t2-avg", type=float, default=0.5)
    p.add_argument("--r-perp-sq", type=float, default=0.0)
    p.add_argument("--tau-lo", type=float, default=0.0)
    p.add_argument("--tau-hi", type=float, default=2.0)
    p.add_argument("--tau-n", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fields)

    p = sub.add_parser("abtime", help="Aharonov-Bohm-in-time phases")
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--dtau", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_abtime)

    p = sub.add_parser("constants", help="unit-conversion helpers")
    p.add_argument("--mass-ev", type=float, default=None,
                   help="mass scale in eV for natural-unit conversions")
    p.add_argument("--length-m", type=float, default=None,
                   help="length in meters to convert to a light-crossing time")
    p.add_argument("--natural-time", type=float, default=None,
                   help="natural-units time to convert to seconds (needs --mass-ev)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("wavelet", help="Morlet analysis of a signal")
    p.add_argument("--input", help="CSV with columns t, re, im")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--carrier", type=float, default=-6.0)
    p.add_argument("--tlo", type=float, default=-18.0)
    p.add_argument("--thi", type=float, default=18.0)
    p.add_argument("--tn", type=int, default=721)
    p.add_argument("--smin", type=float, default=0.01)
    p.add_argument("--smax", type=float, default=25.0)
    p.add_argument("--nscales", type=int, default=96)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_wavelet)
    return ap


def _config_args(parser, argv):
    """Expand --config FILE into pseudo-flags ahead of the real flags."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        return argv
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        raise ValueError("config file given without a subcommand")
    command = rest[0]
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ValueError(f"cannot read config file {path}")
    if command not in cp:
        return rest
    sub_actions = None
    for a in parser._actions:
        if isinstance(a, argparse._SubParsersAction):
            sub_actions = a.choices
    known = {s for a in sub_actions[command]._actions for s in a.option_strings}
    flags = []
    for key, value in cp[command].items():
        flag = "--" + key.replace("_", "-")
        if flag not in known:
            raise ValueError(f"unknown config key {key!r} for {command!r}")
        flags.extend([flag, value])
    return [command] + flags + rest[1:]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        argv = _config_args(parser, argv)
    except ValueError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_CONFIG
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EvolutionError, kernels.KernelSingularityError) as ex:
        print(f"numerical failure: {ex}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as ex:
        print(f"invalid configuration: {ex}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
