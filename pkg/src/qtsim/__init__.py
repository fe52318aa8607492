"""Numerical toolkit for quantum mechanics with an operator-valued time
coordinate: analytic propagators, a discretized path integral over paths
varying in time and space, a 4D grid evolver, Morlet wavelet decomposition,
and closed-form slit-in-time / field-interaction calculators."""

__version__ = "0.1.0"
