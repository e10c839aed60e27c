"""Time-dependent Bell inequalities in Wigner form.

Evaluators for the static and dynamical inequalities, three physical
scenarios (precessing spin pair, neutral-meson oscillation, finite-time
pseudoscalar decay), a hidden-variable certification oracle and
violation scans.
"""
__version__ = "0.1.0"
