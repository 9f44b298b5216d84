"""Noncoherent capacity bounds for underspread fading channels.

Public surface: the prototype-pulse toolbox, the ambiguity-function
extremes and their small-spread expansion, the capacity lower bound, and
the snr operating-range solver.
"""

__version__ = "0.1.0"

from .ambiguity import (AmbiguityExtremes, SpreadRect, TaylorCoeffs,
                        ambiguity, ambiguity_delay_deriv,
                        ambiguity_doppler_deriv, compute_extremes,
                        gain_curvature, interference_slope, interference_sum,
                        max_interference, min_ambiguity_sq,
                        orthonormality_residual, taylor_coeffs,
                        taylor_extremes)
from .capacity import (BoundInputs, BoundResult, ChannelClass, dilate,
                       fading_expectation, lb_simple, lb_square,
                       penalty_infimum)
from .operating_range import (IntervalResult, SweepRow, SweepTable,
                              accuracy_ratio, awgn_capacity, rule_of_thumb,
                              solve_interval, sweep)
from .pulses import (PulseSpec, WHLattice, dispersion_moments, eval_freq,
                     eval_time, make_rrc_pulse, pulse_energy, square_lattice)

__all__ = [
    "__version__",
    "AmbiguityExtremes", "SpreadRect", "TaylorCoeffs", "ambiguity",
    "ambiguity_delay_deriv", "ambiguity_doppler_deriv", "compute_extremes",
    "gain_curvature", "interference_slope", "interference_sum",
    "max_interference", "min_ambiguity_sq", "orthonormality_residual",
    "taylor_coeffs", "taylor_extremes",
    "BoundInputs", "BoundResult", "ChannelClass", "dilate",
    "fading_expectation", "lb_simple", "lb_square", "penalty_infimum",
    "IntervalResult", "SweepRow", "SweepTable", "accuracy_ratio",
    "awgn_capacity", "rule_of_thumb", "solve_interval", "sweep",
    "PulseSpec", "WHLattice", "dispersion_moments", "eval_freq", "eval_time",
    "make_rrc_pulse", "pulse_energy", "square_lattice",
]
