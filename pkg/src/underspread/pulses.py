"""Root-raised-cosine prototype pulses and their lattice bookkeeping.

The pulse family is parametrized by the time-frequency density tf_product
in (1, 2).  Its spectrum is the square root of a raised-cosine Nyquist
characteristic: flat at sqrt(period) up to the inner band edge
(1 - rolloff)/(2 period), cosine-tapered down to zero at the outer edge
(1 + rolloff)/(2 period), identically zero beyond.  With
period = sqrt(tf_product) and rolloff = tf_product - 1 the outer edge
equals period/2, the pulse has unit energy, and its integer time-frequency
shifts on the square lattice (period, period) are orthonormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import quad_with_breakpoints

__all__ = [
    "PulseSpec",
    "WHLattice",
    "make_rrc_pulse",
    "square_lattice",
    "eval_freq",
    "eval_time",
    "pulse_energy",
    "dispersion_moments",
]


@dataclass(frozen=True)
class PulseSpec:
    """Analytic description of a unit-energy prototype pulse.

    family          currently only "rrc"
    period          time-scale parameter; the spectrum occupies
                    [-(1+rolloff)/(2 period), +(1+rolloff)/(2 period)]
    rolloff         taper fraction in (0, 1)
    tf_product      lattice density the pulse was designed for
    """

    family: str
    period: float
    rolloff: float
    tf_product: float

    def __post_init__(self):
        if self.family != "rrc":
            raise ValueError(f"unknown pulse family {self.family!r}")
        if not (self.period > 0):
            raise ValueError("period must be positive")
        if not (0 < self.rolloff < 1):
            raise ValueError("rolloff must lie in (0, 1)")

    @property
    def flat_edge(self) -> float:
        """Inner band edge: the flat part of the spectrum ends here."""
        return (1.0 - self.rolloff) / (2.0 * self.period)

    @property
    def support_edge(self) -> float:
        """Outer band edge: the spectrum vanishes at and beyond this frequency."""
        return (1.0 + self.rolloff) / (2.0 * self.period)


@dataclass(frozen=True)
class WHLattice:
    """Rectangular time-frequency lattice (time_step, freq_step)."""

    time_step: float
    freq_step: float

    def __post_init__(self):
        if not (self.time_step > 0 and self.freq_step > 0):
            raise ValueError("lattice steps must be positive")
        if self.time_step * self.freq_step < 1.0 - 1e-12:
            # density above one rules out orthonormal shift families
            raise ValueError("time_step * freq_step must be >= 1")

    @property
    def density(self) -> float:
        return self.time_step * self.freq_step


def make_rrc_pulse(tf_product: float) -> PulseSpec:
    """Construct the root-raised-cosine pulse for a lattice density in (1, 2)."""
    if not (1.0 < tf_product < 2.0):
        raise ValueError(f"tf_product must lie in (1, 2), got {tf_product}")
    return PulseSpec(
        family="rrc",
        period=math.sqrt(tf_product),
        rolloff=tf_product - 1.0,
        tf_product=tf_product,
    )


def square_lattice(pulse: PulseSpec) -> WHLattice:
    """The square lattice matched to the pulse's designed density."""
    step = math.sqrt(pulse.tf_product)
    return WHLattice(time_step=step, freq_step=step)


def eval_freq(pulse: PulseSpec, f) -> np.ndarray | float:
    """Spectrum value(s); real, even, nonnegative, compactly supported."""
    p = pulse.period
    mu = pulse.rolloff
    f1 = pulse.flat_edge
    f2 = pulse.support_edge
    af = np.abs(np.asarray(f, dtype=float))
    out = np.zeros_like(af)
    out[af <= f1] = math.sqrt(p)
    shoulder = (af > f1) & (af < f2)
    # taper: sqrt(p/2 * (1 + cos(pi p / mu * (|f| - f1)))) = sqrt(p) cos(.../2)
    out[shoulder] = math.sqrt(p) * np.cos(
        (np.pi * p / (2.0 * mu)) * (af[shoulder] - f1))
    if np.isscalar(f) or np.ndim(f) == 0:
        return float(out)
    return out


def eval_time(pulse: PulseSpec, t) -> np.ndarray | float:
    """Impulse response g(t): inverse transform of the spectrum, in closed form.

    The two removable singularity families (t = 0 and |t| = period/(4 rolloff))
    are patched with their limits.  Evaluation is exact elsewhere; no FFT
    gridding is involved.
    """
    p = pulse.period
    mu = pulse.rolloff
    t_arr = np.asarray(t, dtype=float)
    x = t_arr / p
    fourmux = 4.0 * mu * x
    num = np.sin(np.pi * x * (1.0 - mu)) + fourmux * np.cos(np.pi * x * (1.0 + mu))
    den = np.pi * x * (1.0 - fourmux ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = num / den / math.sqrt(p)

    near_zero = np.abs(x) < 1e-8
    if np.any(near_zero):
        g = np.where(near_zero, (1.0 - mu + 4.0 * mu / np.pi) / math.sqrt(p), g)

    near_pole = np.abs(np.abs(fourmux) - 1.0) < 1e-8
    if np.any(near_pole):
        s = math.sin(math.pi / (4.0 * mu))
        c = math.cos(math.pi / (4.0 * mu))
        lim = (mu / math.sqrt(2.0 * p)) * (
            (1.0 + 2.0 / math.pi) * s + (1.0 - 2.0 / math.pi) * c)
        g = np.where(near_pole, lim, g)

    if np.isscalar(t) or np.ndim(t) == 0:
        return float(g)
    return g


def pulse_energy(pulse: PulseSpec, tol: float = 1e-12) -> float:
    """Energy from the spectrum (compact support makes this an exact-interval integral)."""
    f1 = pulse.flat_edge
    f2 = pulse.support_edge

    def g2(f):
        return np.asarray(eval_freq(pulse, f)) ** 2

    val, _ = quad_with_breakpoints(g2, [-f2, -f1, f1, f2], tol=tol)
    return val


def dispersion_moments(pulse: PulseSpec, tol: float = 1e-11) -> tuple[float, float]:
    """Second moments (time_dispersion_sq, freq_dispersion_sq).

    The frequency moment integrates f^2 |G(f)|^2 over the compact support.
    The time moment is computed in the frequency domain via Parseval,
    int t^2 g^2 dt = (1/4 pi^2) int |G'(f)|^2 df, because g(t) itself decays
    only like 1/t^2 and a time-domain quadrature would need an enormous
    window for ten digits.  G' vanishes on the flat part and is a sine on
    the shoulders, so the integrand is piecewise smooth.
    """
    p = pulse.period
    mu = pulse.rolloff
    f1 = pulse.flat_edge
    f2 = pulse.support_edge
    a_half = np.pi * p / (2.0 * mu)  # half the taper's angular rate

    def f2g2(f):
        return np.asarray(f) ** 2 * np.asarray(eval_freq(pulse, f)) ** 2

    freq_disp, _ = quad_with_breakpoints(f2g2, [-f2, -f1, f1, f2], tol=tol)

    def dg2(f):
        # |G'|^2 on the positive shoulder; zero elsewhere by construction
        return p * a_half ** 2 * np.sin(a_half * (np.asarray(f) - f1)) ** 2

    shoulder, _ = quad_with_breakpoints(dg2, [f1, f2], tol=tol)
    time_disp = 2.0 * shoulder / (4.0 * np.pi ** 2)
    return time_disp, freq_disp
