"""Capacity lower bound for noncoherent WSSUS underspread fading channels.

The bound for a given pulse/lattice pair splits into a fading term (an
expectation over the squared channel gain) minus a penalty infimum over a
noise-split parameter; both are assembled here from the ambiguity extremes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .ambiguity import (AmbiguityExtremes, SpreadRect, compute_extremes)
from .optimize import golden_section_min
from .pulses import PulseSpec, WHLattice, make_rrc_pulse

__all__ = [
    "ChannelClass",
    "BoundInputs",
    "BoundResult",
    "fading_expectation",
    "penalty_infimum",
    "lb_simple",
    "dilate",
    "lb_square",
]

_UNDERSPREAD_WARN = 1e-2


@dataclass(frozen=True)
class ChannelClass:
    """Channel family descriptor: scattering concentrated (up to ``leakage``)
    in the rectangle [-max_doppler, max_doppler] x [-max_delay, max_delay].

    Only these three numbers enter the bound; no scattering shape is stored.
    """

    max_doppler: float
    max_delay: float
    leakage: float

    def __post_init__(self):
        if self.max_doppler < 0 or self.max_delay < 0:
            raise ValueError("max_doppler and max_delay must be nonnegative")
        if not (0.0 <= self.leakage <= 1.0):
            raise ValueError("leakage must lie in [0, 1]")
        if self.spread >= 1.0:
            raise ValueError("spread must be below 1")
        if self.spread > _UNDERSPREAD_WARN or self.leakage > _UNDERSPREAD_WARN:
            warnings.warn(
                "channel is far from underspread; the bound degrades quickly",
                stacklevel=2)

    @property
    def spread(self) -> float:
        return 4.0 * self.max_delay * self.max_doppler

    @property
    def rect(self) -> SpreadRect:
        return SpreadRect(self.max_doppler, self.max_delay)


@dataclass(frozen=True)
class BoundInputs:
    """Evaluation point: linear snr, bandwidth in Hz, lattice, pulse."""

    snr: float
    bandwidth: float
    lattice: WHLattice
    pulse: PulseSpec

    def __post_init__(self):
        if self.snr < 0:
            raise ValueError("snr must be nonnegative")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be positive")


@dataclass(frozen=True)
class BoundResult:
    """Bound value with its optimizer and constituent terms.

    value = bandwidth / density * (term_fading - term_doppler - term_leakage
    - term_interference), in nats/s.  A negative value means the bound says
    nothing at this snr (``vacuous``); ``value_clamped`` floors it at zero.
    """

    value: float
    alpha_star: float
    term_fading: float
    term_doppler: float
    term_leakage: float
    term_interference: float
    gain_min: float
    interference_max: float
    doppler_time_product: float
    vacuous: bool
    value_clamped: float


def fading_expectation(gain: float) -> float:
    """E[log(1 + gain * X)] for X exponential with unit mean.

    Equals e^{1/gain} E1(1/gain).  Three regimes: a series for tiny gain
    (the direct form overflows), the exp*E1 product for moderate 1/gain,
    and a continued fraction for large 1/gain where exp() alone overflows.
    """
    if gain < 0:
        raise ValueError("gain must be nonnegative")
    if gain == 0.0:
        return 0.0
    if gain < 1e-4:
        # E[log(1+gX)] = g - g^2 + 2 g^3 - 6 g^4 + O(g^5)
        return gain * (1.0 - gain * (1.0 - gain * (2.0 - 6.0 * gain)))
    z = 1.0 / gain
    if z <= 30.0:
        return float(np.exp(z) * exp1(z))
    return _exp_scaled_e1(z)


def _exp_scaled_e1(z: float) -> float:
    """e^z E1(z) for large z via the standard continued fraction.

    1/(z + 1/(1 + 1/(z + 2/(1 + 2/(z + ...))))), evaluated with the
    modified Lentz scheme.  Converges in a few dozen terms for z > 30.
    """
    tiny = 1e-300
    f = tiny
    c = f
    d = 0.0
    for i in range(1, 400):
        if i == 1:
            a_n, b_n = 1.0, z
        elif i % 2 == 0:
            a_n, b_n = float(i // 2), 1.0
        else:
            a_n, b_n = float(i // 2), z
        d = b_n + a_n * d
        if d == 0.0:
            d = tiny
        c = b_n + a_n / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 5e-16:
            return f
    raise RuntimeError("continued fraction for the fading expectation stalled")


def _penalty_terms(tf_rho: float, doppler_time_product: float, leakage: float,
                   interf_level: float, alpha: float) -> tuple[float, float, float]:
    dt = doppler_time_product
    term_doppler = dt * math.log1p(tf_rho / (alpha * dt)) if dt > 0 else 0.0
    term_leakage = ((1.0 - dt) * math.log1p(tf_rho * leakage / (alpha * (1.0 - dt)))
                    if leakage > 0 else 0.0)
    term_interf = (math.log1p(tf_rho * interf_level / (1.0 - alpha))
                   if interf_level > 0 else 0.0)
    return term_doppler, term_leakage, term_interf


def penalty_infimum(tf_rho: float, doppler_time_product: float, leakage: float,
                    interf_level: float, debug_grid: bool = False,
                    ) -> tuple[float, float]:
    """Infimum over the noise split alpha in (0,1) of the penalty bracket.

    Returns (value, alpha_star).  The three summands are each convex in
    alpha, so golden-section search suffices; ``debug_grid`` cross-checks
    against a 1e-3-step scan and raises if the two disagree materially.

    Boundary cases: tf_rho == 0 gives (0, 1/2) by convention; when
    interf_level == 0 the objective decreases toward alpha -> 1 and the
    analytic limit is returned with alpha_star clipped inside (0, 1).
    """
    dt = doppler_time_product
    if not (0.0 <= dt < 1.0):
        raise ValueError("doppler_time_product must lie in [0, 1)")
    if not (0.0 <= leakage <= 1.0):
        raise ValueError("leakage must lie in [0, 1]")
    if interf_level < 0:
        raise ValueError("interf_level must be nonnegative")
    if tf_rho < 0:
        raise ValueError("tf_rho must be nonnegative")
    if tf_rho == 0.0:
        return 0.0, 0.5
    if interf_level == 0.0:
        limit = (dt * math.log1p(tf_rho / dt) if dt > 0 else 0.0)
        if leakage > 0:
            limit += (1.0 - dt) * math.log1p(tf_rho * leakage / (1.0 - dt))
        return limit, 1.0 - 1e-10

    def objective(alpha: float) -> float:
        return sum(_penalty_terms(tf_rho, dt, leakage, interf_level, alpha))

    alpha_star, value = golden_section_min(objective, 1e-12, 1.0 - 1e-12,
                                           tol=1e-10)
    if debug_grid:
        grid = np.arange(1e-3, 1.0, 1e-3)
        coarse = min(objective(a) for a in grid)
        if value > coarse + 1e-9 * max(1.0, abs(coarse)):
            raise RuntimeError(
                f"penalty infimum {value!r} above grid scan {coarse!r}")
    return value, alpha_star


def lb_simple(inputs: BoundInputs, channel: ChannelClass,
              extremes: AmbiguityExtremes) -> BoundResult:
    """Assemble the lower bound from precomputed ambiguity extremes.

    The stated bound needs 2 * max_doppler * time_step < 1; this is checked
    and a violation raises rather than silently extrapolating.
    """
    dt = 2.0 * channel.max_doppler * inputs.lattice.time_step
    if dt >= 1.0:
        raise ValueError(
            f"doppler-time product {dt:g} is not below 1; the bound does not"
            " apply to this configuration")
    if not (0.0 <= extremes.gain_min <= 1.0 + 1e-9):
        raise ValueError("extremes.gain_min outside [0, 1]")
    if extremes.interference_max < 0:
        raise ValueError("extremes.interference_max is negative")

    density = inputs.lattice.density
    tf_rho = density * inputs.snr
    leakage = channel.leakage
    interf_level = extremes.interference_max + leakage

    gain = (tf_rho * (1.0 - leakage) * extremes.gain_min
            / (1.0 + tf_rho * interf_level))
    term_fading = fading_expectation(gain)
    _, alpha_star = penalty_infimum(tf_rho, dt, leakage, interf_level)
    term_doppler, term_leakage, term_interf = _penalty_terms(
        tf_rho, dt, leakage, interf_level, alpha_star)

    value = (inputs.bandwidth / density) * (
        term_fading - term_doppler - term_leakage - term_interf)
    return BoundResult(
        value=value,
        alpha_star=alpha_star,
        term_fading=term_fading,
        term_doppler=term_doppler,
        term_leakage=term_leakage,
        term_interference=term_interf,
        gain_min=extremes.gain_min,
        interference_max=extremes.interference_max,
        doppler_time_product=dt,
        vacuous=value < 0.0,
        value_clamped=max(0.0, value),
    )


def dilate(inputs: BoundInputs, channel: ChannelClass,
           beta: float) -> tuple[BoundInputs, ChannelClass]:
    """Time-scale the whole configuration by beta; the bound is invariant.

    The pulse g(t) becomes sqrt(beta) g(beta t), which for this family just
    divides the period by beta; the lattice and rectangle transform so that
    all dimensionless products are preserved.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    new_inputs = replace(
        inputs,
        pulse=replace(inputs.pulse, period=inputs.pulse.period / beta),
        lattice=WHLattice(time_step=inputs.lattice.time_step / beta,
                          freq_step=inputs.lattice.freq_step * beta),
    )
    new_channel = replace(channel,
                          max_doppler=channel.max_doppler * beta,
                          max_delay=channel.max_delay / beta)
    return new_inputs, new_channel


@lru_cache(maxsize=256)
def _square_extremes(tf_product: float, spread: float,
                     mode: str) -> AmbiguityExtremes:
    pulse = make_rrc_pulse(tf_product)
    step = math.sqrt(tf_product)
    lattice = WHLattice(step, step)
    half = math.sqrt(spread) / 2.0
    return compute_extremes(pulse, lattice, SpreadRect(half, half), mode)


def lb_square(rho: float, tf_product: float, spread: float, eps: float,
              bandwidth: float = 1.0, mode: str = "auto") -> BoundResult:
    """Bound in the square setting: square lattice, square spread rectangle.

    Any matched-grid configuration (max_doppler * time_step ==
    max_delay * freq_step) reduces to this form by ``dilate``.  ``mode``
    picks how the ambiguity extremes are obtained; see compute_extremes.
    """
    if spread < 0 or spread >= 1:
        raise ValueError("spread must lie in [0, 1)")
    if spread > 0 and math.sqrt(spread * tf_product) >= 1.0:
        raise ValueError("sqrt(spread * tf_product) must be below 1")
    pulse = make_rrc_pulse(tf_product)
    step = math.sqrt(tf_product)
    lattice = WHLattice(step, step)
    half = math.sqrt(spread) / 2.0
    channel = ChannelClass(max_doppler=half, max_delay=half, leakage=eps)
    extremes = _square_extremes(tf_product, spread, mode)
    inputs = BoundInputs(snr=rho, bandwidth=bandwidth, lattice=lattice,
                         pulse=pulse)
    return lb_simple(inputs, channel, extremes)
