"""Ambiguity function of the prototype pulse and derived extremal quantities.

Everything here rides on one observation: the pulse spectrum is piecewise
sqrt(period) * cos(slope * f + phase) on three intervals, so products like
G(f + doppler) G(f) e^{j 2 pi f delay} split into finitely many terms
cos(A f + B) e^{j w f} whose integrals over an interval are elementary.
The ambiguity function, its two first partial derivatives, and hence all
lattice sums are therefore evaluated in closed form, to machine precision,
at O(1) cost per point.  This sidesteps the slow 1/t^2 tail of the pulse
that makes time-domain quadrature hopeless at the 1e-12 level.

Sign convention: ambiguity(doppler, delay) equals
int g(t) conj(g(t - delay)) e^{-j 2 pi doppler t} dt, which for this real
pulse coincides with int G(f + doppler) G(f) e^{+j 2 pi f delay} df.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pulses import PulseSpec, WHLattice, dispersion_moments, square_lattice

__all__ = [
    "SpreadRect",
    "AmbiguityExtremes",
    "TaylorCoeffs",
    "ambiguity",
    "ambiguity_doppler_deriv",
    "ambiguity_delay_deriv",
    "orthonormality_residual",
    "min_ambiguity_sq",
    "interference_sum",
    "max_interference",
    "gain_curvature",
    "interference_slope",
    "taylor_coeffs",
    "taylor_extremes",
    "compute_extremes",
]

# lattice sums: start radius, growth policy, absolute stop increment
_K_START = 8
_K_CAP = 2 ** 18
_SUM_TOL = 1e-12

# extremal searches
_MIN_GRID = 65
_MAX_GRID = 33
_COARSE_K = 256
_REFINE_REL_TOL = 1e-12


@dataclass(frozen=True)
class SpreadRect:
    """Doppler-delay rectangle [-max_doppler, max_doppler] x [-max_delay, max_delay]."""

    max_doppler: float
    max_delay: float

    def __post_init__(self):
        if self.max_doppler < 0 or self.max_delay < 0:
            raise ValueError("rectangle half-widths must be nonnegative")
        if self.spread >= 1.0:
            raise ValueError("spread must be below 1")

    @property
    def spread(self) -> float:
        return 4.0 * self.max_doppler * self.max_delay


@dataclass(frozen=True)
class AmbiguityExtremes:
    """Worst-case gain and interference over a spread rectangle.

    gain_min            min |A|^2 over the rectangle (useful-signal floor)
    interference_max    max over the rectangle of the off-origin lattice sum
    argmin, argmax      (doppler, delay) locations of the two extremes
    lattice_truncation  radius used for the delay-axis lattice sum
    """

    gain_min: float
    interference_max: float
    argmin: tuple[float, float]
    argmax: tuple[float, float]
    lattice_truncation: int

    def __post_init__(self):
        if not (-1e-9 <= self.gain_min <= 1.0 + 1e-9):
            raise ValueError("gain_min must lie in [0, 1]")
        if self.interference_max < 0:
            raise ValueError("interference_max must be nonnegative")


@dataclass(frozen=True)
class TaylorCoeffs:
    """Small-spread expansion coefficients for the square-setting extremes.

    gain_min ~ 1 - gain_curvature * spread, interference_max ~
    interference_slope * spread, both up to o(spread).
    """

    gain_curvature: float
    interference_slope: float
    time_dispersion_sq: float
    freq_dispersion_sq: float


@lru_cache(maxsize=64)
def _cos_segments(pulse: PulseSpec) -> tuple[tuple[float, float, float, float], ...]:
    """Spectrum as sqrt(period)*cos(slope*f + phase) pieces: (lo, hi, slope, phase)."""
    f1 = pulse.flat_edge
    f2 = pulse.support_edge
    half_rate = math.pi * pulse.period / (2.0 * pulse.rolloff)
    return (
        (-f2, -f1, half_rate, half_rate * f1),
        (-f1, f1, 0.0, 0.0),
        (f1, f2, half_rate, -half_rate * f1),
    )


def _sinc(x: np.ndarray) -> np.ndarray:
    # sin(x)/x with a short series where x is tiny
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def _radial(x: np.ndarray) -> np.ndarray:
    # (sin x - x cos x)/x^2, the first moment companion of sinc
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    return np.where(small, x / 3.0 - x ** 3 / 30.0,
                    (np.sin(safe) - safe * np.cos(safe)) / safe ** 2)


def _interval_exp(c: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """int_lo^hi e^{j c f} df, vectorized over c."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return (hi - lo) * np.exp(1j * c * mid) * _sinc(c * half)


def _interval_exp_moment(c: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """int_lo^hi f e^{j c f} df, vectorized over c."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = c * half
    return np.exp(1j * c * mid) * (2.0 * mid * half * _sinc(x)
                                   + 2j * half * half * _radial(x))


def _assemble(pulse: PulseSpec, doppler: float, omega: np.ndarray,
              kind: str) -> np.ndarray:
    """Shared evaluator for A, dA/d(doppler), dA/d(delay) at fixed doppler.

    omega = 2 pi delay may be any array; cost is independent of its values.
    """
    segs = _cos_segments(pulse)
    p = pulse.period
    acc = np.zeros(np.shape(omega), dtype=complex)
    for (si, ei, a_i, b_i) in segs:
        lo_i = si - doppler
        hi_i = ei - doppler
        shifted_phase = a_i * doppler + b_i
        for (sj, ej, a_j, b_j) in segs:
            lo = max(lo_i, sj)
            hi = min(hi_i, ej)
            if hi <= lo:
                continue
            for coef_a, coef_b in ((a_i + a_j, shifted_phase + b_j),
                                   (a_i - a_j, shifted_phase - b_j)):
                plus = np.exp(1j * coef_b)
                minus = np.exp(-1j * coef_b)
                if kind == "value":
                    acc += (p / 4.0) * (
                        plus * _interval_exp(omega + coef_a, lo, hi)
                        + minus * _interval_exp(omega - coef_a, lo, hi))
                elif kind == "doppler":
                    # d/d doppler brings down G'(f+doppler): cos -> -slope*sin
                    acc += (-p * a_i / 2.0) * (1.0 / 2j) * (
                        plus * _interval_exp(omega + coef_a, lo, hi)
                        - minus * _interval_exp(omega - coef_a, lo, hi))
                else:  # "delay": d/d delay brings down j 2 pi f
                    acc += (p / 4.0) * 2j * np.pi * (
                        plus * _interval_exp_moment(omega + coef_a, lo, hi)
                        + minus * _interval_exp_moment(omega - coef_a, lo, hi))
    return acc


def _eval(pulse: PulseSpec, doppler: float, delay, kind: str):
    omega = 2.0 * np.pi * np.asarray(delay, dtype=float)
    out = _assemble(pulse, float(doppler), omega, kind)
    if np.ndim(delay) == 0:
        return complex(out)
    return out


def ambiguity(pulse: PulseSpec, doppler: float, delay):
    """A(doppler, delay); scalar doppler, scalar or array delay."""
    return _eval(pulse, doppler, delay, "value")


def ambiguity_doppler_deriv(pulse: PulseSpec, doppler: float, delay):
    """Partial derivative of the ambiguity function along the Doppler axis."""
    return _eval(pulse, doppler, delay, "doppler")


def ambiguity_delay_deriv(pulse: PulseSpec, doppler: float, delay):
    """Partial derivative of the ambiguity function along the delay axis."""
    return _eval(pulse, doppler, delay, "delay")


def orthonormality_residual(pulse: PulseSpec, lattice: WHLattice,
                            k_max: int = 8, n_max: int = 8) -> float:
    """max |<shifted copy, pulse> - delta| over the truncated lattice.

    Inner products of lattice shifts reduce to ambiguity samples; the
    residual certifies orthonormality numerically.  Symmetry in the signs
    of (k, n) lets the scan cover only nonnegative indices.
    """
    ks = np.arange(0, k_max + 1)
    worst = 0.0
    for n in range(0, n_max + 1):
        mags = np.abs(ambiguity(pulse, n * lattice.freq_step,
                                ks * lattice.time_step))
        expect = np.zeros_like(mags)
        if n == 0:
            expect[0] = 1.0
        worst = max(worst, float(np.max(np.abs(mags - expect))))
    return worst


def _doppler_rows(pulse: PulseSpec, lattice: WHLattice, doppler: float) -> list[int]:
    """Lattice rows n with a nonvanishing ambiguity at doppler - n*freq_step.

    A(nu, .) vanishes identically once |nu| reaches the full spectral width
    2*support_edge, so the row range is exactly finite.
    """
    width = 2.0 * pulse.support_edge
    f_step = lattice.freq_step
    n_lo = math.floor((doppler - width) / f_step) + 1
    n_hi = math.ceil((doppler + width) / f_step) - 1
    return list(range(n_lo, n_hi + 1))


def _row_sum(pulse: PulseSpec, row_doppler: float, delay: float,
             time_step: float, ks: np.ndarray) -> float:
    vals = ambiguity(pulse, row_doppler, delay - ks * time_step)
    return float(np.sum(np.abs(vals) ** 2))


def _interference_detail(pulse: PulseSpec, lattice: WHLattice, doppler: float,
                         delay: float, k_max: int | None = None,
                         tol: float = _SUM_TOL) -> tuple[float, int]:
    """Off-origin lattice sum of |A|^2 and the delay-axis radius used."""
    total = 0.0
    radius_used = 0
    for n in _doppler_rows(pulse, lattice, doppler):
        row_doppler = doppler - n * lattice.freq_step
        if k_max is not None:
            ks = np.arange(-k_max, k_max + 1)
            if n == 0:
                ks = ks[ks != 0]
            total += _row_sum(pulse, row_doppler, delay, lattice.time_step, ks)
            radius_used = max(radius_used, k_max)
            continue
        # adaptive: start at _K_START, double until the new shell is negligible
        radius = _K_START
        ks = np.arange(-radius, radius + 1)
        if n == 0:
            ks = ks[ks != 0]
        row_total = _row_sum(pulse, row_doppler, delay, lattice.time_step, ks)
        while radius < _K_CAP:
            shell = np.concatenate([np.arange(-2 * radius, -radius),
                                    np.arange(radius + 1, 2 * radius + 1)])
            increment = _row_sum(pulse, row_doppler, delay,
                                 lattice.time_step, shell)
            row_total += increment
            radius *= 2
            if increment < tol:
                break
        total += row_total
        radius_used = max(radius_used, radius)
    return total, radius_used


def interference_sum(pulse: PulseSpec, lattice: WHLattice, doppler: float,
                     delay: float, k_max: int | None = None) -> float:
    """Sum of |A(doppler - n F, delay - k T)|^2 over all lattice points but (0,0).

    The row range in n is exactly finite (compact spectral support); the
    delay-axis sum is truncated adaptively unless ``k_max`` pins the radius.
    """
    value, _ = _interference_detail(pulse, lattice, doppler, delay, k_max)
    return value


def _coordinate_refine(fun, start: tuple[float, float],
                       bounds: tuple[tuple[float, float], tuple[float, float]],
                       passes: int = 2) -> tuple[float, float, float]:
    """Coordinate-wise golden-section descent of fun(x, y) within bounds."""
    from .optimize import golden_section_min

    x, y = start
    best = fun(x, y)
    for _ in range(passes):
        (x_lo, x_hi), (y_lo, y_hi) = bounds
        tol_x = max((x_hi - x_lo) * _REFINE_REL_TOL, 1e-18)
        x, best = golden_section_min(lambda u: fun(u, y), x_lo, x_hi, tol=tol_x)
        tol_y = max((y_hi - y_lo) * _REFINE_REL_TOL, 1e-18)
        y, best = golden_section_min(lambda v: fun(x, v), y_lo, y_hi, tol=tol_y)
    return x, y, best


def _bracket(grid: np.ndarray, idx: int) -> tuple[float, float]:
    lo = grid[max(idx - 1, 0)]
    hi = grid[min(idx + 1, len(grid) - 1)]
    if lo == hi:  # single-point grid
        return float(lo), float(hi)
    return float(lo), float(hi)


def min_ambiguity_sq(pulse: PulseSpec, rect: SpreadRect,
                     grid: int = _MIN_GRID) -> tuple[float, tuple[float, float]]:
    """Global minimum of |A|^2 over the rectangle, with its location.

    By the evenness of |A| in each argument the search covers only the
    nonnegative quadrant.  Coarse tensor grid, then coordinate-wise
    golden-section refinement around the best cell.
    """
    if rect.max_doppler == 0.0 and rect.max_delay == 0.0:
        return 1.0, (0.0, 0.0)
    nus = np.linspace(0.0, rect.max_doppler, grid)
    taus = np.linspace(0.0, rect.max_delay, grid)
    best_val = np.inf
    best_ij = (0, 0)
    for i, nu in enumerate(nus):
        row = np.abs(ambiguity(pulse, nu, taus)) ** 2
        j = int(np.argmin(row))
        if row[j] < best_val:
            best_val = float(row[j])
            best_ij = (i, j)

    def objective(nu, tau):
        return abs(ambiguity(pulse, nu, tau)) ** 2

    nu0, tau0, refined = _coordinate_refine(
        objective,
        (float(nus[best_ij[0]]), float(taus[best_ij[1]])),
        (_bracket(nus, best_ij[0]), _bracket(taus, best_ij[1])))
    if refined <= best_val:
        return refined, (nu0, tau0)
    return best_val, (float(nus[best_ij[0]]), float(taus[best_ij[1]]))


def max_interference(pulse: PulseSpec, lattice: WHLattice, rect: SpreadRect,
                     grid: int = _MAX_GRID) -> tuple[float, tuple[float, float]]:
    """Global maximum of interference_sum over the rectangle, with its location.

    The coarse pass uses a reduced truncation radius; the omitted tail varies
    slowly across the tiny rectangle, so it cannot move the located basin.
    Refinement and the returned value use the full adaptive truncation.
    """
    if rect.max_doppler == 0.0 and rect.max_delay == 0.0:
        return 0.0, (0.0, 0.0)
    nus = np.linspace(0.0, rect.max_doppler, grid)
    taus = np.linspace(0.0, rect.max_delay, grid)
    best_val = -np.inf
    best_ij = (0, 0)
    for i, nu in enumerate(nus):
        row = np.array([
            _interference_detail(pulse, lattice, nu, tau, _COARSE_K)[0]
            for tau in taus])
        j = int(np.argmax(row))
        if row[j] > best_val:
            best_val = float(row[j])
            best_ij = (i, j)

    def neg_objective(nu, tau):
        return -_interference_detail(pulse, lattice, nu, tau)[0]

    nu0, tau0, neg = _coordinate_refine(
        neg_objective,
        (float(nus[best_ij[0]]), float(taus[best_ij[1]])),
        (_bracket(nus, best_ij[0]), _bracket(taus, best_ij[1])))
    candidates = [(-neg, (nu0, tau0))]
    # the corner is the analytic argmax in the small-spread regime; keep it
    # as an explicit candidate in case the coarse basin was off by a cell
    corner_val, _ = _interference_detail(pulse, lattice, rect.max_doppler,
                                         rect.max_delay)
    candidates.append((corner_val, (rect.max_doppler, rect.max_delay)))
    value, arg = max(candidates, key=lambda c: c[0])
    _, radius = _interference_detail(pulse, lattice, arg[0], arg[1])
    return value, arg


def gain_curvature(pulse: PulseSpec) -> float:
    """Leading coefficient of 1 - gain_min for small square-setting spread."""
    time_disp, freq_disp = dispersion_moments(pulse)
    return math.pi ** 2 * (time_disp + freq_disp)


def _deriv_sums(pulse: PulseSpec, lattice: WHLattice,
                k_max: int | None = None) -> tuple[float, float, int]:
    """Lattice sums of squared ambiguity derivatives (doppler part, delay part).

    Summed over all lattice points except the origin.  Rows with |n| >= 1
    contribute exactly zero for this family (the overlap of the shifted
    spectra collapses cubically at the row edge), but they are included for
    generality; the engine returns exact zeros there at no cost.
    """
    sum_doppler = 0.0
    sum_delay = 0.0
    radius_used = 0
    for n in _doppler_rows(pulse, lattice, 0.0) + [-1, 1]:
        row_doppler = -n * lattice.freq_step

        def shell_sums(ks: np.ndarray) -> tuple[float, float]:
            taus = -ks * lattice.time_step
            d_nu = ambiguity_doppler_deriv(pulse, row_doppler, taus)
            d_tau = ambiguity_delay_deriv(pulse, row_doppler, taus)
            return (float(np.sum(np.abs(d_nu) ** 2)),
                    float(np.sum(np.abs(d_tau) ** 2)))

        if k_max is not None:
            ks = np.arange(-k_max, k_max + 1)
            if n == 0:
                ks = ks[ks != 0]
            s_nu, s_tau = shell_sums(ks)
            sum_doppler += s_nu
            sum_delay += s_tau
            radius_used = max(radius_used, k_max)
            continue
        radius = _K_START
        ks = np.arange(-radius, radius + 1)
        if n == 0:
            ks = ks[ks != 0]
        s_nu, s_tau = shell_sums(ks)
        while radius < _K_CAP:
            shell = np.concatenate([np.arange(-2 * radius, -radius),
                                    np.arange(radius + 1, 2 * radius + 1)])
            inc_nu, inc_tau = shell_sums(shell)
            s_nu += inc_nu
            s_tau += inc_tau
            radius *= 2
            if inc_nu + inc_tau < _SUM_TOL:
                break
        sum_doppler += s_nu
        sum_delay += s_tau
        radius_used = max(radius_used, radius)
    return sum_doppler, sum_delay, radius_used


@lru_cache(maxsize=64)
def _deriv_sums_cached(pulse: PulseSpec, lattice: WHLattice) -> tuple[float, float, int]:
    return _deriv_sums(pulse, lattice)


def interference_slope(pulse: PulseSpec, lattice: WHLattice,
                       k_max: int | None = None) -> float:
    """Leading coefficient of interference_max for small square-setting spread."""
    if k_max is not None:
        s_nu, s_tau, _ = _deriv_sums(pulse, lattice, k_max)
    else:
        s_nu, s_tau, _ = _deriv_sums_cached(pulse, lattice)
    return 0.25 * (s_nu + s_tau)


def taylor_coeffs(pulse: PulseSpec, lattice: WHLattice | None = None) -> TaylorCoeffs:
    """Both expansion coefficients plus the dispersion moments feeding the first."""
    if lattice is None:
        lattice = square_lattice(pulse)
    time_disp, freq_disp = dispersion_moments(pulse)
    return TaylorCoeffs(
        gain_curvature=math.pi ** 2 * (time_disp + freq_disp),
        interference_slope=interference_slope(pulse, lattice),
        time_dispersion_sq=time_disp,
        freq_dispersion_sq=freq_disp,
    )


def taylor_extremes(pulse: PulseSpec, lattice: WHLattice,
                    rect: SpreadRect) -> AmbiguityExtremes:
    """First-order extremes from the expansion coefficients.

    Uses the full quadratic forms in (max_doppler, max_delay) rather than
    the area alone, so the result is exact under the dilation that maps a
    matched configuration to its square setting.
    """
    time_disp, freq_disp = dispersion_moments(pulse)
    dip = 4.0 * math.pi ** 2 * (time_disp * rect.max_doppler ** 2
                                + freq_disp * rect.max_delay ** 2)
    s_nu, s_tau, radius = _deriv_sums_cached(pulse, lattice)
    growth = s_nu * rect.max_doppler ** 2 + s_tau * rect.max_delay ** 2
    corner = (rect.max_doppler, rect.max_delay)
    return AmbiguityExtremes(
        gain_min=max(0.0, 1.0 - dip),
        interference_max=growth,
        argmin=corner,
        argmax=corner,
        lattice_truncation=radius,
    )


def compute_extremes(pulse: PulseSpec, lattice: WHLattice, rect: SpreadRect,
                     mode: str = "auto") -> AmbiguityExtremes:
    """Extremes over the rectangle by search ("exact"), expansion ("taylor"),
    or a spread-based switch ("auto": search at spread >= 1e-5, expansion
    below, where a grid search cannot resolve 1 - gain_min anyway)."""
    if mode not in ("auto", "exact", "taylor"):
        raise ValueError(f"unknown extremes mode {mode!r}")
    if rect.max_doppler == 0.0 and rect.max_delay == 0.0:
        return AmbiguityExtremes(1.0, 0.0, (0.0, 0.0), (0.0, 0.0), 0)
    if mode == "auto":
        mode = "exact" if rect.spread >= 1e-5 else "taylor"
    if mode == "taylor":
        return taylor_extremes(pulse, lattice, rect)
    gain, argmin = min_ambiguity_sq(pulse, rect)
    interf, argmax = max_interference(pulse, lattice, rect)
    _, radius = _interference_detail(pulse, lattice, argmax[0], argmax[1])
    return AmbiguityExtremes(
        gain_min=min(gain, 1.0),
        interference_max=interf,
        argmin=argmin,
        argmax=argmax,
        lattice_truncation=radius,
    )
