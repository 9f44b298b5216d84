"""Ambiguity engine: oracle agreement, symmetries, extremes, expansions."""

import math

import numpy as np
import pytest

from underspread import (SpreadRect, ambiguity, ambiguity_delay_deriv,
                         ambiguity_doppler_deriv, compute_extremes,
                         dispersion_moments, gain_curvature,
                         interference_slope, interference_sum,
                         make_rrc_pulse, max_interference, min_ambiguity_sq,
                         orthonormality_residual, square_lattice,
                         taylor_coeffs, taylor_extremes)


def test_origin_is_unit(pulse102):
    assert ambiguity(pulse102, 0.0, 0.0) == pytest.approx(1.0 + 0.0j, abs=1e-14)


@pytest.mark.parametrize("bin_index,delay", [
    (0, 0.3), (0, 2.5), (3, 0.0), (7, 0.51), (40, 1.0), (200, 3.3),
    (11, 12.5), (150, 0.0625),
])
def test_against_fft_oracle(amb_oracle, bin_index, delay):
    nu = amb_oracle.doppler(bin_index)
    want = amb_oracle.value(bin_index, delay)
    got = ambiguity(amb_oracle.pulse, nu, delay)
    assert abs(got - want) < 1e-7


def test_symmetries(pulse102):
    rng = np.random.default_rng(3)
    for _ in range(8):
        nu = rng.uniform(-0.9, 0.9)
        tau = rng.uniform(-4.0, 4.0)
        a = ambiguity(pulse102, nu, tau)
        # real pulse: doppler sign flip conjugates
        assert ambiguity(pulse102, -nu, tau) == pytest.approx(np.conj(a), abs=1e-13)
        # even pulse: delay sign flip conjugates too
        assert ambiguity(pulse102, nu, -tau) == pytest.approx(np.conj(a), abs=1e-13)
        assert abs(ambiguity(pulse102, -nu, -tau)) == pytest.approx(abs(a), abs=1e-13)


def test_support_vanishes_beyond_doppler_edge(pulse102):
    # spectra stop overlapping once |doppler| reaches twice the support edge
    edge = 2.0 * pulse102.support_edge
    assert ambiguity(pulse102, edge + 1e-9, 1.3) == 0.0
    assert abs(ambiguity(pulse102, edge - 1e-6, 1.3)) < 1e-10


def test_orthonormality(pulse102):
    lat = square_lattice(pulse102)
    assert orthonormality_residual(pulse102, lat) < 1e-8
    # a denser lattice is not orthonormal
    dense = make_rrc_pulse(1.5)
    bad = orthonormality_residual(dense, square_lattice(make_rrc_pulse(1.02)))
    assert bad > 1e-3


@pytest.mark.parametrize("nu,tau", [
    (0.17, 0.9), (-0.4, 2.2), (0.83, -0.31), (0.02, 15.0), (-0.6, -7.7),
])
def test_derivatives_match_finite_differences(pulse102, nu, tau):
    h = 1e-6
    fd = (ambiguity(pulse102, nu + h, tau) - ambiguity(pulse102, nu - h, tau)) / (2 * h)
    assert ambiguity_doppler_deriv(pulse102, nu, tau) == pytest.approx(fd, rel=1e-7)
    fd = (ambiguity(pulse102, nu, tau + h) - ambiguity(pulse102, nu, tau - h)) / (2 * h)
    assert ambiguity_delay_deriv(pulse102, nu, tau) == pytest.approx(fd, rel=1e-7)


def _autocorr_deriv_at_step(pulse, k: int) -> float:
    # closed form for d/d tau of the autocorrelation at tau = k * period:
    # (-1)^k cos(pi mu k) / (period k (1 - 4 mu^2 k^2)), with the removable
    # 4 mu^2 k^2 = 1 case handled by its limit pi/4 / (period k)
    mu, period = pulse.rolloff, pulse.period
    q = 1.0 - 4.0 * mu * mu * k * k
    if abs(q) < 1e-12:
        core = math.pi / 4.0
    else:
        core = math.cos(math.pi * mu * k) / q
    return (-1.0) ** k * core / (period * k)


def test_delay_derivative_on_lattice_matches_closed_form(pulse102):
    period = pulse102.period
    for k in (1, 2, 3, 7, 24, 25, 26, 40):
        want = _autocorr_deriv_at_step(pulse102, k)
        got = ambiguity_delay_deriv(pulse102, 0.0, k * period)
        assert got == pytest.approx(want, rel=1e-9), f"k={k}"
        # doppler derivative vanishes identically on the zero-doppler row
        assert abs(ambiguity_doppler_deriv(pulse102, 0.0, k * period)) < 1e-14


def test_interference_sum_near_zero_at_origin(pulse102):
    lat = square_lattice(pulse102)
    assert interference_sum(pulse102, lat, 0.0, 0.0) < 1e-16


def test_interference_sum_truncation_stability(pulse102):
    lat = square_lattice(pulse102)
    for nu, tau in [(5e-3, 5e-3), (1e-3, 2e-2)]:
        adaptive = interference_sum(pulse102, lat, nu, tau)
        pinned = interference_sum(pulse102, lat, nu, tau, k_max=65536)
        assert adaptive == pytest.approx(pinned, rel=1e-8)


def test_min_ambiguity_beats_brute_grid(pulse102):
    half = math.sqrt(1e-4) / 2.0
    rect = SpreadRect(half, half)
    value, arg = min_ambiguity_sq(pulse102, rect)
    nus = np.linspace(-half, half, 101)
    taus = np.linspace(-half, half, 101)
    brute = min(np.min(np.abs(ambiguity(pulse102, float(nu), taus)) ** 2)
                for nu in nus)
    assert value <= brute + 1e-12
    assert value == pytest.approx(brute, rel=1e-4)
    # worst attenuation sits at a rectangle corner
    assert abs(arg[0]) == pytest.approx(half, rel=1e-6)
    assert abs(arg[1]) == pytest.approx(half, rel=1e-6)


def test_max_interference_dominates_samples(pulse102):
    lat = square_lattice(pulse102)
    half = math.sqrt(1e-4) / 2.0
    rect = SpreadRect(half, half)
    value, arg = max_interference(pulse102, lat, rect)
    rng = np.random.default_rng(11)
    for _ in range(40):
        nu = rng.uniform(-half, half)
        tau = rng.uniform(-half, half)
        assert interference_sum(pulse102, lat, nu, tau) <= value + 1e-12
    corner = interference_sum(pulse102, lat, half, half)
    assert value >= corner - 1e-15
    assert abs(arg[0]) == pytest.approx(half, rel=1e-6)
    assert abs(arg[1]) == pytest.approx(half, rel=1e-6)


def test_gain_curvature_is_dispersion_combination(pulse102):
    d_time, d_freq = dispersion_moments(pulse102)
    assert gain_curvature(pulse102) == pytest.approx(
        math.pi ** 2 * (d_time + d_freq), rel=1e-12)


def test_interference_slope_matches_autocorr_series(pulse102):
    # on the square lattice only the zero-doppler row contributes at first
    # order, and its delay derivatives have the closed form above:
    # slope = 0.5 * sum_k r'(k period)^2
    lat = square_lattice(pulse102)
    total = 0.0
    for k in range(1, 200_000):
        term = _autocorr_deriv_at_step(pulse102, k) ** 2
        total += term
        if k > 100 and term < 1e-18 * total:
            break
    assert interference_slope(pulse102, lat) == pytest.approx(
        0.5 * total, rel=1e-6)


def test_taylor_extremes_track_exact_at_small_spread(pulse102):
    lat = square_lattice(pulse102)
    spread = 1e-6
    half = math.sqrt(spread) / 2.0
    rect = SpreadRect(half, half)
    exact = compute_extremes(pulse102, lat, rect, mode="exact")
    taylor = taylor_extremes(pulse102, lat, rect)
    m_ratio = (1.0 - exact.gain_min) / (1.0 - taylor.gain_min)
    big_ratio = exact.interference_max / taylor.interference_max
    assert 0.98 < m_ratio < 1.02
    assert 0.9 < big_ratio < 1.1


def test_compute_extremes_modes(pulse102):
    lat = square_lattice(pulse102)
    degenerate = compute_extremes(pulse102, lat, SpreadRect(0.0, 0.0))
    assert degenerate.gain_min == 1.0
    assert degenerate.interference_max == 0.0
    with pytest.raises(ValueError):
        compute_extremes(pulse102, lat, SpreadRect(1e-3, 1e-3), mode="magic")
    # auto mode routes small spreads through the expansion
    small = compute_extremes(pulse102, lat, SpreadRect(5e-4, 5e-4), mode="auto")
    tay = taylor_extremes(pulse102, lat, SpreadRect(5e-4, 5e-4))
    assert small.gain_min == tay.gain_min


def test_spread_rect_validation():
    with pytest.raises(ValueError):
        SpreadRect(-1e-3, 1e-3)
    with pytest.raises(ValueError):
        SpreadRect(30.0, 30.0)  # spread would reach 1
    assert SpreadRect(2e-3, 3e-3).spread == pytest.approx(2.4e-5)


def test_coeffs_dataclass_fields(pulse102):
    co = taylor_coeffs(pulse102)
    d_time, d_freq = dispersion_moments(pulse102)
    assert co.time_dispersion_sq == pytest.approx(d_time)
    assert co.freq_dispersion_sq == pytest.approx(d_freq)
    assert co.gain_curvature == pytest.approx(
        math.pi ** 2 * (d_time + d_freq), rel=1e-12)
    assert co.interference_slope > 0
