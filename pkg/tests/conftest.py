"""Shared oracles for the test suite.

The ambiguity oracle works in the time domain (sample, window, FFT), which
is an independent route from the library's frequency-domain closed forms:
agreement is a genuine cross-check, not a tautology.
"""

from __future__ import annotations

import numpy as np
import pytest

from underspread import eval_time, make_rrc_pulse

# window half-width 800 keeps the 1/t^2 tail contribution below ~2e-8,
# comfortably inside the 1e-7 oracle tolerance
_DT = 1.0 / 16.0
_HALF_WIDTH = 800.0
_PAD = 1 << 16


class AmbiguityOracle:
    """FFT evaluation of A(doppler, delay) on a fixed doppler grid.

    For one delay, samples h(t) = g(t) g(t - delay) and takes its DFT;
    bin j is A at doppler j / (PAD * dt).  The integrand is effectively
    bandlimited well under the 16 Hz sampling rate, so the error is the
    window truncation alone.
    """

    def __init__(self, tf_product: float):
        self.pulse = make_rrc_pulse(tf_product)
        self.t = np.arange(-_HALF_WIDTH, _HALF_WIDTH, _DT)
        self.g = eval_time(self.pulse, self.t)
        self.doppler_step = 1.0 / (_PAD * _DT)
        self._cache: dict[float, np.ndarray] = {}

    def spectrum_for_delay(self, delay: float) -> np.ndarray:
        if delay not in self._cache:
            h = self.g * eval_time(self.pulse, self.t - delay)
            dft = np.fft.fft(h, n=_PAD) * _DT
            # undo the window offset phase: t starts at -HALF_WIDTH, not 0
            j = np.arange(_PAD)
            phase = np.exp(-2j * np.pi * j / _PAD * (-_HALF_WIDTH / _DT))
            self._cache[delay] = dft * phase
        return self._cache[delay]

    def value(self, bin_index: int, delay: float) -> complex:
        return complex(self.spectrum_for_delay(delay)[bin_index])

    def doppler(self, bin_index: int) -> float:
        return bin_index * self.doppler_step


@pytest.fixture(scope="session")
def amb_oracle() -> AmbiguityOracle:
    return AmbiguityOracle(1.02)


@pytest.fixture(scope="session")
def pulse102():
    return make_rrc_pulse(1.02)


def dense_alpha_scan(objective, n: int = 100_000) -> tuple[float, float]:
    grid = np.linspace(1e-6, 1.0 - 1e-6, n)
    vals = np.array([objective(a) for a in grid])
    i = int(np.argmin(vals))
    return float(grid[i]), float(vals[i])
