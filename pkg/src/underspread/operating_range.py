"""SNR operating range: where the fading bound stays near AWGN capacity.

For a square-setting configuration the ratio bound/capacity rises from 0 at
low snr (channel uncertainty dominates) and falls back below any fixed
threshold at high snr (self-interference dominates).  This module solves for
the interval where the ratio clears a threshold, compares against closed-form
approximations, and sweeps the (spread, leakage) plane.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .capacity import lb_square
from .optimize import bisect_root

__all__ = [
    "IntervalResult",
    "SweepRow",
    "SweepTable",
    "awgn_capacity",
    "accuracy_ratio",
    "solve_interval",
    "rule_of_thumb",
    "sweep",
]

_SCAN_LO = 1e-4
_SCAN_HI = 1e8
_SCAN_POINTS = 512
_LOG10_TOL = 1e-3  # 0.01 dB
_RULE_VALID_MAX = 1e-4

CSV_HEADER = "spread,eps,snr_min_db,snr_max_db,rule_min_db,rule_max_db"


def _db(x: float) -> float:
    if x != x or x <= 0:
        return float("nan")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class IntervalResult:
    """Threshold-crossing interval of the accuracy ratio.

    ``converged`` certifies both endpoints were bisected inside the scan
    range with the ratio matching the threshold to 1e-3; a run touching the
    scan boundary leaves the touched endpoint unconverged.
    """

    snr_min: float
    snr_max: float
    snr_min_db: float
    snr_max_db: float
    threshold: float
    ratio_at_min: float
    ratio_at_max: float
    converged: bool
    empty: bool


@dataclass(frozen=True)
class SweepRow:
    spread: float
    eps: float
    snr_min_db: float
    snr_max_db: float
    rule_min_db: float
    rule_max_db: float
    error: str | None = None


@dataclass(frozen=True)
class SweepTable:
    tf_product: float
    threshold: float
    mode: str
    rows: tuple[SweepRow, ...] = field(default_factory=tuple)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(f"{r.spread:.12g},{r.eps:.12g},{r.snr_min_db:.6f},"
                      f"{r.snr_max_db:.6f},{r.rule_min_db:.6f},"
                      f"{r.rule_max_db:.6f}\n")
        return buf.getvalue()

    def to_jsonable(self) -> dict:
        return {
            "tf_product": self.tf_product,
            "threshold": self.threshold,
            "mode": self.mode,
            "rows": [
                {
                    "spread": r.spread,
                    "eps": r.eps,
                    "snr_min_db": r.snr_min_db,
                    "snr_max_db": r.snr_max_db,
                    "rule_min_db": r.rule_min_db,
                    "rule_max_db": r.rule_max_db,
                    "error": r.error,
                }
                for r in self.rows
            ],
        }


def awgn_capacity(bandwidth: float, rho: float) -> float:
    """Nonfading benchmark B log(1 + rho), nats/s."""
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    return bandwidth * math.log1p(rho)


def accuracy_ratio(rho: float, tf_product: float, spread: float, eps: float,
                   mode: str = "taylor") -> float:
    """bound / AWGN capacity at unit bandwidth; negative when vacuous.

    Both numerator and denominator are linear in bandwidth, so it cancels.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    value = lb_square(rho, tf_product, spread, eps, bandwidth=1.0,
                      mode=mode).value
    return value / awgn_capacity(1.0, rho)


def solve_interval(tf_product: float, spread: float, eps: float,
                   threshold: float = 0.75,
                   mode: str = "taylor") -> IntervalResult:
    """Solve accuracy_ratio(rho) = threshold for the two crossings.

    A 512-point logarithmic scan of [1e-4, 1e8] brackets the crossings; the
    super-threshold set must be one contiguous run (anything else indicates
    a non-unimodal ratio and raises).  Each bracket is then bisected to
    0.01 dB in rho.
    """
    if not (0.0 < threshold < 1.0):
        raise ValueError("threshold must lie in (0, 1)")
    grid = np.logspace(math.log10(_SCAN_LO), math.log10(_SCAN_HI),
                       _SCAN_POINTS)
    ratios = np.array([accuracy_ratio(r, tf_product, spread, eps, mode)
                       for r in grid])
    above = ratios >= threshold
    if not above.any():
        nan = float("nan")
        return IntervalResult(nan, nan, nan, nan, threshold, nan, nan,
                              converged=False, empty=True)
    idx = np.flatnonzero(above)
    if not np.all(np.diff(idx) == 1):
        raise RuntimeError(
            "super-threshold set is not contiguous on the scan grid; the "
            "accuracy ratio is not unimodal-above-threshold here")
    first, last = int(idx[0]), int(idx[-1])

    def ratio_log(x: float) -> float:
        return accuracy_ratio(10.0 ** x, tf_product, spread, eps,
                              mode) - threshold

    lo_converged = hi_converged = True
    if first == 0:
        snr_min = grid[0]
        lo_converged = False
    else:
        x = bisect_root(ratio_log, math.log10(grid[first - 1]),
                        math.log10(grid[first]), xtol=_LOG10_TOL)
        snr_min = 10.0 ** x
    if last == _SCAN_POINTS - 1:
        snr_max = grid[-1]
        hi_converged = False
    else:
        x = bisect_root(ratio_log, math.log10(grid[last]),
                        math.log10(grid[last + 1]), xtol=_LOG10_TOL)
        snr_max = 10.0 ** x

    ratio_min = accuracy_ratio(snr_min, tf_product, spread, eps, mode)
    ratio_max = accuracy_ratio(snr_max, tf_product, spread, eps, mode)
    converged = (lo_converged and hi_converged
                 and abs(ratio_min - threshold) < 1e-3
                 and abs(ratio_max - threshold) < 1e-3)
    return IntervalResult(
        snr_min=float(snr_min), snr_max=float(snr_max),
        snr_min_db=_db(snr_min), snr_max_db=_db(snr_max),
        threshold=threshold, ratio_at_min=float(ratio_min),
        ratio_at_max=float(ratio_max), converged=converged, empty=False)


def rule_of_thumb(spread: float, eps: float) -> tuple[float, float]:
    """Closed-form endpoint approximations (linear snr).

    snr_min ~ 13 sqrt(spread); snr_max ~ 0.22 / (spread + eps).  Stated for
    spread, eps <= 1e-4; outside that a validity warning is issued.
    """
    if spread < 0 or eps < 0:
        raise ValueError("spread and eps must be nonnegative")
    if spread > _RULE_VALID_MAX or eps > _RULE_VALID_MAX:
        warnings.warn(
            "rule of thumb is stated for spread, eps <= 1e-4; values beyond "
            "that range are extrapolation", stacklevel=2)
    snr_min = 13.0 * math.sqrt(spread)
    total = spread + eps
    snr_max = 0.22 / total if total > 0 else float("inf")
    return snr_min, snr_max


def sweep(tf_product: float, spread_grid, eps_grid,
          threshold: float = 0.75, mode: str = "taylor") -> SweepTable:
    """solve_interval + rule_of_thumb per grid point, spread varying slowest.

    Failures are captured per row (nan values, error message) so one bad
    corner cannot kill a long sweep.
    """
    rows: list[SweepRow] = []
    for spread in spread_grid:
        for eps in eps_grid:
            rule_min, rule_max = rule_of_thumb(spread, eps)
            try:
                res = solve_interval(tf_product, spread, eps, threshold,
                                     mode)
                if res.empty:
                    rows.append(SweepRow(spread, eps, float("nan"),
                                         float("nan"), _db(rule_min),
                                         _db(rule_max), error="empty"))
                else:
                    rows.append(SweepRow(spread, eps, res.snr_min_db,
                                         res.snr_max_db, _db(rule_min),
                                         _db(rule_max), error=None))
            except Exception as exc:  # keep sweeping, report in-row
                rows.append(SweepRow(spread, eps, float("nan"), float("nan"),
                                     _db(rule_min), _db(rule_max),
                                     error=str(exc)))
    return SweepTable(tf_product=tf_product, threshold=threshold, mode=mode,
                      rows=tuple(rows))
