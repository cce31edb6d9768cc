"""Empirical survival functions, binned estimation, mixtures, and survival entropy.

A survival function S(x) = P(X > x) is the complement of the CDF.  The
empirical survival function of a sample of size n drops by 1/n at every
observation (tied observations drop jointly) and is represented here as an
explicit step function, so that integrals of piecewise-constant integrands
can be evaluated exactly as finite sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_BINS",
    "SortedSample",
    "StepSurvival",
    "empirical_survival",
    "km_binned_survival",
    "mixture_survival",
    "survival_entropy",
]

#: Default bin count for binned (Kaplan-Meier style) survival estimation.
DEFAULT_BINS = 10**6


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SortedSample:
    """Order statistics of a real-valued sample.

    ``values`` must already be non-decreasing; use :meth:`from_data` to sort
    raw observations.  Instances are immutable and safe to share across
    threads.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample contains non-finite values")
        if values.size > 1 and np.any(np.diff(values) < 0):
            raise ValueError("sample values must be non-decreasing")
        object.__setattr__(self, "values", _frozen_array(values))

    @classmethod
    def from_data(cls, data) -> "SortedSample":
        """Sort raw observations into a sample."""
        arr = np.asarray(data, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("empty sample")
        return cls(np.sort(arr))

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def min(self) -> float:
        return float(self.values[0])

    @property
    def max(self) -> float:
        return float(self.values[-1])


@dataclass(frozen=True, eq=False)
class StepSurvival:
    """Right-continuous piecewise-constant survival function.

    ``values[k]`` is S(x) on ``[breakpoints[k], breakpoints[k+1])`` and
    ``head_value`` is S(x) to the left of the first breakpoint (1 for any
    survival function built from a sample).  ``values[-1]`` extends to +inf.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    head_value: float = 1.0

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=np.float64).ravel()
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if bp.size == 0:
            raise ValueError("step survival needs at least one breakpoint")
        if bp.size != vals.size:
            raise ValueError("breakpoints and values must have equal length")
        if not np.all(np.isfinite(bp)):
            raise ValueError("breakpoints must be finite")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        head = float(self.head_value)
        if not (0.0 <= vals.min() and vals.max() <= 1.0 and 0.0 <= head <= 1.0):
            raise ValueError("survival values must lie in [0, 1]")
        if vals.size > 1 and np.any(np.diff(vals) > 0):
            raise ValueError("survival values must be non-increasing")
        if vals[0] > head:
            raise ValueError("head value must dominate the first step value")
        object.__setattr__(self, "breakpoints", _frozen_array(bp))
        object.__setattr__(self, "values", _frozen_array(vals))
        object.__setattr__(self, "head_value", head)

    @property
    def tail_value(self) -> float:
        """S(x) at and beyond the last breakpoint."""
        return float(self.values[-1])

    def __call__(self, x):
        """Evaluate S at scalar or array ``x``."""
        arr = np.asarray(x, dtype=np.float64)
        idx = np.searchsorted(self.breakpoints, arr, side="right") - 1
        out = np.where(idx < 0, self.head_value, self.values[np.maximum(idx, 0)])
        if arr.ndim == 0:
            return float(out)
        return out


def empirical_survival(sample: SortedSample) -> StepSurvival:
    """Empirical survival function S(x) = #{observations > x} / n.

    Duplicate observations collapse into a single breakpoint with the
    corresponding joint drop; the final value is exactly 0.
    """
    uniq, counts = np.unique(sample.values, return_counts=True)
    remaining = sample.n - np.cumsum(counts)
    return StepSurvival(uniq, remaining / sample.n, 1.0)


def km_binned_survival(
    sample: SortedSample,
    bins: int = DEFAULT_BINS,
    bounds: tuple[float, float] | None = None,
) -> StepSurvival:
    """Empirical survival sampled at the right edges of an equal-width grid.

    With fully observed data this is the (uncensored) Kaplan-Meier step
    estimate on the grid.  ``bounds`` defaults to the sample range.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    lo, hi = bounds if bounds is not None else (sample.min, sample.max)
    if not lo < hi:
        raise ValueError(f"invalid range: need lo < hi, got ({lo}, {hi})")
    edges = np.linspace(lo, hi, bins + 1)[1:]
    above = sample.n - np.searchsorted(sample.values, edges, side="right")
    return StepSurvival(edges, above / sample.n, 1.0)


def mixture_survival(p: StepSurvival, q: StepSurvival) -> StepSurvival:
    """Equal-weight mixture M(x) = (P(x) + Q(x)) / 2."""
    grid = np.union1d(p.breakpoints, q.breakpoints)
    return StepSurvival(
        grid,
        0.5 * (p(grid) + q(grid)),
        0.5 * (p.head_value + q.head_value),
    )


def survival_entropy(sample: SortedSample) -> float:
    """Entropy -integral S log S dx of the empirical survival function.

    Evaluated through the order-statistics spacings: the integrand is
    constant at level 1 - i/n between consecutive order statistics, so the
    integral reduces to a finite sum.  Natural logarithm; result carries the
    units of the observations and is 0 for n = 1 or an all-tied sample.
    """
    n = sample.n
    if n == 1:
        return 0.0
    gaps = np.diff(sample.values)
    tail = 1.0 - np.arange(1, n) / n
    return float(-np.sum(gaps * tail * np.log(tail))) + 0.0
