"""Empirical survival Jensen-Shannon divergence (ESJS).

The ESJS applies the Jensen-Shannon construction to survival functions: with
M the equal-weight mixture of P and Q,

    ESJS(P, Q) = 1/2 integral ( P log(P/M) + Q log(Q/M) ) dx.

All survival functions here are step functions, so the integral is evaluated
exactly as a finite sum over the union of breakpoints.  The square root of
the ESJS is a metric; the ratio of two ESJS scores against the same data is
an odds-ratio style model-comparison factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .survival import SortedSample, StepSurvival, survival_entropy

__all__ = [
    "EsjsFactor",
    "esjs",
    "esjs_spacings",
    "esjs_distance",
    "esjs_factor",
]


def _integrand(pv: np.ndarray, qv: np.ndarray) -> np.ndarray:
    # 1/2 (P log(P/M) + Q log(Q/M)) with M = (P+Q)/2 and 0 log 0 := 0.
    m = 0.5 * (pv + qv)
    with np.errstate(divide="ignore", invalid="ignore"):
        tp = np.where(pv > 0.0, pv * np.log(pv / m), 0.0)
        tq = np.where(qv > 0.0, qv * np.log(qv / m), 0.0)
    return 0.5 * (tp + tq)


def _union_grid(p: StepSurvival, q: StepSurvival) -> np.ndarray:
    if p.breakpoints is q.breakpoints:
        return p.breakpoints
    if p.breakpoints.size == q.breakpoints.size and np.array_equal(
        p.breakpoints, q.breakpoints
    ):
        return p.breakpoints
    return np.union1d(p.breakpoints, q.breakpoints)


def esjs(p: StepSurvival, q: StepSurvival) -> float:
    """Exact divergence between two step survival functions.

    Nonnegative, symmetric, zero iff the inputs agree pointwise, and carries
    the units of the observations.  Returns ``inf`` if the integrand is
    nonzero on an unbounded tail (cannot happen for survivals built from
    samples, whose heads are 1 and tails 0).
    """
    grid = _union_grid(p, q)
    if grid is p.breakpoints:
        pv, qv = p.values, q.values
    else:
        pv, qv = p(grid), q(grid)
    head = float(_integrand(np.array([p.head_value]), np.array([q.head_value]))[0])
    tail = float(_integrand(pv[-1:], qv[-1:])[0])
    if head != 0.0 or tail != 0.0:
        return math.inf
    if grid.size == 1:
        return 0.0
    widths = np.diff(grid)
    return float(np.sum(widths * _integrand(pv[:-1], qv[:-1]))) + 0.0


def esjs_spacings(p_sample: SortedSample, q_sample: SortedSample) -> float:
    """Order-statistics form of the divergence for equal-size samples.

    Interleaving the two samples produces the mixture sample: its empirical
    survival is exactly the half/half mixture of the input survivals.  The
    divergence is then the entropy combination

        E(mixture) - E(p)/2 - E(q)/2,

    each entropy evaluated through its spacings, which agrees with
    :func:`esjs` on the corresponding empirical survivals up to rounding.
    """
    if p_sample.n != q_sample.n:
        raise ValueError("spacings form requires equal sizes; use esjs")
    if p_sample.n < 2:
        raise ValueError("spacings form requires n >= 2")
    pooled = SortedSample(
        np.sort(np.concatenate([p_sample.values, q_sample.values]))
    )
    return (
        survival_entropy(pooled)
        - 0.5 * survival_entropy(p_sample)
        - 0.5 * survival_entropy(q_sample)
    )


def esjs_distance(p: StepSurvival, q: StepSurvival) -> float:
    """Square root of the divergence; a metric on step survival functions."""
    return math.sqrt(esjs(p, q))


@dataclass(frozen=True)
class EsjsFactor:
    """Odds-ratio style comparison of two divergence scores.

    ``ratio = numerator_esjs / denominator_esjs``; reporting convention puts
    the larger (worse-fitting) score in the numerator so factors are >= 1.
    """

    ratio: float
    numerator_esjs: float
    denominator_esjs: float

    def __post_init__(self):
        if self.numerator_esjs < 0 or self.denominator_esjs < 0:
            raise ValueError("divergence scores must be nonnegative")


def esjs_factor(challenger_esjs: float, champion_esjs: float) -> EsjsFactor:
    """Factor between a challenger score and the champion (reference) score."""
    if champion_esjs < 0 or challenger_esjs < 0:
        raise ValueError("divergence scores must be nonnegative")
    if champion_esjs == 0:
        raise ValueError("degenerate perfect fit")
    return EsjsFactor(
        ratio=challenger_esjs / champion_esjs,
        numerator_esjs=float(challenger_esjs),
        denominator_esjs=float(champion_esjs),
    )
