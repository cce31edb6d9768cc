"""Bootstrap resampling and confidence intervals.

Replicate seeds are derived from the configuration seed by replicate index,
so the resulting interval is deterministic and independent of how replicate
evaluation is scheduled (including thread parallelism).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .seeds import derive_seed
from .survival import SortedSample

__all__ = [
    "BootstrapConfig",
    "ConfidenceInterval",
    "iid_resample",
    "moving_block_resample",
    "percentile_of_replicates",
    "replicate_values",
    "bootstrap_ci",
]

_RESAMPLING_METHODS = ("iid", "moving_block")
_CI_METHODS = ("percentile", "basic")


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling plan: count, confidence level, scheme, and master seed."""

    resamples: int = 1000
    level: float = 0.95
    method: str = "iid"
    block_length: int | None = None
    seed: int = 0
    ci_method: str = "percentile"

    def __post_init__(self):
        if self.resamples < 1:
            raise ValueError("resamples must be >= 1")
        if not 0.0 < self.level < 1.0:
            raise ValueError("level must lie strictly between 0 and 1")
        if self.method not in _RESAMPLING_METHODS:
            raise ValueError(f"method must be one of {_RESAMPLING_METHODS}")
        if self.method == "moving_block":
            if self.block_length is None or self.block_length < 1:
                raise ValueError("moving_block requires block_length >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.ci_method not in _CI_METHODS:
            raise ValueError(f"ci_method must be one of {_CI_METHODS}")


@dataclass(frozen=True)
class ConfidenceInterval:
    lb: float
    ub: float
    level: float
    point: float

    def __post_init__(self):
        if self.lb > self.ub:
            raise ValueError("interval bounds out of order")


def iid_resample(sample: SortedSample, seed: int) -> SortedSample:
    """Draw ``n`` observations with replacement; deterministic given seed."""
    rng = np.random.default_rng(int(seed))
    idx = rng.integers(0, sample.n, sample.n)
    return SortedSample(np.sort(sample.values[idx]))


def moving_block_resample(series, block_length: int, seed: int) -> np.ndarray:
    """Concatenate uniformly chosen contiguous blocks, truncated to length n.

    Block starts may overlap; within-block ordering is preserved.  With
    ``block_length == n`` the only possible block is the whole series.
    """
    arr = np.asarray(series, dtype=np.float64).ravel()
    n = arr.size
    if n == 0:
        raise ValueError("empty series")
    if not 1 <= block_length <= n:
        raise ValueError(f"block_length must lie in [1, {n}], got {block_length}")
    rng = np.random.default_rng(int(seed))
    n_blocks = -(-n // block_length)
    starts = rng.integers(0, n - block_length + 1, n_blocks)
    out = np.concatenate([arr[s : s + block_length] for s in starts])
    return out[:n]


def percentile_of_replicates(replicates: np.ndarray, q: float) -> float:
    """Nearest-rank quantile: the ceil(q*B)-th smallest replicate."""
    reps = np.sort(np.asarray(replicates, dtype=np.float64).ravel())
    b = reps.size
    if b == 0:
        raise ValueError("no replicates")
    idx = max(1, min(b, math.ceil(q * b - 1e-9)))
    return float(reps[idx - 1])


def _components(data) -> tuple[np.ndarray, ...]:
    if isinstance(data, (tuple, list)):
        parts = data
    else:
        parts = (data,)
    out = []
    for part in parts:
        if isinstance(part, SortedSample):
            out.append(part.values)
        else:
            arr = np.asarray(part, dtype=np.float64).ravel()
            if arr.size == 0:
                raise ValueError("empty data component")
            out.append(arr)
    return tuple(out)


def replicate_values(statistic, data, config: BootstrapConfig, workers: int = 1) -> np.ndarray:
    """Bootstrap replicates of ``statistic``, one per resample.

    ``data`` is one array-like (or SortedSample) or a tuple of them; each
    component is resampled independently per replicate with seed derived
    from ``(config.seed, replicate index, component index)``.
    """
    comps = _components(data)

    def one(b: int) -> float:
        parts = []
        for j, comp in enumerate(comps):
            seed = derive_seed(config.seed, "replicate", b, j)
            if config.method == "moving_block":
                parts.append(moving_block_resample(comp, config.block_length, seed))
            else:
                rng = np.random.default_rng(seed)
                parts.append(comp[rng.integers(0, comp.size, comp.size)])
        return float(statistic(*parts))

    indices = range(config.resamples)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(one, indices))
    else:
        reps = [one(b) for b in indices]
    return np.asarray(reps, dtype=np.float64)


def bootstrap_ci(statistic, data, config: BootstrapConfig, workers: int = 1) -> ConfidenceInterval:
    """Bootstrap confidence interval for ``statistic`` on ``data``.

    Percentile method (default): interval endpoints are the nearest-rank
    quantiles of the replicate distribution at (1-level)/2 and (1+level)/2.
    Basic method: the percentile interval reflected about the point
    estimate, (2*point - hi, 2*point - lo).
    """
    comps = _components(data)
    reps = replicate_values(statistic, data, config, workers=workers)
    point = float(statistic(*comps))
    lo_q = (1.0 - config.level) / 2.0
    hi_q = (1.0 + config.level) / 2.0
    lo = percentile_of_replicates(reps, lo_q)
    hi = percentile_of_replicates(reps, hi_q)
    if config.ci_method == "basic":
        lo, hi = 2.0 * point - hi, 2.0 * point - lo
    return ConfidenceInterval(lb=lo, ub=hi, level=config.level, point=point)
