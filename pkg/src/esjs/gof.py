"""Goodness-of-fit pipeline: score fitted models, run simulated experiments,
the sample-size scaling study, and the power-law fit.

The score of a fitted model against data is the divergence between the
empirical survival of a sample drawn from the model and the empirical
survival of the data; smaller is better and 0 means indistinguishable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bootstrap import BootstrapConfig, ConfidenceInterval, bootstrap_ci
from .distributions import Family, ParametricModel, SupportError, fit_mle, sample_from
from .divergence import EsjsFactor, esjs, esjs_factor
from .seeds import derive_seed
from .survival import SortedSample, empirical_survival, km_binned_survival

__all__ = [
    "FitReport",
    "ExperimentReport",
    "ScalingRow",
    "goodness_of_fit",
    "support_problem",
    "fit_report",
    "compare_families",
    "simulate_experiment",
    "scaling_experiment",
    "powerlaw_fit",
]


@dataclass(frozen=True)
class FitReport:
    """One fitted family: parameters, divergence score, and bootstrap CI."""

    family: Family
    params: tuple[float, ...]
    esjs: float
    ci: ConfidenceInterval
    n: int
    model_sample_size: int
    seed: int


@dataclass(frozen=True)
class ExperimentReport:
    """Scores for every hypothesis family against one data set."""

    given: ParametricModel | None
    rows: tuple[FitReport, ...]
    skipped: tuple[tuple[Family, str], ...]
    best: Family
    challenger: Family | None
    factor: EsjsFactor
    factor_note: str | None = None


@dataclass(frozen=True)
class ScalingRow:
    size: int
    params: tuple[float, ...]
    esjs: float


def support_problem(family: Family, sample: SortedSample) -> str | None:
    """Reason ``family`` cannot be fitted to ``sample``, or None if it can."""
    lo, hi = sample.min, sample.max
    if family in (Family.GAMMA, Family.WEIBULL, Family.LOG_NORMAL) and lo <= 0:
        return "requires strictly positive data"
    if family is Family.EXPONENTIAL and lo < 0:
        return "requires non-negative data"
    if family is Family.BETA and (lo <= 0 or hi >= 1):
        return "requires data strictly inside (0, 1)"
    if family is Family.PARETO and lo < 1:
        return "requires data >= 1"
    return None


def _survival_pair(model_values: np.ndarray, data_values: np.ndarray, bins: int | None):
    p = SortedSample(np.sort(model_values))
    q = SortedSample(np.sort(data_values))
    if bins is None:
        return empirical_survival(p), empirical_survival(q)
    lo = min(p.min, q.min)
    hi = max(p.max, q.max)
    if not lo < hi:
        # all observations identical in both samples: survivals coincide
        return empirical_survival(p), empirical_survival(q)
    return (
        km_binned_survival(p, bins, (lo, hi)),
        km_binned_survival(q, bins, (lo, hi)),
    )


def _esjs_between(model_values: np.ndarray, data_values: np.ndarray, bins: int | None) -> float:
    p, q = _survival_pair(model_values, data_values, bins)
    return esjs(p, q)


def goodness_of_fit(
    model: ParametricModel,
    data: SortedSample,
    model_sample_size: int | None = None,
    seed: int = 0,
) -> float:
    """Divergence between a sample drawn from ``model`` and ``data``."""
    size = data.n if model_sample_size is None else model_sample_size
    model_sample = sample_from(model, size, seed)
    return esjs(empirical_survival(model_sample), empirical_survival(data))


def fit_report(
    data: SortedSample,
    family: Family,
    config: BootstrapConfig,
    model_sample_size: int | None = None,
    bins: int | None = None,
    workers: int = 1,
) -> FitReport:
    """Fit one family, score it, and attach a bootstrap confidence interval.

    The model-sampling seed and the bootstrap seed are both derived from
    ``config.seed`` and the family name, so per-family results are
    reproducible in isolation.
    """
    reason = support_problem(family, data)
    if reason is not None:
        raise SupportError(f"{family.value} {reason}")
    model = fit_mle(family, data)
    size = data.n if model_sample_size is None else model_sample_size
    model_seed = derive_seed(config.seed, "model", family.value)
    model_sample = sample_from(model, size, model_seed)
    score = _esjs_between(model_sample.values, data.values, bins)
    ci_config = replace(config, seed=derive_seed(config.seed, "bootstrap", family.value))
    ci = bootstrap_ci(
        lambda m, d: _esjs_between(m, d, bins),
        (model_sample.values, data.values),
        ci_config,
        workers=workers,
    )
    return FitReport(
        family=family,
        params=model.params,
        esjs=score,
        ci=ci,
        n=data.n,
        model_sample_size=size,
        seed=model_seed,
    )


def compare_families(
    data: SortedSample,
    families,
    config: BootstrapConfig,
    model_sample_size: int | None = None,
    bins: int | None = None,
    exclude_from_factor=(),
    workers: int = 1,
) -> ExperimentReport:
    """Score every support-compatible family and rank by divergence.

    Support-incompatible families are reported as skipped with a reason.
    The factor compares the designated challenger (by default the second
    best, optionally restricted by ``exclude_from_factor``) to the best.
    """
    families = list(families)
    if not families:
        raise ValueError("no hypothesis families given")
    excluded = set(exclude_from_factor)
    rows: list[FitReport] = []
    skipped: list[tuple[Family, str]] = []
    for family in families:
        reason = support_problem(family, data)
        if reason is not None:
            skipped.append((family, reason))
            continue
        rows.append(
            fit_report(data, family, config, model_sample_size, bins, workers=workers)
        )
    if not rows:
        detail = "; ".join(f"{fam.value} {why}" for fam, why in skipped)
        raise ValueError(f"all hypotheses skipped: {detail}")
    best = min(rows, key=lambda r: r.esjs)
    candidates = [r for r in rows if r is not best and r.family not in excluded]
    if not candidates:
        note = "single hypothesis" if len(rows) == 1 else "no eligible challenger"
        factor = EsjsFactor(1.0, best.esjs, best.esjs)
        challenger = None
    else:
        chall = min(candidates, key=lambda r: r.esjs)
        factor = esjs_factor(chall.esjs, best.esjs)
        challenger = chall.family
        note = None
    return ExperimentReport(
        given=None,
        rows=tuple(rows),
        skipped=tuple(skipped),
        best=best.family,
        challenger=challenger,
        factor=factor,
        factor_note=note,
    )


def simulate_experiment(
    given: ParametricModel,
    hypotheses,
    n: int,
    config: BootstrapConfig,
    model_sample_size: int | None = None,
    bins: int | None = None,
    exclude_from_factor=(),
    workers: int = 1,
) -> ExperimentReport:
    """Generate data from ``given`` and rank the hypothesis families on it.

    Steps: draw a size-``n`` data set from the given model, fit each
    hypothesis by maximum likelihood, draw a sample from each fitted model,
    score it against the data, and attach bootstrap intervals.  Fully
    deterministic given ``config``.
    """
    if n < 2:
        raise ValueError("simulated experiments need n >= 2")
    data = sample_from(given, n, derive_seed(config.seed, "data"))
    report = compare_families(
        data,
        hypotheses,
        config,
        model_sample_size=n if model_sample_size is None else model_sample_size,
        bins=bins,
        exclude_from_factor=exclude_from_factor,
        workers=workers,
    )
    return replace(report, given=given)


def scaling_experiment(given: ParametricModel, sizes, seed: int) -> list[ScalingRow]:
    """Self-fit divergence at increasing sample sizes.

    For each size: generate data from ``given``, refit the same family,
    sample the fitted model, and record the divergence.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be nonempty")
    rows = []
    for size in sizes:
        if size < 2:
            raise ValueError("each size must be >= 2")
        data = sample_from(given, size, derive_seed(seed, "data", size))
        model = fit_mle(given.family, data)
        model_sample = sample_from(model, size, derive_seed(seed, "model", size))
        score = esjs(empirical_survival(model_sample), empirical_survival(data))
        rows.append(ScalingRow(size=size, params=model.params, esjs=score))
    return rows


def powerlaw_fit(xs, ys) -> tuple[float, float]:
    """Least-squares power law y = amplitude * x**exponent in log-log space."""
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    if xs.size != ys.size:
        raise ValueError("xs and ys must have equal length")
    if xs.size < 2:
        raise ValueError("power-law fit needs at least two points")
    if np.any(xs <= 0) or np.any(ys <= 0) or not (
        np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))
    ):
        raise ValueError("power-law fit requires positive finite values")
    lx = np.log(xs)
    if np.all(lx == lx[0]):
        raise ValueError("power-law fit needs at least two distinct x values")
    slope, intercept = np.polyfit(lx, np.log(ys), 1)
    return math.exp(float(intercept)), float(slope)
