"""Seeded Monte Carlo engine for the regression estimator study.

Datasets are generated from the model itself: a Bernoulli covariate and
Gaussian errors added to the linear predictor of each log-ratio component
(dgp "model_normal"). Every replicate draws from its own Philox streams
keyed by (seed, replicate_index, stream), so results are bit-identical
regardless of execution order or worker count.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CompregError, ImprobableDegeneracyError, InvalidLevelError, StudySweepError
from .regress import RegressionDataset, fit, wald_ci

_MASK64 = (1 << 64) - 1
_STREAM_COVARIATE = 0
_STREAM_NOISE = 1
_MAX_REDRAWS = 100


@dataclass(frozen=True)
class SimConfig:
    """One study cell: sample size, replicate count, truth, and seed."""

    n: int
    replicates: int
    true_beta0: tuple[float, ...]
    true_beta1: tuple[float, ...]
    true_sigma: tuple[float, ...]
    covariate_prob: float = 0.5
    ci_level: float = 0.95
    seed: int = 0
    dgp: str = "model_normal"

    def __post_init__(self):
        for name in ("true_beta0", "true_beta1", "true_sigma"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if self.dgp != "model_normal":
            raise ValueError(f"unknown dgp {self.dgp!r}")
        if self.n < 4:
            raise ValueError(f"need n >= 4, got {self.n}")
        if self.replicates < 1:
            raise ValueError(f"need replicates >= 1, got {self.replicates}")
        g = len(self.true_beta0)
        if g < 1 or len(self.true_beta1) != g or len(self.true_sigma) != g:
            raise ValueError("true_beta0, true_beta1 and true_sigma must have equal length >= 1")
        if any(s <= 0.0 for s in self.true_sigma):
            raise ValueError("true_sigma entries must be > 0")
        if not 0.0 < self.covariate_prob < 1.0:
            raise ValueError(f"covariate_prob must be in (0, 1), got {self.covariate_prob}")
        if not 0.0 < self.ci_level < 1.0:
            raise InvalidLevelError(f"ci_level must be in (0, 1), got {self.ci_level}")

    @property
    def g(self) -> int:
        return len(self.true_beta0)

    def truth_vector(self) -> tuple[float, ...]:
        """Truth in report order: all beta0, all beta1, all sigma."""
        return self.true_beta0 + self.true_beta1 + self.true_sigma


@dataclass(frozen=True)
class ParameterSummary:
    kind: str               # "beta0" | "beta1" | "sigma"
    component: int          # 1-based
    truth: float
    mean: float
    bias: float
    mse: float
    coverage: float

    @property
    def name(self) -> str:
        return f"{self.kind}[{self.component}]"


@dataclass(frozen=True)
class SimReport:
    """Estimator quality per parameter, plus the config that produced it."""

    config: SimConfig
    summaries: tuple[ParameterSummary, ...]
    duration_seconds: float

    def summary(self, name: str) -> ParameterSummary:
        for s in self.summaries:
            if s.name == name:
                return s
        raise KeyError(name)


def _stream(seed: int, replicate_index: int, stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed & _MASK64,
                                spawn_key=(int(replicate_index), int(stream)))
    return np.random.Generator(np.random.Philox(ss))


def generate_dataset(config: SimConfig, replicate_index: int) -> RegressionDataset:
    """Draw one replicate dataset, bit-for-bit reproducible.

    Covariate draws with fewer than two observations at either level are
    redrawn (same stream) so every replicate yields a full-rank design;
    100 consecutive failures raise ImprobableDegeneracyError.
    """
    cov_rng = _stream(config.seed, replicate_index, _STREAM_COVARIATE)
    n = config.n
    for _ in range(_MAX_REDRAWS):
        z = (cov_rng.random(n) < config.covariate_prob).astype(float)
        ones = int(z.sum())
        if 2 <= ones <= n - 2:
            break
    else:
        raise ImprobableDegeneracyError(
            f"covariate draw degenerate {_MAX_REDRAWS} times in a row "
            f"(n={n}, p={config.covariate_prob})")
    noise = _stream(config.seed, replicate_index, _STREAM_NOISE).standard_normal((n, config.g))
    beta0 = np.asarray(config.true_beta0)
    beta1 = np.asarray(config.true_beta1)
    sigma = np.asarray(config.true_sigma)
    responses = beta0 + z[:, None] * beta1 + noise * sigma
    return RegressionDataset(responses, z[:, None])


def _replicate_row(config: SimConfig, r: int, truth: np.ndarray):
    dataset = generate_dataset(config, r)
    model = fit(dataset)
    rows = wald_ci(model, config.ci_level)
    est = np.array([row.estimate for row in rows])
    covered = np.array([row.lower <= t <= row.upper for row, t in zip(rows, truth)])
    return est, covered


def run_study(config: SimConfig, workers: int = 1) -> SimReport:
    """Generate, refit and summarize every replicate of one study cell."""
    start = time.perf_counter()
    truth = np.asarray(config.truth_vector())
    n_params = truth.shape[0]
    reps = config.replicates
    estimates = np.empty((reps, n_params))
    covered = np.empty((reps, n_params), dtype=bool)

    if workers <= 1:
        for r in range(reps):
            estimates[r], covered[r] = _replicate_row(config, r, truth)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_replicate_row, [config] * reps, range(reps), [truth] * reps)
            for r, (est, cov) in enumerate(results):
                estimates[r] = est
                covered[r] = cov

    mean = estimates.mean(axis=0)
    bias = mean - truth
    mse = ((estimates - truth) ** 2).mean(axis=0)
    coverage = covered.mean(axis=0)

    kinds = (["beta0"] * config.g) + (["beta1"] * config.g) + (["sigma"] * config.g)
    comps = list(range(1, config.g + 1)) * 3
    summaries = tuple(
        ParameterSummary(kind, comp, float(t), float(m), float(bi), float(ms), float(cp))
        for kind, comp, t, m, bi, ms, cp
        in zip(kinds, comps, truth, mean, bias, mse, coverage))
    return SimReport(config, summaries, time.perf_counter() - start)


def study_sweep(configs: Sequence[SimConfig], workers: int = 1) -> tuple[SimReport, ...]:
    """Run several study cells; failures carry the index of their config."""
    if not configs:
        raise ValueError("study_sweep needs at least one config")
    reports = []
    for i, config in enumerate(configs):
        try:
            reports.append(run_study(config, workers=workers))
        except CompregError as exc:
            raise StudySweepError(i, str(exc)) from exc
    return tuple(reports)


def comparison_table(reports: Sequence[SimReport]) -> list[dict]:
    """Per-parameter rows comparing bias/MSE/coverage across study cells."""
    if not reports:
        return []
    rows = []
    for idx in range(len(reports[0].summaries)):
        name = reports[0].summaries[idx].name
        cells = []
        for report in reports:
            s = report.summaries[idx]
            if s.name != name:
                raise ValueError("reports have mismatched parameter layouts")
            cells.append({"n": report.config.n, "mean": s.mean, "bias": s.bias,
                          "mse": s.mse, "coverage": s.coverage})
        rows.append({"parameter": name, "truth": reports[0].summaries[idx].truth,
                     "cells": cells})
    return rows
