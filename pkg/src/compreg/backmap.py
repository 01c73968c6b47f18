"""Back-map fitted coefficients to simplex proportions with uncertainty.

The point estimate inverts the log-ratio transform at the linear
predictors. Intervals come either from a first-order delta method (the
default: deterministic, matches the Wald style of the regression
intervals) or from a parametric bootstrap over the coefficient sampling
distribution. Components are treated as independent, matching the
factorized likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import normal
from .composition import Composition, LogRatioVector, alr_inverse
from .errors import BTooSmallError
from .regress import ModelFit, _check_level

# Delta intervals are clamped into (0, 1) at this margin; the result is
# flagged whenever clamping fired.
_CLAMP = 1e-15


@dataclass(frozen=True)
class ProportionEstimate:
    """Back-mapped proportions with one interval per part."""

    alphas: Composition
    covariate: tuple[float, ...]
    intervals: tuple[tuple[float, float], ...]
    level: float
    method: str                 # "delta" | "bootstrap"
    clamped: bool = False

    def __post_init__(self):
        if len(self.intervals) != self.alphas.n_parts:
            raise ValueError("need one interval per part")
        for a, (lo, hi) in zip(self.alphas.parts, self.intervals):
            if not lo <= a <= hi:
                raise ValueError(f"interval ({lo}, {hi}) does not contain {a}")


def _covariate_vector(model: ModelFit, z: Union[float, Sequence[float]]) -> np.ndarray:
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    if zv.ndim != 1 or zv.shape[0] != model.p:
        raise ValueError(f"covariate must have length p = {model.p}, got shape {zv.shape}")
    return zv


def _part_labels(model: ModelFit) -> Optional[tuple[str, ...]]:
    if model.labels is None:
        return None
    return model.labels + (model.ref_label if model.ref_label is not None else "ref",)


def linear_predictors(model: ModelFit, z: Union[float, Sequence[float]]) -> tuple[float, ...]:
    """Modeled mean of each log-ratio component at covariate ``z``."""
    zv = _covariate_vector(model, z)
    return tuple(comp.beta0 + float(np.dot(comp.beta1, zv)) for comp in model.components)


def estimate_proportions(model: ModelFit, z: Union[float, Sequence[float]]) -> Composition:
    """Proportions implied by the fit at covariate ``z``.

    Equals the inverse log-ratio transform of the linear predictors, so the
    parts are strictly positive and sum to one.
    """
    eta = linear_predictors(model, z)
    return alr_inverse(LogRatioVector(eta), labels=_part_labels(model))


def _finalize_intervals(alphas, lower, upper):
    """Clamp endpoints into (0, 1) and keep the point inside each interval.

    Collapsed intervals (all draws identical, or zero variance) are snapped
    exactly onto the plug-in point so degenerate fits report (a, a).
    """
    intervals = []
    clamped = False
    for a, lo, hi in zip(alphas, lower, upper):
        a, lo, hi = float(a), float(lo), float(hi)
        if lo == hi:
            lo = hi = a
        else:
            new_lo = max(lo, _CLAMP)
            new_hi = min(hi, 1.0 - _CLAMP)
            if new_lo != lo or new_hi != hi:
                clamped = True
            lo = min(new_lo, a)
            hi = max(new_hi, a)
        intervals.append((lo, hi))
    return tuple(intervals), clamped


def _alpha_jacobian(alphas: np.ndarray) -> np.ndarray:
    """d(alpha) / d(eta): G x g matrix at the point ``alphas``."""
    g = alphas.shape[0] - 1
    jac = np.empty((g + 1, g))
    for j in range(g):
        for k in range(g):
            jac[j, k] = alphas[j] * ((1.0 if j == k else 0.0) - alphas[k])
    jac[g, :] = -alphas[g] * alphas[:g]
    return jac


def proportion_ci_delta(model: ModelFit,
                        z: Union[float, Sequence[float]],
                        level: float) -> ProportionEstimate:
    """First-order intervals for the back-mapped proportions.

    Each linear predictor's variance is x' Cov_j x with x = (1, z); the
    proportion variance follows from the jacobian of the inverse transform.
    Endpoints are clamped into (0, 1) when the linearization overshoots.
    """
    level = _check_level(level)
    zv = _covariate_vector(model, z)
    x = np.concatenate([[1.0], zv])
    point = estimate_proportions(model, z)
    alphas = np.asarray(point.parts)
    var_eta = np.array([x @ np.asarray(comp.coef_cov) @ x for comp in model.components])
    var_eta = np.maximum(var_eta, 0.0)
    jac = _alpha_jacobian(alphas)
    se_alpha = np.sqrt((jac ** 2) @ var_eta)
    q = normal.quantile(0.5 + level / 2.0)
    intervals, clamped = _finalize_intervals(alphas, alphas - q * se_alpha,
                                             alphas + q * se_alpha)
    return ProportionEstimate(point, tuple(float(v) for v in zv),
                              intervals, level, "delta", clamped)


def proportion_ci_bootstrap(model: ModelFit,
                            z: Union[float, Sequence[float]],
                            level: float,
                            b: int = 10000,
                            seed: int = 0) -> ProportionEstimate:
    """Parametric-bootstrap intervals for the back-mapped proportions.

    Draws ``b`` coefficient vectors per component from the asymptotic
    Gaussian (independently across components), maps each through the
    inverse transform, and takes empirical quantiles per part. The draw
    stream is fully determined by ``seed``.
    """
    level = _check_level(level)
    if b < 100:
        raise BTooSmallError(f"bootstrap needs b >= 100, got {b}")
    zv = _covariate_vector(model, z)
    x = np.concatenate([[1.0], zv])
    point = estimate_proportions(model, z)
    g = model.g

    rng = np.random.default_rng(seed)
    eta_draws = np.empty((b, g))
    for j, comp in enumerate(model.components):
        cov = np.asarray(comp.coef_cov)
        center = float(np.dot(comp.coefficients, x))
        if not cov.any():
            eta_draws[:, j] = center
            continue
        chol = np.linalg.cholesky(cov)
        coef_draws = np.asarray(comp.coefficients) + rng.standard_normal((b, model.p + 1)) @ chol.T
        eta_draws[:, j] = coef_draws @ x

    # Inverse transform of every draw, max-shifted so exp never overflows.
    full = np.column_stack([eta_draws, np.zeros(b)])
    full -= full.max(axis=1, keepdims=True)
    w = np.exp(full)
    alpha_draws = w / w.sum(axis=1, keepdims=True)

    tail = (1.0 - level) / 2.0
    lower, upper = np.quantile(alpha_draws, [tail, 1.0 - tail], axis=0)
    intervals, clamped = _finalize_intervals(np.asarray(point.parts), lower, upper)
    return ProportionEstimate(point, tuple(float(v) for v in zv),
                              intervals, level, "bootstrap", clamped)
