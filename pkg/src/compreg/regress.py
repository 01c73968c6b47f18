"""Per-component maximum-likelihood regression for log-ratio responses.

The model is ``y[i, j] = b0[j] + z[i] . b1[j] + e[i, j]`` with independent
Gaussian errors per component, so each component is fit independently by
ordinary least squares; those are also the ML estimates. The residual
scale uses the ML divisor n by default (an unbiased variant is available
via ``unbiased_scale``). Standard errors come from the inverse Fisher
information at the estimates:

    se(coef)  = sigma_j * sqrt(diag((X'X)^-1))     with X = [1 | Z]
    se(sigma) = sigma_j / sqrt(2 n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import normal
from .errors import (
    DegenerateScaleError,
    InvalidLevelError,
    RankDeficientDesignError,
    TooFewObservationsError,
)


def _as_matrix(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d matrix, got ndim={arr.ndim}")
    return arr


@dataclass(frozen=True, eq=False)
class RegressionDataset:
    """n x g response matrix paired with an n x p covariate matrix.

    The intercept-augmented design must be full column rank; the extra
    degree-of-freedom requirement n >= p + 2 is enforced by :func:`fit`
    (likelihood evaluation does not need it).
    """

    responses: np.ndarray
    covariates: np.ndarray

    def __post_init__(self):
        y = _as_matrix(self.responses, "responses").copy()
        z = _as_matrix(self.covariates, "covariates").copy()
        if y.shape[0] != z.shape[0]:
            raise ValueError(
                f"responses have {y.shape[0]} rows but covariates have {z.shape[0]}")
        if not (np.isfinite(y).all() and np.isfinite(z).all()):
            raise ValueError("dataset contains non-finite entries")
        n, p = z.shape
        design = np.column_stack([np.ones(n), z])
        if np.linalg.matrix_rank(design) < p + 1:
            raise RankDeficientDesignError(
                "intercept-augmented covariate matrix is rank deficient")
        y.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "responses", y)
        object.__setattr__(self, "covariates", z)

    @property
    def n(self) -> int:
        return self.responses.shape[0]

    @property
    def g(self) -> int:
        return self.responses.shape[1]

    @property
    def p(self) -> int:
        return self.covariates.shape[1]


@dataclass(frozen=True)
class ComponentFit:
    """Estimates for one log-ratio component.

    ``coef_cov`` is the (p+1) x (p+1) covariance of (b0, b1...) implied by
    the Fisher information; it is what the back-mapping intervals consume.
    """

    beta0: float
    beta1: tuple[float, ...]
    sigma: float
    se_beta0: float
    se_beta1: tuple[float, ...]
    se_sigma: float
    rss: float
    coef_cov: tuple[tuple[float, ...], ...]

    @property
    def p(self) -> int:
        return len(self.beta1)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return (self.beta0,) + self.beta1


@dataclass(frozen=True)
class ModelFit:
    """Per-component fits plus the shared sample size and part names."""

    components: tuple[ComponentFit, ...]
    n: int
    labels: Optional[tuple[str, ...]] = None
    ref_label: Optional[str] = None

    def __post_init__(self):
        if not self.components:
            raise ValueError("a fit needs at least one component")
        if self.labels is not None and len(self.labels) != len(self.components):
            raise ValueError("labels length must match component count")

    @property
    def g(self) -> int:
        return len(self.components)

    @property
    def p(self) -> int:
        return self.components[0].p


def fit(data: RegressionDataset,
        labels: Optional[Sequence[str]] = None,
        ref_label: Optional[str] = None,
        unbiased_scale: bool = False) -> ModelFit:
    """Maximum-likelihood fit of every response component.

    ``unbiased_scale=True`` switches the scale divisor from n to n - p - 1;
    coefficient estimates are unaffected.
    """
    y = data.responses
    n, p = data.n, data.p
    if n < p + 2:
        raise TooFewObservationsError(f"need n >= p + 2 = {p + 2}, got n = {n}")
    x = np.column_stack([np.ones(n), data.covariates])
    xtx = x.T @ x
    beta = np.linalg.solve(xtx, x.T @ y)          # (p+1, g)
    xtx_inv = np.linalg.inv(xtx)
    resid = y - x @ beta
    rss = np.einsum("ij,ij->j", resid, resid)
    divisor = n - p - 1 if unbiased_scale else n
    sigma = np.sqrt(rss / divisor)
    se_diag = np.sqrt(np.diag(xtx_inv))

    components = []
    for j in range(data.g):
        se_coef = sigma[j] * se_diag
        cov = (sigma[j] ** 2) * xtx_inv
        components.append(ComponentFit(
            beta0=float(beta[0, j]),
            beta1=tuple(float(b) for b in beta[1:, j]),
            sigma=float(sigma[j]),
            se_beta0=float(se_coef[0]),
            se_beta1=tuple(float(s) for s in se_coef[1:]),
            se_sigma=float(sigma[j] / math.sqrt(2 * n)),
            rss=float(rss[j]),
            coef_cov=tuple(tuple(float(v) for v in row) for row in cov),
        ))
    return ModelFit(tuple(components), n=n,
                    labels=tuple(labels) if labels is not None else None,
                    ref_label=ref_label)


def fit_from_binary_summary(beta0: Sequence[float],
                            beta1: Sequence[float],
                            sigma: Sequence[float],
                            se_beta0: Sequence[float],
                            se_beta1: Sequence[float],
                            n: int,
                            labels: Optional[Sequence[str]] = None,
                            ref_label: Optional[str] = None) -> ModelFit:
    """Reconstruct a fit for a single 0/1 covariate from reported summaries.

    For the design [1 | z] with binary z, (X'X)^-1 has off-diagonal equal to
    minus its first diagonal entry, so Cov(b0, b1) = -Var(b0). That identity
    recovers a full coefficient covariance from the two standard errors,
    which is enough for back-mapped intervals. Requires se_beta1 > se_beta0
    per component (true for any such design).
    """
    cols = [list(map(float, c)) for c in (beta0, beta1, sigma, se_beta0, se_beta1)]
    if len({len(c) for c in cols}) != 1:
        raise ValueError("summary columns must all have the same length")
    components = []
    for b0, b1, s, se0, se1 in zip(*cols):
        if not se1 > se0 >= 0.0:
            raise ValueError(
                f"binary design requires se_beta1 > se_beta0 >= 0, got {se1} <= {se0}")
        v0 = se0 * se0
        components.append(ComponentFit(
            beta0=b0,
            beta1=(b1,),
            sigma=s,
            se_beta0=se0,
            se_beta1=(se1,),
            se_sigma=s / math.sqrt(2 * n),
            rss=n * s * s,
            coef_cov=((v0, -v0), (-v0, se1 * se1)),
        ))
    return ModelFit(tuple(components), n=int(n),
                    labels=tuple(labels) if labels is not None else None,
                    ref_label=ref_label)


@dataclass(frozen=True)
class ParameterInterval:
    """One Wald interval: estimate +/- quantile * se."""

    kind: str                    # "beta0" | "beta1" | "sigma"
    component: int               # 1-based component index
    cov_index: Optional[int]     # 1-based covariate index, beta1 rows only
    estimate: float
    se: float
    lower: float
    upper: float

    @property
    def name(self) -> str:
        if self.kind == "beta1" and self.cov_index is not None and self.cov_index > 1:
            return f"beta1[{self.component},{self.cov_index}]"
        return f"{self.kind}[{self.component}]"

    def excludes_zero(self) -> bool:
        return self.lower > 0.0 or self.upper < 0.0


def _check_level(level: float) -> float:
    level = float(level)
    if not 0.0 < level < 1.0:
        raise InvalidLevelError(f"confidence level must be in (0, 1), got {level}")
    return level


def wald_ci(model: ModelFit, level: float) -> tuple[ParameterInterval, ...]:
    """Symmetric normal-quantile intervals for every parameter.

    Rows are ordered kind-major: all intercepts, then all slopes (component
    outer, covariate inner), then all scales.
    """
    level = _check_level(level)
    q = normal.quantile(0.5 + level / 2.0)
    rows = []
    for j, comp in enumerate(model.components, start=1):
        rows.append(ParameterInterval(
            "beta0", j, None, comp.beta0, comp.se_beta0,
            comp.beta0 - q * comp.se_beta0, comp.beta0 + q * comp.se_beta0))
    for j, comp in enumerate(model.components, start=1):
        for k, (b, se) in enumerate(zip(comp.beta1, comp.se_beta1), start=1):
            rows.append(ParameterInterval(
                "beta1", j, k, b, se, b - q * se, b + q * se))
    for j, comp in enumerate(model.components, start=1):
        rows.append(ParameterInterval(
            "sigma", j, None, comp.sigma, comp.se_sigma,
            comp.sigma - q * comp.se_sigma, comp.sigma + q * comp.se_sigma))
    return tuple(rows)


def log_likelihood(model: ModelFit, data: RegressionDataset) -> float:
    """Gaussian log-likelihood of ``model`` evaluated on ``data``."""
    if model.g != data.g or model.p != data.p:
        raise ValueError(
            f"fit dimensions (g={model.g}, p={model.p}) do not match "
            f"data (g={data.g}, p={data.p})")
    for comp in model.components:
        if comp.sigma == 0.0:
            raise DegenerateScaleError("log-likelihood undefined at sigma = 0")
    x = np.column_stack([np.ones(data.n), data.covariates])
    total = 0.0
    for j, comp in enumerate(model.components):
        mu = x @ np.asarray(comp.coefficients)
        resid = data.responses[:, j] - mu
        var = comp.sigma ** 2
        total += (-0.5 * data.n * math.log(2.0 * math.pi * var)
                  - float(resid @ resid) / (2.0 * var))
    return total


@dataclass(frozen=True)
class SignificanceEntry:
    """Coefficient row of the significance report; slopes carry a flag."""

    kind: str
    component: int
    cov_index: Optional[int]
    estimate: float
    lower: float
    upper: float
    significant: Optional[bool]


def significance_report(model: ModelFit, level: float) -> tuple[SignificanceEntry, ...]:
    """Flag each slope whose Wald interval excludes zero.

    Intercepts are included for context but never flagged.
    """
    entries = []
    for row in wald_ci(model, level):
        if row.kind == "sigma":
            continue
        flag = row.excludes_zero() if row.kind == "beta1" else None
        entries.append(SignificanceEntry(
            row.kind, row.component, row.cov_index,
            row.estimate, row.lower, row.upper, flag))
    return tuple(entries)
