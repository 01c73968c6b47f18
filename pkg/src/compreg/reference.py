"""Published reference results for the bundled dataset, with comparison
helpers backing the ``reproduce`` command.

Three reference tables are bundled: the regression fit (table 2), the
back-mapped proportion estimates (table 3), and the simulation study
summary (table 1). Tables 2 and 3 carry pass/fail tolerances; table 1 is
display-only because its generating process is not reproducible from the
published description (see the reproduce command output).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .backmap import ProportionEstimate
from .ingest import COMPONENT_LABELS, REF_LABEL
from .regress import ModelFit, fit_from_binary_summary, wald_ci

#: Absolute tolerance on reproduced point estimates (regression table).
TOL_ESTIMATE = 0.01
#: Absolute tolerance on reproduced interval endpoints.
TOL_CI_ENDPOINT = 0.02
#: Absolute tolerance on reproduced proportion estimates.
TOL_PROPORTION = 0.001

PARAMETER_NAMES = (
    "beta0[1]", "beta0[2]", "beta0[3]",
    "beta1[1]", "beta1[2]", "beta1[3]",
    "sigma[1]", "sigma[2]", "sigma[3]",
)

#: Reference regression table: estimate, standard error, 95% CI.
FIT_REFERENCE = {
    "beta0[1]": (0.468, 0.038, (0.394, 0.542)),
    "beta0[2]": (-1.168, 0.066, (-1.296, -1.039)),
    "beta0[3]": (-2.072, 0.087, (-2.244, -1.901)),
    "beta1[1]": (0.196, 0.046, (0.105, 0.286)),
    "beta1[2]": (0.141, 0.080, (-0.016, 0.298)),
    "beta1[3]": (0.262, 0.106, (0.053, 0.470)),
    "sigma[1]": (0.245, 0.015, (0.215, 0.275)),
    "sigma[2]": (0.426, 0.027, (0.374, 0.478)),
    "sigma[3]": (0.566, 0.035, (0.496, 0.635)),
}

PART_LABELS = COMPONENT_LABELS + (REF_LABEL,)

#: Reference proportion table: per covariate value, per part:
#: point estimate and 95% interval.
PROPORTION_REFERENCE = {
    0.0: {
        "estimates": (0.526, 0.102, 0.041, 0.330),
        "intervals": ((0.518, 0.533), (0.096, 0.110), (0.037, 0.046), (0.310, 0.349)),
    },
    1.0: {
        "estimates": (0.561, 0.103, 0.047, 0.289),
        "intervals": ((0.544, 0.571), (0.089, 0.119), (0.037, 0.060), (0.250, 0.330)),
    },
}

#: Truth used by the reference simulation study.
SIMULATION_TRUTH = {
    "beta0": (0.5, -0.62, -1.68),
    "beta1": (-0.05, -0.05, -0.05),
    "sigma": (0.31, 0.41, 0.75),
}
SIMULATION_SAMPLE_SIZES = (70, 100, 150)
SIMULATION_REPLICATES = 1000

#: Reference simulation table: per sample size, per parameter:
#: mean, bias, MSE, coverage probability.
SIMULATION_REFERENCE = {
    70: {
        "beta0[1]": (0.55937, 0.05937, 0.00484, 0.999),
        "beta0[2]": (-0.66107, -0.04107, 0.00482, 0.996),
        "beta0[3]": (-1.71249, -0.03249, 0.01519, 0.845),
        "beta1[1]": (-0.00381, 0.04619, 0.00482, 0.997),
        "beta1[2]": (-0.00499, 0.04501, 0.00838, 0.953),
        "beta1[3]": (-0.00600, 0.04400, 0.02937, 0.697),
        "sigma[1]": (0.20948, -0.10052, 0.01166, 0.992),
        "sigma[2]": (0.32658, -0.08342, 0.00786, 0.999),
        "sigma[3]": (0.70435, -0.04565, 0.00475, 0.987),
    },
    100: {
        "beta0[1]": (0.55960, 0.05960, 0.00439, 0.988),
        "beta0[2]": (-0.66270, -0.04270, 0.00385, 0.990),
        "beta0[3]": (-1.70867, -0.02867, 0.01055, 0.847),
        "beta1[1]": (-0.00211, 0.04789, 0.00422, 0.989),
        "beta1[2]": (-0.00185, 0.04815, 0.00685, 0.929),
        "beta1[3]": (-0.00854, 0.04146, 0.02198, 0.660),
        "sigma[1]": (0.21027, -0.09973, 0.01191, 0.988),
        "sigma[2]": (0.32972, -0.08027, 0.00677, 0.999),
        "sigma[3]": (0.70926, -0.04074, 0.00365, 0.992),
    },
    150: {
        "beta0[1]": (0.55753, 0.05753, 0.00392, 0.984),
        "beta0[2]": (-0.66294, -0.04294, 0.00324, 0.985),
        "beta0[3]": (-1.71676, -0.03676, 0.00785, 0.828),
        "beta1[1]": (0.00118, 0.05118, 0.00394, 0.971),
        "beta1[2]": (-0.00009, 0.04991, 0.00563, 0.895),
        "beta1[3]": (0.00359, 0.05359, 0.01727, 0.624),
        "sigma[1]": (0.21458, -0.09542, 0.00924, 0.967),
        "sigma[2]": (0.33079, -0.07920, 0.00651, 0.992),
        "sigma[3]": (0.71310, -0.03690, 0.00275, 0.973),
    },
}


def reference_fit() -> ModelFit:
    """Fit object carrying the reference regression table's values.

    Built through the binary-design summary reconstruction, so back-mapped
    intervals can be computed from the published estimates and standard
    errors alone.
    """
    names = PARAMETER_NAMES
    return fit_from_binary_summary(
        beta0=[FIT_REFERENCE[n][0] for n in names[0:3]],
        beta1=[FIT_REFERENCE[n][0] for n in names[3:6]],
        sigma=[FIT_REFERENCE[n][0] for n in names[6:9]],
        se_beta0=[FIT_REFERENCE[n][1] for n in names[0:3]],
        se_beta1=[FIT_REFERENCE[n][1] for n in names[3:6]],
        n=128,
        labels=COMPONENT_LABELS,
        ref_label=REF_LABEL,
    )


@dataclass(frozen=True)
class ComparisonRow:
    """One reproduced quantity next to its reference value."""

    label: str
    expected: float
    actual: float
    tolerance: Optional[float]   # None marks a display-only row

    @property
    def diff(self) -> float:
        return abs(self.actual - self.expected)

    @property
    def status(self) -> str:
        if self.tolerance is None:
            return "REFERENCE-ONLY"
        return "PASS" if self.diff <= self.tolerance else "FAIL"


def any_failure(rows: Sequence[ComparisonRow]) -> bool:
    return any(row.status == "FAIL" for row in rows)


def compare_fit_table(model: ModelFit) -> list[ComparisonRow]:
    """Reference regression table vs a fit of the bundled dataset.

    Estimates are gated at TOL_ESTIMATE. Only the scale intervals are
    gated at TOL_CI_ENDPOINT: the reference coefficient standard errors
    match the Fisher-information formula only under a 42/86 covariate
    split, not the bundled column's 65/63, so coefficient SE and CI rows
    are display-only.
    """
    if model.g != 3 or model.p != 1:
        raise ValueError("fit table comparison expects g = 3 components, p = 1")
    rows = []
    intervals = {row.name: row for row in wald_ci(model, 0.95)}
    for name in PARAMETER_NAMES:
        ref_est, ref_se, (ref_lo, ref_hi) = FIT_REFERENCE[name]
        ours = intervals[name]
        gated = name.startswith("sigma")
        rows.append(ComparisonRow(f"{name} estimate", ref_est, ours.estimate, TOL_ESTIMATE))
        rows.append(ComparisonRow(f"{name} std.error", ref_se, ours.se, None))
        ci_tol = TOL_CI_ENDPOINT if gated else None
        rows.append(ComparisonRow(f"{name} ci.lower", ref_lo, ours.lower, ci_tol))
        rows.append(ComparisonRow(f"{name} ci.upper", ref_hi, ours.upper, ci_tol))
    return rows


def compare_proportion_table(delta_by_z: dict[float, ProportionEstimate],
                             boot_by_z: dict[float, ProportionEstimate]) -> list[ComparisonRow]:
    """Reference proportion table vs delta and bootstrap back-mapping."""
    rows = []
    for z in (0.0, 1.0):
        ref = PROPORTION_REFERENCE[z]
        delta = delta_by_z[z]
        boot = boot_by_z[z]
        for k, part in enumerate(PART_LABELS):
            rows.append(ComparisonRow(
                f"z={z:g} {part} estimate",
                ref["estimates"][k], delta.alphas.parts[k], TOL_PROPORTION))
        for k, part in enumerate(PART_LABELS):
            lo, hi = ref["intervals"][k]
            rows.append(ComparisonRow(
                f"z={z:g} {part} delta.lower", lo, delta.intervals[k][0], TOL_CI_ENDPOINT))
            rows.append(ComparisonRow(
                f"z={z:g} {part} delta.upper", hi, delta.intervals[k][1], TOL_CI_ENDPOINT))
            rows.append(ComparisonRow(
                f"z={z:g} {part} boot.lower", lo, boot.intervals[k][0], TOL_CI_ENDPOINT))
            rows.append(ComparisonRow(
                f"z={z:g} {part} boot.upper", hi, boot.intervals[k][1], TOL_CI_ENDPOINT))
    return rows


def compare_simulation_table(reports) -> list[ComparisonRow]:
    """Reference simulation table vs a fresh study run; display-only rows."""
    rows = []
    for report in reports:
        ref_block = SIMULATION_REFERENCE.get(report.config.n)
        if ref_block is None:
            raise ValueError(f"no reference block for n = {report.config.n}")
        for summary in report.summaries:
            ref_mean, ref_bias, ref_mse, ref_cp = ref_block[summary.name]
            prefix = f"n={report.config.n} {summary.name}"
            rows.append(ComparisonRow(f"{prefix} mean", ref_mean, summary.mean, None))
            rows.append(ComparisonRow(f"{prefix} bias", ref_bias, summary.bias, None))
            rows.append(ComparisonRow(f"{prefix} mse", ref_mse, summary.mse, None))
            rows.append(ComparisonRow(f"{prefix} cp", ref_cp, summary.coverage, None))
    return rows
