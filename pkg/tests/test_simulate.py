import dataclasses
import json
import math

import numpy as np
import pytest

from compreg.errors import ImprobableDegeneracyError, InvalidLevelError, StudySweepError
from compreg.regress import fit, wald_ci
from compreg.simulate import (
    SimConfig,
    comparison_table,
    generate_dataset,
    run_study,
    study_sweep,
)

TRUTH = dict(true_beta0=(0.5, -0.62, -1.68), true_beta1=(-0.05, -0.05, -0.05),
             true_sigma=(0.31, 0.41, 0.75))


def small_config(**kw):
    base = dict(n=40, replicates=20, seed=123, **TRUTH)
    base.update(kw)
    return SimConfig(**base)


def report_payload(report):
    """Stable serialization of the statistical content (duration excluded)."""
    return json.dumps([dataclasses.asdict(s) for s in report.summaries])


class TestConfigValidation:
    def test_accepts_defaults(self):
        cfg = small_config()
        assert cfg.g == 3
        assert cfg.truth_vector() == TRUTH["true_beta0"] + TRUTH["true_beta1"] + TRUTH["true_sigma"]

    @pytest.mark.parametrize("kw", [
        dict(n=3),
        dict(replicates=0),
        dict(true_sigma=(0.31, 0.41, 0.0)),
        dict(true_beta1=(-0.05,)),
        dict(covariate_prob=0.0),
        dict(covariate_prob=1.0),
        dict(dgp="dirichlet"),
    ])
    def test_rejects_bad_config(self, kw):
        with pytest.raises(ValueError):
            small_config(**kw)

    def test_rejects_bad_level(self):
        with pytest.raises(InvalidLevelError):
            small_config(ci_level=1.0)


class TestGenerateDataset:
    def test_bit_identical_for_same_key(self):
        a = generate_dataset(small_config(), 5)
        b = generate_dataset(small_config(), 5)
        assert np.array_equal(a.responses, b.responses)
        assert np.array_equal(a.covariates, b.covariates)

    def test_replicates_differ(self):
        a = generate_dataset(small_config(), 0)
        b = generate_dataset(small_config(), 1)
        assert not np.array_equal(a.responses, b.responses)

    def test_seeds_differ(self):
        a = generate_dataset(small_config(seed=1), 0)
        b = generate_dataset(small_config(seed=2), 0)
        assert not np.array_equal(a.responses, b.responses)

    def test_shapes_and_binary_covariate(self):
        ds = generate_dataset(small_config(), 0)
        assert ds.responses.shape == (40, 3)
        assert ds.covariates.shape == (40, 1)
        assert set(np.unique(ds.covariates)) <= {0.0, 1.0}

    def test_law_of_large_numbers(self):
        cfg = small_config(n=100_000)
        ds = generate_dataset(cfg, 0)
        z0 = ds.covariates[:, 0] == 0.0
        mean_y1 = ds.responses[z0, 0].mean()
        bound = 3 * TRUTH["true_sigma"][0] / math.sqrt(cfg.n / 2)
        assert abs(mean_y1 - 0.5) < bound

    def test_near_zero_noise_recovers_truth(self):
        cfg = small_config(true_sigma=(1e-12, 1e-12, 1e-12))
        model = fit(generate_dataset(cfg, 0))
        for j, comp in enumerate(model.components):
            assert comp.beta0 == pytest.approx(TRUTH["true_beta0"][j], abs=1e-9)
            assert comp.beta1[0] == pytest.approx(TRUTH["true_beta1"][j], abs=1e-9)

    def test_covariate_guard_regenerates(self):
        # p small enough that single draws are usually degenerate but not
        # so small that 100 attempts all fail
        cfg = small_config(n=10, covariate_prob=0.05)
        for r in range(30):
            ds = generate_dataset(cfg, r)
            ones = int(ds.covariates.sum())
            assert 2 <= ones <= 8

    def test_improbable_degeneracy(self):
        cfg = small_config(n=4, covariate_prob=1e-9)
        with pytest.raises(ImprobableDegeneracyError):
            generate_dataset(cfg, 0)


class TestRunStudy:
    def test_single_replicate_matches_hand_composition(self):
        cfg = small_config(replicates=1)
        report = run_study(cfg)
        model = fit(generate_dataset(cfg, 0))
        rows = wald_ci(model, cfg.ci_level)
        truth = cfg.truth_vector()
        for summary, row, t in zip(report.summaries, rows, truth):
            assert summary.mean == row.estimate
            assert summary.bias == row.estimate - t
            assert summary.mse == (row.estimate - t) ** 2
            assert summary.coverage in (0.0, 1.0)
            assert summary.coverage == float(row.lower <= t <= row.upper)

    def test_deterministic_across_runs(self):
        a = run_study(small_config())
        b = run_study(small_config())
        assert report_payload(a) == report_payload(b)

    def test_deterministic_across_worker_counts(self):
        serial = run_study(small_config(), workers=1)
        threaded = run_study(small_config(), workers=4)
        assert report_payload(serial) == report_payload(threaded)

    def test_mse_identity(self):
        cfg = small_config(replicates=50)
        report = run_study(cfg)
        # recompute raw estimates independently
        estimates = []
        for r in range(cfg.replicates):
            rows = wald_ci(fit(generate_dataset(cfg, r)), cfg.ci_level)
            estimates.append([row.estimate for row in rows])
        est = np.array(estimates)
        truth = np.array(cfg.truth_vector())
        variance = est.var(axis=0)
        for k, summary in enumerate(report.summaries):
            assert summary.mse >= summary.bias ** 2 - 1e-12
            assert summary.mse == pytest.approx(summary.bias ** 2 + variance[k],
                                                abs=1e-10)

    def test_summary_layout(self):
        report = run_study(small_config(replicates=2))
        names = [s.name for s in report.summaries]
        assert names == ["beta0[1]", "beta0[2]", "beta0[3]",
                         "beta1[1]", "beta1[2]", "beta1[3]",
                         "sigma[1]", "sigma[2]", "sigma[3]"]
        assert report.duration_seconds >= 0.0


class TestStudySweep:
    def test_single_config_equals_run_study(self):
        cfg = small_config()
        sweep = study_sweep([cfg])
        solo = run_study(cfg)
        assert len(sweep) == 1
        assert report_payload(sweep[0]) == report_payload(solo)

    def test_identical_configs_identical_reports(self):
        cfg = small_config()
        a, b = study_sweep([cfg, cfg])
        assert report_payload(a) == report_payload(b)

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError):
            study_sweep([])

    def test_error_carries_config_index(self):
        good = small_config()
        bad = small_config(n=4, covariate_prob=1e-9)
        with pytest.raises(StudySweepError) as exc_info:
            study_sweep([good, bad])
        assert exc_info.value.config_index == 1

    def test_comparison_table_layout(self):
        reports = study_sweep([small_config(n=40), small_config(n=60)])
        rows = comparison_table(reports)
        assert [r["parameter"] for r in rows][:3] == ["beta0[1]", "beta0[2]", "beta0[3]"]
        assert [c["n"] for c in rows[0]["cells"]] == [40, 60]
