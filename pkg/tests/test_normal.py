import math

import numpy as np
import pytest
from scipy.special import ndtri

from compreg import normal


class TestQuantile:
    def test_matches_scipy_reference(self):
        ps = np.concatenate([
            np.linspace(1e-6, 1 - 1e-6, 2001),
            [1e-12, 1e-9, 0.02425, 0.5, 0.975, 1 - 1e-9, 1 - 1e-12],
        ])
        ours = np.array([normal.quantile(p) for p in ps])
        ref = ndtri(ps)
        # spec requires 1e-9; Halley refinement reaches machine precision
        assert np.max(np.abs(ours - ref)) < 1e-12

    def test_median_is_zero(self):
        assert normal.quantile(0.5) == 0.0

    def test_symmetry(self):
        for p in (0.001, 0.025, 0.3, 0.4999):
            assert normal.quantile(p) == pytest.approx(-normal.quantile(1 - p), abs=1e-14)

    def test_round_trip_through_cdf(self):
        for p in (1e-8, 0.01, 0.2, 0.5, 0.77, 0.995, 1 - 1e-8):
            assert normal.cdf(normal.quantile(p)) == pytest.approx(p, rel=1e-12)

    def test_two_sided_95_quantile(self):
        assert normal.quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.5, 1.5, math.nan])
    def test_rejects_out_of_domain(self, p):
        with pytest.raises(ValueError):
            normal.quantile(p)


class TestCdf:
    def test_reference_points(self):
        assert normal.cdf(0.0) == 0.5
        assert normal.cdf(1.959963984540054) == pytest.approx(0.975, abs=1e-12)
        assert normal.cdf(-8.0) == pytest.approx(6.22096057427178e-16, rel=1e-9)
