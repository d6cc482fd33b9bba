import math

import numpy as np
import pytest

import touropt as tp
from touropt.errors import ConfigError, EvaluationError
from touropt.gsa import (
    ParameterSpace,
    analyze_model,
    full_space,
    morris_indices,
    morris_sample,
    saltelli_sample,
    sobol_indices,
    uncertainty_space,
)


def _unit_space(k):
    return ParameterSpace.from_dict({f"x{i+1}": (0.0, 1.0) for i in range(k)})


class TestParameterSpace:
    def test_duplicate_and_degenerate_rejected(self):
        with pytest.raises(ConfigError):
            ParameterSpace(("a", "a"), np.array([0.0, 0.0]),
                           np.array([1.0, 1.0])).validate()
        with pytest.raises(ConfigError):
            ParameterSpace.from_dict({"a": (1.0, 1.0)})

    def test_unit_mapping_roundtrip(self):
        space = ParameterSpace.from_dict({"a": (-2.0, 4.0), "b": (10.0, 20.0)})
        x = np.array([1.0, 15.0])
        assert np.allclose(space.from_unit(space.to_unit(x)), x)


class TestMorrisSample:
    def test_trajectory_has_k_plus_one_points(self):
        samples = morris_sample(_unit_space(2), r=5, levels=4, seed=0)
        assert samples.shape == (5, 3, 2)

    def test_one_at_a_time_steps(self):
        space = _unit_space(4)
        samples = morris_sample(space, r=10, levels=4, seed=1)
        delta = 4 / (2 * 3)
        for t in range(10):
            for s in range(4):
                du = samples[t, s + 1] - samples[t, s]
                moved = np.abs(du) > 1e-12
                assert moved.sum() == 1
                assert abs(abs(du[moved][0]) - delta) < 1e-12

    def test_levels_four_delta_two_thirds(self):
        samples = morris_sample(_unit_space(1), r=3, levels=4, seed=2)
        steps = np.abs(np.diff(samples[:, :, 0], axis=1))
        assert np.allclose(steps, 2.0 / 3.0)

    def test_points_stay_in_bounds(self):
        space = ParameterSpace.from_dict({"a": (-5.0, 5.0), "b": (100.0, 300.0)})
        samples = morris_sample(space, r=30, levels=6, seed=3)
        assert np.all(samples[:, :, 0] >= -5.0) and np.all(samples[:, :, 0] <= 5.0)
        assert np.all(samples[:, :, 1] >= 100.0) and np.all(samples[:, :, 1] <= 300.0)

    def test_invalid_grid_rejected(self):
        with pytest.raises(ConfigError):
            morris_sample(_unit_space(2), r=5, levels=3)
        with pytest.raises(ConfigError):
            morris_sample(_unit_space(2), r=0, levels=4)


class TestMorrisIndices:
    def test_linear_function_exact_slopes(self):
        space = _unit_space(2)
        samples = morris_sample(space, r=20, levels=4, seed=4)
        outputs = 2.0 * samples[:, :, 0] + samples[:, :, 1]
        res = morris_indices(space, samples, outputs)
        assert res.mu_star == pytest.approx([2.0, 1.0])
        assert np.all(res.sigma <= 1e-10)

    def test_constant_function(self):
        space = _unit_space(3)
        samples = morris_sample(space, r=8, levels=4, seed=5)
        res = morris_indices(space, samples, np.zeros(samples.shape[:2]))
        assert np.all(res.mu_star == 0.0) and np.all(res.sigma == 0.0)

    def test_interaction_shows_in_sigma(self):
        space = _unit_space(2)
        samples = morris_sample(space, r=30, levels=4, seed=6)
        outputs = samples[:, :, 0] * samples[:, :, 1]
        res = morris_indices(space, samples, outputs)
        assert res.sigma[0] > 0.0

    def test_slopes_respect_bound_scaling(self):
        # in unit space the elementary effect picks up the parameter range
        space = ParameterSpace.from_dict({"a": (0.0, 10.0)})
        samples = morris_sample(space, r=5, levels=4, seed=7)
        res = morris_indices(space, samples, 3.0 * samples[:, :, 0])
        assert res.mu_star == pytest.approx([30.0])


class TestSaltelli:
    def test_point_count(self):
        design = saltelli_sample(_unit_space(7), n=512, seed=0)
        assert design.matrix().shape == (512 * 16, 7)

    def test_a_b_disjoint(self):
        design = saltelli_sample(_unit_space(3), n=100, seed=1)
        assert not np.allclose(design.A, design.B)

    def test_ab_differs_only_in_one_column(self):
        design = saltelli_sample(_unit_space(4), n=50, seed=2)
        for i in range(4):
            same = design.AB[i] == design.A
            assert np.all(same[:, [j for j in range(4) if j != i]])
            assert np.allclose(design.AB[i][:, i], design.B[:, i])


class TestSobolIndices:
    def test_additive_analytic(self):
        # f = 2a + b on the unit square: variances 4/12 and 1/12
        space = _unit_space(2)
        design = saltelli_sample(space, n=4096, seed=3)
        x = design.matrix()
        res = sobol_indices(design, 2.0 * x[:, 0] + x[:, 1], seed=3)
        assert res.s1[0] == pytest.approx(0.8, abs=0.02)
        assert res.s1[1] == pytest.approx(0.2, abs=0.02)
        assert res.s1.sum() == pytest.approx(1.0, abs=0.02)
        assert np.all(np.abs(res.s1 - res.st) <= 2 * res.st_ci + 2 * res.s1_ci)

    def test_inactive_parameter_total_near_zero(self):
        space = _unit_space(3)
        design = saltelli_sample(space, n=2048, seed=4)
        res = sobol_indices(design, design.matrix()[:, 0] ** 2, seed=4)
        assert abs(res.st[1]) < 0.01 and abs(res.st[2]) < 0.01
        assert res.st[0] == pytest.approx(1.0, abs=0.02)

    def test_zero_variance_rejected(self):
        design = saltelli_sample(_unit_space(2), n=64, seed=5)
        with pytest.raises(EvaluationError):
            sobol_indices(design, np.ones(64 * 6), seed=5)

    def test_same_seed_reproducible(self):
        space = _unit_space(2)
        d1 = saltelli_sample(space, n=256, seed=6)
        d2 = saltelli_sample(space, n=256, seed=6)
        assert np.array_equal(d1.matrix(), d2.matrix())
        y = d1.matrix().sum(axis=1)
        r1 = sobol_indices(d1, y, seed=6)
        r2 = sobol_indices(d2, y, seed=6)
        assert np.array_equal(r1.s1, r2.s1) and np.array_equal(r1.st_ci, r2.st_ci)

    def test_ishigami_compact(self):
        # smaller-n version of the acceptance oracle
        a, b = 7.0, 0.1
        v1 = 0.5 * (1.0 + b * math.pi ** 4 / 5.0) ** 2
        v2 = a * a / 8.0
        v13 = b * b * math.pi ** 8 * 8.0 / 225.0
        total = v1 + v2 + v13
        space = ParameterSpace.from_dict(
            {n: (-math.pi, math.pi) for n in ("x1", "x2", "x3")})
        design = saltelli_sample(space, n=2048, seed=7)
        x = design.matrix()
        y = np.sin(x[:, 0]) + a * np.sin(x[:, 1]) ** 2 \
            + b * x[:, 2] ** 4 * np.sin(x[:, 0])
        res = sobol_indices(design, y, seed=7)
        assert res.s1[0] == pytest.approx(v1 / total, abs=0.08)
        assert res.s1[1] == pytest.approx(v2 / total, abs=0.08)
        assert res.st[2] == pytest.approx(v13 / total, abs=0.08)


class TestAnalyzeModel:
    def test_matrix_shape_contract(self, juneau, juneau_exog, juneau_init):
        space = ParameterSpace.from_dict(
            {f: tuple(getattr(juneau.bounds, f))
             for f in ("tax_rate", "carbon_fee", "capacity_limit")})
        report = analyze_model(space, juneau_exog, juneau.coefficients,
                               juneau.reference_policy, juneau_init,
                               method="morris", morris_r=4, seed=0)
        assert report.matrix.shape == (3, 3)
        recs = report.matrix_records()
        assert len(recs) == 3
        assert set(recs[0]) == {"parameter", "f1", "f2", "f3"}

    def test_single_capacity_parameter_captures_all_variance(self, juneau, juneau_init):
        exog = tp.synth_dataset(juneau, seed=0).with_scaled("V_base", 8.0)
        space = ParameterSpace.from_dict({"capacity_limit": (1e6, 4e6)})
        report = analyze_model(space, exog, juneau.coefficients,
                               juneau.reference_policy, juneau_init,
                               method="sobol", output="f1", sobol_n=256, seed=1)
        res = report.tables["f1"]
        assert res.st[0] == pytest.approx(1.0, abs=0.05)

    def test_morris_full_space_smoke(self, juneau, juneau_exog, juneau_init):
        space = full_space(juneau.bounds, juneau.coefficients)
        assert len(space) == 12
        report = analyze_model(space, juneau_exog, juneau.coefficients,
                               juneau.reference_policy, juneau_init,
                               method="morris", morris_r=6, seed=2)
        for res in report.tables.values():
            assert np.all(np.isfinite(res.mu_star))

    def test_unknown_parameter_rejected(self, juneau, juneau_exog, juneau_init):
        space = ParameterSpace.from_dict({"warp_field": (0.0, 1.0)})
        with pytest.raises(ConfigError):
            analyze_model(space, juneau_exog, juneau.coefficients,
                          juneau.reference_policy, juneau_init)

    def test_unknown_method_rejected(self, juneau, juneau_exog, juneau_init):
        space = ParameterSpace.from_dict({"tax_rate": (0.0, 0.3)})
        with pytest.raises(ConfigError):
            analyze_model(space, juneau_exog, juneau.coefficients,
                          juneau.reference_policy, juneau_init, method="sobolev")


class TestSpaces:
    def test_uncertainty_space_clips_to_bounds(self, juneau):
        space = uncertainty_space(juneau.reference_policy, juneau.bounds, rel=0.5)
        for name, lo, hi in zip(space.names, space.lows, space.highs):
            blo, bhi = getattr(juneau.bounds, name)
            assert lo >= blo and hi <= bhi and lo < hi

    def test_full_space_has_policy_and_coefficients(self, juneau):
        space = full_space(juneau.bounds, juneau.coefficients)
        assert "capacity_limit" in space.names and "eps_price" in space.names
