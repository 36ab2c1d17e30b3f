import math

import numpy as np
import pytest
from scipy import stats as sps

import cauchyde.cauchy as cauchy_mod
from cauchyde.bench import get_objective, sphere
from cauchyde.cauchy import (DE, AcmConfig, CauchyParams, CmConfig,
                             ScheduleSpec, acm_de_step, acm_trial, cauchy_cdf,
                             cauchy_pdf, cauchy_sample, cm_trial,
                             generation_threshold, should_fire, threshold)
from cauchyde.core import Bounds, ConfigurationError, Population, initialize, \
    evaluate_population
from cauchyde.strategies import StrategySpec


class TestDistribution:
    def test_pdf_peak(self):
        assert cauchy_pdf(0.0, CauchyParams(0.0, 1.0)) == pytest.approx(1 / math.pi)

    def test_pdf_half_peak_at_one_scale(self):
        params = CauchyParams(2.0, 0.4)
        assert cauchy_pdf(2.4, params) == pytest.approx(1 / (2 * math.pi * 0.4))

    def test_pdf_hand_value(self):
        assert cauchy_pdf(0.2, CauchyParams(0.0, 0.1)) == pytest.approx(0.6366198, abs=1e-6)

    def test_bad_gamma(self):
        with pytest.raises(ConfigurationError):
            CauchyParams(0.0, 0.0)

    def test_cdf_values(self):
        params = CauchyParams(0.0, 1.0)
        assert cauchy_cdf(0.0, params) == pytest.approx(0.5)
        assert cauchy_cdf(1.0, params) == pytest.approx(0.75)
        assert cauchy_cdf(-1.0, params) == pytest.approx(0.25)

    def test_sample_inverse_values(self, stub):
        assert cauchy_sample(CauchyParams(3.0, 1.0), stub(randoms=[0.5])) == pytest.approx(3.0)
        assert cauchy_sample(CauchyParams(0.0, 1.0), stub(randoms=[0.75])) == pytest.approx(1.0)
        assert cauchy_sample(CauchyParams(0.0, 0.1), stub(randoms=[0.9])) == pytest.approx(0.307768, abs=1e-6)

    def test_sample_redraws_exact_zero(self, stub):
        value = cauchy_sample(CauchyParams(0.0, 1.0), stub(randoms=[0.0, 0.5]))
        assert value == pytest.approx(0.0)

    def test_sampler_matches_cdf(self):
        rng = np.random.default_rng(7)
        params = CauchyParams(2.0, 0.1)
        draws = np.array([cauchy_sample(params, rng) for _ in range(20_000)])
        d = sps.kstest(draws, lambda x: cauchy_cdf(x, params)).statistic
        assert d < 0.02


class TestSchedule:
    def test_sigmoid_endpoints_and_midpoint(self):
        spec = ScheduleSpec("SFTD", 100.0, 5.0)
        assert threshold(spec, 0, 1000) == pytest.approx(99.7651, abs=1e-3)
        assert threshold(spec, 500, 1000) == pytest.approx(52.5, abs=1e-12)
        assert threshold(spec, 1000, 1000) == pytest.approx(5.2349, abs=1e-3)

    def test_linear_interpolation(self):
        spec = ScheduleSpec("LFTD", 100.0, 5.0)
        assert threshold(spec, 250, 1000) == pytest.approx(76.25)

    def test_constant(self):
        spec = ScheduleSpec("constant", 5.0, None)
        assert threshold(spec, 3, 10) == 5.0

    def test_bad_arguments(self):
        spec = ScheduleSpec("SFTD", 100.0, 5.0)
        with pytest.raises(ValueError):
            threshold(spec, 11, 10)
        with pytest.raises(ValueError):
            threshold(spec, -1, 10)
        with pytest.raises(ValueError):
            threshold(spec, 0, 0)

    @pytest.mark.parametrize("family,increasing", [
        ("SFTD", False), ("LFTD", False), ("SFTI", True), ("LFTI", True)])
    def test_monotonicity(self, family, increasing):
        if increasing:
            spec = ScheduleSpec(family, 5.0, 100.0)
        else:
            spec = ScheduleSpec(family, 100.0, 5.0)
        values = [threshold(spec, g, 200) for g in range(201)]
        diffs = np.diff(values)
        assert np.all(diffs >= 0) if increasing else np.all(diffs <= 0)

    def test_mirror_symmetry(self):
        down = ScheduleSpec("SFTD", 100.0, 5.0)
        up = ScheduleSpec("SFTI", 5.0, 100.0)
        for g in range(0, 201, 7):
            total = threshold(down, g, 200) + threshold(up, g, 200)
            assert total == pytest.approx(105.0, abs=1e-12)

    def test_direction_validation(self):
        with pytest.raises(ConfigurationError):
            ScheduleSpec("SFTD", 5.0, 100.0)
        with pytest.raises(ConfigurationError):
            ScheduleSpec("SFTI", 100.0, 5.0)
        with pytest.raises(ConfigurationError):
            ScheduleSpec("SFTD", 0.5, 0.2)


class TestShouldFire:
    def test_fresh_counter_never_fires(self):
        assert not should_fire(0, 1.0)
        assert not should_fire(0, 100.0)

    def test_fires_at_threshold(self):
        assert should_fire(5, 5.0)

    def test_modulo_refire(self):
        assert not should_fire(7, 5.0)
        assert should_fire(10, 5.0)

    def test_vector_form(self):
        fired = should_fire(np.array([0, 5, 7, 10]), 5.0)
        assert list(fired) == [False, True, False, True]

    def test_rounding_clamp(self):
        assert should_fire(1, 0.4)  # threshold rounds up to the minimum of 1

    def test_firing_cadence(self):
        # a permanently failing individual fires floor(fc/T) times
        t = 7
        fires = sum(should_fire(fc, float(t)) for fc in range(1, 101))
        assert fires == 100 // t


class TestCmTrial:
    def test_forced_component_only(self, stub):
        bounds = Bounds.cube(-100, 100, 2)
        # both uniforms at or above 0.5: only j_rand fires, at the median draw
        rng = stub(integers=[0], randoms=[np.array([0.9, 0.9]), np.array([0.5])])
        trial = cm_trial(np.array([5.0, 6.0]), np.array([1.0, 2.0]), bounds, rng)
        assert np.allclose(trial, [1.0, 6.0])

    def test_full_fire_median_reproduces_best(self, stub):
        bounds = Bounds.cube(-100, 100, 3)
        rng = stub(integers=[1],
                   randoms=[np.array([0.1, 0.2, 0.3]), np.full(3, 0.5)])
        trial = cm_trial(np.zeros(3), np.array([1.0, 2.0, 3.0]), bounds, rng)
        assert np.allclose(trial, [1.0, 2.0, 3.0])

    def test_hand_value(self, stub):
        bounds = Bounds.cube(-100, 100, 2)
        rng = stub(integers=[1],
                   randoms=[np.array([0.4, 0.9]), np.array([0.75, 0.75])])
        trial = cm_trial(np.zeros(2), np.ones(2), bounds, rng)
        assert np.allclose(trial, [1.1, 1.1])

    def test_result_repaired(self, stub):
        bounds = Bounds.cube(-1, 1, 1)
        # draw far in the tail: u = 0.999 gives a huge positive sample
        rng = stub(integers=[0], randoms=[np.array([0.1]), np.array([0.999])])
        trial = cm_trial(np.array([0.5]), np.array([0.9]), bounds, rng)
        assert bounds.contains(trial)


def make_pop(x, fitness, half_width=100.0):
    x = np.asarray(x, dtype=float)
    pop = Population(x, Bounds.cube(-half_width, half_width, x.shape[1]))
    pop.fitness = np.asarray(fitness, dtype=float)
    return pop


class TestAcmTrial:
    def test_pool_collapse_reduces_to_best(self, stub):
        pop = make_pop([[1, 1], [4, 4], [5, 5], [6, 6]], [0, 1, 2, 3])
        cfg = AcmConfig(p=0.1)  # pool of one
        rng = stub(integers=[0, 1],
                   randoms=[0.7, np.array([0.5, 0.5]), np.full(2, 0.5)])
        trial = acm_trial(np.zeros(2), pop, cfg, rng)
        assert np.allclose(trial, [1.0, 1.0])

    def test_low_rate_changes_only_forced_component(self, stub):
        pop = make_pop([[1, 1, 1], [4, 4, 4], [5, 5, 5], [6, 6, 6]], [0, 1, 2, 3])
        cfg = AcmConfig(p=0.1)
        rng = stub(integers=[0, 2],
                   randoms=[0.2, np.array([0.5, 0.9, 0.8]), np.array([0.5])])
        target = np.array([7.0, 8.0, 9.0])
        trial = acm_trial(target, pop, cfg, rng)
        assert trial[0] == 7.0 and trial[1] == 8.0 and trial[2] == 1.0

    def test_rate_test_is_inclusive(self, stub):
        pop = make_pop([[1, 1], [4, 4], [5, 5], [6, 6]], [0, 1, 2, 3])
        cfg = AcmConfig(p=0.1)
        # u exactly at the picked rate 0.1 fires (forced j_rand is the other)
        rng = stub(integers=[0, 1],
                   randoms=[0.2, np.array([0.1, 0.5]), np.full(2, 0.5)])
        trial = acm_trial(np.array([7.0, 8.0]), pop, cfg, rng)
        assert np.allclose(trial, [1.0, 1.0])

    def test_pool_size_rounding(self, stub):
        pop = make_pop(np.zeros((10, 2)), np.arange(10.0))
        cfg = AcmConfig(p=0.3)
        rng = stub(integers=[0, 1],
                   randoms=[0.7, np.array([0.95, 0.95]), np.array([0.5])])
        acm_trial(np.ones(2), pop, cfg, rng)
        pool_call = [c for c in rng.calls if c[0] == "integers"][0]
        assert pool_call[1] == 3  # ceil(0.3 * 10)


class TestGenerationThreshold:
    def test_cm_uses_fixed(self):
        assert generation_threshold(CmConfig(ft=5.0), 123, None) == 5.0

    def test_acm_clamps_overrun(self):
        cfg = AcmConfig(schedule=ScheduleSpec("SFTD", 100.0, 5.0))
        assert generation_threshold(cfg, 2000, 1000) == generation_threshold(cfg, 1000, 1000)

    def test_acm_needs_g_max(self):
        cfg = AcmConfig(schedule=ScheduleSpec("SFTD", 100.0, 5.0))
        with pytest.raises(ConfigurationError):
            generation_threshold(cfg, 0, None)


class TestAcmDeStep:
    def setup_pop(self, seed=0, np_size=12, d=4):
        rng = np.random.default_rng(seed)
        objective = get_objective("sphere", d)
        pop = initialize(objective.bounds, np_size, rng)
        evaluate_population(pop, objective)
        return pop, objective, rng

    def test_unreachable_threshold_equals_plain_de(self):
        spec = StrategySpec("rand/1", f=0.5, cr=0.5)
        cfg = AcmConfig(schedule=ScheduleSpec("constant", 1e9, None))
        results = []
        for cauchy in (None, cfg):
            pop, objective, rng = self.setup_pop(seed=11)
            for _ in range(20):
                acm_de_step(pop, spec, cauchy, objective, rng, g_max=20)
            results.append((pop.x.copy(), pop.fitness.copy(), pop.fc.copy()))
        assert np.array_equal(results[0][0], results[1][0])
        assert np.array_equal(results[0][1], results[1][1])
        assert np.array_equal(results[0][2], results[1][2])

    def test_fresh_counters_take_base_branch(self):
        spec = StrategySpec("rand/1", f=0.5, cr=0.5)
        cfg = AcmConfig(schedule=ScheduleSpec("constant", 5.0, None))
        results = []
        for cauchy in (None, cfg):
            pop, objective, rng = self.setup_pop(seed=3)
            acm_de_step(pop, spec, cauchy, objective, rng, g_max=10)
            results.append(pop.x.copy())
        assert np.array_equal(results[0], results[1])

    def test_exact_threshold_individual_fires(self, monkeypatch):
        pop, objective, rng = self.setup_pop(seed=5)
        pop.fc[:] = 0
        pop.fc[7] = 5
        cfg = AcmConfig(schedule=ScheduleSpec("constant", 5.0, None))
        fired = []

        def spy(target_x, pop_, cfg_, rng_, sorted_indices=None):
            fired.append(int(np.flatnonzero((pop_.x == target_x).all(axis=1))[0]))
            return np.array(target_x)

        monkeypatch.setattr(cauchy_mod, "acm_trial", spy)
        acm_de_step(pop, StrategySpec("rand/1"), cfg, objective, rng, g_max=10)
        assert fired == [7]

    def test_partial_generation_respects_cap(self):
        pop, objective, rng = self.setup_pop(seed=9, np_size=10)
        acm_de_step(pop, StrategySpec("rand/1"), None, objective, rng,
                    g_max=10, nfe_cap=pop.nfe + 4)
        assert pop.nfe == 14  # 10 from init plus the 4 affordable trials

    def test_step_without_budget_raises(self):
        pop, objective, rng = self.setup_pop(seed=9)
        with pytest.raises(RuntimeError):
            acm_de_step(pop, StrategySpec("rand/1"), None, objective, rng,
                        g_max=10, nfe_cap=pop.nfe)

    def test_cm_branch_executes(self):
        pop, objective, rng = self.setup_pop(seed=13)
        pop.fc[2] = 5
        before = pop.x[2].copy()
        acm_de_step(pop, StrategySpec("rand/1", cr=0.0), CmConfig(ft=5.0),
                    objective, rng, g_max=10)
        # individual 2 went through the rescue and selection, not crashed
        assert pop.fc[2] in (0, 6)
        assert np.isfinite(pop.fitness[2])
        assert before.shape == pop.x[2].shape


def test_de_stepper_wrapper():
    objective = get_objective("sphere", 3)
    rng = np.random.default_rng(0)
    pop = initialize(objective.bounds, 8, rng)
    evaluate_population(pop, objective)
    stepper = DE(StrategySpec("rand/1"), cauchy=AcmConfig())
    assert stepper.nominal_cost(8) == 8
    best_before = pop.best_fitness
    stepper.step(pop, objective, rng, g_max=50)
    assert pop.g == 1 and pop.nfe == 16
    assert pop.best_fitness <= best_before
