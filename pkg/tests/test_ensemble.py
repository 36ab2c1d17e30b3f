import numpy as np
import pytest

from cauchyde.bench import get_objective
from cauchyde.cauchy import AcmConfig
from cauchyde.core import Budget, ConfigurationError, evaluate_population, \
    initialize
from cauchyde.driver import run
from cauchyde.ensemble import EDEV, MPEDE, EnsembleState, reassign_reward


def stepped(algorithm, np_size=40, dim=4, gens=1, seed=0):
    objective = get_objective("rastrigin", dim)
    rng = np.random.default_rng(seed)
    pop = initialize(objective.bounds, np_size, rng)
    evaluate_population(pop, objective)
    for _ in range(gens):
        algorithm.step(pop, objective, rng, g_max=500)
    return pop, algorithm


class TestPartition:
    def test_sizes_round_then_remainder(self):
        assert MPEDE().partition_sizes(40) == [8, 8, 8, 16]
        assert MPEDE().partition_sizes(100) == [20, 20, 20, 40]
        assert EDEV().partition_sizes(100) == [10, 10, 10, 70]

    def test_too_small_population(self):
        with pytest.raises(ConfigurationError):
            EDEV().partition_sizes(20)

    def test_membership_partitions_population(self):
        pop, algorithm = stepped(MPEDE(), gens=1)
        members = np.concatenate(algorithm.state.membership)
        assert sorted(members.tolist()) == list(range(40))

    def test_reshuffle_preserves_partition(self):
        pop, algorithm = stepped(MPEDE(lp=3), gens=7)
        members = np.concatenate(algorithm.state.membership)
        assert sorted(members.tolist()) == list(range(40))


class TestStepStructure:
    def test_four_substeps_cost(self):
        # strategy-engine constituents cost one evaluation per member per step
        pop, _ = stepped(MPEDE(), gens=1)
        assert pop.nfe == 40 + 40

    def test_edev_cost_reflects_constituents(self):
        pop, algorithm = stepped(EDEV(), np_size=100, gens=1, seed=3)
        sizes = algorithm.partition_sizes(100)
        owner = algorithm.state.reward_owner
        per = [e.nominal_cost(s)
               for e, s in zip(algorithm.small_engines, sizes[:3])]
        reward_cost = algorithm.reward_engines[owner].nominal_cost(sizes[3])
        assert pop.nfe == 100 + sum(per) + reward_cost

    def test_counters_zero_at_start(self):
        _, algorithm = stepped(MPEDE(), gens=0)
        assert algorithm.state is None  # lazily built at the first step

    def test_improvement_accumulates(self):
        _, algorithm = stepped(MPEDE(), gens=3)
        assert np.all(algorithm.state.evals > 0)
        assert np.all(algorithm.state.improvement >= 0.0)


class TestReassignment:
    def make_state(self, improvements, evals, lp=20):
        return EnsembleState(membership=[np.arange(3)] * 4, reward_owner=2,
                             lp=lp, improvement=np.array(improvements, float),
                             evals=np.array(evals, float))

    def test_argmax_rate_wins(self):
        state = self.make_state([10.0, 5.0, 1.0], [100.0, 100.0, 100.0])
        reassign_reward(state, 20)
        assert state.reward_owner == 0
        assert np.all(state.improvement == 0) and np.all(state.evals == 0)

    def test_tie_goes_to_lowest_index(self):
        state = self.make_state([5.0, 5.0, 5.0], [100.0, 100.0, 100.0])
        reassign_reward(state, 20)
        assert state.reward_owner == 0

    def test_rate_not_raw_improvement(self):
        state = self.make_state([10.0, 6.0, 1.0], [200.0, 50.0, 100.0])
        reassign_reward(state, 20)
        assert state.reward_owner == 1

    def test_off_boundary_rejected(self):
        state = self.make_state([1, 2, 3], [1, 1, 1])
        with pytest.raises(ValueError):
            reassign_reward(state, 21)
        with pytest.raises(ValueError):
            reassign_reward(state, 0)

    def test_no_reassignment_before_first_boundary(self):
        _, algorithm = stepped(MPEDE(lp=10), gens=9, seed=8)
        assert np.any(algorithm.state.evals > 0)  # counters never reset yet

    def test_boundary_rebinds_to_argmax(self):
        objective = get_objective("rastrigin", 4)
        rng = np.random.default_rng(4)
        algorithm = MPEDE(lp=5)
        pop = initialize(objective.bounds, 40, rng)
        evaluate_population(pop, objective)
        for _ in range(5):
            algorithm.step(pop, objective, rng, g_max=100)
        forced = np.array([1.0, 50.0, 2.0])
        algorithm.state.improvement = forced.copy()
        algorithm.state.evals = np.array([10.0, 10.0, 10.0])
        algorithm.step(pop, objective, rng, g_max=100)  # g == lp boundary
        assert algorithm.state.reward_owner == 1


@pytest.mark.parametrize("factory", [
    lambda: MPEDE(lp=5), lambda: EDEV(lp=5),
    lambda: MPEDE(lp=5, cauchy=AcmConfig()),
    lambda: EDEV(lp=5, cauchy=AcmConfig())])
def test_ensembles_improve_and_respect_budget(factory):
    objective = get_objective("rastrigin", 5)
    record = run(factory(), objective, np_size=60,
                 budget=Budget(nfe_max=6000), seed=31)
    fevs = [fev for _, fev in record.trace]
    assert all(b <= a for a, b in zip(fevs, fevs[1:]))
    assert record.nfe_used <= 6000
