import numpy as np
import pytest

from evolab.envs import make_env
from evolab.envs.base import EnvSpec
from evolab.envs.base import RewardVariant
from evolab.utils.errors import InvalidInputError
from evolab.variation.evaluation import evaluate
from evolab.variation.plan import CONDITION_PRESETS
from evolab.variation.plan import EPISODE_COUNT_GRID
from evolab.variation.plan import Modality
from evolab.variation.plan import peak_sigma_act
from evolab.variation.plan import plan_with_preset
from evolab.variation.plan import sigma_act_at
from evolab.variation.plan import VariationPlan


class TestVariationPlan:
    def test_fixed_defaults_to_standard_amplitude(self):
        plan = VariationPlan()
        assert plan.action_modality is Modality.FIXED
        assert plan.sigma_act == 0.01
        assert plan.sigma_act_max is None

    def test_incremental_needs_maximum(self):
        with pytest.raises(InvalidInputError):
            VariationPlan(action_modality="incremental1")

    def test_inactive_field_must_be_unset(self):
        with pytest.raises(InvalidInputError):
            VariationPlan(action_modality="incremental1", sigma_act=0.1, sigma_act_max=0.5)
        with pytest.raises(InvalidInputError):
            VariationPlan(sigma_act=0.1, sigma_act_max=0.5)

    @pytest.mark.parametrize("field", ["sigma_init", "sigma_act"])
    def test_negative_amplitude(self, field):
        with pytest.raises(InvalidInputError):
            VariationPlan(**{field: -0.1})

    def test_episode_count(self):
        with pytest.raises(InvalidInputError):
            VariationPlan(episodes_per_eval=0)

    def test_ramp_filled_from_generations(self):
        plan = VariationPlan(action_modality="incremental2", sigma_act_max=0.55)
        assert plan.with_ramp(100).ramp_generations == 100
        assert plan.with_ramp(100).with_ramp(7).ramp_generations == 100


class TestSchedule:
    def test_incremental1_ramp(self):
        plan = VariationPlan(action_modality="incremental1", sigma_act_max=0.55)
        assert sigma_act_at(plan, 0, 1000, 0) == 0.0
        assert sigma_act_at(plan, 999, 1000, 0) == pytest.approx(0.55)
        assert peak_sigma_act(plan, 1000, 0) == pytest.approx(0.55)

    def test_incremental2_midpoint(self):
        plan = VariationPlan(
            action_modality="incremental2", sigma_act_max=0.55, ramp_generations=100
        )
        assert sigma_act_at(plan, 0, 1000, 50) == pytest.approx(0.275)
        assert sigma_act_at(plan, 999, 1000, 500) == pytest.approx(0.55)

    @pytest.mark.parametrize("t, g", [(0, 0), (500, 3), (999, 10_000)])
    def test_fixed_is_constant(self, t, g):
        plan = VariationPlan(sigma_act=0.3)
        assert sigma_act_at(plan, t, 1000, g) == 0.3

    def test_incremental1_needs_two_steps(self):
        plan = VariationPlan(action_modality="incremental1", sigma_act_max=0.36)
        with pytest.raises(InvalidInputError):
            sigma_act_at(plan, 0, 1, 0)

    def test_incremental2_needs_ramp(self):
        plan = VariationPlan(action_modality="incremental2", sigma_act_max=0.55)
        with pytest.raises(InvalidInputError):
            sigma_act_at(plan, 0, 10, 0)

    def test_step_out_of_range(self):
        with pytest.raises(InvalidInputError):
            sigma_act_at(VariationPlan(), 10, 10, 0)


class TestPresets:
    def test_grid(self):
        assert list(CONDITION_PRESETS) == [
            "standard",
            "fixed-.3",
            "fixed-.6",
            "incremental1-.36",
            "incremental1-.55",
            "incremental2-.55",
        ]
        assert EPISODE_COUNT_GRID == (1, 2, 3, 5, 10)

    def test_preset_replaces_action_part_only(self):
        plan = VariationPlan(sigma_init=0.05, sigma_act=0.3, episodes_per_eval=3)
        swapped = plan_with_preset(plan, "incremental1-.36")
        assert swapped.action_modality is Modality.INCREMENTAL1
        assert swapped.sigma_act is None
        assert swapped.sigma_act_max == 0.36
        assert swapped.sigma_init == 0.05
        assert swapped.episodes_per_eval == 3

    def test_unknown_preset(self):
        with pytest.raises(InvalidInputError):
            plan_with_preset(VariationPlan(), "fixed-.9")


class TestEvaluate:
    def test_single_episode_fitness_is_its_return(self, tiny_controller):
        controller, params = tiny_controller()
        env = make_env(EnvSpec(id="linear_mover"), RewardVariant.V0)
        record = evaluate(params, env, VariationPlan(), 0, np.random.default_rng(0), controller)
        assert record.fitness == record.episode_returns[0]
        assert record.episode_lengths == (200,)
        assert record.fitness == pytest.approx(200.0 + record.episode_progress[0])

    @pytest.mark.parametrize("episodes", [1, 2, 5])
    def test_deterministic_env_ignores_episode_count(self, tiny_controller, episodes):
        controller, params = tiny_controller()
        params = params + 0.3
        env = make_env(EnvSpec(id="linear_mover"))
        plan = VariationPlan(sigma_init=0.0, sigma_act=0.0, episodes_per_eval=episodes)
        record = evaluate(params, env, plan, 0, np.random.default_rng(episodes), controller)
        single = VariationPlan(sigma_init=0.0, sigma_act=0.0)
        reference = evaluate(params, env, single, 0, np.random.default_rng(0), controller)
        assert record.fitness == pytest.approx(reference.fitness, rel=1e-12)
        assert len(record.episode_returns) == episodes

    def test_averaging_shrinks_variance(self, tiny_controller):
        controller, params = tiny_controller()
        env = make_env(EnvSpec(id="noise_only"))
        rng = np.random.default_rng(77)

        def estimates(episodes):
            plan = VariationPlan(episodes_per_eval=episodes)
            return [evaluate(params, env, plan, 0, rng, controller).fitness for _ in range(1000)]

        ratio = np.var(estimates(10)) / np.var(estimates(1))
        assert 0.07 <= ratio <= 0.13

    def test_static_function_scores_genotype(self):
        env = make_env(EnvSpec(id="static_function", dim=4))
        record = evaluate(env.target, env, VariationPlan(), 0, np.random.default_rng(0))
        assert record.fitness == 0.0
        assert record.episode_returns == (0.0,)

    def test_episodic_env_needs_controller(self):
        env = make_env(EnvSpec(id="linear_mover"))
        with pytest.raises(InvalidInputError):
            evaluate(np.zeros(4), env, VariationPlan(), 0, np.random.default_rng(0))

    def test_trajectories_on_request(self, tiny_controller):
        controller, params = tiny_controller()
        env = make_env(EnvSpec(id="linear_mover", max_steps=12))
        plan = VariationPlan(episodes_per_eval=2)
        record = evaluate(params, env, plan, 0, np.random.default_rng(0), controller, True)
        assert [len(t) for t in record.trajectories] == [12, 12]
