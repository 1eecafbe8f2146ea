import numpy as np
import pytest

from evolab.envs import CartWalker
from evolab.envs import dump_trajectory
from evolab.envs import make_env
from evolab.envs.base import EnvId
from evolab.envs.base import EnvSpec
from evolab.envs.base import episode_return
from evolab.envs.base import HARD_THETA_MAX
from evolab.envs.base import RewardVariant
from evolab.envs.base import StepResult
from evolab.utils.csvio import read_csv_rows
from evolab.utils.errors import InvalidInputError
from evolab.utils.errors import ProtocolViolationError


def step_result(progress=0.0, alive=1.0, fell=False):
    return StepResult(
        observation=np.zeros(1),
        progress_reward=progress,
        alive_bonus=alive,
        done=fell,
        step_index=0,
        effective_action=np.zeros(1),
        state=np.zeros(1),
        fell=fell,
    )


class TestSpec:
    def test_defaults(self):
        spec = EnvSpec()
        assert spec.id is EnvId.CART_WALKER
        assert spec.theta_max == 0.7
        assert HARD_THETA_MAX == 0.2

    @pytest.mark.parametrize("theta_max", [0.0, -0.1, 2.0])
    def test_theta_max_range(self, theta_max):
        with pytest.raises(InvalidInputError):
            EnvSpec(theta_max=theta_max)

    def test_default_horizons(self):
        assert make_env(EnvSpec(id="cart_walker")).max_steps == 1000
        assert make_env(EnvSpec(id="linear_mover")).max_steps == 200
        assert make_env(EnvSpec(id="noise_only")).max_steps == 1
        assert make_env(EnvSpec(id="linear_mover", max_steps=7)).max_steps == 7


class TestReset:
    def test_zero_sigma_gives_canonical_state(self):
        env = make_env(EnvSpec())
        obs = env.reset(np.random.default_rng(0), 0.0)
        assert env.state.tolist() == [0.0, 0.0, 0.0, 0.0]
        assert obs.tolist() == [0.0, 0.0, 1.0, 0.0]

    def test_perturbs_velocity_angle_and_angular_velocity(self):
        env = make_env(EnvSpec())
        env.reset(np.random.default_rng(1), 0.1)
        x, v, theta, omega = env.state
        assert x == 0.0
        assert v != 0.0 and theta != 0.0 and omega != 0.0

    def test_initial_angle_std(self):
        env = make_env(EnvSpec())
        rng = np.random.default_rng(3)
        angles = np.empty(100_000)
        for index in range(angles.size):
            env.reset(rng, 0.03)
            angles[index] = env.state[2]
        assert np.std(angles) == pytest.approx(0.03, abs=0.001)

    def test_negative_sigma(self):
        with pytest.raises(InvalidInputError):
            make_env(EnvSpec()).reset(np.random.default_rng(0), -0.1)


class TestStep:
    def test_unperturbed_action_is_clamped(self):
        env = make_env(EnvSpec(id="linear_mover"))
        rng = np.random.default_rng(0)
        env.reset(rng)
        assert env.step([2.5], rng, 0.0).effective_action.tolist() == [1.0]
        assert env.step([-0.25], rng, 0.0).effective_action.tolist() == [-0.25]

    def test_upright_equilibrium_is_a_fixed_point(self):
        env = make_env(EnvSpec())
        rng = np.random.default_rng(0)
        env.reset(rng, 0.0)
        for _ in range(100):
            result = env.step([0.0], rng, 0.0)
        assert result.state[2] == 0.0
        assert not result.fell

    def test_action_perturbation_std(self):
        env = make_env(EnvSpec(id="linear_mover", max_steps=50_000))
        rng = np.random.default_rng(8)
        env.reset(rng)
        noise = np.array([env.step([0.0], rng, 0.3).effective_action[0] for _ in range(50_000)])
        assert np.std(noise) == pytest.approx(0.3, abs=0.005)
        assert np.mean(noise) == pytest.approx(0.0, abs=0.005)

    def test_step_without_episode(self):
        env = make_env(EnvSpec())
        with pytest.raises(ProtocolViolationError):
            env.step([0.0], np.random.default_rng(0))

    def test_step_after_done(self):
        env = make_env(EnvSpec(id="noise_only"))
        rng = np.random.default_rng(0)
        env.reset(rng)
        assert env.step([0.0], rng).done
        assert not env.active
        with pytest.raises(ProtocolViolationError):
            env.step([0.0], rng)

    def test_wrong_action_size(self):
        env = make_env(EnvSpec())
        rng = np.random.default_rng(0)
        env.reset(rng)
        with pytest.raises(InvalidInputError):
            env.step([0.0, 1.0], rng)

    def test_non_finite_action(self):
        env = make_env(EnvSpec())
        rng = np.random.default_rng(0)
        env.reset(rng)
        with pytest.raises(InvalidInputError):
            env.step([np.inf], rng)


class TestEpisodeReturn:
    def test_stand_still_whole_horizon(self):
        trajectory = [step_result() for _ in range(1000)]
        assert episode_return(trajectory, RewardVariant.V0) == 1000.0
        assert episode_return(trajectory, RewardVariant.V5) == 0.0

    def test_fall_after_ten_steps(self):
        trajectory = [step_result() for _ in range(10)] + [step_result(alive=0.0, fell=True)]
        assert episode_return(trajectory, RewardVariant.V0) == 10.0

    def test_progress_counts_in_both_variants(self):
        trajectory = [step_result(progress=0.5) for _ in range(4)]
        assert episode_return(trajectory, RewardVariant.V5) == 2.0
        assert episode_return(trajectory, RewardVariant.V0) == 6.0


class TestCartWalker:
    def test_falls_and_forfeits_the_bonus_of_that_step(self):
        env = make_env(EnvSpec(theta_max=HARD_THETA_MAX), RewardVariant.V0)
        rng = np.random.default_rng(0)
        env.reset(rng, 0.0)
        env.state[2] = 0.05
        trajectory = []
        while True:
            result = env.step([0.0], rng, 0.0)
            trajectory.append(result)
            if result.done:
                break
        assert trajectory[-1].fell
        assert trajectory[-1].alive_bonus == 0.0
        assert len(trajectory) < env.max_steps
        assert episode_return(trajectory, RewardVariant.V0) == pytest.approx(
            len(trajectory) - 1 + sum(s.progress_reward for s in trajectory)
        )

    def test_energy_is_conserved_until_the_fall(self):
        """
        Zero force from a 0.01 rad lean. The upright pole falls past 0.2 rad within
        a few dozen ticks, so the 1% bound covers that horizon, not 1000 ticks.
        """
        env = CartWalker(EnvSpec(theta_max=HARD_THETA_MAX))
        rng = np.random.default_rng(0)
        env.reset(rng, 0.0)
        env.state[2] = 0.01
        initial = env.mechanical_energy()
        assert initial == pytest.approx(0.49, abs=1e-3)

        done = False
        while not done:
            done = env.step([0.0], rng, 0.0).done
            assert abs(env.mechanical_energy() - initial) / initial < 0.01

    def test_progress_is_cart_displacement(self):
        env = make_env(EnvSpec())
        rng = np.random.default_rng(0)
        env.reset(rng, 0.0)
        total = sum(env.step([1.0], rng, 0.0).progress_reward for _ in range(5))
        assert total == pytest.approx(env.state[0])


class TestLinearMover:
    def test_velocity_response(self):
        env = make_env(EnvSpec(id="linear_mover"))
        rng = np.random.default_rng(0)
        env.reset(rng)
        result = env.step([1.0], rng)
        assert result.progress_reward == pytest.approx(0.1)
        result = env.step([1.0], rng)
        assert result.progress_reward == pytest.approx(0.19)

    def test_saturated_action_approaches_unit_reward(self):
        env = make_env(EnvSpec(id="linear_mover"))
        rng = np.random.default_rng(0)
        env.reset(rng)
        rewards = [env.step([1.0], rng).progress_reward for _ in range(env.max_steps)]
        assert rewards[-1] == pytest.approx(1.0, abs=1e-6)

    def test_never_falls_under_v0(self):
        env = make_env(EnvSpec(id="linear_mover"), RewardVariant.V0)
        rng = np.random.default_rng(0)
        env.reset(rng)
        trajectory = [env.step([0.0], rng) for _ in range(env.max_steps)]
        assert trajectory[-1].done
        assert episode_return(trajectory, RewardVariant.V0) == 200.0


class TestNoiseOnly:
    def test_reward_is_independent_of_action(self):
        env = make_env(EnvSpec(id="noise_only"))
        first = np.random.default_rng(4)
        second = np.random.default_rng(4)
        env.reset(first)
        a = env.step([1.0], first).progress_reward
        env.reset(second)
        b = env.step([-1.0], second).progress_reward
        assert a == b


class TestStaticFunction:
    def test_optimum_at_target(self):
        env = make_env(EnvSpec(id="static_function", dim=20, target_seed=4))
        assert env.fitness(env.target) == 0.0
        assert env.fitness(np.zeros(20)) < 0.0
        assert np.all(np.abs(env.target) <= 0.5)

    def test_target_depends_only_on_seed(self):
        a = make_env(EnvSpec(id="static_function", target_seed=1))
        b = make_env(EnvSpec(id="static_function", target_seed=1))
        c = make_env(EnvSpec(id="static_function", target_seed=2))
        assert np.array_equal(a.target, b.target)
        assert not np.array_equal(a.target, c.target)

    def test_no_episodes(self):
        env = make_env(EnvSpec(id="static_function"))
        with pytest.raises(ProtocolViolationError):
            env.reset(np.random.default_rng(0))

    def test_wrong_length(self):
        env = make_env(EnvSpec(id="static_function", dim=3))
        with pytest.raises(InvalidInputError):
            env.fitness(np.zeros(4))


def test_dump_trajectory(tmp_path):
    env = make_env(EnvSpec(max_steps=5), RewardVariant.V0)
    rng = np.random.default_rng(0)
    env.reset(rng, 0.0)
    trajectory = [env.step([0.5], rng) for _ in range(5)]
    header, rows = read_csv_rows(dump_trajectory(tmp_path / "t.csv", trajectory, env))
    assert header == [
        "step",
        "x",
        "v",
        "theta",
        "omega",
        "action_0",
        "progress_reward",
        "alive_bonus",
    ]
    assert [row["step"] for row in rows] == ["0", "1", "2", "3", "4"]
