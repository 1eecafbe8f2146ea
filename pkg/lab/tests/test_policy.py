import numpy as np
import pytest

from evolab.envs import make_env
from evolab.envs.base import EnvId
from evolab.envs.base import EnvSpec
from evolab.policy.io import decode_parameters
from evolab.policy.io import encode_parameters
from evolab.policy.io import load_checkpoint
from evolab.policy.io import save_checkpoint
from evolab.policy.io import sidecar_path
from evolab.policy.mlp import forward
from evolab.policy.mlp import MlpSpec
from evolab.policy.mlp import ObsNormalizer
from evolab.policy.mlp import param_count
from evolab.policy.normalizer import build_normalizer
from evolab.utils.errors import CheckpointNotFoundError
from evolab.utils.errors import FormatError
from evolab.utils.errors import InvalidInputError


class TestParamCount:
    @pytest.mark.parametrize(
        "obs_dim, hidden_dim, action_dim, expected",
        [(4, 50, 1, 301), (1, 1, 1, 4), (4, 50, 2, 352)],
    )
    def test_count(self, obs_dim, hidden_dim, action_dim, expected):
        spec = MlpSpec(obs_dim=obs_dim, action_dim=action_dim, hidden_dim=hidden_dim)
        assert param_count(spec) == expected
        assert spec.param_count == expected

    def test_rejects_zero_width(self):
        with pytest.raises(InvalidInputError):
            MlpSpec(obs_dim=0, action_dim=1)


class TestForward:
    def test_zero_params_give_zero_action(self):
        spec = MlpSpec(obs_dim=4, action_dim=2, hidden_dim=8)
        action = forward(spec, np.zeros(spec.param_count), ObsNormalizer.identity(4), [1, 2, 3, 4])
        assert action.tolist() == [0.0, 0.0]

    def test_hand_evaluated_network(self):
        spec = MlpSpec(obs_dim=1, action_dim=1, hidden_dim=1)
        action = forward(spec, np.array([1.0, 0.0, 1.0, 0.0]), ObsNormalizer.identity(1), [0.5])
        assert action[0] == pytest.approx(np.tanh(np.tanh(0.5)))
        assert action[0] == pytest.approx(0.4319, abs=1e-4)

    def test_normalizer_is_applied(self):
        spec = MlpSpec(obs_dim=1, action_dim=1, hidden_dim=1)
        normalizer = ObsNormalizer(mean=[1.0], std=[2.0])
        action = forward(spec, np.array([1.0, 0.0, 1.0, 0.0]), normalizer, [2.0])
        assert action[0] == pytest.approx(np.tanh(np.tanh(0.5)))

    def test_outputs_bounded_and_pure(self):
        rng = np.random.default_rng(5)
        spec = MlpSpec(obs_dim=4, action_dim=3, hidden_dim=10)
        normalizer = ObsNormalizer.identity(4)
        for _ in range(50):
            params = 100.0 * rng.standard_normal(spec.param_count)
            obs = 100.0 * rng.standard_normal(4)
            first = forward(spec, params, normalizer, obs)
            assert np.all(np.abs(first) <= 1.0)
            assert np.array_equal(first, forward(spec, params, normalizer, obs))

    def test_dimension_mismatch(self):
        spec = MlpSpec(obs_dim=2, action_dim=1, hidden_dim=3)
        with pytest.raises(InvalidInputError):
            forward(spec, np.zeros(spec.param_count), ObsNormalizer.identity(2), [1.0])
        with pytest.raises(InvalidInputError):
            forward(spec, np.zeros(spec.param_count + 1), ObsNormalizer.identity(2), [1.0, 2.0])


class TestNormalizer:
    def test_std_floor(self):
        normalizer = ObsNormalizer(mean=[0.0, 1.0], std=[0.0, 3.0])
        assert normalizer.std.tolist() == [1e-2, 3.0]

    def test_constant_observation(self):
        env = make_env(EnvSpec(id=EnvId.NOISE_ONLY))
        normalizer = build_normalizer(env, episodes=5, rng_seed=0)
        assert normalizer.mean.tolist() == [0.0]
        assert normalizer.std.tolist() == [1e-2]
        assert normalizer.reference_count == 10

    def test_same_seed_is_bit_identical(self):
        spec = EnvSpec(id=EnvId.CART_WALKER, max_steps=50)
        first = build_normalizer(make_env(spec), episodes=3, rng_seed=9, sigma_init=0.1)
        second = build_normalizer(make_env(spec), episodes=3, rng_seed=9, sigma_init=0.1)
        assert np.array_equal(first.mean, second.mean)
        assert np.array_equal(first.std, second.std)

    def test_needs_an_episode(self):
        with pytest.raises(InvalidInputError):
            build_normalizer(make_env(EnvSpec(id=EnvId.NOISE_ONLY)), episodes=0, rng_seed=0)


class TestCheckpoint:
    def test_save_and_load(self, tmp_path):
        spec = MlpSpec(obs_dim=4, action_dim=1, hidden_dim=3)
        params = np.linspace(-1.0, 1.0, spec.param_count)
        normalizer = ObsNormalizer(
            mean=[0.1, 0.2, 0.3, 0.4], std=[1.0, 2.0, 3.0, 4.0], reference_count=7
        )
        path = save_checkpoint(
            tmp_path / "best.bin", params, spec, normalizer, extra={"generation": 3}
        )

        loaded, loaded_spec, loaded_normalizer, meta = load_checkpoint(path)
        assert np.array_equal(loaded, params)
        assert loaded_spec == spec
        assert np.array_equal(loaded_normalizer.mean, normalizer.mean)
        assert np.array_equal(loaded_normalizer.std, normalizer.std)
        assert meta["generation"] == 3
        assert sidecar_path(path).name == "best.meta.yaml"

    def test_binary_layout(self):
        payload = encode_parameters(np.array([1.5, -2.0]))
        assert len(payload) == 8 + 16
        assert payload[:8] == (2).to_bytes(8, "little")

    def test_truncated_payload(self):
        with pytest.raises(FormatError):
            decode_parameters(encode_parameters(np.ones(3))[:-4])

    def test_missing_checkpoint(self, tmp_path):
        with pytest.raises(CheckpointNotFoundError):
            load_checkpoint(tmp_path / "nothing.bin")

    def test_wrong_length_for_spec(self, tmp_path):
        with pytest.raises(InvalidInputError):
            save_checkpoint(tmp_path / "x.bin", np.zeros(3), MlpSpec(obs_dim=1, action_dim=1))
