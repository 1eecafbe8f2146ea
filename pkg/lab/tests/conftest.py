import numpy as np
import pytest
import yaml

from evolab.policy.mlp import Controller
from evolab.policy.mlp import MlpSpec
from evolab.policy.mlp import ObsNormalizer


def write_yaml(path, data) -> str:
    path.write_text(yaml.safe_dump(data, sort_keys=False))
    return str(path)


@pytest.fixture
def static_config(tmp_path):
    """A fast static_function run configuration on disk."""

    def make(**overrides):
        data = {
            "name": "static",
            "env": {"id": "static_function", "dim": 5, "target_seed": 3},
            "es": {"population_size": 10, "generations": 20, "checkpoint_every": 5},
            "master_seed": 11,
            "replication_count": 3,
            "output_dir": str(tmp_path / "runs"),
        }
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        return write_yaml(tmp_path / f"{data['name']}.yaml", data)

    return make


@pytest.fixture
def tiny_controller():
    """Controller for one-dimensional observations and actions."""

    def make(hidden_dim: int = 2):
        spec = MlpSpec(obs_dim=1, action_dim=1, hidden_dim=hidden_dim)
        return Controller(spec=spec, normalizer=ObsNormalizer.identity(1)), np.zeros(
            spec.param_count
        )

    return make
