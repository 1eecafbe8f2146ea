"""
Fixed-topology feedforward controller: tanh(W2 tanh(W1 norm(obs) + b1) + b2).

The genotype is one flat float64 vector laid out as W1 (hidden x obs, row
major), b1, W2 (action x hidden, row major), b2.
"""

from dataclasses import dataclass

import numpy as np

from evolab.utils.errors import InvalidInputError

ParameterVector = np.ndarray

STD_FLOOR = 1e-2


@dataclass(frozen=True)
class MlpSpec:
    """
    Shape of a three-layer feedforward network with tanh units.

    Attributes:
        obs_dim (int): Number of inputs.
        action_dim (int): Number of outputs.
        hidden_dim (int): Number of hidden units. Defaults to 50.
    """

    obs_dim: int
    action_dim: int
    hidden_dim: int = 50

    def __post_init__(self):
        for name in ("obs_dim", "action_dim", "hidden_dim"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {value}")

    @property
    def param_count(self) -> int:
        return param_count(self)


def param_count(spec: MlpSpec) -> int:
    """Number of weights and biases: obs*hidden + hidden + hidden*action + action."""
    return (
        spec.obs_dim * spec.hidden_dim
        + spec.hidden_dim
        + spec.hidden_dim * spec.action_dim
        + spec.action_dim
    )


@dataclass(frozen=True)
class ObsNormalizer:
    """
    Frozen reference statistics used to normalise observations.

    Attributes:
        mean (np.ndarray): Per-dimension mean of the reference batch.
        std (np.ndarray): Per-dimension std, floored at 1e-2.
        reference_count (int): Number of observations behind the statistics.
    """

    mean: np.ndarray
    std: np.ndarray
    reference_count: int = 0

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        std = np.maximum(np.array(self.std, dtype=float).reshape(-1), STD_FLOOR)
        if mean.shape != std.shape:
            raise InvalidInputError(f"mean {mean.shape} and std {std.shape} differ in shape")
        mean.setflags(write=False)
        std.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", std)

    @classmethod
    def identity(cls, obs_dim: int) -> "ObsNormalizer":
        """A normalizer that leaves observations untouched."""
        return cls(mean=np.zeros(obs_dim), std=np.ones(obs_dim), reference_count=0)

    def normalize(self, obs: np.ndarray) -> np.ndarray:
        return (obs - self.mean) / self.std


def as_parameter_vector(values, spec: MlpSpec | None = None) -> ParameterVector:
    """
    Validates a genotype.

    Args:
        values (array-like): Flat parameter values.
        spec (MlpSpec | None, optional): If given, the length must match its param_count.

    Returns:
        ParameterVector: A 1-D float64 array.

    Raises:
        InvalidInputError: On wrong shape, wrong length or non-finite entries.
    """
    params = np.asarray(values, dtype=float)
    if params.ndim != 1:
        raise InvalidInputError(f"parameters must be a flat vector, got shape {params.shape}")
    if spec is not None and params.size != spec.param_count:
        raise InvalidInputError(
            f"expected {spec.param_count} parameters for {spec}, got {params.size}"
        )
    if not np.all(np.isfinite(params)):
        raise InvalidInputError("parameters contain non-finite entries")
    return params


def unpack(spec: MlpSpec, params: ParameterVector):
    """Splits a genotype into (W1, b1, W2, b2) views."""
    o, h, a = spec.obs_dim, spec.hidden_dim, spec.action_dim
    cut1 = o * h
    cut2 = cut1 + h
    cut3 = cut2 + h * a
    return (
        params[:cut1].reshape(h, o),
        params[cut1:cut2],
        params[cut2:cut3].reshape(a, h),
        params[cut3:],
    )


def forward(spec: MlpSpec, params: ParameterVector, normalizer: ObsNormalizer, obs) -> np.ndarray:
    """
    Maps an observation to a bounded action.

    Args:
        spec (MlpSpec): Network shape.
        params (ParameterVector): Genotype of length spec.param_count.
        normalizer (ObsNormalizer): Frozen observation statistics.
        obs (array-like): Observation of length spec.obs_dim.

    Returns:
        np.ndarray: Action of length spec.action_dim, each component in [-1, 1].

    Raises:
        InvalidInputError: On any dimension mismatch.
    """
    obs = np.asarray(obs, dtype=float).reshape(-1)
    if obs.size != spec.obs_dim:
        raise InvalidInputError(f"expected {spec.obs_dim} observation values, got {obs.size}")
    if params.shape != (spec.param_count,):
        raise InvalidInputError(
            f"expected {spec.param_count} parameters, got shape {params.shape}"
        )
    if normalizer.mean.size != spec.obs_dim:
        raise InvalidInputError(
            f"normalizer covers {normalizer.mean.size} dimensions, network expects {spec.obs_dim}"
        )

    w1, b1, w2, b2 = unpack(spec, params)
    hidden = np.tanh(w1 @ normalizer.normalize(obs) + b1)
    return np.tanh(w2 @ hidden + b2)


@dataclass(frozen=True)
class Controller:
    """
    A network shape bundled with its normalizer; turns a genotype into a policy.

    Attributes:
        spec (MlpSpec): Network shape.
        normalizer (ObsNormalizer): Observation statistics frozen for the run.
    """

    spec: MlpSpec
    normalizer: ObsNormalizer

    def act(self, params: ParameterVector, obs) -> np.ndarray:
        return forward(self.spec, params, self.normalizer, obs)
