import numpy as np

from evolab.envs.base import EnvSpec
from evolab.envs.base import Environment
from evolab.envs.base import RewardVariant
from evolab.utils.errors import InvalidInputError
from evolab.utils.errors import ProtocolViolationError
from evolab.utils.seeding import Stream
from evolab.utils.seeding import stream_rng


class StaticFunction(Environment):
    """
    Scores the raw genotype directly: fitness(theta) = -||theta - target||^2.

    There are no episodes and no policy; the genotype has `spec.dim` entries and
    the target is drawn uniformly from [-0.5, 0.5] with `spec.target_seed`.
    """

    evaluates_genotype = True
    state_labels = ()

    def __init__(self, spec: EnvSpec, variant: RewardVariant = RewardVariant.V5):
        super().__init__(spec, variant)
        self.dim = spec.dim
        self.target = stream_rng(spec.target_seed, Stream.TARGET).uniform(-0.5, 0.5, spec.dim)

    def initial_state(self) -> np.ndarray:
        return np.zeros(0)

    def perturbation_mask(self) -> np.ndarray:
        return np.zeros(0, dtype=bool)

    def observe(self) -> np.ndarray:
        return np.zeros(0)

    def advance(self, action: np.ndarray, rng: np.random.Generator) -> tuple[float, bool]:
        raise ProtocolViolationError("static_function has no episodes")

    def reset(self, rng: np.random.Generator, sigma_init: float = 0.0) -> np.ndarray:
        raise ProtocolViolationError("static_function has no episodes; use fitness()")

    def fitness(self, params) -> float:
        """
        Scores a genotype.

        Args:
            params (array-like): Genotype of length `dim`.

        Returns:
            float: Minus the squared distance to the target.
        """
        params = np.asarray(params, dtype=float)
        if params.shape != (self.dim,):
            raise InvalidInputError(
                f"static_function expects a genotype of length {self.dim}, got shape {params.shape}"
            )
        return -float(np.sum((params - self.target) ** 2))
