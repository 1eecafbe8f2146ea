from .base import dump_trajectory
from .base import EnvId
from .base import EnvSpec
from .base import Environment
from .base import episode_return
from .base import HARD_THETA_MAX
from .base import RewardVariant
from .base import StepResult
from .cart_walker import CartWalker
from .linear_mover import LinearMover
from .noise_only import NoiseOnly
from .static_function import StaticFunction

ENVIRONMENTS = {
    EnvId.LINEAR_MOVER: LinearMover,
    EnvId.CART_WALKER: CartWalker,
    EnvId.NOISE_ONLY: NoiseOnly,
    EnvId.STATIC_FUNCTION: StaticFunction,
}


def make_env(spec: EnvSpec, variant: RewardVariant = RewardVariant.V5) -> Environment:
    """
    Creates a fresh environment instance.

    Args:
        spec (EnvSpec): Which environment and its parameters.
        variant (RewardVariant, optional): Reward variant. Defaults to V5.

    Returns:
        Environment: An idle instance, owned by the caller.
    """
    return ENVIRONMENTS[EnvId(spec.id)](spec, variant)
