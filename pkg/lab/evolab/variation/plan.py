from dataclasses import dataclass
from enum import Enum

from evolab.utils.errors import InvalidInputError

STANDARD_SIGMA_ACT = 0.01


class Modality(str, Enum):
    """
    How the action perturbation amplitude evolves.

    fixed: constant. incremental1: ramps linearly from 0 to the maximum over the
    steps of every episode. incremental2: ramps linearly from 0 to the maximum
    over the generations of the run.
    """

    FIXED = "fixed"
    INCREMENTAL1 = "incremental1"
    INCREMENTAL2 = "incremental2"


class NoiseFamily(str, Enum):
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class VariationPlan:
    """
    The experimental condition an individual is evaluated under.

    Attributes:
        sigma_init (float): Std of the initial-state perturbation.
        action_modality (Modality): Schedule of the per-step action perturbation.
        sigma_act (float | None): Amplitude under the fixed modality (default 0.01).
        sigma_act_max (float | None): Peak amplitude under the incremental modalities.
        ramp_generations (int | None): Length of the incremental2 ramp.
        episodes_per_eval (int): Episodes averaged into one fitness value.
        noise_family (NoiseFamily): Distribution of the perturbations.
    """

    sigma_init: float = 0.1
    action_modality: Modality = Modality.FIXED
    sigma_act: float | None = None
    sigma_act_max: float | None = None
    ramp_generations: int | None = None
    episodes_per_eval: int = 1
    noise_family: NoiseFamily = NoiseFamily.GAUSSIAN

    def __post_init__(self):
        modality = Modality(self.action_modality)
        object.__setattr__(self, "action_modality", modality)
        object.__setattr__(self, "noise_family", NoiseFamily(self.noise_family))

        if modality is Modality.FIXED:
            if self.sigma_act_max is not None:
                raise InvalidInputError("sigma_act_max is only used by the incremental modalities")
            if self.sigma_act is None:
                object.__setattr__(self, "sigma_act", STANDARD_SIGMA_ACT)
        else:
            if self.sigma_act is not None:
                raise InvalidInputError(
                    f"sigma_act is only used by the fixed modality, not {modality.value}"
                )
            if self.sigma_act_max is None:
                raise InvalidInputError(f"{modality.value} needs sigma_act_max")

        for name in ("sigma_init", "sigma_act", "sigma_act_max"):
            value = getattr(self, name)
            if value is not None and not (value >= 0 and value != float("inf")):
                raise InvalidInputError(f"{name} must be finite and >= 0, got {value}")
        if self.ramp_generations is not None and self.ramp_generations < 1:
            raise InvalidInputError(
                f"ramp_generations must be positive, got {self.ramp_generations}"
            )
        if self.episodes_per_eval < 1:
            raise InvalidInputError(
                f"episodes_per_eval must be positive, got {self.episodes_per_eval}"
            )

    def with_ramp(self, generations: int) -> "VariationPlan":
        """Fills an unset incremental2 ramp length with the run's generation count."""
        if self.ramp_generations is not None:
            return self
        fields = dict(self.__dict__)
        fields["ramp_generations"] = generations
        return VariationPlan(**fields)


def sigma_act_at(plan: VariationPlan, t: int, episode_length: int, generation: int) -> float:
    """
    Action perturbation amplitude at step t of an episode in a given generation.

    Args:
        plan (VariationPlan): The experimental condition.
        t (int): 0-based step index, 0 <= t < episode_length.
        episode_length (int): Episode horizon T.
        generation (int): 0-based generation index.

    Returns:
        float: sigma_act (fixed), sigma_act_max * t / (T - 1) (incremental1) or
        sigma_act_max * min(1, g / ramp_generations) (incremental2).

    Raises:
        InvalidInputError: On out-of-range indices, T < 2 under incremental1, or a
            missing ramp length under incremental2.
    """
    if not 0 <= t < episode_length:
        raise InvalidInputError(f"step {t} outside episode of length {episode_length}")
    if generation < 0:
        raise InvalidInputError(f"generation must be >= 0, got {generation}")

    if plan.action_modality is Modality.FIXED:
        return plan.sigma_act
    if plan.action_modality is Modality.INCREMENTAL1:
        if episode_length < 2:
            raise InvalidInputError("incremental1 needs episodes of at least 2 steps")
        return plan.sigma_act_max * t / (episode_length - 1)
    if plan.ramp_generations is None:
        raise InvalidInputError("incremental2 needs ramp_generations")
    return plan.sigma_act_max * min(1.0, generation / plan.ramp_generations)


def peak_sigma_act(plan: VariationPlan, episode_length: int, generation: int) -> float:
    """Largest amplitude reached during one episode of the given generation."""
    return sigma_act_at(plan, episode_length - 1, episode_length, generation)


# Action-variation conditions compared in the robustness study.
CONDITION_PRESETS: dict[str, dict] = {
    "standard": {"action_modality": "fixed", "sigma_act": 0.01},
    "fixed-.3": {"action_modality": "fixed", "sigma_act": 0.3},
    "fixed-.6": {"action_modality": "fixed", "sigma_act": 0.6},
    "incremental1-.36": {"action_modality": "incremental1", "sigma_act_max": 0.36},
    "incremental1-.55": {"action_modality": "incremental1", "sigma_act_max": 0.55},
    "incremental2-.55": {"action_modality": "incremental2", "sigma_act_max": 0.55},
}

EPISODE_COUNT_GRID: tuple[int, ...] = (1, 2, 3, 5, 10)


def plan_with_preset(plan: VariationPlan, preset: str) -> VariationPlan:
    """
    Replaces the action-perturbation part of a plan with a named condition.

    Raises:
        InvalidInputError: If the preset name is unknown.
    """
    if preset not in CONDITION_PRESETS:
        raise InvalidInputError(
            f"unknown condition {preset!r}; known: {', '.join(CONDITION_PRESETS)}"
        )
    fields = dict(plan.__dict__)
    fields.update({"sigma_act": None, "sigma_act_max": None})
    fields.update(CONDITION_PRESETS[preset])
    return VariationPlan(**fields)
