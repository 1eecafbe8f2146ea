"""
YAML run configuration mapped onto frozen dataclasses.

Every section is validated against the annotations of its dataclass: values
are converted to the annotated type where that is lossless, unknown keys are
rejected, and every error names the dotted field path and, when the value came
from a file, its line.
"""

import types
import typing
from dataclasses import dataclass
from dataclasses import field
from dataclasses import fields
from dataclasses import is_dataclass
from enum import Enum
from pathlib import Path

import yaml

from evolab.envs.base import EnvSpec
from evolab.envs.base import RewardVariant
from evolab.es.config import EsConfig
from evolab.utils.errors import ConfigError
from evolab.utils.errors import EvolabError
from evolab.variation.plan import VariationPlan


@dataclass(frozen=True)
class PolicyConfig:
    """
    Attributes:
        hidden_dim (int): Hidden units of the controller. Defaults to 50.
    """

    hidden_dim: int = 50


@dataclass(frozen=True)
class RunConfig:
    """
    Complete, serializable description of one experiment.

    Attributes:
        name (str): Condition name, also the run directory's name.
        env (EnvSpec): Environment and difficulty.
        reward_variant (RewardVariant): V5 (progress only) or V0 (with alive bonus).
        policy (PolicyConfig): Controller size; input and output sizes come from the environment.
        es (EsConfig): Evolution strategy hyperparameters.
        variation (VariationPlan): Perturbation amplitudes, modality and episode count.
        master_seed (int): Root of every random stream of the experiment.
        replication_count (int): Independent runs with derived seeds.
        output_dir (str): Parent directory of the run directory.
    """

    name: str = "run"
    env: EnvSpec = field(default_factory=EnvSpec)
    reward_variant: RewardVariant = RewardVariant.V5
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    es: EsConfig = field(default_factory=EsConfig)
    variation: VariationPlan = field(default_factory=VariationPlan)
    master_seed: int = 0
    replication_count: int = 10
    output_dir: str = "runs"

    def __post_init__(self):
        object.__setattr__(self, "reward_variant", RewardVariant(self.reward_variant))
        if self.replication_count < 1:
            raise ConfigError(
                f"replication_count must be >= 1, got {self.replication_count}",
                field="replication_count",
            )
        if self.master_seed < 0:
            raise ConfigError(
                f"master_seed must be >= 0, got {self.master_seed}", field="master_seed"
            )


type_mapping = {
    "int": int,
    "str": str,
    "bool": bool,
    "float": float,
}


def _coerce(value, annotation, path: str, lines: dict[str, int]):
    """Converts one value to its annotated type, or raises ConfigError."""
    line = lines.get(path)

    origin = typing.get_origin(annotation)
    if origin in (typing.Union, types.UnionType):
        options = typing.get_args(annotation)
        if value is None and type(None) in options:
            return None
        (inner,) = [option for option in options if option is not type(None)]
        return _coerce(value, inner, path, lines)

    if is_dataclass(annotation):
        return build_section(annotation, value, path, lines)

    if isinstance(annotation, type) and issubclass(annotation, Enum):
        try:
            return annotation(value)
        except ValueError:
            allowed = ", ".join(str(member.value) for member in annotation)
            raise ConfigError(f"{value!r} is not one of: {allowed}", field=path, line=line)

    expected = type_mapping.get(getattr(annotation, "__name__", ""))
    if expected is None:
        raise ConfigError(f"unsupported field type {annotation}", field=path, line=line)
    if expected is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"expected true/false, got {value!r}", field=path, line=line)
        return value
    if isinstance(value, bool) or value is None:
        raise ConfigError(f"expected {expected.__name__}, got {value!r}", field=path, line=line)
    if expected is int:
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if not isinstance(value, int):
            raise ConfigError(f"expected an integer, got {value!r}", field=path, line=line)
        return value
    if expected is float:
        # PyYAML resolves exponent literals without a dot, like 1e-3, to str.
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                raise ConfigError(f"expected a number, got {value!r}", field=path, line=line)
        if not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}", field=path, line=line)
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a string, got {value!r}", field=path, line=line)
    return value


def build_section(cls, data, path: str = "", lines: dict[str, int] | None = None):
    """
    Validates a mapping against a dataclass and instantiates it.

    Args:
        cls (type): The dataclass describing the section.
        data (dict | None): Raw values; None or a missing key keeps the default.
        path (str, optional): Dotted path of the section, for error messages.
        lines (dict[str, int] | None, optional): Line number of each dotted path.

    Returns:
        An instance of `cls`.

    Raises:
        ConfigError: On unknown keys, wrong types or values rejected by the dataclass.
    """
    lines = lines or {}
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(
            f"expected a mapping, got {type(data).__name__}", field=path, line=lines.get(path)
        )

    known = {f.name: f for f in fields(cls)}
    for key in data:
        if key not in known:
            key_path = f"{path}.{key}" if path else str(key)
            raise ConfigError(
                f"unknown key {key!r}; expected one of: {', '.join(known)}",
                field=key_path,
                line=lines.get(key_path),
            )

    kwargs = {}
    for key, value in data.items():
        key_path = f"{path}.{key}" if path else key
        kwargs[key] = _coerce(value, known[key].type, key_path, lines)

    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (EvolabError, ValueError, TypeError) as exc:
        raise ConfigError(str(exc), field=path, line=lines.get(path)) from exc


def _line_index(node, prefix: str = "") -> dict[str, int]:
    """Maps every dotted key path of a composed YAML mapping to its 1-based line."""
    index: dict[str, int] = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
            index[path] = key_node.start_mark.line + 1
            index.update(_line_index(value_node, path))
    return index


def parse_yaml(text: str, source: str = "<config>") -> tuple[dict, dict[str, int]]:
    """
    Parses a YAML document into a mapping and its line index.

    Raises:
        ConfigError: On YAML syntax errors or a non-mapping document.
    """
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark is not None else None
        raise ConfigError(f"{source}: {exc.problem}", line=line) from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    return data, _line_index(node)


def run_config_from_dict(data: dict, lines: dict[str, int] | None = None) -> RunConfig:
    return build_section(RunConfig, data, "", lines)


def load_run_config(path: str | Path) -> RunConfig:
    """
    Reads and validates a run configuration file.

    Raises:
        ConfigError: With field path and line number on any problem.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist")
    data, lines = parse_yaml(path.read_text(), str(path))
    return run_config_from_dict(data, lines)


def to_plain(value):
    """Converts a config dataclass tree to plain YAML-safe values."""
    if is_dataclass(value):
        return {f.name: to_plain(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    return value


def dump_run_config(config: RunConfig) -> str:
    return yaml.safe_dump(to_plain(config), sort_keys=False)


def apply_overrides(data: dict, overrides: dict, path: str = "overrides") -> dict:
    """
    Returns a deep copy of `data` with dotted-key overrides applied.

    Args:
        data (dict): Raw configuration mapping.
        overrides (dict): e.g. {"variation.episodes_per_eval": 5}.
        path (str, optional): Where the overrides came from, for error messages.
    """
    merged = yaml.safe_load(yaml.safe_dump(data))
    for dotted, value in (overrides or {}).items():
        keys = str(dotted).split(".")
        target = merged
        for key in keys[:-1]:
            current = target.setdefault(key, {})
            if not isinstance(current, dict):
                raise ConfigError(f"cannot descend into {key!r}", field=f"{path}.{dotted}")
            target = current
        target[keys[-1]] = value
    return merged
