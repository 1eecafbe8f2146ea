"""
Condition sweeps.

A sweep document names a base run configuration and the conditions to compare,
either listed explicitly as dotted-key overrides or taken from a preset grid:

    name: action-variation
    base: {env: {id: cart_walker}, reward_variant: V0, es: {generations: 100}}
    replications: 10
    grid: action_variation        # or episode_counts
    conditions:
      - name: fixed-.45
        overrides: {variation.sigma_act: 0.45}

Every condition runs all replications with the base master seed, so conditions
face the same seeds. The sweep writes one run directory per condition, a
long-format results CSV and a Kruskal-Wallis comparison of the conditions.
"""

from pathlib import Path

from colorama import Fore
from colorama import Style

from evolab.harness.config import apply_overrides
from evolab.harness.config import parse_yaml
from evolab.harness.config import run_config_from_dict
from evolab.harness.config import RunConfig
from evolab.harness.runner import run_experiment
from evolab.stats.kruskal import format_p
from evolab.stats.kruskal import kruskal_wallis
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.errors import ConfigError
from evolab.utils.errors import DegenerateDataError
from evolab.utils.errors import InvalidInputError
from evolab.utils.logging import fancy_step_tracker
from evolab.variation.plan import CONDITION_PRESETS
from evolab.variation.plan import EPISODE_COUNT_GRID

SWEEP_RESULTS_HEADER = ("condition", "replication", "final_fitness", "mean_iev")
SWEEP_KRUSKAL_HEADER = ("conditions", "df", "h", "p", "p_report", "tie_correction", "note")

SWEEP_KEYS = ("name", "base", "base_config", "replications", "grid", "conditions")


def action_variation_grid() -> dict[str, dict]:
    grid = {}
    for name, preset in CONDITION_PRESETS.items():
        overrides = {"variation.sigma_act": None, "variation.sigma_act_max": None}
        overrides.update({f"variation.{key}": value for key, value in preset.items()})
        grid[name] = overrides
    return grid


def episode_count_grid() -> dict[str, dict]:
    return {f"episodes-{n}": {"variation.episodes_per_eval": n} for n in EPISODE_COUNT_GRID}


PRESET_GRIDS = {
    "action_variation": action_variation_grid,
    "episode_counts": episode_count_grid,
}


class Condition:
    """
    One experimental condition of a sweep.

    Creating a Condition inside a `with Sweep(...)` block registers it with
    that sweep.

    Attributes:
        name (str): Condition name, also its run directory's name.
        overrides (dict): Dotted-key changes to the base configuration.
    """

    def __init__(self, name: str, overrides: dict | None = None):
        self.name = str(name)
        self.overrides = dict(overrides or {})
        Sweep.register_condition(self)

    def __repr__(self):
        return self.name

    def config(self, base: dict, lines: dict[str, int], replications: int | None) -> RunConfig:
        """
        Builds the validated RunConfig of this condition.

        Raises:
            ConfigError: If an override names an unknown field or an invalid value.
        """
        data = apply_overrides(base, self.overrides, path=f"conditions.{self.name}")
        data["name"] = self.name
        if replications is not None:
            data["replication_count"] = replications
        try:
            return run_config_from_dict(data, lines)
        except ConfigError as exc:
            raise ConfigError(f"condition {self.name!r}: {exc}") from exc


class Sweep:
    """
    A set of conditions compared over the same replications.

    Attributes:
        current_sweep (Sweep): Class-level variable to track the active Sweep context.
        name (str): Name of the sweep, also its output directory's name.
        base (dict): Raw base configuration shared by every condition.
        lines (dict[str, int]): Line numbers of the base configuration's keys.
        replications (int | None): Overrides the base replication count.
        conditions (list[Condition]): The conditions, in registration order.
    """

    current_sweep = None

    def __init__(
        self,
        name: str,
        base: dict,
        lines: dict[str, int] | None = None,
        replications: int | None = None,
    ):
        self.name = name
        self.base = base
        self.lines = lines or {}
        self.replications = replications
        self.conditions = []

    def __enter__(self):
        Sweep.current_sweep = self
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        Sweep.current_sweep = None

    def add_condition(self, condition: Condition):
        if any(existing.name == condition.name for existing in self.conditions):
            raise ConfigError(f"duplicate condition name {condition.name!r}", field="conditions")
        self.conditions.append(condition)

    @staticmethod
    def register_condition(condition: Condition):
        if Sweep.current_sweep is not None:
            Sweep.current_sweep.add_condition(condition)

    def configs(self) -> list[RunConfig]:
        """Validates every condition before anything runs."""
        if len(self.conditions) < 2:
            raise ConfigError(
                f"a sweep needs at least 2 conditions, got {len(self.conditions)}",
                field="conditions",
            )
        return [c.config(self.base, self.lines, self.replications) for c in self.conditions]

    def run(self, sweep_dir: str | Path, workers: int = 1, verbose: int = 0) -> Path:
        """
        Runs every condition and writes the comparison.

        Args:
            sweep_dir (str | Path): Output directory; one sub-directory per condition.
            workers (int, optional): Worker processes for candidate evaluation.
            verbose (int, optional): The verbosity level. Defaults to 0 (no output).

        Returns:
            Path: The long-format results CSV.
        """
        sweep_dir = Path(sweep_dir)
        configs = self.configs()

        rows, groups = [], []
        for index, (condition, config) in enumerate(zip(self.conditions, configs)):
            if verbose > 0:
                fancy_step_tracker(index, len(configs), label=f"CONDITION {condition}:")
            outcomes = run_experiment(config, sweep_dir / condition.name, workers, verbose)
            groups.append([o.final_center_fitness for o in outcomes])
            rows.extend(
                (condition.name, o.replication, o.final_center_fitness, o.mean_iev)
                for o in outcomes
            )

        results = write_csv_atomic(sweep_dir / "sweep_results.csv", SWEEP_RESULTS_HEADER, rows)

        names = ";".join(c.name for c in self.conditions)
        try:
            kw = kruskal_wallis(groups)
            kw_row = (names, kw.df, kw.h, kw.p, format_p(kw.p), kw.tie_correction, "")
            if verbose > 0:
                print(Fore.RED + f"H({kw.df})={kw.h:.3f}, {format_p(kw.p)}" + Style.RESET_ALL)
        except (DegenerateDataError, InvalidInputError) as exc:
            kw_row = (names, len(groups) - 1, None, None, "", None, str(exc))
        write_csv_atomic(sweep_dir / "sweep_kruskal.csv", SWEEP_KRUSKAL_HEADER, [kw_row])
        return results


def load_sweep(path: str | Path) -> Sweep:
    """
    Reads a sweep document and registers its conditions.

    Raises:
        ConfigError: On unknown keys, an unknown grid, or an invalid condition.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"sweep file {path} does not exist")
    data, lines = parse_yaml(path.read_text(), str(path))
    for key in data:
        if key not in SWEEP_KEYS:
            raise ConfigError(
                f"unknown key {key!r}; expected one of: {', '.join(SWEEP_KEYS)}",
                field=str(key),
                line=lines.get(str(key)),
            )

    if "base" in data and "base_config" in data:
        raise ConfigError("give either base or base_config, not both", field="base_config")
    if "base_config" in data:
        base_path = path.parent / str(data["base_config"])
        if not base_path.is_file():
            raise ConfigError(f"base config {base_path} does not exist", field="base_config")
        base, base_lines = parse_yaml(base_path.read_text(), str(base_path))
    else:
        base = data.get("base") or {}
        if not isinstance(base, dict):
            raise ConfigError("base must be a mapping", field="base", line=lines.get("base"))
        base_lines = {k[len("base.") :]: v for k, v in lines.items() if k.startswith("base.")}

    replications = data.get("replications")
    if replications is not None and (
        isinstance(replications, bool) or not isinstance(replications, int)
    ):
        raise ConfigError(
            f"replications must be an integer, got {replications!r}",
            field="replications",
            line=lines.get("replications"),
        )

    grid = data.get("grid")
    if grid is not None and grid not in PRESET_GRIDS:
        raise ConfigError(
            f"unknown grid {grid!r}; expected one of: {', '.join(PRESET_GRIDS)}",
            field="grid",
            line=lines.get("grid"),
        )

    entries = data.get("conditions") or []
    if not isinstance(entries, list):
        raise ConfigError(
            "conditions must be a list", field="conditions", line=lines.get("conditions")
        )

    with Sweep(str(data.get("name", path.stem)), base, base_lines, replications) as sweep:
        if grid is not None:
            for name, overrides in PRESET_GRIDS[grid]().items():
                Condition(name, overrides)
        for index, entry in enumerate(entries):
            if not isinstance(entry, dict) or "name" not in entry:
                raise ConfigError("every condition needs a name", field=f"conditions[{index}]")
            unknown = set(entry) - {"name", "overrides"}
            if unknown:
                raise ConfigError(
                    f"unknown key(s) {', '.join(sorted(unknown))}", field=f"conditions[{index}]"
                )
            overrides = entry.get("overrides") or {}
            if not isinstance(overrides, dict):
                raise ConfigError("overrides must be a mapping", field=f"conditions[{index}]")
            Condition(entry["name"], overrides)
    return sweep


def cmd_sweep(
    sweep_path: str | Path,
    run_dir: str | Path | None = None,
    workers: int = 1,
    verbose: int = 0,
) -> Path:
    """
    Runs a condition sweep and compares the conditions.

    Args:
        sweep_path (str | Path): The sweep document.
        run_dir (str | Path | None, optional): Output directory. Defaults to
            `<output_dir>/<sweep name>` of the base configuration.
        workers (int, optional): Worker processes for candidate evaluation.
        verbose (int, optional): The verbosity level. Defaults to 0 (no output).

    Returns:
        Path: The long-format results CSV; `sweep_kruskal.csv` sits next to it.
    """
    sweep = load_sweep(sweep_path)
    configs = sweep.configs()
    if run_dir is None:
        run_dir = Path(configs[0].output_dir) / sweep.name
    return sweep.run(run_dir, workers, verbose)
