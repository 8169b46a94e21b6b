"""Scenario configuration files.

This module reads and writes the YAML scenario files used by the command
line. A file mirrors Scenario with the sections ``model``, ``grid``,
``initial``, ``control``, ``monitors`` and an optional ``sweep``, plus the
scalar keys ``name`` and ``preset``:

    name: weak-competition
    preset: ClassicalLV
    model: {a1: 3.0, b1: 2.0, c1: 1.0, a2: 2.0, b2: 1.0, c2: 2.0}
    grid: {cells: [128], lengths: [1.0]}
    initial: {kind: random_uniform, lo: 0.1, hi: 1.0, rng_seed: 0}
    control: {t_end: 200.0}
    sweep:
      axes: {m2: [0.5, 1.0, 3.0]}
      replicate_seeds: [0, 1]

Keys missing from ``model`` take the preset defaults; unknown keys are
rejected everywhere.
"""

import io
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from pydantic import Field, ValidationError
from ruamel.yaml import YAML, YAMLError

from lvadvect.exceptions import ConfigurationError
from lvadvect.harness import build_preset
from lvadvect.models.common import FrozenModel
from lvadvect.models.control import MonitorConfig, StepControl
from lvadvect.models.mesh import Grid
from lvadvect.models.scenario import (
    InitialData,
    Preset,
    RandomUniformInitial,
    Scenario,
    SweepPlan,
    SweepSettings,
)
from lvadvect.utils import describe_validation_error

logger = logging.getLogger(__name__)


class ConfigFile(FrozenModel):
    """Parsed scenario file.

    ``model`` stays a plain mapping until ``scenario()`` so that preset
    defaults fill the keys the file leaves out.
    """

    name: str = Field(default="scenario", min_length=1, description="Scenario label")
    preset: Preset = Field(default=Preset.CUSTOM, description="Preset tag")
    model: dict[str, Any] = Field(default_factory=dict, description="ModelSpec overrides")
    grid: Grid = Field(default_factory=Grid)
    initial: InitialData = Field(default_factory=RandomUniformInitial)
    control: StepControl = Field(default_factory=StepControl)
    monitors: MonitorConfig = Field(default_factory=MonitorConfig)
    sweep: SweepSettings | None = Field(default=None, description="Sweep section")

    def scenario(self) -> Scenario:
        """Scenario described by the file.

        Raises:
            ConfigurationError: If the model section breaks the preset or the
                scenario is inconsistent
        """
        try:
            return build_preset(
                self.preset,
                self.model,
                name=self.name,
                grid=self.grid,
                initial_data=self.initial,
                ctrl=self.control,
                monitors=self.monitors,
            )
        except ValidationError as e:
            raise ConfigurationError(describe_validation_error(e)) from e

    def sweep_plan(self) -> SweepPlan:
        """Sweep plan from the scenario and the sweep section.

        Raises:
            ConfigurationError: If the file has no sweep section
        """
        if self.sweep is None:
            raise ConfigurationError("config file has no sweep section")
        return SweepPlan(base=self.scenario(), **dict(self.sweep))


def _yaml() -> YAML:
    yaml = YAML(typ="safe")
    yaml.default_flow_style = False
    return yaml


def _parse_value(raw: str) -> Any:
    try:
        return _yaml().load(raw)
    except YAMLError:
        return raw


def apply_overrides(data: dict[str, Any], overrides: Sequence[str]) -> dict[str, Any]:
    """Apply "dotted.key=value" overrides; values are parsed as YAML scalars.

    Example:
        >>> apply_overrides({"control": {"t_end": 10}}, ["control.t_end=50", "model.chi=2"])
        {'control': {'t_end': 50}, 'model': {'chi': 2}}
    """
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep or not key.strip():
            raise ConfigurationError(f"override must look like section.key=value, got: {item}")
        node = data
        parts = key.strip().split(".")
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigurationError(f"override {key} descends into a non-mapping value")
            node = child
        node[parts[-1]] = _parse_value(raw.strip())
    return data


def parse_config(text: str, overrides: Sequence[str] = ()) -> ConfigFile:
    """Parse YAML text into a ConfigFile.

    Raises:
        ConfigurationError: On YAML syntax errors, a non-mapping document or
            invalid sections; the message names the offending keys
    """
    try:
        data = _yaml().load(text)
    except YAMLError as e:
        raise ConfigurationError(f"malformed YAML: {e}") from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError("config file must contain a mapping at the top level")
    data = apply_overrides(data, overrides)

    try:
        return ConfigFile.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(describe_validation_error(e)) from e


def load_config(path: Path | str, overrides: Sequence[str] = ()) -> ConfigFile:
    """Load a YAML scenario file.

    Args:
        path: File to read
        overrides: "dotted.key=value" replacements applied before validation

    Returns:
        Validated ConfigFile

    Raises:
        ConfigurationError: If the file cannot be read or is invalid
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    logger.debug(f"Loading config {path}")
    return parse_config(text, overrides)


def config_document(scenario: Scenario, sweep: SweepSettings | None = None) -> dict[str, Any]:
    """Plain mapping of a scenario (and sweep section) in file layout."""
    document: dict[str, Any] = {
        "name": scenario.name,
        "preset": scenario.preset.value,
        "model": scenario.spec.model_dump(mode="json"),
        "grid": scenario.grid.model_dump(mode="json"),
        "initial": scenario.initial_data.model_dump(mode="json"),
        "control": scenario.ctrl.model_dump(mode="json"),
        "monitors": scenario.monitors.model_dump(mode="json"),
    }
    if sweep is not None:
        document["sweep"] = sweep.model_dump(mode="json", exclude={"base"})
    return document


def dump_config(
    scenario: Scenario, path: Path | str | None = None, sweep: SweepSettings | None = None
) -> str:
    """Serialize a scenario as YAML; load_config reproduces it exactly.

    Args:
        scenario: Scenario to write
        path: Optional file to write the text to
        sweep: Optional sweep section

    Returns:
        YAML text
    """
    stream = io.StringIO()
    _yaml().dump(config_document(scenario, sweep), stream)
    text = stream.getvalue()
    if path is not None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
    return text
