"""JSON run configuration: loading, validation and re-emission.

One document fully describes a system, its costs, optional numerical and
optimizer overrides, and optional scenario age vectors (positional, in
component order). The schema ships as ``dyninspect/data/config.schema.json``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from importlib import resources
from pathlib import Path

import jsonschema

from .component import ComponentModel, validate_component_fields
from .cost import CostParams
from .errors import ConfigError
from .kernels import ShockProcess
from .numerics import DEFAULT_NUMERICS, NumericsConfig
from .optimizer import DEFAULT_OPTIMIZER, OptimizerConfig
from .system import SystemModel, Topology

BUNDLED = ("series3", "parallel2")


@dataclass(frozen=True)
class RunConfig:
    system: SystemModel
    costs: CostParams
    numerics: NumericsConfig = DEFAULT_NUMERICS
    optimizer: OptimizerConfig = DEFAULT_OPTIMIZER
    scenarios: tuple[tuple[float, ...], ...] | None = None
    name: str | None = None
    units: dict = field(default_factory=dict, compare=False)

    def with_parameterization(self, mode: str | None) -> "RunConfig":
        if mode is None:
            return self
        return replace(self, numerics=replace(self.numerics, gamma_parameterization=mode))


def schema() -> dict:
    return json.loads(resources.files("dyninspect.data").joinpath("config.schema.json").read_text())


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _build(cls, data, prefix):
    try:
        return cls(**data)
    except ConfigError as exc:
        raise ConfigError([(p if p.startswith(prefix) else prefix + p, r) for p, r in exc.problems]) from None


def config_from_dict(data: dict) -> RunConfig:
    """Validate a parsed document and build a :class:`RunConfig`.

    All schema violations are reported together, then semantic checks
    (negative damage mass, scenario lengths) run on a structurally valid
    document.
    """
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        raise ConfigError([(_path(e.absolute_path), e.message) for e in errors])

    problems = []
    for i, comp in enumerate(data["components"]):
        problems += validate_component_fields(comp, prefix=f"components[{i}].")
    n = len(data["components"])
    for i, ages in enumerate(data.get("scenarios") or []):
        if len(ages) != n:
            problems.append((f"scenarios[{i}]", f"has {len(ages)} ages but the system has {n} components"))
    if problems:
        raise ConfigError(problems)

    system = SystemModel(
        Topology(data["topology"]),
        tuple(ComponentModel(**c) for c in data["components"]),
        ShockProcess(float(data["shock_rate"])),
    )
    costs = _build(CostParams, data["costs"], "costs.")
    numerics = _build(NumericsConfig, {**asdict(DEFAULT_NUMERICS), **data.get("numerics", {})}, "numerics.")
    optimizer = _build(OptimizerConfig, {**asdict(DEFAULT_OPTIMIZER), **data.get("optimizer", {})}, "optimizer.")
    scenarios = data.get("scenarios")
    if scenarios is not None:
        scenarios = tuple(tuple(float(a) for a in ages) for ages in scenarios)
    return RunConfig(system, costs, numerics, optimizer, scenarios, data.get("name"), dict(data.get("units", {})))


def config_to_dict(cfg: RunConfig) -> dict:
    out = {}
    if cfg.name is not None:
        out["name"] = cfg.name
    out["topology"] = cfg.system.topology.value
    out["shock_rate"] = cfg.system.shock.rate
    if cfg.units:
        out["units"] = dict(cfg.units)
    out["components"] = [asdict(c) for c in cfg.system.components]
    out["costs"] = asdict(cfg.costs)
    out["numerics"] = {f.name: getattr(cfg.numerics, f.name) for f in fields(NumericsConfig)}
    out["optimizer"] = {f.name: getattr(cfg.optimizer, f.name) for f in fields(OptimizerConfig)}
    if cfg.scenarios is not None:
        out["scenarios"] = [list(s) for s in cfg.scenarios]
    return out


def emit_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("", f"parse error: {exc}")]) from None
    if not isinstance(data, dict):
        raise ConfigError([("", "top level must be a JSON object")])
    return config_from_dict(data)


def load_config(path) -> RunConfig:
    """Load a config file; a bare bundled name (``series3``, ``parallel2``) also works."""
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return parse_config(resources.files("dyninspect.data").joinpath(f"{path}.json").read_text())
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError([("", f"cannot read {path}: {exc.strerror}")]) from None
    return parse_config(text)
