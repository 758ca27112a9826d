"""Scenario configuration files (JSON)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .chain import TransitionRule
from .errors import ConfigError
from .frequency import Portfolio
from .simulation import SimConfig

SCHEME_NAMES = ("pno", "ppos", "pfos", "poi", "debias")


@dataclass(frozen=True)
class PfosOptions:
    q: float | None = None
    init: str = "pno"
    tolerance: float = 1e-10
    max_cycles: int = 500

    @classmethod
    def from_dict(cls, spec: Mapping[str, Any]) -> "PfosOptions":
        if not isinstance(spec, Mapping):
            raise ConfigError("pfos must be an object")
        unknown = set(spec) - {"q", "init", "tolerance", "max_cycles"}
        if unknown:
            raise ConfigError(f"pfos has unknown field(s): {', '.join(sorted(unknown))}")
        q = spec.get("q")
        if q is not None and (not isinstance(q, (int, float)) or isinstance(q, bool) or q <= 0):
            raise ConfigError("pfos.q must be a positive number or null")
        init = spec.get("init", "pno")
        if init not in ("pno", "ppos"):
            raise ConfigError("pfos.init must be 'pno' or 'ppos'")
        tol = spec.get("tolerance", 1e-10)
        if not isinstance(tol, (int, float)) or tol <= 0:
            raise ConfigError("pfos.tolerance must be a positive number")
        cycles = spec.get("max_cycles", 500)
        if not isinstance(cycles, int) or isinstance(cycles, bool) or cycles < 1:
            raise ConfigError("pfos.max_cycles must be a positive integer")
        return cls(None if q is None else float(q), init, float(tol), cycles)

    def to_dict(self) -> dict:
        return {"q": self.q, "init": self.init, "tolerance": self.tolerance, "max_cycles": self.max_cycles}


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    portfolio: Portfolio
    rule: TransitionRule
    schemes: tuple[str, ...] = ("pno", "ppos", "pfos", "poi")
    pfos: PfosOptions = field(default_factory=PfosOptions)
    quadrature_nodes: int = 64
    simulation: SimConfig | None = None
    output: str | None = None
    weights_approximated: bool = False
    description: str = ""

    @classmethod
    def from_dict(cls, spec: Mapping[str, Any], default_name: str = "scenario") -> "ScenarioConfig":
        if not isinstance(spec, Mapping):
            raise ConfigError("scenario config must be a JSON object")
        if "portfolio" not in spec:
            raise ConfigError("missing field 'portfolio'")
        if "rule" not in spec:
            raise ConfigError("missing field 'rule'")
        portfolio = Portfolio.from_dict(spec["portfolio"])
        rule_spec = spec["rule"]
        if not isinstance(rule_spec, Mapping):
            raise ConfigError("rule must be an object")
        for key in ("levels", "penalty"):
            value = rule_spec.get(key)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"rule.{key} must be an integer")
        rule = TransitionRule(rule_spec["levels"], rule_spec["penalty"])

        schemes = spec.get("schemes", list(cls.schemes))
        if not isinstance(schemes, list) or not schemes:
            raise ConfigError("schemes must be a non-empty list")
        for name in schemes:
            if name not in SCHEME_NAMES:
                raise ConfigError(f"schemes: unknown scheme {name!r}; expected one of {', '.join(SCHEME_NAMES)}")

        nodes = spec.get("quadrature_nodes", 64)
        if not isinstance(nodes, int) or isinstance(nodes, bool) or nodes < 2:
            raise ConfigError("quadrature_nodes must be an integer >= 2")
        sim = spec.get("simulation")
        return cls(
            name=str(spec.get("name", default_name)),
            portfolio=portfolio,
            rule=rule,
            schemes=tuple(dict.fromkeys(schemes)),
            pfos=PfosOptions.from_dict(spec.get("pfos", {})),
            quadrature_nodes=nodes,
            simulation=None if sim is None else SimConfig.from_dict(sim),
            output=spec.get("output"),
            weights_approximated=bool(spec.get("weights_approximated", False)),
            description=str(spec.get("description", "")),
        )

    def with_overrides(self, quadrature_nodes: int | None = None, seed: int | None = None) -> "ScenarioConfig":
        cfg = self
        if quadrature_nodes is not None:
            if quadrature_nodes < 2:
                raise ConfigError("quadrature_nodes must be an integer >= 2")
            cfg = replace(cfg, quadrature_nodes=quadrature_nodes)
        if seed is not None and cfg.simulation is not None:
            cfg = replace(cfg, simulation=replace(cfg.simulation, seed=seed))
        return cfg

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "portfolio": self.portfolio.to_dict(),
            "rule": self.rule.to_dict(),
            "schemes": list(self.schemes),
            "pfos": self.pfos.to_dict(),
            "quadrature_nodes": self.quadrature_nodes,
            "simulation": None if self.simulation is None else self.simulation.to_dict(),
            "weights_approximated": self.weights_approximated,
        }


def bundled_scenarios() -> list[str]:
    root = resources.files("bonus_malus") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_config_path(path: str | Path) -> Path:
    """A filesystem path, or the name of a bundled scenario such as ``scenario-1``."""
    p = Path(path)
    if p.exists():
        return p
    name = p.name[:-5] if p.name.endswith(".json") else p.name
    if str(p.parent) in ("", ".") and name in bundled_scenarios():
        return Path(str(resources.files("bonus_malus") / "scenarios" / f"{name}.json"))
    raise ConfigError(f"config file not found: {path}")


def load_config(path: str | Path) -> ScenarioConfig:
    p = resolve_config_path(path)
    try:
        spec = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ConfigError(f"{p}: {exc}") from exc
    return ScenarioConfig.from_dict(spec, default_name=p.stem)
