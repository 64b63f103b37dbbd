"""Declarative experiment configuration.

One YAML file defines the group, the Folner shape, named sets / oracle
systems / averaging schemes / functions, a schedule, tolerances, caps, and
an ordered task list.  Validation resolves every name up front so a typo
fails before any computation starts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from .errors import ConfigError
from .groups import GroupSpec, FolnerSpec, INT_Z, INT_ZD, HEISENBERG3
from . import sets as setmod
from . import oracles as oraclemod
from . import moments as momentmod

_TASK_KINDS = {
    "density", "upper_density", "subsequence", "pair_correlation",
    "cylinders", "additivity", "invariance",
    "verify", "spectrum", "compare", "moments", "accordance", "normcheck",
}


@dataclass
class ExperimentConfig:
    group: GroupSpec
    folner: FolnerSpec
    schedule: List[int]
    seed: Optional[int]
    tolerances: Dict[str, float]
    caps: Dict[str, int]
    sets: Dict[str, Any]
    systems: Dict[str, Any]
    schemes: Dict[str, Any]
    functions: Dict[str, Any]
    tasks: List[dict]
    raw: dict = field(repr=False, default_factory=dict)


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing key {key!r}")
    return d[key]


def _build_group(d: dict) -> GroupSpec:
    kind = _need(d, "kind", "group")
    if kind == "Z":
        return GroupSpec(INT_Z)
    if kind == "Zd":
        return GroupSpec(INT_ZD, int(_need(d, "d", "group")))
    if kind == "H3":
        return GroupSpec(HEISENBERG3)
    raise ConfigError(f"group: unknown kind {kind!r}")


def _build_folner(d: dict, group: GroupSpec) -> FolnerSpec:
    shape = _need(d, "shape", "folner")
    try:
        if shape == "interval":
            return FolnerSpec(group, "interval", start=int(d.get("start", 0)))
        if shape == "box":
            return FolnerSpec(group, "box", anchor=tuple(d.get("anchor", (0,) * group.d)))
        if shape == "heisenberg_box":
            return FolnerSpec(group, "heisenberg_box")
    except ValueError as e:
        raise ConfigError(f"folner: {e}") from e
    raise ConfigError(f"folner: unknown shape {shape!r}")


def _build_schedule(node) -> List[int]:
    if isinstance(node, dict) and "dyadic" in node:
        d = node["dyadic"]
        lo, hi = int(d["min_exp"]), int(d["max_exp"])
        return [1 << k for k in range(lo, hi + 1)]
    if isinstance(node, list):
        out = [int(x) for x in node]
        if out != sorted(set(out)):
            raise ConfigError("schedule must be strictly increasing")
        return out
    raise ConfigError("schedule must be a list or a dyadic range")


DEFAULT_SCHEDULE = [1 << k for k in range(10, 21)]
DEFAULT_CAPS = {"cylinders": 20000, "window": 1 << 26}
DEFAULT_TOLERANCES = {"tau": 1e-3}


class Workspace:
    """Resolves and memoizes the named objects of a config."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self._sets: Dict[str, setmod.SetSpec] = {}
        self._systems: Dict[str, oraclemod.OracleSystem] = {}
        self._schemes: Dict[str, momentmod.AveragingScheme] = {}
        self._functions: Dict[str, momentmod.FunctionSpec] = {}

    def set_spec(self, name: str) -> setmod.SetSpec:
        if name not in self._sets:
            if name not in self.cfg.sets:
                raise ConfigError(f"undefined set {name!r}")
            self._sets[name] = self._build_set(name, self.cfg.sets[name])
        return self._sets[name]

    def system(self, name: str) -> oraclemod.OracleSystem:
        if name not in self._systems:
            if name not in self.cfg.systems:
                raise ConfigError(f"undefined system {name!r}")
            self._systems[name] = self._build_system(self.cfg.systems[name])
        return self._systems[name]

    def scheme(self, name: str) -> momentmod.AveragingScheme:
        if name not in self._schemes:
            if name not in self.cfg.schemes:
                raise ConfigError(f"undefined scheme {name!r}")
            self._schemes[name] = self._build_scheme(self.cfg.schemes[name])
        return self._schemes[name]

    def function(self, name: str) -> momentmod.FunctionSpec:
        if name not in self._functions:
            if name not in self.cfg.functions:
                raise ConfigError(f"undefined function {name!r}")
            self._functions[name] = self._build_function(self.cfg.functions[name])
        return self._functions[name]

    # -- builders ---------------------------------------------------------

    def _build_set(self, name: str, d: dict) -> setmod.SetSpec:
        rule = _need(d, "rule", f"set {name}")
        if rule == "congruence":
            return setmod.Congruence(int(_need(d, "a", name)), int(_need(d, "m", name)))
        if rule == "rotation":
            return setmod.RotationSet(
                d.get("alpha", "golden"), d.get("beta", 0.5), d.get("x0", 0))
        if rule == "dyadic":
            return setmod.DyadicBlocks()
        if rule == "bitmask":
            lo = int(d.get("lo", 0))
            if "bits" in d:
                bits = [int(b) for b in str(d["bits"])]
            else:
                n = int(_need(d, "n", name))
                if self.cfg.seed is None:
                    raise ConfigError(f"set {name}: random bitmask requires a seed")
                rng = np.random.default_rng(self.cfg.seed)
                bits = rng.integers(0, 2, size=n).tolist()
            return setmod.Bitmask(lo, bits)
        if rule == "complement":
            return self.set_spec(_need(d, "of", name)).complement()
        if rule == "component":
            rules = [None if r is None else (int(r[0]), int(r[1]))
                     for r in _need(d, "rules", name)]
            return setmod.ComponentCongruence(self.cfg.group, rules)
        if rule == "orbit":
            system = self.system(_need(d, "system", name))
            lo, hi = int(_need(d, "lo", name)), int(_need(d, "hi", name))
            if hi - lo > self.cfg.caps.get("window", DEFAULT_CAPS["window"]):
                raise ConfigError(f"set {name}: window cap exceeded")
            if isinstance(system, oraclemod.MarkovSystem):
                if self.cfg.seed is None and "seed" not in d:
                    raise ConfigError(f"set {name}: Markov orbit requires a seed")
                return system.orbit_set(lo, hi, seed=int(d.get("seed", self.cfg.seed)))
            return system.orbit_set(lo, hi, x0=d.get("x0", 0))
        raise ConfigError(f"set {name}: unknown rule {rule!r}")

    def _build_system(self, d: dict) -> oraclemod.OracleSystem:
        kind = _need(d, "kind", "system")
        if kind == "rotation":
            return oraclemod.RotationSystem(d.get("alpha", "golden"), d.get("beta", 0.5))
        if kind == "periodic":
            return oraclemod.PeriodicSystem([int(b) for b in str(_need(d, "pattern", "system"))])
        if kind == "markov":
            return oraclemod.MarkovSystem(
                _need(d, "P", "system"), _need(d, "accept", "system"), d.get("pi"))
        raise ConfigError(f"system: unknown kind {kind!r}")

    def _build_scheme(self, d: dict) -> momentmod.AveragingScheme:
        wd = d.get("weight", {"kind": "one"})
        nd = d.get("normalizer", {"kind": "one"})
        weight = momentmod.WeightRule(
            wd.get("kind", "one"), rate=float(wd.get("rate", 0.0)),
            table=tuple(sorted((int(k), v) for k, v in wd.get("table", {}).items()))
            if "table" in wd else None,
        )
        if nd.get("kind") == "const":
            norm = momentmod.NormalizerRule("const", c=Fraction(str(nd["c"])))
        elif nd.get("kind") == "custom":
            norm = momentmod.NormalizerRule(
                "custom", table=tuple(sorted((int(k), v) for k, v in nd["table"].items())))
        else:
            norm = momentmod.NormalizerRule(nd.get("kind", "one"))
        return momentmod.AveragingScheme(self.cfg.folner, weight, norm)

    def _build_function(self, d: dict) -> momentmod.FunctionSpec:
        kind = _need(d, "kind", "function")
        if kind == "exponential":
            return momentmod.ExponentialFn(float(_need(d, "theta", "function")))
        if kind == "indicator":
            return momentmod.IndicatorFn(self.set_spec(_need(d, "set", "function")))
        if kind == "random_disk":
            if self.cfg.seed is None and "seed" not in d:
                raise ConfigError("random_disk function requires a seed")
            return momentmod.RandomDiskFn(int(d.get("seed", self.cfg.seed)))
        raise ConfigError(f"function: unknown kind {kind!r}")


def load_config(path: str, seed_override: Optional[int] = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as e:
        raise ConfigError(f"parse error in {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    return parse_config(raw, seed_override=seed_override)


def parse_config(raw: dict, seed_override: Optional[int] = None) -> ExperimentConfig:
    group = _build_group(raw.get("group", {"kind": "Z"}))
    folner = _build_folner(raw.get("folner", {"shape": "interval", "start": 1}), group)
    schedule = (_build_schedule(raw["schedule"]) if "schedule" in raw
                else list(DEFAULT_SCHEDULE))
    seed = seed_override if seed_override is not None else raw.get("seed")
    cfg = ExperimentConfig(
        group=group,
        folner=folner,
        schedule=schedule,
        seed=None if seed is None else int(seed),
        tolerances={**DEFAULT_TOLERANCES, **raw.get("tolerances", {})},
        caps={**DEFAULT_CAPS, **raw.get("caps", {})},
        sets=raw.get("sets", {}) or {},
        systems=raw.get("systems", {}) or {},
        schemes=raw.get("schemes", {}) or {},
        functions=raw.get("functions", {}) or {},
        tasks=raw.get("tasks", []) or [],
        raw=raw,
    )
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    for i, task in enumerate(cfg.tasks):
        where = f"task {i}"
        if not isinstance(task, dict):
            raise ConfigError(f"{where}: must be a mapping")
        kind = _need(task, "task", where)
        if kind not in _TASK_KINDS:
            raise ConfigError(f"{where}: unknown task {kind!r}")
        for key in ("set", "set1", "set2"):
            if key in task and task[key] not in cfg.sets:
                raise ConfigError(f"{where}: undefined set {task[key]!r}")
        if "system" in task and task["system"] not in cfg.systems:
            raise ConfigError(f"{where}: undefined system {task['system']!r}")
        if "scheme" in task and task["scheme"] not in cfg.schemes:
            raise ConfigError(f"{where}: undefined scheme {task['scheme']!r}")
        for fname in task.get("family", []):
            if fname not in cfg.functions:
                raise ConfigError(f"{where}: undefined function {fname!r}")
