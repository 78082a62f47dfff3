"""
Scenario files and run reports.

A scenario is a JSON document naming a ring, a seed and a list of checks;
each check carries its own parameters and the outcome it is expected to
have, so negative controls are ordinary checks with ``expect: "fail"`` or
``expect: "refuse"``.
"""

import os
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional

from cotlab import __version__
from cotlab.algebra.common import ScenarioError

logger = logging.getLogger(__name__)

BUNDLED_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "scenarios")


class Status(Enum):
    PASSED = "passed"
    FAILED = "failed"
    REFUSED = "refused"


_EXPECT = {"pass": Status.PASSED, "fail": Status.FAILED, "refuse": Status.REFUSED}


@dataclass
class CheckSpec:
    id: str
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    expect: str = "pass"

    def to_json(self) -> Dict[str, Any]:
        return {"id": self.id, "kind": self.kind, "params": self.params, "expect": self.expect}


@dataclass
class Scenario:
    """Fully determines a reproducible run."""

    name: str
    ring: int = 4
    seed: int = 0
    max_factors: int = 2
    trials: Optional[int] = None
    thoroughness: Optional[str] = None
    description: str = ""
    checks: List[CheckSpec] = field(default_factory=list)
    base_dir: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "description": self.description,
            "ring": self.ring,
            "seed": self.seed,
            "max_factors": self.max_factors,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.trials is not None:
            data["trials"] = self.trials
        if self.thoroughness:
            data["thoroughness"] = self.thoroughness
        return data

    @classmethod
    def from_json(cls, data: Any, base_dir: Optional[str] = None) -> "Scenario":
        """
        Parse a scenario document.

        Raises:
            ScenarioError: with the JSON path of the first malformed field
        """
        if not isinstance(data, Mapping):
            raise ScenarioError("scenario must be a JSON object", "$")
        if "name" not in data or not isinstance(data["name"], str):
            raise ScenarioError("scenario needs a string 'name'", "$.name")
        ints = {}
        for key, default in (("ring", 4), ("seed", 0), ("max_factors", 2)):
            value = data.get(key, default)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ScenarioError(f"'{key}' must be an integer", f"$.{key}")
            ints[key] = value
        trials = data.get("trials")
        if trials is not None and (not isinstance(trials, int) or isinstance(trials, bool) or trials < 1):
            raise ScenarioError("'trials' must be a positive integer", "$.trials")
        thoroughness = data.get("thoroughness")
        if thoroughness is not None and thoroughness not in ("quick", "standard", "exhaustive"):
            raise ScenarioError("'thoroughness' must be quick, standard or exhaustive", "$.thoroughness")
        if ints["ring"] < 2:
            raise ScenarioError("'ring' must be at least 2", "$.ring")
        raw_checks = data.get("checks", [])
        if not isinstance(raw_checks, list):
            raise ScenarioError("'checks' must be a list", "$.checks")
        checks = []
        seen = set()
        for i, raw in enumerate(raw_checks):
            where = f"$.checks[{i}]"
            if not isinstance(raw, Mapping):
                raise ScenarioError("check must be an object", where)
            for key in ("id", "kind"):
                if not isinstance(raw.get(key), str):
                    raise ScenarioError(f"check needs a string '{key}'", f"{where}.{key}")
            if raw["id"] in seen:
                raise ScenarioError(f"duplicate check id {raw['id']!r}", f"{where}.id")
            seen.add(raw["id"])
            params = raw.get("params", {})
            if not isinstance(params, Mapping):
                raise ScenarioError("'params' must be an object", f"{where}.params")
            expect = raw.get("expect", "pass")
            if expect not in _EXPECT:
                raise ScenarioError(f"'expect' must be one of {', '.join(_EXPECT)}", f"{where}.expect")
            checks.append(CheckSpec(raw["id"], raw["kind"], dict(params), expect))
        return cls(data["name"], ints["ring"], ints["seed"], ints["max_factors"], trials, thoroughness,
                   data.get("description", ""), checks, base_dir)


def load_scenario(path_or_name: str) -> Scenario:
    """Load a scenario file, or a bundled scenario by name."""
    path = path_or_name
    if not os.path.exists(path):
        bundled = os.path.join(BUNDLED_DIR, f"{path_or_name}.json")
        if not os.path.exists(bundled):
            raise ScenarioError(f"no scenario file or bundled scenario named {path_or_name!r}")
        path = bundled
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"invalid JSON: {e.msg}", f"line {e.lineno} column {e.colno}") from e
    return Scenario.from_json(data, os.path.dirname(os.path.abspath(path)))


def bundled_scenarios() -> List[str]:
    if not os.path.isdir(BUNDLED_DIR):
        return []
    return sorted(f[:-5] for f in os.listdir(BUNDLED_DIR) if f.endswith(".json"))


@dataclass
class CheckOutcome:
    id: str
    kind: str
    status: Status
    expect: str = "pass"
    details: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def as_expected(self) -> bool:
        return self.status is _EXPECT[self.expect]

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status.value,
            "expect": self.expect,
            "as_expected": self.as_expected,
            "details": self.details,
            "error": self.error,
        }


@dataclass
class RunReport:
    scenario: str
    seed: int
    outcomes: List[CheckOutcome]
    timing: Dict[str, float] = field(default_factory=dict)
    tool_version: str = __version__

    def __post_init__(self):
        self.outcomes = sorted(self.outcomes, key=lambda o: o.id)

    @property
    def ok(self) -> bool:
        return all(o.as_expected for o in self.outcomes)

    @property
    def refused(self) -> bool:
        """Some check was refused without a refusal being expected."""
        return any(o.status is Status.REFUSED and o.expect != "refuse" for o in self.outcomes)

    def exit_code(self) -> int:
        if self.ok:
            return 0
        return 2 if self.refused and all(o.as_expected or o.status is Status.REFUSED for o in self.outcomes) else 1

    def counts(self) -> Dict[str, int]:
        out = {s.value: 0 for s in Status}
        for o in self.outcomes:
            out[o.status.value] += 1
        return out

    def to_json(self, include_timing: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "scenario": self.scenario,
            "tool_version": self.tool_version,
            "seed": self.seed,
            "ok": self.ok,
            "counts": self.counts(),
            "checks": [o.to_json() for o in self.outcomes],
        }
        if include_timing:
            data["timing"] = self.timing
        return data

    def canonical_json(self) -> str:
        """The report without timing, with sorted keys; identical across reruns of a scenario."""
        return json.dumps(self.to_json(include_timing=False), sort_keys=True, ensure_ascii=False)
