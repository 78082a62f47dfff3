"""
Common utilities and imports for the algebra modules.
"""

import math
import random
import logging
import itertools
import functools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from cotlab.config import get_config

# Setup logger
logger = logging.getLogger(__name__)


class CotlabError(Exception):
    """Base class for all cotlab errors."""


class RingMismatchError(CotlabError):
    """Objects over different rings were combined."""


class ShapeError(CotlabError):
    """Matrix shapes do not fit."""


class NotWellDefinedError(CotlabError):
    """A generator matrix does not respect the presentations."""


class DiagramError(CotlabError):
    """A diagram, complex or multicomplex violates its structural invariants."""


class SyzygyError(CotlabError):
    """An extension class was given on a module other than the registered syzygy."""


class LimitExceededError(CotlabError):
    """A configured cap (modulus, arity, cardinality) would be exceeded."""


class PreconditionError(CotlabError):
    """A dependent checker refused to run because its hypotheses failed."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class ScenarioError(CotlabError):
    """A scenario file is malformed; ``location`` is a JSON path."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """
    Extended gcd over the integers.

    Returns:
        Tuple (g, s, t) with s*a + t*b == g >= 0
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def max_card() -> int:
    """The elementwise enumeration bound currently in force."""
    return get_config().max_card


def check_arity(n: int) -> None:
    """Refuse cube constructions beyond the configured arity cap."""
    cap = get_config().max_arity
    if n > cap:
        raise LimitExceededError(f"arity {n} exceeds the configured maximum {cap}")


@dataclass(frozen=True)
class Witness:
    """A replayable counterexample: a reason plus JSON payloads of the objects involved."""

    reason: str
    payload: Tuple[Dict[str, Any], ...] = ()

    def to_json(self) -> Dict[str, Any]:
        return {"reason": self.reason, "objects": list(self.payload)}

    def __str__(self) -> str:
        return self.reason


def witness(reason: str, *objects: Any) -> Witness:
    """Build a Witness; objects with a ``to_json`` method are serialized inline."""
    return Witness(reason, tuple(o.to_json() if hasattr(o, "to_json") else {"value": repr(o)} for o in objects))
