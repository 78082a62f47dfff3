"""
Seeded random generators for modules, morphisms, short exact sequences and complexes.
Every value is a deterministic function of (kind, params, seed).
"""

import logging
import random
from typing import Any, Dict, Mapping, Optional

from cotlab.algebra.common import CotlabError
from cotlab.algebra.ring import Ring
from cotlab.algebra.modules import FPModule, is_short_exact, random_morphism, realize_extension
from cotlab.algebra.bifunctors import ext1_space
from cotlab.algebra.cotorsion import Universe, enumerate_universe, parse_class_spec
from cotlab.algebra.complexes import random_complex, spliced_complex

logger = logging.getLogger(__name__)

KINDS = ("module", "morphism", "ses", "complex")


def _universe(params: Mapping[str, Any]) -> Universe:
    ring = Ring(int(params.get("ring", 4)))
    return enumerate_universe(ring, int(params.get("max_factors", 2)))


def _pick(u: Universe, rng: random.Random, nonzero: bool = False) -> FPModule:
    mods = [m for m in u.modules if not (nonzero and m.is_zero)]
    return rng.choice(mods)


def gen_random(kind: str, params: Optional[Mapping[str, Any]] = None, seed: int = 0) -> Any:
    """
    Draw one random value.

    Args:
        kind: module, morphism, ses or complex
        params: ring, max_factors; 'class' for ses (cokernel class) and complex
            (entry class); 'length' and 'exact' for complexes
        seed: Random seed

    Raises:
        CotlabError: if the requested class has no member in the universe
        ValueError: for an unknown kind
    """
    params = dict(params or {})
    rng = random.Random(seed)
    u = _universe(params)
    cls = parse_class_spec(params["class"], u.ring) if "class" in params else None

    if kind == "module":
        return _pick(u, rng)

    if kind == "morphism":
        a, b = _pick(u, rng), _pick(u, rng)
        return random_morphism(a, b, rng)

    if kind == "ses":
        members = cls.members(u) if cls is not None else list(u.modules)
        if not members:
            raise CotlabError(f"class {cls.name} has no member in the universe over {u.ring}")
        d = rng.choice(members)
        x = _pick(u, rng)
        ses = realize_extension(d, x, ext1_space(d, x).random_class(rng))
        if not is_short_exact(ses.inj, ses.surj) or (cls is not None and not cls.contains(ses.right)):
            raise CotlabError(f"generated sequence {ses.describe()} fails its own checks")
        logger.debug(f"generated {ses.describe()} with seed {seed}")
        return ses

    if kind == "complex":
        members = [m for m in (cls.members(u) if cls is not None else u.modules) if not m.is_zero]
        if not members:
            raise CotlabError(f"class has no nonzero member in the universe over {u.ring}")
        length = int(params.get("length", 3))
        lo = int(params.get("lo", 0))
        if params.get("exact"):
            zero = FPModule.zero(u.ring)
            return spliced_complex([zero] + [rng.choice(members) for _ in range(max(length - 1, 1))] + [zero],
                                   rng, lo)
        return random_complex([rng.choice(members) for _ in range(length)], rng, lo)

    raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
