"""
Classes of modules, Ext-orthogonality and cotorsion-pair checks over a finite universe.

Every "for all modules" in the checks below ranges over an enumerated
Universe, and every report carries the universe parameters it was run on.
"""

import json
import os
import threading
from enum import Enum

from cotlab.algebra.common import *
from cotlab.algebra.ring import Ring
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, ShortExactSequence, is_epic, is_monic, kernel, cokernel,
    realize_extension, identity,
)
from cotlab.algebra.bifunctors import ext1_space, ext_order, ext_vanishes, hom_space

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Universe
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Universe:
    """A finite list of pairwise non-isomorphic modules standing in for all objects."""

    ring: Ring
    max_factors: int
    modules: Tuple[FPModule, ...]

    @cached_property
    def _by_invariants(self) -> Dict[Tuple[int, ...], FPModule]:
        return {m.invariants: m for m in self.modules}

    def find(self, m: FPModule) -> Optional[FPModule]:
        """The universe member isomorphic to ``m``, if any."""
        if m.ring != self.ring:
            raise RingMismatchError(f"{m.ring} vs {self.ring}")
        return self._by_invariants.get(m.invariants)

    def __contains__(self, m: FPModule) -> bool:
        return self.find(m) is not None

    def __iter__(self):
        return iter(self.modules)

    def __len__(self) -> int:
        return len(self.modules)

    @property
    def free(self) -> Optional[FPModule]:
        return self._by_invariants.get((self.ring.modulus,))

    def validate(self) -> List[str]:
        """Problems with the universe itself (empty when well formed)."""
        problems = []
        if () not in self._by_invariants:
            problems.append("universe lacks the zero module")
        if self.max_factors >= 1 and self.free is None:
            problems.append(f"universe lacks the free module {self.ring}")
        if len(self._by_invariants) != len(self.modules):
            problems.append("universe contains isomorphic duplicates")
        return problems

    def parameters(self) -> Dict[str, Any]:
        return {"ring": self.ring.modulus, "max_factors": self.max_factors, "size": len(self.modules)}

    @classmethod
    def custom(cls, ring: Ring, modules: Sequence[FPModule]) -> "Universe":
        """A hand-picked universe, deduplicated by canonical form."""
        seen: Dict[Tuple[int, ...], FPModule] = {}
        for m in modules:
            seen.setdefault(m.invariants, FPModule.from_invariants(ring, m.invariants))
        ordered = sorted(seen.values(), key=lambda m: (m.cardinality, m.invariants))
        width = max((len(m.invariants) for m in ordered), default=0)
        return cls(ring, width, tuple(ordered))


def _chains(divisors: Sequence[int], length: int) -> Iterator[Tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for head in divisors:
        for tail in _chains([d for d in divisors if d % head == 0], length - 1):
            yield (head,) + tail


def enumerate_universe(ring: Ring, max_factors: int) -> Universe:
    """All modules Z/e_1 + ... + Z/e_k with e_1 | ... | e_k | n, 1 < e_i, and k <= max_factors."""
    if max_factors < 0:
        raise ValueError("max_factors must be non-negative")
    divisors = [d for d in ring.divisors if d > 1]
    chains = [c for k in range(max_factors + 1) for c in _chains(divisors, k)]
    modules = [FPModule.from_invariants(ring, c) for c in chains]
    modules.sort(key=lambda m: (m.cardinality, m.invariants))
    logger.debug(f"universe over {ring} with max_factors={max_factors}: {len(modules)} modules")
    return Universe(ring, max_factors, tuple(modules))


# ---------------------------------------------------------------------------
# Membership tests
# ---------------------------------------------------------------------------

def _valuation(e: int, p: int) -> int:
    v = 0
    while e % p == 0:
        e //= p
        v += 1
    return v


def is_projective(m: FPModule) -> bool:
    """Every primary component is free: v_p(e) is 0 or v_p(n) for each invariant e."""
    for e in m.invariants:
        for p, k in m.ring.factorization.items():
            if _valuation(e, p) not in (0, k):
                return False
    return True


def baer_injective(m: FPModule) -> bool:
    """Baer test: Ext^1(Z/d, m) = 0 for every divisor d of n."""
    return all(ext_vanishes(1, FPModule.cyclic(m.ring, d), m) for d in m.ring.divisors if d > 1)


class ClassKind(Enum):
    ALL = "all"
    ZERO = "zero"
    PROJECTIVE = "projective"
    FLAT = "flat"
    INJECTIVE = "injective"
    PERP_OF = "perp"
    LEFT_PERP_OF = "leftperp"
    EXPLICIT = "explicit"


_LISTED = (ClassKind.PERP_OF, ClassKind.LEFT_PERP_OF, ClassKind.EXPLICIT)


@dataclass(frozen=True, eq=False)
class ClassSpec:
    """A decidable class of modules over one ring."""

    kind: ClassKind
    ring: Ring
    listed: Tuple[FPModule, ...] = ()
    label: Optional[str] = None
    _cache: Dict[Tuple[int, ...], bool] = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self):
        for m in self.listed:
            if m.ring != self.ring:
                raise RingMismatchError(f"{m.ring} vs {self.ring}")
        if self.listed and self.kind not in _LISTED:
            raise ValueError(f"class kind {self.kind.value} takes no module list")

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind in _LISTED:
            return f"{self.kind.value}{{{', '.join(m.describe() for m in self.listed)}}}"
        return self.kind.value

    def contains(self, m: FPModule) -> bool:
        if m.ring != self.ring:
            raise RingMismatchError(f"{m.ring} vs {self.ring}")
        key = m.invariants
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            decided = self._decide(m)
            with self._lock:
                cached = self._cache.setdefault(key, decided)
        return cached

    def _decide(self, m: FPModule) -> bool:
        kind = self.kind
        if kind is ClassKind.ALL:
            return True
        if kind is ClassKind.ZERO:
            return m.is_zero
        if kind in (ClassKind.PROJECTIVE, ClassKind.FLAT):
            return is_projective(m)
        if kind is ClassKind.INJECTIVE:
            return baer_injective(m)
        if kind is ClassKind.PERP_OF:
            return all(ext_vanishes(1, d, m) for d in self.listed)
        if kind is ClassKind.LEFT_PERP_OF:
            return all(ext_vanishes(1, m, e) for e in self.listed)
        return any(m.invariants == x.invariants for x in self.listed)

    def members(self, u: Universe) -> List[FPModule]:
        return [m for m in u.modules if self.contains(m)]

    # -- constructors -------------------------------------------------

    @classmethod
    def of(cls, kind: Union[str, ClassKind], ring: Ring, modules: Sequence[FPModule] = ()) -> "ClassSpec":
        return cls(ClassKind(kind), ring, tuple(modules))

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.listed:
            data["modules"] = [{"invariants": list(m.invariants)} for m in self.listed]
        return data

    @classmethod
    def from_json(cls, data: Union[str, Mapping[str, Any]], ring: Ring,
                  base_dir: Optional[str] = None) -> "ClassSpec":
        if isinstance(data, str):
            return parse_class_spec(data, ring, base_dir)
        try:
            kind = ClassKind(data["kind"])
        except (KeyError, ValueError) as e:
            raise ValueError(f"bad class kind in {data!r}") from e
        modules = [FPModule.from_json({"ring": ring.modulus, **m}) for m in data.get("modules", [])]
        return cls(kind, ring, tuple(modules), data.get("label"))


def parse_class_spec(text: str, ring: Ring, base_dir: Optional[str] = None) -> ClassSpec:
    """
    Parse a class name.

    Accepted: all | zero | projective | flat | injective | perp:<file> |
    leftperp:<file> | explicit:<file>, where <file> holds a JSON list of modules.
    """
    kind, _, arg = text.strip().partition(":")
    try:
        parsed = ClassKind(kind.lower())
    except ValueError as e:
        raise ValueError(f"unknown class {text!r}") from e
    if parsed not in _LISTED:
        if arg:
            raise ValueError(f"class {kind} takes no argument")
        return ClassSpec(parsed, ring)
    if not arg:
        raise ValueError(f"class {kind} needs a module file")
    path = arg if base_dir is None or os.path.isabs(arg) else os.path.join(base_dir, arg)
    with open(path, "r") as f:
        entries = json.load(f)
    modules = [FPModule.from_json({"ring": ring.modulus, **m}) for m in entries]
    return ClassSpec(parsed, ring, tuple(modules))


def perp(cls: Sequence[FPModule], side: str, u: Universe) -> ClassSpec:
    """
    Ext^1-orthogonal class inside ``u``.

    Args:
        cls: The modules to be orthogonal to
        side: 'right' for {X : Ext^1(D, X) = 0}, 'left' for {X : Ext^1(X, E) = 0}
        u: The universe
    """
    for m in cls:
        if m.ring != u.ring:
            raise RingMismatchError(f"{m.ring} vs {u.ring}")
    if side == "right":
        members = [x for x in u.modules if all(ext_vanishes(1, d, x) for d in cls)]
    elif side == "left":
        members = [x for x in u.modules if all(ext_vanishes(1, x, e) for e in cls)]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return ClassSpec(ClassKind.EXPLICIT, u.ring, tuple(members),
                     f"{side}-perp{{{', '.join(m.describe() for m in cls)}}}")


def _keys(mods: Iterable[FPModule]) -> set:
    return {m.invariants for m in mods}


def galois_checks(cls: Sequence[FPModule], u: Universe) -> bool:
    """cls ⊆ left(right(cls)) and right(left(right(cls))) = right(cls) on ``u``."""
    right = perp(cls, "right", u)
    back = perp(right.listed, "left", u)
    if not _keys(cls) <= _keys(back.listed):
        return False
    return _keys(perp(back.listed, "right", u).listed) == _keys(right.listed)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class CotorsionReport:
    d: str
    e: str
    universe: Dict[str, Any]
    is_pair: Optional[bool] = None
    has_enough_injectives: Optional[bool] = None
    has_enough_projectives: Optional[bool] = None
    hereditary: Optional[bool] = None
    resolving: Optional[bool] = None
    coresolving: Optional[bool] = None
    witnesses: List[Witness] = field(default_factory=list)

    @property
    def complete(self) -> Optional[bool]:
        if self.has_enough_injectives is None or self.has_enough_projectives is None:
            return None
        return self.has_enough_injectives and self.has_enough_projectives

    def to_json(self) -> Dict[str, Any]:
        return {
            "pair": [self.d, self.e],
            "universe": self.universe,
            "is_pair": self.is_pair,
            "has_enough_injectives": self.has_enough_injectives,
            "has_enough_projectives": self.has_enough_projectives,
            "complete": self.complete,
            "hereditary": self.hereditary,
            "resolving": self.resolving,
            "coresolving": self.coresolving,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _same_ring(d: ClassSpec, e: ClassSpec, u: Universe) -> None:
    if d.ring != u.ring or e.ring != u.ring:
        raise RingMismatchError(f"classes over {d.ring}/{e.ring}, universe over {u.ring}")


def check_cotorsion_pair(d: ClassSpec, e: ClassSpec, u: Universe) -> CotorsionReport:
    """𝒟 ∩ u = left-perp(ℰ ∩ u) and ℰ ∩ u = right-perp(𝒟 ∩ u), inside u."""
    _same_ring(d, e, u)
    report = CotorsionReport(d.name, e.name, u.parameters())
    d_u, e_u = d.members(u), e.members(u)
    right = perp(d_u, "right", u)
    left = perp(e_u, "left", u)
    for x in u.modules:
        in_e, in_right = e.contains(x), right.contains(x)
        if in_right and not in_e:
            report.witnesses.append(witness(f"{x.describe()} ∈ {d.name}^⊥ but not in {e.name}", x))
        elif in_e and not in_right:
            bad = next(dd for dd in d_u if not ext_vanishes(1, dd, x))
            report.witnesses.append(witness(f"{x.describe()} ∈ {e.name} but Ext¹({bad.describe()}, {x.describe()}) ≠ 0", x, bad))
        in_d, in_left = d.contains(x), left.contains(x)
        if in_left and not in_d:
            report.witnesses.append(witness(f"{x.describe()} ∈ ⊥{e.name} but not in {d.name}", x))
        elif in_d and not in_left:
            bad = next(ee for ee in e_u if not ext_vanishes(1, x, ee))
            report.witnesses.append(witness(f"{x.describe()} ∈ {d.name} but Ext¹({x.describe()}, {bad.describe()}) ≠ 0", x, bad))
    report.is_pair = not report.witnesses
    logger.info(f"({d.name}, {e.name}) over {u.ring}: is_pair={report.is_pair}")
    return report


# ---------------------------------------------------------------------------
# Completeness
# ---------------------------------------------------------------------------

@dataclass
class CompletenessResult:
    enough_injectives: bool
    enough_projectives: bool
    injective_sequences: Dict[Tuple[int, ...], ShortExactSequence]
    projective_sequences: Dict[Tuple[int, ...], ShortExactSequence]
    witnesses: List[Witness]


def injective_approximation(x: FPModule, d: ClassSpec, e: ClassSpec, u: Universe) -> Optional[ShortExactSequence]:
    """Some 0 -> x -> E -> D -> 0 with E in ℰ and D in 𝒟 ∩ u."""
    for dd in d.members(u):
        for cls in ext1_space(dd, x).classes():
            ses = realize_extension(dd, x, cls)
            if e.contains(ses.mid):
                return ses
    return None


def projective_approximation(x: FPModule, d: ClassSpec, e: ClassSpec, u: Universe) -> Optional[ShortExactSequence]:
    """Some 0 -> E -> D -> x -> 0 with D in 𝒟 and E in ℰ ∩ u."""
    for ee in e.members(u):
        for cls in ext1_space(x, ee).classes():
            ses = realize_extension(x, ee, cls)
            if d.contains(ses.mid):
                return ses
    return None


def _completeness(d: ClassSpec, e: ClassSpec, u: Universe, sides=("injective", "projective")) -> CompletenessResult:
    inj, proj, witnesses = {}, {}, []
    for x in u.modules:
        if "injective" in sides:
            ses = injective_approximation(x, d, e, u)
            if ses is None:
                logger.warning(f"no ℰ-envelope sequence for {x.describe()} in ({d.name}, {e.name})")
                witnesses.append(witness(f"no sequence 0 -> {x.describe()} -> E -> D -> 0 in u", x))
            else:
                inj[x.invariants] = ses
        if "projective" in sides:
            ses = projective_approximation(x, d, e, u)
            if ses is None:
                logger.warning(f"no 𝒟-cover sequence for {x.describe()} in ({d.name}, {e.name})")
                witnesses.append(witness(f"no sequence 0 -> E -> D -> {x.describe()} -> 0 in u", x))
            else:
                proj[x.invariants] = ses
    n = len(u.modules)
    return CompletenessResult(len(inj) == n if "injective" in sides else False,
                              len(proj) == n if "projective" in sides else False,
                              inj, proj, witnesses)


def check_completeness(d: ClassSpec, e: ClassSpec, u: Universe) -> CompletenessResult:
    """Search approximation sequences for every X in u; refuses unless (d, e) is a pair on u."""
    pair = check_cotorsion_pair(d, e, u)
    if not pair.is_pair:
        raise PreconditionError(f"({d.name}, {e.name}) is not a cotorsion pair on the universe", pair)
    result = _completeness(d, e, u)
    logger.info(f"({d.name}, {e.name}) completeness: injectives={result.enough_injectives} "
                f"projectives={result.enough_projectives}")
    return result


# ---------------------------------------------------------------------------
# Quotient and subobject searches
# ---------------------------------------------------------------------------

def _sample_morphisms(a: FPModule, b: FPModule, rng: random.Random, budget: int, cap: int) -> Iterator[ModuleMorphism]:
    hs = hom_space(a, b)
    if hs.cardinality <= cap:
        yield from hs.morphisms()
    else:
        for _ in range(budget):
            yield hs.random_morphism(rng)


def _budget() -> Tuple[int, int]:
    level = get_config().get_config_for_level()
    return level["lemma_trials"], level["hom_sample_cap"]


def quotient_search(d: ClassSpec, u: Universe, seed: int = 0) -> Tuple[bool, List[Witness]]:
    """Is every X in u a quotient of some 𝒟-object in u?"""
    rng = random.Random(seed)
    budget, cap = _budget()
    witnesses = []
    for x in u.modules:
        if x.is_zero:
            continue
        free = u.find(FPModule.free(u.ring, x.generators)) if x.generators <= u.max_factors else None
        if free is not None and d.contains(free):
            continue
        found = False
        for dd in d.members(u):
            if dd.cardinality < x.cardinality:
                continue
            if any(is_epic(f) for f in _sample_morphisms(dd, x, rng, budget, cap)):
                found = True
                break
        if not found:
            witnesses.append(witness(f"{x.describe()} is not a quotient of a {d.name}-object in u", x))
    return not witnesses, witnesses


def subobject_search(e: ClassSpec, u: Universe, seed: int = 0) -> Tuple[bool, List[Witness]]:
    """Is every X in u a subobject of some ℰ-object in u?"""
    rng = random.Random(seed)
    budget, cap = _budget()
    witnesses = []
    for x in u.modules:
        if x.is_zero:
            continue
        found = False
        for ee in e.members(u):
            if ee.cardinality < x.cardinality:
                continue
            if any(is_monic(f) for f in _sample_morphisms(x, ee, rng, budget, cap)):
                found = True
                break
        if not found:
            witnesses.append(witness(f"{x.describe()} is not a subobject of an {e.name}-object in u", x))
    return not witnesses, witnesses


@dataclass
class EnoughOfOneResult:
    enough_injectives: bool
    every_quotient: bool
    enough_projectives: bool
    implication_holds: bool


def check_enough_of_one(d: ClassSpec, e: ClassSpec, u: Universe, seed: int = 0) -> EnoughOfOneResult:
    """Enough injectives plus 𝒟-quotients give enough projectives."""
    inj = _completeness(d, e, u, sides=("injective",))
    quotients, _ = quotient_search(d, u, seed)
    proj = _completeness(d, e, u, sides=("projective",))
    holds = not (inj.enough_injectives and quotients) or proj.enough_projectives
    if not holds:
        logger.error(f"({d.name}, {e.name}): enough injectives and quotients but no projective sequences")
    return EnoughOfOneResult(inj.enough_injectives, quotients, proj.enough_projectives, holds)


# ---------------------------------------------------------------------------
# Extension closure and hereditary checks
# ---------------------------------------------------------------------------

def check_closed_under_extensions(cls: ClassSpec, u: Universe) -> Tuple[bool, List[Witness]]:
    """For every extension 0 -> A -> Y -> B -> 0 with A, B in cls ∩ u, is Y in cls?"""
    members = cls.members(u)
    witnesses = []
    for b in members:
        for a in members:
            for c in ext1_space(b, a).classes():
                ses = realize_extension(b, a, c)
                if not cls.contains(ses.mid):
                    witnesses.append(witness(f"extension {ses.describe()} leaves {cls.name}", ses))
    return not witnesses, witnesses


@dataclass
class HereditaryResult:
    hereditary: bool
    resolving: bool
    coresolving: bool
    pair_verified: bool
    consistent: bool
    witnesses: List[Witness]


def check_hereditary(d: ClassSpec, e: ClassSpec, u: Universe, seed: int = 0) -> HereditaryResult:
    """
    Ext^2(D, E) = 0 on 𝒟 ∩ u x ℰ ∩ u, plus resolving/coresolving by epi/mono sampling.

    Runs on any input; the consistency check (Ext^2 vanishing forces both
    flags) is only asserted when (d, e) verifies as a pair.
    """
    _same_ring(d, e, u)
    rng = random.Random(seed)
    budget, cap = _budget()
    witnesses = []
    d_u, e_u = d.members(u), e.members(u)

    hereditary = True
    for dd in d_u:
        for ee in e_u:
            if ext_order(2, dd, ee) != 1:
                hereditary = False
                witnesses.append(witness(f"Ext²({dd.describe()}, {ee.describe()}) ≠ 0", dd, ee))

    resolving = True
    for d1 in d_u:
        for d2 in d_u:
            if d1.cardinality < d2.cardinality:
                continue
            for f in _sample_morphisms(d1, d2, rng, budget, cap):
                if is_epic(f) and not d.contains(kernel(f).module):
                    resolving = False
                    witnesses.append(witness(f"kernel of an epimorphism {d1.describe()} -> {d2.describe()} leaves {d.name}", f))
                    break

    coresolving = True
    for e1 in e_u:
        for e2 in e_u:
            if e1.cardinality > e2.cardinality:
                continue
            for f in _sample_morphisms(e1, e2, rng, budget, cap):
                if is_monic(f) and not e.contains(cokernel(f).module):
                    coresolving = False
                    witnesses.append(witness(f"cokernel of a monomorphism {e1.describe()} -> {e2.describe()} leaves {e.name}", f))
                    break

    pair = check_cotorsion_pair(d, e, u).is_pair
    consistent = not (pair and hereditary) or (resolving and coresolving)
    if not consistent:
        logger.error(f"({d.name}, {e.name}): Ext² vanishes but the classes are not (co)resolving")
    return HereditaryResult(hereditary, resolving, coresolving, pair, consistent, witnesses)


def full_report(d: ClassSpec, e: ClassSpec, u: Universe, seed: int = 0) -> CotorsionReport:
    """Pair, completeness and hereditary flags in one report (later checks only when it is a pair)."""
    report = check_cotorsion_pair(d, e, u)
    if report.is_pair:
        comp = _completeness(d, e, u)
        report.has_enough_injectives = comp.enough_injectives
        report.has_enough_projectives = comp.enough_projectives
        report.witnesses.extend(comp.witnesses)
        her = check_hereditary(d, e, u, seed)
        report.hereditary, report.resolving, report.coresolving = her.hereditary, her.resolving, her.coresolving
        report.witnesses.extend(her.witnesses)
    return report


# ---------------------------------------------------------------------------
# Assumptions for the complex-level model structure
# ---------------------------------------------------------------------------

@dataclass
class AssumptionsReport:
    universe: Dict[str, Any]
    compatibility: bool
    complete: bool
    every_quotient: bool
    hereditary: bool
    universe_problems: List[str]
    witnesses: List[Witness]

    @property
    def holds(self) -> bool:
        return self.complete and self.every_quotient and self.hereditary

    def to_json(self) -> Dict[str, Any]:
        return {
            "universe": self.universe,
            "compatibility": self.compatibility,
            "complete": self.complete,
            "every_quotient": self.every_quotient,
            "hereditary": self.hereditary,
            "universe_problems": self.universe_problems,
            "holds": self.holds,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def check_thm_assumptions(d: ClassSpec, e: ClassSpec, u: Universe, seed: int = 0,
                          samples: Optional[int] = None) -> AssumptionsReport:
    """
    Completeness, 𝒟-quotients and heredity, after the compatibility battery.

    The quotient item also fails when the universe itself is malformed (for
    instance missing the free module the covers come from).
    """
    from cotlab.algebra.complexes import compatibility_check, sample_complexes

    complexes = sample_complexes(d, u, seed, samples)
    compat = compatibility_check(d, e, complexes)
    if not compat.holds:
        raise PreconditionError(f"complex classes of ({d.name}, {e.name}) fail the compatibility battery", compat)

    problems = u.validate()
    witnesses: List[Witness] = [witness(f"universe error: {p}") for p in problems]
    pair = check_cotorsion_pair(d, e, u)
    witnesses.extend(pair.witnesses)
    complete = False
    if pair.is_pair:
        comp = _completeness(d, e, u)
        complete = comp.enough_injectives and comp.enough_projectives
        witnesses.extend(comp.witnesses)
    quotients, qw = quotient_search(d, u, seed)
    witnesses.extend(qw)
    her = check_hereditary(d, e, u, seed)
    witnesses.extend(her.witnesses)
    report = AssumptionsReport(u.parameters(), compat.holds, complete, quotients and not problems,
                               her.hereditary, problems, witnesses)
    logger.info(f"({d.name}, {e.name}) assumptions: complete={complete} quotients={report.every_quotient} "
                f"hereditary={her.hereditary}")
    return report


@dataclass(frozen=True, eq=False)
class ClassPair:
    """A candidate cotorsion pair together with the universe it is checked on."""

    d: ClassSpec
    e: ClassSpec
    universe: Universe

    def __post_init__(self):
        _same_ring(self.d, self.e, self.universe)

    @property
    def ring(self) -> Ring:
        return self.universe.ring

    @cached_property
    def report(self) -> CotorsionReport:
        return check_cotorsion_pair(self.d, self.e, self.universe)

    @property
    def is_pair(self) -> bool:
        return bool(self.report.is_pair)

    def require_pair(self) -> None:
        if not self.is_pair:
            raise PreconditionError(f"({self.d.name}, {self.e.name}) is not a cotorsion pair on {self.ring}",
                                    self.report)

    @classmethod
    def named(cls, ring: Ring, d: str, e: str, max_factors: int = 2, base_dir: Optional[str] = None) -> "ClassPair":
        u = enumerate_universe(ring, max_factors)
        return cls(parse_class_spec(d, ring, base_dir), parse_class_spec(e, ring, base_dir), u)

    def describe(self) -> str:
        return f"({self.d.name}, {self.e.name}) over {self.ring} [max_factors={self.universe.max_factors}]"
