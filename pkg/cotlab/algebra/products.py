"""
Pushout and pullback products of a multi-variable adjunction, and the
checkers built on them: split conditions in one and n variables, the
cokernel formula for pushout products and the Quillen-type criteria for
the lift of an adjunction to complexes.

Slots are 0-based in code. Condition labels use the 1-based names
``1a``..``2b`` and ``0a_k``, ``0b``, ``ja_0``, ``ja_k``, ``jb`` with the
target category as slot 0.
"""

from typing import NamedTuple

from cotlab.algebra.common import *
from cotlab.algebra.ring import Matrix
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, ShortExactSequence, cokernel, direct_sum, direct_sum_morphism, identity,
    is_epic, is_exact_at, is_isomorphic, is_monic, is_short_exact, realize_extension, zero_morphism,
)
from cotlab.algebra.diagrams import (
    CubeDiagram, Cocone, Cone, Vertex, cube_colimit, cube_limit, induced_from_colimit, induced_into_limit,
)
from cotlab.algebra.bifunctors import MultiAdjunction, ext1_space, hom_space, tensor, tensor_morphisms
from cotlab.algebra.cotorsion import ClassPair, ClassSpec
from cotlab.algebra.complexes import (
    ChainComplex, ChainMap, ComplexSES, classify, coboundary_twist, disc, identity_chain_map, lift_functor,
    sample_complexes, twisted_sum,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Pushout products
# ---------------------------------------------------------------------------

def _rebuild(f: ModuleMorphism, source: FPModule, target: FPModule) -> ModuleMorphism:
    return ModuleMorphism(source, target, f.matrix, check=False)


def _check_maps(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> None:
    if len(fs) != ma.arity:
        raise ValueError(f"{ma.name} takes {ma.arity} morphisms, got {len(fs)}")
    for f, ring in zip(fs, ma.source_rings):
        if f.ring != ring:
            raise RingMismatchError(f"morphism over {f.ring} in a slot over {ring}")


class PushoutProduct(NamedTuple):
    """□_F(f_1, ..., f_n) with the punctured cube and colimit it was built from."""

    morphism: ModuleMorphism
    diagram: CubeDiagram
    cocone: Cocone


def _pushout_cube(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> CubeDiagram:
    n = len(fs)

    def objs(v: Vertex) -> List[FPModule]:
        return [f.target if bit else f.source for f, bit in zip(fs, v)]

    vertices = {}

    def vertex(v: Vertex) -> FPModule:
        if v not in vertices:
            vertices[v] = ma.left(objs(v))
        return vertices[v]

    def edge(v: Vertex, i: int) -> ModuleMorphism:
        w = v[:i] + (1,) + v[i + 1:]
        f = ma.apply_in_slot(objs(v), i, fs[i])
        return _rebuild(f, vertex(v), vertex(w))

    return CubeDiagram.from_functions(n, vertex, edge, puncture=(1,) * n)


def pushout_product_data(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> PushoutProduct:
    _check_maps(ma, fs)
    check_arity(len(fs))
    d = _pushout_cube(ma, fs)
    cocone = cube_colimit(d)
    target = ma.left([f.target for f in fs])
    maps = {}
    for v in d.ordered_vertices:
        path = [identity(f.target) if bit else f for f, bit in zip(fs, v)]
        maps[v] = _rebuild(ma.left_on_morphisms(path), d.vertices[v], target)
    return PushoutProduct(induced_from_colimit(cocone, d, target, maps), d, cocone)


def pushout_product(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> ModuleMorphism:
    """
    □_F(f_1, ..., f_n): colim over the cube without (1, ..., 1) -> F(B_1, ..., B_n).

    Raises:
        ValueError: if the number of morphisms differs from the arity
    """
    return pushout_product_data(ma, fs).morphism


def corner_map(f: ModuleMorphism, g: ModuleMorphism) -> ModuleMorphism:
    """A⊗D ⊔_{A⊗C} B⊗C -> B⊗D for f: A -> B and g: C -> D."""
    ring = f.ring
    a, b, c, dd = f.source, f.target, g.source, g.target
    ad, bc, bd = tensor(a, dd), tensor(b, c), tensor(b, dd)
    top = direct_sum([ad, bc], ring)
    ac = tensor(a, c)
    glue = tensor_morphisms(identity(a), g).matrix.hstack(-tensor_morphisms(f, identity(c)).matrix)
    q = cokernel(ModuleMorphism(ac, top.module, glue, check=False))
    matrix = Matrix.zeros(ring, 0, bd.generators)
    matrix = matrix.vstack(tensor_morphisms(f, identity(dd)).matrix).vstack(tensor_morphisms(identity(b), g).matrix)
    return ModuleMorphism(q.module, bd, matrix)


# ---------------------------------------------------------------------------
# Pullback products
# ---------------------------------------------------------------------------

class PullbackProduct(NamedTuple):
    morphism: ModuleMorphism
    diagram: CubeDiagram
    cone: Cone


def pullback_product_data(ma: MultiAdjunction, j: int, fs: Sequence[Optional[ModuleMorphism]],
                          g: ModuleMorphism) -> PullbackProduct:
    ma._check_slot(j)
    if len(fs) != ma.arity:
        raise ValueError(f"{ma.name} takes {ma.arity} morphisms (slot {j} ignored), got {len(fs)}")
    others = [i for i in range(ma.arity) if i != j]
    n = len(others) + 1
    check_arity(n)

    # contravariant slots: bit 0 is the codomain B_i, bit 1 the domain A_i
    def objs(v: Vertex) -> List[Optional[FPModule]]:
        out: List[Optional[FPModule]] = [None] * ma.arity
        for t, i in enumerate(others):
            out[i] = fs[i].source if v[t] else fs[i].target
        return out

    def a0(v: Vertex) -> FPModule:
        return g.target if v[-1] else g.source

    vertices = {}

    def vertex(v: Vertex) -> FPModule:
        if v not in vertices:
            vertices[v] = ma.right(j, objs(v), a0(v))
        return vertices[v]

    def maps_for(v: Vertex, w: Vertex) -> ModuleMorphism:
        base = objs(v)
        maps: List[Optional[ModuleMorphism]] = [None] * ma.arity
        for t, i in enumerate(others):
            maps[i] = fs[i] if w[t] and not v[t] else identity(base[i])
        h = g if w[-1] and not v[-1] else identity(a0(v))
        return ma.right_on_morphisms(j, maps, h)

    def edge(v: Vertex, i: int) -> ModuleMorphism:
        w = v[:i] + (1,) + v[i + 1:]
        return _rebuild(maps_for(v, w), vertex(v), vertex(w))

    d = CubeDiagram.from_functions(n, vertex, edge, puncture=(0,) * n)
    cone = cube_limit(d)
    top = (0,) * n
    source = ma.right(j, objs(top), a0(top))
    legs = {v: _rebuild(maps_for(top, v), source, d.vertices[v]) for v in d.ordered_vertices}
    return PullbackProduct(induced_into_limit(cone, d, source, legs), d, cone)


def pullback_product(ma: MultiAdjunction, j: int, fs: Sequence[Optional[ModuleMorphism]],
                     g: ModuleMorphism) -> ModuleMorphism:
    """
    ■_{G^j}(f_i (i ≠ j), g): G^j(B..., X) -> lim over the cube without (0, ..., 0).

    ``fs`` is full length with entry j ignored; g: X -> Y sits in the target slot.
    """
    return pullback_product_data(ma, j, fs, g).morphism


# ---------------------------------------------------------------------------
# Cokernel formula
# ---------------------------------------------------------------------------

def coker_formula_sides(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> Tuple[FPModule, FPModule]:
    """coker □_F(f_i) and F(coker f_1, ..., coker f_n)."""
    lhs = cokernel(pushout_product(ma, fs)).module
    rhs = ma.left([cokernel(f).module for f in fs])
    return lhs, rhs


def coker_tail_exact(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> bool:
    """
    Exactness of F(B_1, ..., B_{n-1}, A_n) -> colim F(f_1, ..., f_n) -> colim F(f_1, ..., 0 -> C_n) -> 0.
    """
    _check_maps(ma, fs)
    n = len(fs)
    ring = fs[-1].ring
    p = cokernel(fs[-1])
    first = pushout_product_data(ma, fs)
    zero = FPModule.zero(ring)
    second = pushout_product_data(ma, list(fs[:-1]) + [zero_morphism(zero, p.module)])
    corner = (1,) * (n - 1) + (0,)
    leg = first.cocone.legs[corner]
    comps = {}
    for v in first.diagram.ordered_vertices:
        maps = [identity(f.target) if bit else identity(f.source) for f, bit in zip(fs[:-1], v[:-1])]
        maps.append(p.projection if v[-1] else zero_morphism(fs[-1].source, zero))
        f = ma.left_on_morphisms(maps)
        comps[v] = _rebuild(f, first.diagram.vertices[v], second.diagram.vertices[v]).then(second.cocone.legs[v])
    induced = induced_from_colimit(first.cocone, first.diagram, second.cocone.module, comps)
    return is_exact_at(leg, induced) and is_epic(induced)


def verify_coker_formula(ma: MultiAdjunction, fs: Sequence[ModuleMorphism]) -> bool:
    """coker(□_F f_i) ≅ F(coker f_i) together with the exact tail it is derived from."""
    lhs, rhs = coker_formula_sides(ma, fs)
    iso = is_isomorphic(lhs, rhs)
    tail = coker_tail_exact(ma, fs)
    if not (iso and tail):
        logger.warning(f"cokernel formula for {ma.name}: coker={lhs.describe()} F(cokers)={rhs.describe()} "
                       f"tail_exact={tail}")
    return iso and tail


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

@dataclass
class SplitReport:
    """One labelled condition: whether it held, how many instances were checked and a counterexample."""

    condition: str
    holds: bool = True
    checked: int = 0
    counterexample: Optional[Witness] = None
    sampled: bool = False
    classes_drawn: int = 0
    classes_total: int = 0

    def fail(self, w: Witness) -> None:
        self.holds = False
        if self.counterexample is None:
            self.counterexample = w

    def to_json(self) -> Dict[str, Any]:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "checked": self.checked,
            "sampled": self.sampled,
            "classes_drawn": self.classes_drawn,
            "classes_total": self.classes_total,
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
        }


@dataclass
class DualityReport:
    """Both collections of an equivalence together with the verdict on the equivalence itself."""

    reports: List[SplitReport]
    left: List[str]
    right: List[str]
    pairs_verified: bool
    universes: List[Dict[str, Any]] = field(default_factory=list)

    def __getitem__(self, condition: str) -> SplitReport:
        for r in self.reports:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    @property
    def left_holds(self) -> bool:
        return all(self[c].holds for c in self.left)

    @property
    def right_holds(self) -> bool:
        return all(self[c].holds for c in self.right)

    @property
    def sampled(self) -> bool:
        return any(r.sampled for r in self.reports)

    @property
    def equivalence_holds(self) -> Optional[bool]:
        """None when the equivalence does not apply because some class pair is not a cotorsion pair."""
        if not self.pairs_verified:
            return None
        return self.left_holds == self.right_holds

    @property
    def holds(self) -> bool:
        return self.left_holds and self.right_holds

    def to_json(self) -> Dict[str, Any]:
        return {
            "conditions": [r.to_json() for r in self.reports],
            "left": self.left,
            "right": self.right,
            "left_holds": self.left_holds,
            "right_holds": self.right_holds,
            "pairs_verified": self.pairs_verified,
            "equivalence_holds": self.equivalence_holds,
            "universes": self.universes,
            "sampled": self.sampled,
        }


@dataclass
class QuillenReport:
    name: str
    conditions: List[SplitReport]
    samples: int

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.conditions)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "holds": self.holds,
            "samples": self.samples,
            "conditions": [c.to_json() for c in self.conditions],
        }


# ---------------------------------------------------------------------------
# Enumeration helpers
# ---------------------------------------------------------------------------

def _budget() -> Dict[str, Any]:
    return get_config().get_config_for_level()


def _extensions(right: Sequence[FPModule], left: Sequence[FPModule], rng: random.Random,
                cap: int, report: Optional[SplitReport] = None) -> Iterator[ShortExactSequence]:
    """
    0 -> X -> Y -> D -> 0 for D in ``right``, X in ``left`` and every class (or ``cap`` random ones).

    Groups larger than ``cap`` are sampled with replacement; ``report`` records
    that together with the classes drawn against the group orders.
    """
    for dm in right:
        for x in left:
            space = ext1_space(dm, x)
            if space.order <= cap:
                classes = space.classes()
            else:
                classes = [space.random_class(rng) for _ in range(cap)]
                logger.debug(f"Ext^1({dm.describe()}, {x.describe()}) has {space.order} classes, sampling {cap}")
            if report is not None:
                report.sampled = report.sampled or space.order > cap
                report.classes_drawn += len(classes)
                report.classes_total += space.order
            for cls in classes:
                yield realize_extension(dm, x, cls)


def _tuples(lists: Sequence[Sequence[Any]], rng: random.Random, cap: int) -> List[Tuple[Any, ...]]:
    """All tuples from the product when there are at most ``cap``, else ``cap`` random ones."""
    if any(not xs for xs in lists):
        return []
    if math.prod(len(xs) for xs in lists) <= cap:
        return [tuple(t) for t in itertools.product(*lists)]
    return [tuple(rng.choice(xs) for xs in lists) for _ in range(cap)]


# ---------------------------------------------------------------------------
# One variable
# ---------------------------------------------------------------------------

@dataclass
class OneVariableSplit:
    reports: List[SplitReport]
    equivalence_holds: bool

    def __getitem__(self, condition: str) -> SplitReport:
        for r in self.reports:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.reports)

    @property
    def sampled(self) -> bool:
        return any(r.sampled for r in self.reports)

    def to_json(self) -> Dict[str, Any]:
        return {"conditions": [r.to_json() for r in self.reports], "equivalence_holds": self.equivalence_holds,
                "holds": self.holds, "sampled": self.sampled}


def check_split_1var(ma: MultiAdjunction, source: ClassPair, target: ClassPair, seed: int = 0) -> OneVariableSplit:
    """
    The four conditions for a one-variable adjunction F ⊣ G:

    1a. 𝒟 is F-right split; 1b. F(𝒟) ⊆ 𝒟'; 2a. ℰ' is G-left split; 2b. G(ℰ') ⊆ ℰ.

    Raises:
        PreconditionError: if either class pair is not a cotorsion pair on its universe
    """
    if ma.arity != 1:
        raise ValueError(f"{ma.name} is not a one-variable adjunction")
    source.require_pair()
    target.require_pair()
    rng = random.Random(seed)
    cap = _budget()["hom_sample_cap"]
    u, u2 = source.universe, target.universe

    r1a = SplitReport("1a")
    for ses in _extensions(source.d.members(u), list(u), rng, cap, r1a):
        r1a.checked += 1
        if not is_monic(ma.left_on_morphisms([ses.inj])):
            r1a.fail(witness(f"F does not keep {ses.describe()} exact", ses))
            break

    r1b = SplitReport("1b")
    for dm in source.d.members(u):
        r1b.checked += 1
        image = ma.left([dm])
        if not target.d.contains(image):
            r1b.fail(witness(f"F({dm.describe()}) = {image.describe()} is not in {target.d.name}", dm))
            break

    r2a = SplitReport("2a")
    for ses in _extensions(list(u2), target.e.members(u2), rng, cap, r2a):
        r2a.checked += 1
        g = ma.right_on_morphisms(0, [None], ses.surj)
        if not is_epic(g):
            r2a.fail(witness(f"G does not keep the epimorphism of {ses.describe()} surjective", ses))
            break

    r2b = SplitReport("2b")
    for em in target.e.members(u2):
        r2b.checked += 1
        image = ma.right(0, [None], em)
        if not source.e.contains(image):
            r2b.fail(witness(f"G({em.describe()}) = {image.describe()} is not in {source.e.name}", em))
            break

    left = r1a.holds and r1b.holds
    right = r2a.holds and r2b.holds
    if left != right:
        logger.error(f"{ma.name}: (1a)∧(1b)={left} but (2a)∧(2b)={right}")
    logger.info(f"{ma.name} split conditions: 1a={r1a.holds} 1b={r1b.holds} 2a={r2a.holds} 2b={r2b.holds}")
    return OneVariableSplit([r1a, r1b, r2a, r2b], left == right)


# ---------------------------------------------------------------------------
# n variables
# ---------------------------------------------------------------------------

def _check_pairs(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair]) -> None:
    if len(sources) != ma.arity:
        raise ValueError(f"{ma.name} has arity {ma.arity} but {len(sources)} source pairs were given")
    for pair, ring in zip(sources, ma.source_rings):
        if pair.ring != ring:
            raise RingMismatchError(f"class pair over {pair.ring} for a slot over {ring}")
    if target.ring != ma.target_ring:
        raise RingMismatchError(f"target pair over {target.ring}, functor lands in {ma.target_ring}")


def _left_collection(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                     rng: random.Random, cap: int, trials: int) -> List[SplitReport]:
    n = ma.arity
    members = [p.d.members(p.universe) for p in sources]
    reports = []
    for k in range(n):
        r = SplitReport(f"0a_{k + 1}")
        fixed = _tuples([members[i] for i in range(n) if i != k], rng, trials)
        sequences = list(_extensions(members[k], list(sources[k].universe), rng, cap, r))
        for others in fixed:
            for ses in sequences:
                objs = list(others[:k]) + [ses.mid] + list(others[k:])
                r.checked += 1
                if not is_monic(ma.apply_in_slot(objs, k, ses.inj)):
                    r.fail(witness(f"F(..., -, ...) in slot {k + 1} does not keep {ses.describe()} exact",
                                   ses, *others))
                    break
            if not r.holds:
                break
        reports.append(r)
    r = SplitReport("0b")
    for objs in _tuples(members, rng, trials):
        r.checked += 1
        image = ma.left(list(objs))
        if not target.d.contains(image):
            r.fail(witness(f"F of {', '.join(m.describe() for m in objs)} is {image.describe()}, "
                           f"not in {target.d.name}", *objs))
            break
    reports.append(r)
    return reports


def _right_collection(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                      rng: random.Random, cap: int, trials: int) -> List[SplitReport]:
    n = ma.arity
    members = [p.d.members(p.universe) for p in sources]
    e0 = target.e.members(target.universe)
    reports = []
    for j in range(n):
        others = [i for i in range(n) if i != j]

        def full(values: Sequence[FPModule]) -> List[Optional[FPModule]]:
            out: List[Optional[FPModule]] = [None] * n
            for i, m in zip(others, values):
                out[i] = m
            return out

        r = SplitReport(f"{j + 1}a_0")
        sequences = list(_extensions(list(target.universe), e0, rng, cap, r))
        for values in _tuples([members[i] for i in others], rng, trials):
            objs = full(values)
            for ses in sequences:
                r.checked += 1
                maps = [None if m is None else identity(m) for m in objs]
                if not is_epic(ma.right_on_morphisms(j, maps, ses.surj)):
                    r.fail(witness(f"G^{j + 1} does not keep the epimorphism of {ses.describe()} surjective",
                                   ses, *values))
                    break
            if not r.holds:
                break
        reports.append(r)

        for k in others:
            r = SplitReport(f"{j + 1}a_{k + 1}")
            rest = [i for i in others if i != k]
            sequences = list(_extensions(members[k], list(sources[k].universe), rng, cap, r))
            for values in _tuples([members[i] for i in rest] + [e0], rng, trials):
                fixed = dict(zip(rest, values[:-1]))
                e = values[-1]
                for ses in sequences:
                    maps: List[Optional[ModuleMorphism]] = [None] * n
                    for i in others:
                        maps[i] = ses.inj if i == k else identity(fixed[i])
                    r.checked += 1
                    if not is_epic(ma.right_on_morphisms(j, maps, identity(e))):
                        r.fail(witness(f"G^{j + 1}(..., -, ..., {e.describe()}) in slot {k + 1} "
                                       f"does not keep {ses.describe()} exact", ses, *values))
                        break
                if not r.holds:
                    break
            reports.append(r)

        r = SplitReport(f"{j + 1}b")
        for values in _tuples([members[i] for i in others] + [e0], rng, trials):
            r.checked += 1
            image = ma.right(j, full(values[:-1]), values[-1])
            if not sources[j].e.contains(image):
                r.fail(witness(f"G^{j + 1} of {', '.join(m.describe() for m in values)} is {image.describe()}, "
                               f"not in {sources[j].e.name}", *values))
                break
        reports.append(r)
    return reports


def check_nsplit_duality(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                         seed: int = 0) -> DualityReport:
    """
    The conditions (0a_k), (0b) against (ja_0), (ja_k), (jb) for every slot j.

    The two collections are equivalent when every pair is a cotorsion pair;
    ``equivalence_holds`` is None otherwise.
    """
    _check_pairs(ma, target, sources)
    rng = random.Random(seed)
    budget = _budget()
    cap, trials = budget["hom_sample_cap"], budget["random_trials"]
    left = _left_collection(ma, target, sources, rng, cap, trials)
    right = _right_collection(ma, target, sources, rng, cap, trials)
    verified = target.is_pair and all(p.is_pair for p in sources)
    report = DualityReport(left + right, [r.condition for r in left], [r.condition for r in right], verified,
                           [p.universe.parameters() for p in [target, *sources]])
    if report.equivalence_holds is False:
        logger.error(f"{ma.name}: left collection {report.left_holds}, right collection {report.right_holds}")
    logger.info(f"{ma.name} n-split duality: left={report.left_holds} right={report.right_holds} "
                f"equivalent={report.equivalence_holds}")
    return report


# ---------------------------------------------------------------------------
# Pushout products of split monomorphisms
# ---------------------------------------------------------------------------

class HoveyResult(NamedTuple):
    monic: bool
    coker_iso: bool
    hypotheses_met: bool


def check_hovey_gen(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                    fs: Sequence[ModuleMorphism], duality: Optional[DualityReport] = None,
                    seed: int = 0) -> HoveyResult:
    """
    Whether □_F(f_i) is monic with cokernel F(coker f_i).

    ``hypotheses_met`` records whether every f_i is monic with cokernel in
    its 𝒟_i; the result is computed either way.

    Raises:
        PreconditionError: if (0a_k)/(0b) fail on the universes
    """
    _check_maps(ma, fs)
    if duality is None:
        _check_pairs(ma, target, sources)
        budget = _budget()
        rng = random.Random(seed)
        left = _left_collection(ma, target, sources, rng, budget["hom_sample_cap"], budget["random_trials"])
        left_holds = all(r.holds for r in left)
        evidence: Any = [r.to_json() for r in left]
    else:
        left_holds = duality.left_holds
        evidence = duality
    if not left_holds:
        raise PreconditionError(f"(0a_k)/(0b) do not hold for {ma.name}", evidence)
    hypotheses = all(is_monic(f) and p.d.contains(cokernel(f).module) for f, p in zip(fs, sources))
    pp = pushout_product(ma, fs)
    monic = is_monic(pp)
    lhs, rhs = coker_formula_sides(ma, fs)
    result = HoveyResult(monic, is_isomorphic(lhs, rhs), hypotheses)
    if hypotheses and not monic:
        logger.error(f"{ma.name}: pushout product is not monic although every map is a monomorphism with cokernel in its class")
    return result


# ---------------------------------------------------------------------------
# Lifts to complexes
# ---------------------------------------------------------------------------

def _box(complexes: Sequence[ChainComplex]) -> List[Tuple[int, ...]]:
    return [tuple(a) for a in itertools.product(*(c.degrees for c in complexes))]


def lift_functor_on_maps(ma: MultiAdjunction, maps: Sequence[ChainMap]) -> ChainMap:
    """Ch(F)(f_1, ..., f_n) between the total complexes of sources and targets."""
    sources = [f.source for f in maps]
    targets = [f.target for f in maps]
    src, tgt = lift_functor(ma, sources), lift_functor(ma, targets)
    ring = ma.target_ring
    if not src.modules or not tgt.modules:
        return ChainMap(src, tgt, {})
    src_box, tgt_box = _box(sources), set(_box(targets))
    comps = {}
    for k in src.degrees:
        layer = [a for a in src_box if sum(a) == k]
        tgt_layer = [b for b in _box(targets) if sum(b) == k]
        widths = {b: ma.left([c.module(x) for c, x in zip(targets, b)]).generators for b in tgt_layer}
        offsets, col = {}, 0
        for b in tgt_layer:
            offsets[b] = col
            col += widths[b]
        arr = np.zeros((src.module(k).generators, tgt.module(k).generators), dtype=np.int64)
        row = 0
        for a in layer:
            f = ma.left_on_morphisms([m.component(x) for m, x in zip(maps, a)])
            height = f.matrix.rows
            if a in tgt_box and height and f.matrix.cols:
                arr[row:row + height, offsets[a]:offsets[a] + f.matrix.cols] = f.matrix.array
            row += height
        matrix = Matrix.from_array(ring, arr) if arr.size else Matrix.zeros(ring, *map(int, arr.shape))
        comps[k] = ModuleMorphism(src.module(k), tgt.module(k), matrix, check=False)
    return ChainMap(src, tgt, comps)


def disc_sequence(ses: ShortExactSequence, n: int = 0) -> Optional[ComplexSES]:
    """The sequence of discs D^n of a module sequence; None when one of its ends is zero."""
    a, b, c = disc(n, ses.left), disc(n, ses.mid), disc(n, ses.right)
    if not (a.modules and b.modules and c.modules):
        return None
    inj = ChainMap(a, b, {n: ses.inj, n + 1: ses.inj})
    surj = ChainMap(b, c, {n: ses.surj, n + 1: ses.surj})
    return ComplexSES(a, b, c, inj, surj)


def complex_extensions(pair: ClassPair, right: Sequence[ChainComplex], left: Sequence[ChainComplex],
                       rng: random.Random, count: int) -> List[ComplexSES]:
    """
    Short exact sequences of complexes with cokernel from ``right``.

    Discs of realized module extensions with cokernel in 𝒟 come first, then
    twisted sums of ``left`` and ``right`` complexes along random coboundary twists.
    """
    out: List[ComplexSES] = []
    u = pair.universe
    mods = [m for m in pair.d.members(u) if not m.is_zero]
    for ses in _extensions(mods, list(u), rng, 1):
        if len(out) >= count // 2:
            break
        lifted = disc_sequence(ses)
        if lifted is not None:
            out.append(lifted)
    attempts = 0
    while len(out) < count and right and left and attempts < 4 * count:
        attempts += 1
        dc, ac = rng.choice(right), rng.choice(left)
        degrees = set(dc.degrees) & set(ac.degrees)
        phi = {k: hom_space(dc.module(k), ac.module(k)).random_morphism(rng) for k in degrees}
        out.append(twisted_sum(ac, dc, coboundary_twist(ac, dc, phi)))
    return out


def _flags(c: ChainComplex, pair: ClassPair):
    return classify(c, pair.d, pair.e)


def check_quillen_1var(ma: MultiAdjunction, source: ClassPair, target: ClassPair,
                       complexes: Optional[Sequence[ChainComplex]] = None, seed: int = 0,
                       split: Optional[OneVariableSplit] = None) -> QuillenReport:
    """
    On sampled complexes: F keeps sequences with 𝒟̃ cokernel exact, maps 𝒟̃
    into 𝒟̃' and maps dg𝒟̃ into dg𝒟̃'.

    Raises:
        PreconditionError: unless all four one-variable split conditions hold
    """
    if split is None:
        split = check_split_1var(ma, source, target, seed)
    if not split.holds:
        raise PreconditionError(f"split conditions fail for {ma.name}", split)
    rng = random.Random(seed)
    if complexes is None:
        complexes = sample_complexes(source.d, source.universe, seed)
    flags = [(c, _flags(c, source)) for c in complexes]
    tilde = [c for c, f in flags if f.is_tilde_d and c.modules]
    dg = [c for c, f in flags if f.is_dg_d and c.modules]

    r1 = SplitReport("exact-sequences")
    for ses in complex_extensions(source, tilde, list(complexes), rng, _budget()["lemma_trials"]):
        if not _flags(ses.right, source).is_tilde_d:
            continue
        r1.checked += 1
        inj = lift_functor_on_maps(ma, [ses.inj])
        surj = lift_functor_on_maps(ma, [ses.surj])
        bad = [k for k in inj.degrees if not is_short_exact(inj.component(k), surj.component(k))]
        if bad:
            r1.fail(witness(f"F breaks exactness in degree {bad[0]} of a sequence ending in "
                            f"{ses.right.describe()}", ses.left, ses.mid, ses.right))

    r2 = SplitReport("tilde-preserved")
    for c in tilde:
        r2.checked += 1
        image = lift_functor(ma, [c])
        if not _flags(image, target).is_tilde_d:
            r2.fail(witness(f"F({c.describe()}) = {image.describe()} leaves the tilde class", c))

    r3 = SplitReport("dg-preserved")
    for c in dg:
        r3.checked += 1
        image = lift_functor(ma, [c])
        if not _flags(image, target).is_dg_d:
            r3.fail(witness(f"F({c.describe()}) = {image.describe()} has an entry outside {target.d.name}", c))

    report = QuillenReport(f"quillen:{ma.name}", [r1, r2, r3], len(complexes))
    logger.info(f"{ma.name} lifted to complexes: holds={report.holds} on {len(complexes)} samples")
    return report


def check_cot_main(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                   samples: Optional[Sequence[Sequence[ChainComplex]]] = None, seed: int = 0,
                   duality: Optional[DualityReport] = None) -> QuillenReport:
    """
    On sampled complexes per slot: Ch(F) keeps sequences with dg𝒟̃ cokernel in
    one slot exact, maps dg𝒟̃ tuples into dg𝒟̃_0, and maps tuples with one
    𝒟̃ input into 𝒟̃_0.

    Raises:
        PreconditionError: unless the module-level (0a_k)/(0b) conditions hold
    """
    _check_pairs(ma, target, sources)
    if duality is None:
        duality = check_nsplit_duality(ma, target, sources, seed)
    if not duality.left_holds:
        raise PreconditionError(f"(0a_k)/(0b) do not hold for {ma.name}", duality)
    return cot_main_conditions(ma, target, sources, samples, seed)


def cot_main_conditions(ma: MultiAdjunction, target: ClassPair, sources: Sequence[ClassPair],
                        samples: Optional[Sequence[Sequence[ChainComplex]]] = None, seed: int = 0,
                        sequences: Optional[Sequence[Sequence[ComplexSES]]] = None,
                        trials: Optional[int] = None, per_sequence: int = 1) -> QuillenReport:
    """
    The three conditions of check_cot_main, evaluated whether or not (0a_k)/(0b) hold.

    ``sequences`` replaces the generated sequences of complexes per slot and
    ``per_sequence`` bounds the tuples of the other slots each one is tried
    against. With ``trials`` at least the number of sample tuples every
    condition runs over all of them.
    """
    _check_pairs(ma, target, sources)
    rng = random.Random(seed)
    trials = trials or _budget()["lemma_trials"]
    n = ma.arity
    if samples is None:
        samples = [sample_complexes(p.d, p.universe, seed + i) for i, p in enumerate(sources)]
    dg: List[List[ChainComplex]] = []
    tilde: List[List[ChainComplex]] = []
    for pool, pair in zip(samples, sources):
        flags = [(c, _flags(c, pair)) for c in pool if c.modules]
        dg.append([c for c, f in flags if f.is_dg_d])
        tilde.append([c for c, f in flags if f.is_tilde_d])

    r1 = SplitReport("lifted-split")
    for k in range(n):
        others = [dg[i] for i in range(n) if i != k]
        if sequences is not None:
            pool = list(sequences[k])
        else:
            pool = complex_extensions(sources[k], dg[k], samples[k], rng, max(1, trials // n))
        failed = False
        for ses in pool:
            fixed = _tuples(others, rng, per_sequence)
            if not fixed:
                break
            for values in fixed:
                maps = [identity_chain_map(c) for c in values]
                maps.insert(k, ses.inj)
                r1.checked += 1
                lifted = lift_functor_on_maps(ma, maps)
                bad = [d for d in lifted.degrees if not is_monic(lifted.component(d))]
                if bad:
                    r1.fail(witness(f"Ch(F) in slot {k + 1} is not monic in degree {bad[0]}", ses.left, ses.mid,
                                    ses.right, *values))
                    failed = True
                    break
            if failed:
                break

    r2 = SplitReport("dg-preserved")
    for values in _tuples(dg, rng, trials):
        r2.checked += 1
        image = lift_functor(ma, list(values))
        if not _flags(image, target).is_dg_d:
            r2.fail(witness(f"Ch(F) of dg inputs has an entry outside {target.d.name}", *values))

    r3 = SplitReport("tilde-exact")
    for k in range(n):
        pools = [tilde[i] if i == k else dg[i] for i in range(n)]
        for values in _tuples(pools, rng, max(1, trials // n)):
            r3.checked += 1
            image = lift_functor(ma, list(values))
            if not _flags(image, target).is_tilde_d:
                r3.fail(witness(f"Ch(F) with a tilde input in slot {k + 1} is {image.describe()}, "
                                f"outside the tilde class of {target.d.name}", *values))

    report = QuillenReport(f"cot-main:{ma.name}", [r1, r2, r3], sum(len(p) for p in samples))
    logger.info(f"{ma.name} on complexes: holds={report.holds}")
    return report


# ---------------------------------------------------------------------------
# Finite sums of sequences
# ---------------------------------------------------------------------------

def check_exact_sums(pair: ClassPair, seed: int = 0, count: int = 3) -> Tuple[bool, List[Witness]]:
    """
    Direct sums of sequences with cokernels in 𝒟 stay exact with cokernel in 𝒟;
    dually for kernels in ℰ.
    """
    rng = random.Random(seed)
    budget = _budget()
    u = pair.universe
    witnesses: List[Witness] = []
    for side in ("d", "e"):
        cls: ClassSpec = pair.d if side == "d" else pair.e
        if side == "d":
            pool = list(_extensions(cls.members(u), list(u), rng, budget["hom_sample_cap"]))
        else:
            pool = list(_extensions(list(u), cls.members(u), rng, budget["hom_sample_cap"]))
        if not pool:
            continue
        for _ in range(budget["lemma_trials"]):
            chosen = [rng.choice(pool) for _ in range(rng.randint(2, count))]
            inj = direct_sum_morphism([s.inj for s in chosen], u.ring)
            surj = direct_sum_morphism([s.surj for s in chosen], u.ring)
            end = surj.target if side == "d" else inj.source
            if not is_short_exact(inj, surj):
                witnesses.append(witness("finite direct sum of short exact sequences is not exact", *chosen))
            elif not cls.contains(end):
                witnesses.append(witness(f"direct sum leaves {cls.name}: {end.describe()}", *chosen))
    return not witnesses, witnesses
