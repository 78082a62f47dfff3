"""
The named lemma battery: seeded randomized (or exhaustive) checks of the
cube lemmas, splitness lemmas and small categorical facts the product
checkers rely on.

Each lemma takes a ring, a seed and a trial count and returns a
LemmaResult; ``run_lemma`` dispatches by name.
"""

from cotlab.algebra.common import *
from cotlab.algebra.ring import Matrix, Ring
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, identity, is_epic, is_isomorphic, is_monic, lift_along_epi, pushout,
    random_morphism, zero_morphism,
)
from cotlab.algebra.diagrams import induced_from_colimit, induced_into_limit
from cotlab.algebra.bifunctors import RestrictedAdjunction, TensorAdjunction, hom_space, tensor_morphisms
from cotlab.algebra.cotorsion import ClassPair, ClassSpec, Universe, enumerate_universe
from cotlab.algebra.complexes import disc, sphere
from cotlab.algebra.products import (
    _extensions, _rebuild, _tuples, check_exact_sums, check_nsplit_duality, corner_map, cot_main_conditions,
    disc_sequence, pullback_product, pullback_product_data, pushout_product, pushout_product_data,
    verify_coker_formula,
)

logger = logging.getLogger(__name__)


@dataclass
class LemmaResult:
    name: str
    holds: bool
    trials: int
    witnesses: List[Witness] = field(default_factory=list)
    parameters: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "holds": self.holds,
            "trials": self.trials,
            "parameters": self.parameters,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def _level() -> Dict[str, Any]:
    return get_config().get_config_for_level()


def _universe(ring: Ring, arity: int = 2) -> Universe:
    # arity 3 cubes over two-factor modules grow quickly
    k = _level()["universe_max_factors"] if arity <= 2 else 1
    return enumerate_universe(ring, k)


def _nonzero(u: Universe) -> List[FPModule]:
    return [m for m in u.modules if not m.is_zero]


def random_maps(u: Universe, rng: random.Random, count: int) -> List[ModuleMorphism]:
    mods = list(u.modules)
    return [random_morphism(rng.choice(mods), rng.choice(mods), rng) for _ in range(count)]


def _result(name: str, trials: int, witnesses: List[Witness], **parameters: Any) -> LemmaResult:
    result = LemmaResult(name, not witnesses, trials, witnesses, parameters)
    log = logger.info if result.holds else logger.warning
    log(f"lemma {name}: holds={result.holds} over {trials} trials")
    return result


# ---------------------------------------------------------------------------
# Cube lemmas
# ---------------------------------------------------------------------------

def lemma_coker_pushout(ring: Ring, seed: int = 0, trials: Optional[int] = None, arity: int = 2) -> LemmaResult:
    """coker(□_⊗ f_i) ≅ ⊗ coker f_i, with the exact tail, for random f_i."""
    trials = trials or _level()["random_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, arity)
    u = _universe(ring, arity)
    witnesses = []
    for _ in range(trials):
        fs = random_maps(u, rng, arity)
        if not verify_coker_formula(ma, fs):
            witnesses.append(witness("cokernel of the pushout product differs from the tensor of cokernels", *fs))
    return _result("coker-pushout", trials, witnesses, ring=ring.modulus, arity=arity, seed=seed)


def lemma_corner_map(ring: Ring, seed: int = 0, trials: Optional[int] = None) -> LemmaResult:
    """At arity 2 the cube construction agrees with the classical corner map."""
    trials = trials or _level()["random_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, 2)
    u = _universe(ring)
    witnesses = []
    for _ in range(trials):
        f, g = random_maps(u, rng, 2)
        pp, cm = pushout_product(ma, [f, g]), corner_map(f, g)
        same = pp.matrix == cm.matrix and is_isomorphic(pp.source, cm.source)
        if not same:
            witnesses.append(witness("pushout product and corner map disagree", f, g))
    return _result("corner-map", trials, witnesses, ring=ring.modulus, seed=seed)


def _same_quotient(a: FPModule, b: FPModule) -> bool:
    """The identity on generators is a well-defined isomorphism a -> b."""
    if a.generators != b.generators:
        return False
    try:
        ModuleMorphism(a, b, Matrix.identity(a.ring, a.generators))
        ModuleMorphism(b, a, Matrix.identity(a.ring, a.generators))
    except NotWellDefinedError:
        return False
    return True


def lemma_pp_restriction(ring: Ring, seed: int = 0, trials: Optional[int] = None, arity: int = 2) -> LemmaResult:
    """□_{F(-, X)}(f_1, ..., f_{n-1}) and □_F(f_1, ..., f_{n-1}, 0 -> X) are the same map."""
    trials = trials or _level()["lemma_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, arity)
    u = _universe(ring, arity)
    zero = FPModule.zero(ring)
    witnesses = []
    for _ in range(trials):
        fs = random_maps(u, rng, arity - 1)
        x = rng.choice(list(u.modules))
        restricted = RestrictedAdjunction(ma, arity - 1, x)
        small = pushout_product(restricted, fs)
        big = pushout_product(ma, fs + [zero_morphism(zero, x)])
        if not (_same_quotient(small.source, big.source) and small.matrix == big.matrix
                and small.target.same_as(big.target)):
            witnesses.append(witness(f"restriction to X = {x.describe()} changes the pushout product", *fs, x))
    return _result("pp-restriction", trials, witnesses, ring=ring.modulus, arity=arity, seed=seed)


def lemma_pp_square(ring: Ring, seed: int = 0, trials: Optional[int] = None, arity: int = 2) -> LemmaResult:
    """
    colim F(f.., 0 -> A_n) -> colim F(f.., 0 -> B_n) over F(B.., A_n) -> colim F(f_1, ..., f_n) is a pushout.
    """
    trials = trials or _level()["lemma_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, arity)
    u = _universe(ring, arity)
    zero = FPModule.zero(ring)
    witnesses = []
    for _ in range(trials):
        fs = random_maps(u, rng, arity)
        head, fn = fs[:-1], fs[-1]
        on_a = pushout_product_data(ma, head + [zero_morphism(zero, fn.source)])
        on_b = pushout_product_data(ma, head + [zero_morphism(zero, fn.target)])
        full = pushout_product_data(ma, fs)
        top_maps = {}
        for v in on_a.diagram.ordered_vertices:
            maps = [identity(f.target) if bit else identity(f.source) for f, bit in zip(head, v[:-1])]
            maps.append(fn if v[-1] else identity(zero))
            f = _rebuild(ma.left_on_morphisms(maps), on_a.diagram.vertices[v], on_b.diagram.vertices[v])
            top_maps[v] = f.then(on_b.cocone.legs[v])
        top = induced_from_colimit(on_a.cocone, on_a.diagram, on_b.cocone.module, top_maps)
        square = pushout(on_a.morphism, top)
        corner = (1,) * (arity - 1) + (0,)
        right_maps = {}
        for v in on_b.diagram.ordered_vertices:
            if v[-1]:
                right_maps[v] = _rebuild(full.cocone.legs[v], on_b.diagram.vertices[v], full.cocone.module)
            else:
                right_maps[v] = zero_morphism(on_b.diagram.vertices[v], full.cocone.module)
        right = induced_from_colimit(on_b.cocone, on_b.diagram, full.cocone.module, right_maps)
        try:
            comparison = ModuleMorphism(square.module, full.cocone.module,
                                        full.cocone.legs[corner].matrix.vstack(right.matrix))
            ok = is_monic(comparison) and is_epic(comparison)
        except NotWellDefinedError:
            ok = False
        if not ok:
            witnesses.append(witness("the square of partial colimits is not a pushout", *fs))
    return _result("pp-square", trials, witnesses, ring=ring.modulus, arity=arity, seed=seed)


def lemma_pp_adjunction(ring: Ring, seed: int = 0, trials: Optional[int] = None, arity: int = 2) -> LemmaResult:
    """
    Hom(colim F(f.., 0 -> B_j, ..), A_0) ≅ Hom(B_j, lim G^j(f.., A_0 -> 0)), by cardinality
    and by transposing a random map vertex by vertex into a cone.
    """
    trials = trials or _level()["lemma_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, arity)
    u = _universe(ring, arity)
    zero = FPModule.zero(ring)
    witnesses = []
    for _ in range(trials):
        j = rng.randrange(arity)
        fs = random_maps(u, rng, arity)
        bj = rng.choice(list(u.modules))
        a0 = rng.choice(list(u.modules))
        left_fs = list(fs)
        left_fs[j] = zero_morphism(zero, bj)
        colim = pushout_product_data(ma, left_fs)
        lim = pullback_product_data(ma, j, fs, zero_morphism(a0, zero))
        left_hom = hom_space(colim.cocone.module, a0)
        right_hom = hom_space(bj, lim.cone.module)
        if left_hom.cardinality != right_hom.cardinality:
            witnesses.append(witness(f"|Hom| differs: {left_hom.cardinality} vs {right_hom.cardinality}",
                                     *fs, bj, a0))
            continue
        phi = left_hom.random_morphism(rng)
        others = [i for i in range(arity) if i != j]
        legs = {}
        for w in lim.diagram.ordered_vertices:
            target = lim.diagram.vertices[w]
            if w[-1]:
                legs[w] = zero_morphism(bj, target)
                continue
            v = [0] * arity
            v[j] = 1
            for t, i in enumerate(others):
                v[i] = 1 - w[t]
            objs = [left_fs[i].target if v[i] else left_fs[i].source for i in range(arity)]
            component = colim.cocone.legs[tuple(v)].then(phi)
            component = _rebuild(component, ma.left(objs), a0)
            legs[w] = _rebuild(ma.transpose(j, objs, a0, component), bj, target)
        try:
            induced_into_limit(lim.cone, lim.diagram, bj, legs)
        except DiagramError:
            witnesses.append(witness("transposed components do not form a cone", *fs, bj, a0))
    return _result("pp-adjunction", trials, witnesses, ring=ring.modulus, arity=arity, seed=seed)


# ---------------------------------------------------------------------------
# Splitness lemmas
# ---------------------------------------------------------------------------

def lemma_hom_left_split(ring: Ring, seed: int = 0, trials: Optional[int] = None,
                         pair: Optional[ClassPair] = None) -> LemmaResult:
    """
    For f mono with cokernel in 𝒟 and g epi with kernel in ℰ, the pullback product
    Hom(B, F) -> Hom(B, G) ×_{Hom(A, G)} Hom(A, F) is surjective.

    ``trials=None`` checks every pair of enumerated sequences.
    """
    rng = random.Random(seed)
    if pair is None:
        u = enumerate_universe(ring, _level()["universe_max_factors"])
        pair = ClassPair(ClassSpec.of("flat", ring), ClassSpec.of("all", ring), u)
    u = pair.universe
    cap = _level()["hom_sample_cap"]
    monos = list(_extensions(pair.d.members(u), list(u), rng, cap))
    epis = list(_extensions(list(u), pair.e.members(u), rng, cap))
    combos = [(s, t) for s in monos for t in epis]
    if trials is not None and len(combos) > trials:
        combos = rng.sample(combos, trials)
    ma = TensorAdjunction(ring, 2)
    witnesses = []
    for s, t in combos:
        if not is_epic(pullback_product(ma, 1, [s.inj, None], t.surj)):
            witnesses.append(witness("Hom pullback product is not surjective", s, t))
    return _result("hom-left-split", len(combos), witnesses, ring=ring.modulus, seed=seed,
                   universe=u.parameters())


def lemma_flat_split(ring: Ring, seed: int = 0, trials: Optional[int] = None) -> LemmaResult:
    """Tensoring a short exact sequence ending in a flat module with any X keeps it exact."""
    rng = random.Random(seed)
    u = enumerate_universe(ring, _level()["universe_max_factors"])
    flat = ClassSpec.of("flat", ring)
    sequences = list(_extensions(flat.members(u), list(u), rng, _level()["hom_sample_cap"]))
    combos = [(s, x) for s in sequences for x in u.modules]
    if trials is not None and len(combos) > trials:
        combos = rng.sample(combos, trials)
    witnesses = []
    for s, x in combos:
        if not is_monic(tensor_morphisms(s.inj, identity(x))):
            witnesses.append(witness(f"- ⊗ {x.describe()} breaks {s.describe()}", s, x))
    return _result("flat-split", len(combos), witnesses, ring=ring.modulus, seed=seed, universe=u.parameters())


def lemma_exact_sums(ring: Ring, seed: int = 0, trials: Optional[int] = None) -> LemmaResult:
    """Finite direct sums of sequences with flat cokernels (or arbitrary kernels) stay exact in class."""
    u = enumerate_universe(ring, _level()["universe_max_factors"])
    pair = ClassPair(ClassSpec.of("flat", ring), ClassSpec.of("all", ring), u)
    _, witnesses = check_exact_sums(pair, seed)
    return _result("exact-sums", 2 * _level()["lemma_trials"], witnesses, ring=ring.modulus, seed=seed)


def lemma_mono_epi_crit(ring: Ring, seed: int = 0, trials: Optional[int] = None) -> LemmaResult:
    """
    f∘g epic implies f epic and g∘f monic implies f monic; an epimorphism
    from a free module lifts through f exactly when f is epic.
    """
    trials = trials or _level()["random_trials"]
    rng = random.Random(seed)
    u = enumerate_universe(ring, _level()["universe_max_factors"])
    mods = list(u.modules)
    witnesses = []
    for _ in range(trials):
        x, y, z = rng.choice(mods), rng.choice(mods), rng.choice(mods)
        f = random_morphism(x, y, rng)
        g = random_morphism(z, x, rng)
        if is_epic(g.then(f)) and not is_epic(f):
            witnesses.append(witness("f∘g is epic but f is not", f, g))
        h = random_morphism(y, z, rng)
        if is_monic(f.then(h)) and not is_monic(f):
            witnesses.append(witness("h∘f is monic but f is not", f, h))
        cover = FPModule.free(ring, y.generators)
        p = ModuleMorphism(cover, y, Matrix.identity(ring, y.generators))
        lifted = lift_along_epi(p, f)
        if (lifted is not None) != is_epic(f):
            witnesses.append(witness("free cover lifts through f but f is not epic" if lifted is not None
                                     else "f is epic but the free cover does not lift", f))
    return _result("mono-epi-crit", trials, witnesses, ring=ring.modulus, seed=seed)


_CONVERSE_PAIRS = (("flat", "all"), ("all", "injective"))


def _converse_targets(ring: Ring) -> List[ClassPair]:
    """Targets whose left class misses F of flat modules."""
    broken = [ClassPair.named(ring, "zero", "all", 1)]
    p = min(ring.factorization)
    if p != ring.modulus:
        u = enumerate_universe(ring, 1)
        broken.append(ClassPair(ClassSpec.of("explicit", ring, [FPModule.cyclic(ring, p)]),
                                ClassSpec.of("all", ring), u))
    return broken


def lemma_hovey_converse(ring: Ring, seed: int = 0, trials: Optional[int] = None, arity: int = 2) -> LemmaResult:
    """
    If Ch(F) passes the three lifted conditions then (0a_k) and (0b) hold.

    Over single-factor universes the lifted conditions run on every sphere
    and disc of a nonzero 𝒟_k member and on the discs of every extension
    with cokernel in 𝒟_k, so a failing (0a_k) or (0b) instance appears among
    them. Targets whose left class misses F(R, ..., R) are injected with flat
    sources and must fail on both sides.
    """
    trials = trials or _level()["lemma_trials"]
    rng = random.Random(seed)
    ma = TensorAdjunction(ring, arity)
    pairs = [ClassPair.named(ring, d, e, 1) for d, e in _CONVERSE_PAIRS]
    # Ext^1 between cyclic modules has at most n classes
    cap = max(ring.modulus, _level()["hom_sample_cap"])
    samples, sequences = {}, {}
    for pair in pairs:
        mods = [m for m in pair.d.members(pair.universe) if not m.is_zero]
        samples[id(pair)] = [sphere(0, m) for m in mods] + [disc(0, m) for m in mods]
        lifted = (disc_sequence(ses) for ses in _extensions(mods, list(pair.universe), rng, cap))
        sequences[id(pair)] = [s for s in lifted if s is not None]

    configs = [(list(t[:-1]), t[-1], False) for t in _tuples([pairs] * (arity + 1), rng, trials)]
    configs += [([pairs[0]] * arity, target, True) for target in _converse_targets(ring)]
    witnesses = []
    for sources, target, injected in configs:
        pools = [samples[id(p)] for p in sources]
        size = max(1, math.prod(len(pool) for pool in pools))
        duality = check_nsplit_duality(ma, target, sources, seed)
        lifted = cot_main_conditions(ma, target, sources, pools, seed,
                                     sequences=[sequences[id(p)] for p in sources],
                                     trials=arity * size, per_sequence=size)
        label = f"{', '.join(p.d.name for p in sources)} -> {target.d.name}"
        if injected and (duality.left_holds or lifted.holds):
            witnesses.append(witness(f"target {target.d.name} is not closed under F of flat modules yet "
                                     f"(0a_k)/(0b)={duality.left_holds} and lifted={lifted.holds}",
                                     duality, lifted))
        elif not injected and lifted.holds and not duality.left_holds:
            failed = [c for c in duality.left if not duality[c].holds]
            witnesses.append(witness(f"{label}: lifted conditions hold but {', '.join(failed)} fail",
                                     duality, lifted))
        logger.debug(f"{label}: left={duality.left_holds} lifted={lifted.holds}")
    broken = sum(1 for *_, flag in configs if flag)
    return _result("hovey-converse", len(configs), witnesses, ring=ring.modulus, arity=arity, seed=seed,
                   configurations=len(configs) - broken, injected=broken)


LEMMAS: Dict[str, Callable[..., LemmaResult]] = {
    "coker-pushout": lemma_coker_pushout,
    "corner-map": lemma_corner_map,
    "pp-restriction": lemma_pp_restriction,
    "pp-square": lemma_pp_square,
    "pp-adjunction": lemma_pp_adjunction,
    "hom-left-split": lemma_hom_left_split,
    "flat-split": lemma_flat_split,
    "exact-sums": lemma_exact_sums,
    "mono-epi-crit": lemma_mono_epi_crit,
    "hovey-converse": lemma_hovey_converse,
}

_WITH_ARITY = {"coker-pushout", "pp-restriction", "pp-square", "pp-adjunction", "hovey-converse"}


def run_lemma(name: str, ring: Ring, seed: int = 0, trials: Optional[int] = None,
              arity: Optional[int] = None) -> LemmaResult:
    """
    Run one lemma by name.

    Raises:
        KeyError: for an unknown lemma name
    """
    if name not in LEMMAS:
        raise KeyError(f"unknown lemma {name!r}; choose from {', '.join(sorted(LEMMAS))}")
    fn = LEMMAS[name]
    if name in _WITH_ARITY and arity is not None:
        return fn(ring, seed, trials, arity=arity)
    return fn(ring, seed, trials)
