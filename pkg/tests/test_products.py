import random

import pytest
from hypothesis import given, settings, strategies as st

from cotlab.algebra.common import PreconditionError, RingMismatchError
from cotlab.algebra.ring import Matrix, Ring
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, cokernel, identity, is_epic, is_isomorphic, is_monic, kernel, random_morphism,
    realize_extension,
)
from cotlab.algebra.bifunctors import adjunction_from_spec, ext1_space
from cotlab.algebra.cotorsion import ClassPair, ClassSpec, enumerate_universe
from cotlab.algebra.complexes import disc, sample_complexes, sphere
from cotlab.algebra.products import (
    check_cot_main, check_exact_sums, check_hovey_gen, check_nsplit_duality, check_quillen_1var,
    check_split_1var, coker_formula_sides, coker_tail_exact, corner_map, cot_main_conditions, disc_sequence,
    pullback_product, pushout_product, pushout_product_data, verify_coker_formula,
)
from cotlab.config import get_config


def times2(ring):
    return ModuleMorphism(FPModule.cyclic(ring, 2), FPModule.cyclic(ring, 4), Matrix.from_rows(ring, [[2]]))


def split_injection(ring):
    return ModuleMorphism(FPModule.cyclic(ring, 2), FPModule.from_invariants(ring, [2, 4]),
                          Matrix.from_rows(ring, [[1, 0]]))


def pair(ring, d, e, max_factors=1):
    return ClassPair.named(ring, d, e, max_factors)


# ---------------------------------------------------------------------------
# Pushout and pullback products
# ---------------------------------------------------------------------------

def test_pushout_product_of_times_two(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    pp = pushout_product(ma, [times2(z4), times2(z4)])
    assert pp.source.invariants == (2, 2)
    assert pp.target.invariants == (4,)
    assert kernel(pp).module.invariants == (2,)
    assert cokernel(pp).module.invariants == (2,)
    assert not is_monic(pp)


def test_pushout_product_matches_corner_map(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    f, g = times2(z4), split_injection(z4)
    pp, corner = pushout_product(ma, [f, g]), corner_map(f, g)
    assert is_isomorphic(pp.source, corner.source)
    assert is_isomorphic(cokernel(pp).module, cokernel(corner).module)
    assert is_isomorphic(kernel(pp).module, kernel(corner).module)


def test_pushout_product_cocone_has_punctured_cube(z4):
    ma = adjunction_from_spec("tensor:3", z4)
    data = pushout_product_data(ma, [times2(z4)] * 3)
    assert (1, 1, 1) not in data.diagram.vertices
    assert len(data.diagram.ordered_vertices) == 7


def test_pushout_product_arguments(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    with pytest.raises(ValueError):
        pushout_product(ma, [times2(z4)])
    with pytest.raises(RingMismatchError):
        pushout_product(ma, [times2(z4), times2(Ring(8))])


def test_pushout_product_of_identity_functor_is_the_map(z4):
    ma = adjunction_from_spec("identity", z4)
    pp = pushout_product(ma, [times2(z4)])
    assert pp.source.invariants == (2,)
    assert kernel(pp).module.is_zero


@pytest.mark.parametrize("make", [times2, split_injection])
def test_pullback_product_along_identity_is_iso(z4, make):
    ma = adjunction_from_spec("tensor:2", z4)
    m = FPModule.cyclic(z4, 4)
    pb = pullback_product(ma, 0, [None, make(z4)], identity(m))
    assert is_monic(pb) and is_epic(pb)
    with pytest.raises(ValueError):
        pullback_product(ma, 0, [None], identity(m))
    with pytest.raises(IndexError):
        pullback_product(ma, 3, [None, make(z4)], identity(m))


def test_pullback_product_of_restriction(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    z2 = FPModule.cyclic(z4, 2)
    proj = ModuleMorphism(FPModule.cyclic(z4, 4), z2, Matrix.from_rows(z4, [[1]]))
    pb = pullback_product(ma, 0, [None, times2(z4)], proj)
    assert not is_epic(pb)


# ---------------------------------------------------------------------------
# Cokernel formula
# ---------------------------------------------------------------------------

def test_coker_formula_on_times_two(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    lhs, rhs = coker_formula_sides(ma, [times2(z4), times2(z4)])
    assert lhs.invariants == rhs.invariants == (2,)
    assert coker_tail_exact(ma, [times2(z4), times2(z4)])
    assert verify_coker_formula(ma, [times2(z4), times2(z4)])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 16), st.sampled_from(["tensor:2", "tensor:3", "identity"]), st.sampled_from([4, 6]))
def test_coker_formula_on_random_maps(seed, spec, n):
    ring = Ring(n)
    ma = adjunction_from_spec(spec, ring)
    rng = random.Random(seed)
    mods = list(enumerate_universe(ring, 1))
    fs = [random_morphism(rng.choice(mods), rng.choice(mods), rng) for _ in range(ma.arity)]
    assert verify_coker_formula(ma, fs)


def test_coker_formula_for_base_change():
    ma = adjunction_from_spec("basechange:4:2")
    z4 = Ring(4)
    lhs, rhs = coker_formula_sides(ma, [times2(z4)])
    assert lhs.invariants == rhs.invariants


# ---------------------------------------------------------------------------
# Split conditions
# ---------------------------------------------------------------------------

def test_split_identity(z4, quick):
    ma = adjunction_from_spec("identity", z4)
    result = check_split_1var(ma, pair(z4, "flat", "all"), pair(z4, "flat", "all"))
    assert result.holds
    assert result.equivalence_holds
    assert [r.condition for r in result.reports] == ["1a", "1b", "2a", "2b"]


def test_split_fixed_tensor(z4, quick):
    ma = adjunction_from_spec("fixedtensor:2", z4)
    result = check_split_1var(ma, pair(z4, "flat", "all"), pair(z4, "flat", "all"))
    assert result["1a"].holds
    assert not result["1b"].holds
    assert not result["2a"].holds
    assert result["2b"].holds
    assert result.equivalence_holds
    assert result["1b"].counterexample is not None
    assert result.to_json()["holds"] is False


def test_split_refuses_non_pairs(z4, quick):
    ma = adjunction_from_spec("identity", z4)
    with pytest.raises(PreconditionError):
        check_split_1var(ma, pair(z4, "all", "all"), pair(z4, "flat", "all"))
    with pytest.raises(ValueError):
        check_split_1var(adjunction_from_spec("tensor:2", z4), pair(z4, "flat", "all"), pair(z4, "flat", "all"))


def test_nsplit_flat_pairs(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    report = check_nsplit_duality(ma, flat, [flat, pair(z4, "flat", "all")])
    assert report.left == ["0a_1", "0a_2", "0b"]
    assert report.right == ["1a_0", "1a_2", "1b", "2a_0", "2a_1", "2b"]
    assert report.holds
    assert report.equivalence_holds


def test_nsplit_both_collections_fail(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    report = check_nsplit_duality(ma, pair(z4, "projective", "all"),
                                  [pair(z4, "all", "injective"), pair(z4, "flat", "all")])
    assert not report["0b"].holds
    assert not report["1b"].holds
    assert not report.left_holds and not report.right_holds
    assert report.equivalence_holds is True


def test_nsplit_on_non_pairs_has_no_verdict(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    every = pair(z4, "all", "all")
    report = check_nsplit_duality(ma, every, [every, every])
    assert not report.pairs_verified
    assert report.equivalence_holds is None
    with pytest.raises(KeyError):
        report["3b"]


def test_nsplit_enumerates_small_ext_groups(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    report = check_nsplit_duality(ma, flat, [flat, flat])
    assert not report.sampled
    r = report["0a_1"]
    assert r.classes_total > 0
    assert r.classes_drawn == r.classes_total
    assert report.to_json()["sampled"] is False


def test_nsplit_flags_sampled_ext_groups(z4, quick):
    get_config().configs["trials"]["quick"]["hom_sample_cap"] = 1
    ma = adjunction_from_spec("tensor:2", z4)
    every = pair(z4, "all", "injective")
    report = check_nsplit_duality(ma, every, [every, every])
    r = report["0a_1"]
    assert r.sampled
    assert r.classes_drawn < r.classes_total
    data = report.to_json()
    assert data["sampled"] is True
    assert data["conditions"][0]["condition"] == "0a_1"
    assert data["conditions"][0]["sampled"] is True
    assert data["conditions"][0]["classes_drawn"] == r.classes_drawn


def test_split_1var_reports_sampling(z4, quick):
    get_config().configs["trials"]["quick"]["hom_sample_cap"] = 1
    ma = adjunction_from_spec("identity", z4)
    result = check_split_1var(ma, pair(z4, "flat", "all"), pair(z4, "flat", "all"))
    assert result.holds
    assert result.to_json()["sampled"] is result.sampled
    assert result["2a"].sampled


def test_nsplit_arguments(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    with pytest.raises(ValueError):
        check_nsplit_duality(ma, flat, [flat])
    with pytest.raises(RingMismatchError):
        check_nsplit_duality(ma, pair(Ring(8), "flat", "all"), [flat, flat])


# ---------------------------------------------------------------------------
# Pushout products of monomorphisms
# ---------------------------------------------------------------------------

def test_hovey_split_injections(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    result = check_hovey_gen(ma, flat, [flat, flat], [split_injection(z4), split_injection(z4)])
    assert tuple(result) == (True, True, True)


def test_hovey_outside_hypotheses(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    result = check_hovey_gen(ma, flat, [flat, flat], [times2(z4), times2(z4)])
    assert not result.monic
    assert result.coker_iso
    assert not result.hypotheses_met


def test_hovey_reuses_duality(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    duality = check_nsplit_duality(ma, flat, [flat, flat])
    result = check_hovey_gen(ma, flat, [flat, flat], [split_injection(z4), times2(z4)], duality=duality)
    assert result.coker_iso
    assert not result.hypotheses_met


def test_hovey_refuses_without_left_conditions(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    with pytest.raises(PreconditionError):
        check_hovey_gen(ma, pair(z4, "projective", "all"), [pair(z4, "all", "injective"), pair(z4, "flat", "all")],
                        [split_injection(z4), split_injection(z4)])


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

def test_quillen_identity(z4, quick):
    ma = adjunction_from_spec("identity", z4)
    flat = pair(z4, "flat", "all")
    complexes = sample_complexes(flat.d, flat.universe, seed=1, samples=12)
    report = check_quillen_1var(ma, flat, pair(z4, "flat", "all"), complexes)
    assert report.holds
    assert report.samples == 12
    assert [c.condition for c in report.conditions] == ["exact-sequences", "tilde-preserved", "dg-preserved"]


def test_quillen_refuses_when_split_fails(z4, quick):
    ma = adjunction_from_spec("fixedtensor:2", z4)
    with pytest.raises(PreconditionError):
        check_quillen_1var(ma, pair(z4, "flat", "all"), pair(z4, "flat", "all"), [])


def test_cot_main_tensor(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    samples = [sample_complexes(flat.d, flat.universe, seed=s, samples=8) for s in (0, 1)]
    report = check_cot_main(ma, flat, [flat, pair(z4, "flat", "all")], samples)
    assert report.holds
    assert report.name == "cot-main:" + ma.name
    assert report.to_json()["samples"] == 16


def test_cot_main_refuses(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    with pytest.raises(PreconditionError):
        check_cot_main(ma, pair(z4, "projective", "all"), [pair(z4, "all", "injective"), pair(z4, "flat", "all")],
                       [[], []])


def test_cot_main_conditions_on_broken_target(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    flat = pair(z4, "flat", "all")
    broken = ClassPair(ClassSpec.of("explicit", z4, [FPModule.cyclic(z4, 2)]), ClassSpec.of("all", z4),
                       flat.universe)
    assert not check_nsplit_duality(ma, broken, [flat, flat])["0b"].holds
    r = FPModule.cyclic(z4, 4)
    samples = [[sphere(0, r), disc(0, r)], [sphere(0, r), disc(0, r)]]
    with pytest.raises(PreconditionError):
        check_cot_main(ma, broken, [flat, flat], samples)
    report = cot_main_conditions(ma, broken, [flat, flat], samples, trials=8)
    assert not report.holds
    assert "dg-preserved" in {c.condition for c in report.conditions if not c.holds}


def test_lifted_split_sees_non_flat_cokernel(z4, quick):
    ma = adjunction_from_spec("tensor:2", z4)
    every = pair(z4, "all", "injective")
    z2 = FPModule.cyclic(z4, 2)
    assert not check_nsplit_duality(ma, every, [every, every])["0a_1"].holds
    extensions = [realize_extension(z2, z2, c) for c in ext1_space(z2, z2).classes()]
    nonsplit = next(s for s in extensions if s.mid.invariants == (4,))
    lifted = disc_sequence(nonsplit)
    assert lifted is not None
    samples = [[sphere(0, z2)], [sphere(0, z2)]]
    report = cot_main_conditions(ma, every, [every, every], samples, sequences=[[lifted], [lifted]])
    split = report.conditions[0]
    assert split.condition == "lifted-split"
    assert not split.holds
    assert split.counterexample is not None


def test_disc_sequence_skips_zero_ends(z4):
    z2 = FPModule.cyclic(z4, 2)
    ses = realize_extension(z2, FPModule.zero(z4), ext1_space(z2, FPModule.zero(z4)).classes()[0])
    assert disc_sequence(ses) is None


@pytest.mark.parametrize("d, e", [("flat", "all"), ("all", "injective")])
def test_exact_sums(z4, quick, d, e):
    holds, witnesses = check_exact_sums(pair(z4, d, e, 2))
    assert holds
    assert witnesses == []
