import random

import pytest
from hypothesis import given, settings, strategies as st

from cotlab.algebra.common import DiagramError, RingMismatchError, ShapeError
from cotlab.algebra.ring import Matrix, Ring
from cotlab.algebra.modules import FPModule, ModuleMorphism, identity, multiplication, split_extension
from cotlab.algebra.bifunctors import adjunction_from_spec
from cotlab.algebra.cotorsion import ClassSpec, enumerate_universe
from cotlab.algebra.complexes import (
    ChainComplex, ChainMap, MultiComplex, chain_map_space, chain_maps, check_bounded_dg, classify,
    coboundary_twist, compatibility_check, cycles, disc, elementary_complex, homology, identity_chain_map,
    induced_on_homology, is_contractible, is_exact, is_null_homotopic, lift_functor, lift_right_adjoint,
    long_exact_sequence_holds, null_homotopy, random_complex, sample_complexes, sphere, splice,
    spliced_complex, tilde_criterion_check, total_complex, twisted_sum, zero_chain_map,
)


def times2_complex(ring):
    z4 = FPModule.cyclic(ring, 4)
    return ChainComplex.from_maps([multiplication(z4, 2)])


def short_resolution(ring):
    """0 -> Z/2 -2-> Z/4 -> Z/2 -> 0 in degrees 0..2."""
    z2, z4 = FPModule.cyclic(ring, 2), FPModule.cyclic(ring, 4)
    inc = ModuleMorphism(z2, z4, Matrix.from_rows(ring, [[2]]))
    proj = ModuleMorphism(z4, FPModule.cyclic(ring, 2), Matrix.from_rows(ring, [[1]]))
    return ChainComplex.from_maps([inc, proj])


def square_multicomplex(ring, corner=1):
    """Z/4 on the unit square, identities everywhere except ``corner`` times on one edge."""
    m = FPModule.cyclic(ring, 4)
    box = [(0, 0), (0, 1), (1, 0), (1, 1)]
    diffs = {
        ((0, 0), 0): identity(m),
        ((0, 0), 1): identity(m),
        ((1, 0), 1): identity(m),
        ((0, 1), 0): multiplication(m, corner),
    }
    return MultiComplex(ring, (0, 0), (1, 1), {a: m for a in box}, diffs)


# ---------------------------------------------------------------------------
# Complexes and homology
# ---------------------------------------------------------------------------

def test_sphere_and_disc(z4):
    m = FPModule.cyclic(z4, 4)
    s, d = sphere(2, m), disc(2, m)
    assert s.describe() == "[Z/4]@2"
    assert list(d.degrees) == [2, 3]
    assert homology(s, 2).homology.invariants == (4,)
    assert not is_exact(s)
    assert is_exact(d)
    assert elementary_complex("disc", 2, m).describe() == d.describe()
    with pytest.raises(ValueError):
        elementary_complex("cone", 0, m)


def test_elementary_complexes_of_zero_are_zero(z4):
    zero = FPModule.zero(z4)
    assert sphere(0, zero).is_zero()
    assert disc(1, zero).describe() == "0"


def test_times_two_homology(z4):
    c = times2_complex(z4)
    assert c.describe() == "[Z/4 -> Z/4]@0"
    assert homology(c, 0).homology.invariants == (2,)
    assert homology(c, 1).homology.invariants == (2,)
    assert homology(c, 5).homology.is_zero
    assert cycles(c, 1).invariants == (4,)
    assert not is_exact(c)


def test_resolution_is_exact(z4):
    c = short_resolution(z4)
    assert is_exact(c)
    assert [cycles(c, k).invariants for k in c.degrees] == [(), (2,), (2,)]


def test_differentials_must_square_to_zero(z4):
    m = FPModule.cyclic(z4, 4)
    with pytest.raises(DiagramError):
        ChainComplex.from_maps([identity(m), identity(m)])
    with pytest.raises(ShapeError):
        ChainComplex(z4, 0, (m, m), ())
    with pytest.raises(ValueError):
        ChainComplex.from_maps([])


def test_module_outside_support_is_zero(z4):
    c = times2_complex(z4)
    assert c.module(-3).is_zero
    assert c.diff(1).is_zero()


def test_complex_json(z4):
    c = short_resolution(z4)
    back = ChainComplex.from_json(c.to_json())
    assert back.describe() == c.describe()
    assert is_exact(back)


def test_complex_json_with_row_differentials():
    data = {"ring": 4, "lo": -1, "modules": [{"invariants": [4]}, {"invariants": [4]}], "differentials": [[[2]]]}
    c = ChainComplex.from_json(data)
    assert list(c.degrees) == [-1, 0]
    assert homology(c, 0).homology.invariants == (2,)
    data["differentials"] = []
    with pytest.raises(ValueError):
        ChainComplex.from_json(data)


# ---------------------------------------------------------------------------
# Chain maps and homotopies
# ---------------------------------------------------------------------------

def test_chain_map_square_must_commute(z4):
    c = disc(0, FPModule.cyclic(z4, 4))
    m = c.module(0)
    with pytest.raises(DiagramError):
        ChainMap(c, c, {0: identity(m)})


def test_chain_map_composition(z4):
    c = short_resolution(z4)
    ident = identity_chain_map(c)
    assert ident.then(ident).equals(ident)
    assert zero_chain_map(c, c).is_zero()
    assert not ident.is_zero()


@pytest.mark.parametrize("make_source, make_target, count", [
    (lambda r: sphere(0, FPModule.cyclic(r, 4)), lambda r: sphere(0, FPModule.cyclic(r, 2)), 2),
    (lambda r: disc(0, FPModule.cyclic(r, 4)), lambda r: disc(0, FPModule.cyclic(r, 4)), 4),
    (lambda r: sphere(0, FPModule.cyclic(r, 4)), lambda r: sphere(1, FPModule.cyclic(r, 4)), 1),
])
def test_chain_map_space_cardinality(z4, make_source, make_target, count):
    space = chain_map_space(make_source(z4), make_target(z4))
    assert space.cardinality == count
    maps = list(space.maps())
    assert len(maps) == count
    for f in maps:
        ChainMap(f.source, f.target, dict(f.components))


def test_chain_map_generators_commute(z4):
    c, d = times2_complex(z4), short_resolution(z4)
    for f in chain_maps(c, d):
        ChainMap(c, d, dict(f.components))


def test_discs_are_contractible(z4):
    for m in enumerate_universe(z4, 2):
        if m.is_zero:
            continue
        assert is_contractible(disc(0, m))


@pytest.mark.parametrize("make", [
    lambda r: sphere(0, FPModule.cyclic(r, 2)),
    times2_complex,
    short_resolution,
])
def test_not_contractible(z4, make):
    assert not is_contractible(make(z4))


def test_null_homotopy_reproduces_identity(z4):
    c = disc(3, FPModule.from_invariants(z4, [2, 4]))
    h = null_homotopy(identity_chain_map(c))
    assert h is not None
    assert h.boundary().equals(identity_chain_map(c))


def test_maps_into_a_resolution(z4):
    t = short_resolution(z4)
    z2 = FPModule.cyclic(z4, 2)
    lone_top = ChainMap(sphere(2, z2), t, {2: identity(t.module(2))})
    assert not is_null_homotopic(lone_top)
    rng = random.Random(0)
    assert check_bounded_dg(sphere(2, z2), [t], rng, 16) is not None
    assert check_bounded_dg(sphere(0, FPModule.cyclic(z4, 4)), [t], rng, 16) is None


def test_induced_on_homology(z4):
    c = times2_complex(z4)
    ident = induced_on_homology(identity_chain_map(c), 0)
    assert ident.source.invariants == (2,)
    assert not ident.is_zero()
    assert induced_on_homology(zero_chain_map(c, c), 1).is_zero()


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def test_classify_disc_of_free(z4):
    flat, every = ClassSpec.of("flat", z4), ClassSpec.of("all", z4)
    cl = classify(disc(0, FPModule.cyclic(z4, 4)), flat, every)
    assert cl.exact and cl.entrywise_in_d and cl.cycles_in_d
    assert cl.is_tilde_d and cl.is_dg_d and cl.is_tilde_e
    assert cl.consistent
    assert cl.to_json()["is_tilde_d"]


def test_classify_disc_of_torsion(z4):
    flat, every = ClassSpec.of("flat", z4), ClassSpec.of("all", z4)
    cl = classify(disc(0, FPModule.cyclic(z4, 2)), flat, every)
    assert cl.exact
    assert not cl.is_tilde_d and not cl.is_dg_d
    assert cl.is_tilde_e and cl.is_dg_e


def test_classify_sphere_is_not_tilde(z4):
    flat, every = ClassSpec.of("flat", z4), ClassSpec.of("all", z4)
    cl = classify(sphere(0, FPModule.cyclic(z4, 4)), flat, every)
    assert cl.is_dg_d and not cl.is_tilde_d


def test_classify_ring_mismatch(z4):
    z12 = Ring(12)
    with pytest.raises(RingMismatchError):
        classify(sphere(0, FPModule.cyclic(z4, 4)), ClassSpec.of("flat", z12), ClassSpec.of("all", z12))


@pytest.mark.parametrize("make", [
    lambda r: disc(0, FPModule.cyclic(r, 4)),
    lambda r: disc(0, FPModule.cyclic(r, 2)),
    lambda r: sphere(0, FPModule.cyclic(r, 4)),
    times2_complex,
    short_resolution,
])
def test_tilde_criterion_matches_classification(z4, make):
    c = make(z4)
    d, e = ClassSpec.of("flat", z4), ClassSpec.of("all", z4)
    u = enumerate_universe(z4, 2)
    assert tilde_criterion_check(c, d, e, u) == classify(c, d, e).is_tilde_d


# ---------------------------------------------------------------------------
# Short exact sequences of complexes
# ---------------------------------------------------------------------------

def test_twisted_sum_glues_spheres_into_a_disc(z4):
    m = FPModule.cyclic(z4, 4)
    a, d = sphere(1, m), sphere(0, m)
    ses = twisted_sum(a, d, {0: identity(m)})
    assert is_exact(ses.mid)
    assert not is_exact(a) and not is_exact(d)
    assert long_exact_sequence_holds(ses)
    assert long_exact_sequence_holds(ses, "elementwise")


def test_untwisted_sum_keeps_homology(z4):
    m = FPModule.cyclic(z4, 2)
    ses = twisted_sum(sphere(1, m), sphere(0, m), {})
    assert homology(ses.mid, 0).homology.invariants == (2,)
    assert homology(ses.mid, 1).homology.invariants == (2,)
    assert long_exact_sequence_holds(ses)


def test_coboundary_twist_of_discs(z4):
    m = FPModule.cyclic(z4, 4)
    a, d = disc(0, m), disc(0, m)
    twist = coboundary_twist(a, d, {0: identity(m)})
    assert not twist[0].is_zero()
    ses = twisted_sum(a, d, twist)
    assert is_exact(ses.mid)
    assert long_exact_sequence_holds(ses)


def test_splice_errors(z4):
    z2, z4m = FPModule.cyclic(z4, 2), FPModule.cyclic(z4, 4)
    with pytest.raises(ValueError):
        splice([])
    with pytest.raises(DiagramError):
        splice([split_extension(z2, z4m), split_extension(z2, z4m)])


def test_splice_is_exact(z4):
    z2 = FPModule.cyclic(z4, 2)
    c = splice([split_extension(z2, z2), split_extension(z2, z2)], lo=-1)
    assert list(c.degrees) == [-1, 0, 1, 2]
    assert is_exact(c)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 16), st.sampled_from([4, 8, 12]))
def test_spliced_complexes_are_exact(seed, n):
    ring = Ring(n)
    rng = random.Random(seed)
    u = enumerate_universe(ring, 1)
    mods = [FPModule.zero(ring)] + [rng.choice(u.modules) for _ in range(2)] + [FPModule.zero(ring)]
    assert is_exact(spliced_complex(mods, rng))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 16))
def test_random_complex_keeps_entries(seed):
    ring = Ring(4)
    rng = random.Random(seed)
    mods = [FPModule.from_invariants(ring, inv) for inv in [(4,), (2, 4), (4,)]]
    c = random_complex(mods, rng, lo=1)
    assert [m.invariants for m in c.modules] == [(4,), (2, 4), (4,)]
    assert c.lo == 1


def test_spliced_and_random_reject_short_input(z4):
    with pytest.raises(ValueError):
        spliced_complex([FPModule.cyclic(z4, 2)], random.Random(0))
    with pytest.raises(ValueError):
        random_complex([], random.Random(0))


# ---------------------------------------------------------------------------
# Total complexes and lifted adjunctions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("flavor", ["sum", "product"])
def test_total_complex_of_square(z4, flavor):
    tot = total_complex(square_multicomplex(z4), flavor)
    assert [m.invariants for m in tot.modules] == [(4,), (4, 4), (4,)]
    assert is_exact(tot)
    assert is_contractible(tot)


def test_total_complex_flavor(z4):
    with pytest.raises(ValueError):
        total_complex(square_multicomplex(z4), "tensor")


def test_multicomplex_must_commute(z4):
    with pytest.raises(DiagramError):
        square_multicomplex(z4, corner=2)


def test_multicomplex_needs_every_entry(z4):
    m = FPModule.cyclic(z4, 4)
    with pytest.raises(DiagramError):
        MultiComplex(z4, (0, 0), (1, 1), {(0, 0): m}, {})


def test_lift_of_tensor_on_spheres(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    c = lift_functor(ma, [sphere(0, FPModule.cyclic(z4, 4)), sphere(1, FPModule.cyclic(z4, 2))])
    assert list(c.degrees) == [1]
    assert c.module(1).invariants == (2,)


def test_lift_of_tensor_with_a_disc_is_exact(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    c = lift_functor(ma, [disc(0, FPModule.cyclic(z4, 4)), short_resolution(z4)])
    assert is_exact(c)
    with pytest.raises(ValueError):
        lift_functor(ma, [disc(0, FPModule.cyclic(z4, 4))])


def test_lift_of_zero_complex(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    assert lift_functor(ma, [ChainComplex.zero(z4), sphere(0, FPModule.cyclic(z4, 4))]).is_zero()


def test_lift_of_right_adjoint(z4):
    ma = adjunction_from_spec("tensor:2", z4)
    c = lift_right_adjoint(ma, 0, [None, sphere(0, FPModule.cyclic(z4, 4))], disc(0, FPModule.cyclic(z4, 2)))
    assert [m.invariants for m in c.modules] == [(2,), (2,)]
    assert is_exact(c)
    with pytest.raises(IndexError):
        lift_right_adjoint(ma, 2, [None, None], disc(0, FPModule.cyclic(z4, 2)))


# ---------------------------------------------------------------------------
# Sampling and compatibility
# ---------------------------------------------------------------------------

def test_sample_complexes_is_seeded(z4):
    u = enumerate_universe(z4, 1)
    d = ClassSpec.of("flat", z4)
    first = [c.describe() for c in sample_complexes(d, u, seed=3, samples=12)]
    second = [c.describe() for c in sample_complexes(d, u, seed=3, samples=12)]
    assert first == second
    assert len(first) == 12
    assert first[:4] == ["[Z/2]@0", "[Z/2 -> Z/2]@0", "[Z/4]@0", "[Z/4 -> Z/4]@0"]


def test_compatibility_of_flat_pair(z4, quick):
    u = enumerate_universe(z4, 1)
    d, e = ClassSpec.of("flat", z4), ClassSpec.of("all", z4)
    report = compatibility_check(d, e, sample_complexes(d, u, seed=0), seed=0)
    assert report.holds
    assert report.to_json()["checked"] == report.checked
