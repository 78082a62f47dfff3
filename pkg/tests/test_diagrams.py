import itertools

import pytest

from cotlab.algebra.common import DiagramError, LimitExceededError
from cotlab.algebra.ring import Matrix
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, cokernel, identity, multiplication, pullback, pushout, zero_morphism,
)
from cotlab.algebra.diagrams import (
    CubeDiagram, cube_colimit, cube_limit, cube_vertices, flip, induced_from_colimit, induced_into_limit,
)


def times2(ring):
    return ModuleMorphism(FPModule.cyclic(ring, 2), FPModule.cyclic(ring, 4), Matrix.from_rows(ring, [[2]]))


def reduction(ring):
    z = FPModule.cyclic(ring, 4)
    return cokernel(multiplication(z, 2)).projection


def constant_cube(module, arity, puncture=None, scalar=1):
    return CubeDiagram.from_functions(arity, lambda v: module,
                                      lambda v, i: multiplication(module, scalar), puncture)


def span(f, g):
    """B <-f- A -g-> C as a square punctured at (1, 1)."""
    vertices = {(0, 0): f.source, (1, 0): f.target, (0, 1): g.target}
    return CubeDiagram(2, vertices, {((0, 0), 0): f, ((0, 0), 1): g}, (1, 1))


def cospan(f, g):
    """B -f-> A <-g- C as a square punctured at (0, 0)."""
    vertices = {(1, 1): f.target, (0, 1): f.source, (1, 0): g.source}
    return CubeDiagram(2, vertices, {((0, 1), 0): f, ((1, 0), 1): g}, (0, 0))


def test_vertices_are_lexicographic():
    assert cube_vertices(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert flip((0, 1, 0), 0) == (1, 1, 0)
    assert len(cube_vertices(4)) == 16


def test_rejects_bad_puncture(z4):
    with pytest.raises(DiagramError):
        constant_cube(FPModule.cyclic(z4, 2), 2, puncture=(0, 1))


def test_rejects_missing_edge(z4):
    m = FPModule.cyclic(z4, 2)
    vertices = {v: m for v in cube_vertices(2)}
    edges = {((0, 0), 0): identity(m), ((0, 0), 1): identity(m), ((0, 1), 0): identity(m)}
    with pytest.raises(DiagramError):
        CubeDiagram(2, vertices, edges)


def test_rejects_non_commuting_face(z4):
    m = FPModule.cyclic(z4, 4)
    vertices = {v: m for v in cube_vertices(2)}
    edges = {((0, 0), 0): identity(m), ((0, 0), 1): identity(m),
             ((0, 1), 0): identity(m), ((1, 0), 1): multiplication(m, 2)}
    with pytest.raises(DiagramError):
        CubeDiagram(2, vertices, edges)


def test_refuses_arity_above_cap(z4):
    with pytest.raises(LimitExceededError):
        constant_cube(FPModule.cyclic(z4, 2), 6)


def test_path_map_composes_edges(z4):
    m = FPModule.cyclic(z4, 4)
    cube = constant_cube(m, 3, scalar=3)
    # 3^3 = 27 = 3 (mod 4)
    assert cube.path_map((0, 0, 0), (1, 1, 1)).equals(multiplication(m, 3))
    with pytest.raises(DiagramError):
        cube.path_map((1, 0, 0), (0, 1, 0))


def test_punctured_square_colimit_is_pushout(z4):
    f = g = times2(z4)
    cocone = cube_colimit(span(f, g))
    assert cocone.module.invariants == pushout(f, g).module.invariants == (2, 4)
    assert f.then(cocone.legs[(1, 0)]).equals(g.then(cocone.legs[(0, 1)]))


def test_punctured_square_limit_is_pullback(z4):
    f = g = reduction(z4)
    cone = cube_limit(cospan(f, g))
    assert cone.module.invariants == pullback(f, g).module.invariants == (2, 4)
    assert cone.legs[(0, 1)].then(f).equals(cone.legs[(1, 0)].then(g))


@pytest.mark.parametrize("arity", [1, 2, 3])
def test_full_cube_colimit_is_terminal_vertex(z4, arity):
    m = FPModule.from_invariants(z4, [2, 4])
    cocone = cube_colimit(constant_cube(m, arity, scalar=3))
    assert cocone.module.invariants == m.invariants


@pytest.mark.parametrize("arity", [1, 2, 3])
def test_full_cube_limit_is_initial_vertex(z4, arity):
    m = FPModule.from_invariants(z4, [2, 4])
    cone = cube_limit(constant_cube(m, arity, scalar=3))
    assert cone.module.invariants == m.invariants


@pytest.mark.parametrize("arity", [2, 3])
def test_colimit_of_zero_maps_keeps_vertices_next_to_puncture(z4, arity):
    # with zero edges only vertices whose every edge leads to the puncture survive
    m = FPModule.cyclic(z4, 2)
    cube = constant_cube(m, arity, puncture=(1,) * arity, scalar=0)
    expected = (2,) * arity
    assert cube_colimit(cube).module.invariants == expected


def test_induced_from_colimit(z4):
    f = g = times2(z4)
    diagram = span(f, g)
    cocone = cube_colimit(diagram)
    target = FPModule.cyclic(z4, 4)
    maps = {(0, 0): f, (1, 0): identity(target), (0, 1): identity(target)}
    h = induced_from_colimit(cocone, diagram, target, maps)
    for v in diagram.ordered_vertices:
        assert cocone.legs[v].then(h).equals(maps[v])


def test_induced_into_limit(z4):
    f = g = reduction(z4)
    diagram = cospan(f, g)
    cone = cube_limit(diagram)
    source = FPModule.cyclic(z4, 4)
    maps = {(1, 1): f, (0, 1): identity(source), (1, 0): identity(source)}
    h = induced_into_limit(cone, diagram, source, maps)
    for v in diagram.ordered_vertices:
        assert h.then(cone.legs[v]).equals(maps[v])


def test_induced_into_limit_rejects_non_cone(z4):
    f = g = reduction(z4)
    diagram = cospan(f, g)
    cone = cube_limit(diagram)
    source = FPModule.cyclic(z4, 4)
    maps = {(1, 1): f, (0, 1): identity(source), (1, 0): zero_morphism(source, source)}
    with pytest.raises(DiagramError):
        induced_into_limit(cone, diagram, source, maps)
