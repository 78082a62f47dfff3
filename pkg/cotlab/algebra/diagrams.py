"""
Cube-shaped diagrams of modules and their (co)limits.
Vertices are bit vectors in {0,1}^n; the edge (v, i) goes from v to v with bit i set.
"""

from typing import NamedTuple

from cotlab.algebra.common import *
from cotlab.algebra.ring import Matrix
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, direct_sum, cokernel, kernel, factor_through_mono, identity,
)

logger = logging.getLogger(__name__)

Vertex = Tuple[int, ...]


def cube_vertices(arity: int) -> List[Vertex]:
    """All vertices in lexicographic order."""
    return [tuple(v) for v in itertools.product((0, 1), repeat=arity)]


def flip(v: Vertex, i: int) -> Vertex:
    return v[:i] + (1,) + v[i + 1:]


@dataclass(frozen=True, eq=False)
class CubeDiagram:
    """A commuting cube of modules, optionally with one vertex removed."""

    arity: int
    vertices: Mapping[Vertex, FPModule]
    edges: Mapping[Tuple[Vertex, int], ModuleMorphism]
    puncture: Optional[Vertex] = None

    def __post_init__(self):
        check_arity(self.arity)
        expected = [v for v in cube_vertices(self.arity) if v != self.puncture]
        if self.puncture is not None and self.puncture not in ((0,) * self.arity, (1,) * self.arity):
            raise DiagramError(f"puncture {self.puncture} is neither all-zeros nor all-ones")
        if set(self.vertices) != set(expected):
            raise DiagramError("vertex set does not match the (punctured) cube")
        for v in expected:
            for i in range(self.arity):
                if v[i] or flip(v, i) not in self.vertices:
                    continue
                f = self.edges.get((v, i))
                if f is None:
                    raise DiagramError(f"missing edge {v} -> {flip(v, i)}")
                if not (f.source.same_as(self.vertices[v]) and f.target.same_as(self.vertices[flip(v, i)])):
                    raise DiagramError(f"edge {v} -> {flip(v, i)} has the wrong endpoints")
        for (v, i), _ in self.edges.items():
            if v[i] or v not in self.vertices or flip(v, i) not in self.vertices:
                raise DiagramError(f"edge ({v}, {i}) does not increase a bit between present vertices")
        self._check_faces()

    def _check_faces(self) -> None:
        for v in self.vertices:
            for i in range(self.arity):
                for j in range(i + 1, self.arity):
                    if v[i] or v[j]:
                        continue
                    vi, vj = flip(v, i), flip(v, j)
                    top = flip(vi, j)
                    if top not in self.vertices:
                        continue
                    left = self.edges[(v, i)].then(self.edges[(vi, j)])
                    right = self.edges[(v, j)].then(self.edges[(vj, i)])
                    if not left.equals(right):
                        raise DiagramError(f"face at {v} in directions {i}, {j} does not commute")

    @classmethod
    def from_functions(cls, arity: int, vertex: Callable[[Vertex], FPModule],
                       edge: Callable[[Vertex, int], ModuleMorphism],
                       puncture: Optional[Vertex] = None) -> "CubeDiagram":
        vertices = {v: vertex(v) for v in cube_vertices(arity) if v != puncture}
        edges = {}
        for v in vertices:
            for i in range(arity):
                if not v[i] and flip(v, i) in vertices:
                    edges[(v, i)] = edge(v, i)
        return cls(arity, vertices, edges, puncture)

    @property
    def ordered_vertices(self) -> List[Vertex]:
        return [v for v in cube_vertices(self.arity) if v in self.vertices]

    def path_map(self, v: Vertex, w: Vertex) -> ModuleMorphism:
        """The composite along any monotone path v -> w (all agree by commutativity)."""
        if any(a > b for a, b in zip(v, w)):
            raise DiagramError(f"no path from {v} to {w}")
        f = identity(self.vertices[v])
        cur = v
        for i in range(self.arity):
            if w[i] and not cur[i]:
                f = f.then(self.edges[(cur, i)])
                cur = flip(cur, i)
        return f


class Cocone(NamedTuple):
    module: FPModule
    legs: Dict[Vertex, ModuleMorphism]


class Cone(NamedTuple):
    module: FPModule
    legs: Dict[Vertex, ModuleMorphism]
    inclusion: ModuleMorphism  # into the sum of all vertices


def cube_colimit(d: CubeDiagram) -> Cocone:
    """Colimit as the quotient of the sum of all vertices by ι_v(a) - ι_w(f_e a) for every edge."""
    order = d.ordered_vertices
    summed = direct_sum([d.vertices[v] for v in order], d.vertices[order[0]].ring)
    pos = {v: k for k, v in enumerate(order)}
    ring = summed.module.ring
    glue = Matrix.zeros(ring, 0, summed.module.generators)
    for (v, i), f in sorted(d.edges.items()):
        w = flip(v, i)
        rows = summed.injections[pos[v]].matrix - f.matrix @ summed.injections[pos[w]].matrix
        glue = glue.vstack(rows)
    source = FPModule.free(ring, glue.rows)
    q = cokernel(ModuleMorphism(source, summed.module, glue, check=False))
    legs = {v: summed.injections[pos[v]].then(q.projection) for v in order}
    logger.debug(f"cube colimit over {len(order)} vertices: {q.module.describe()}")
    return Cocone(q.module, legs)


def cube_limit(d: CubeDiagram) -> Cone:
    """Limit as the kernel of (x_v) -> (f_e x_v - x_w)_e on the sum of all vertices."""
    order = d.ordered_vertices
    ring = d.vertices[order[0]].ring
    summed = direct_sum([d.vertices[v] for v in order], ring)
    pos = {v: k for k, v in enumerate(order)}
    edges = sorted(d.edges.items())
    targets = direct_sum([f.target for _, f in edges], ring)
    width = targets.module.generators
    blocks = np.zeros((summed.module.generators, width), dtype=np.int64)
    offsets = [0]
    for k in range(len(order)):
        offsets.append(offsets[-1] + d.vertices[order[k]].generators)
    col = 0
    for (v, i), f in edges:
        w = flip(v, i)
        g = f.target.generators
        if f.matrix.rows and g:
            blocks[offsets[pos[v]]:offsets[pos[v] + 1], col:col + g] += f.matrix.array
            blocks[offsets[pos[w]]:offsets[pos[w] + 1], col:col + g] -= np.eye(g, dtype=np.int64)
        col += g
    phi = Matrix.from_array(ring, blocks) if blocks.size else Matrix.zeros(ring, *blocks.shape)
    k = kernel(ModuleMorphism(summed.module, targets.module, phi, check=False))
    legs = {v: k.inclusion.then(summed.projections[pos[v]]) for v in order}
    logger.debug(f"cube limit over {len(order)} vertices: {k.module.describe()}")
    return Cone(k.module, legs, k.inclusion)


def induced_from_colimit(cocone: Cocone, d: CubeDiagram, target: FPModule,
                         maps: Mapping[Vertex, ModuleMorphism]) -> ModuleMorphism:
    """The map out of the colimit determined by compatible maps from every vertex."""
    ring = target.ring
    matrix = Matrix.zeros(ring, 0, target.generators)
    for v in d.ordered_vertices:
        matrix = matrix.vstack(maps[v].matrix)
    return ModuleMorphism(cocone.module, target, matrix)


def induced_into_limit(cone: Cone, d: CubeDiagram, source: FPModule,
                       maps: Mapping[Vertex, ModuleMorphism]) -> ModuleMorphism:
    """The map into the limit determined by compatible maps to every vertex."""
    order = d.ordered_vertices
    ring = source.ring
    summed = direct_sum([d.vertices[v] for v in order], ring)
    matrix = Matrix.zeros(ring, source.generators, 0)
    for v in order:
        matrix = matrix.hstack(maps[v].matrix)
    into_sum = ModuleMorphism(source, summed.module, matrix)
    lifted = factor_through_mono(into_sum, cone.inclusion)
    if lifted is None:
        raise DiagramError("maps into the cube do not form a cone")
    return lifted
