"""
Finitely presented Z/nZ-modules for cotlab.
This module provides modules, morphisms, short exact sequences and the finite
limits and colimits of the module category, plus extension realization.

Conventions: elements are row vectors in generator coordinates and a morphism
acts by right multiplication, f(x) = x @ M, so the matrix of g∘f is M_f @ M_g.
"""

from dataclasses import InitVar
from typing import NamedTuple

from cotlab.algebra.common import *
from cotlab.algebra.ring import (
    Matrix, Ring, howell_form, howell_pivots, howell_reduce, left_kernel,
    smith_form, solve_left, solve_linear,
)

logger = logging.getLogger(__name__)


def span_basis(m: Matrix) -> Matrix:
    """Same row span, at most ``m.cols`` rows (Howell form)."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.ring, 0, m.cols)
    return howell_form(m)[0]


def _unit_rows(ring: Ring, size: int) -> Matrix:
    return Matrix.identity(ring, size)


# ---------------------------------------------------------------------------
# Modules
# ---------------------------------------------------------------------------

class Syzygy(NamedTuple):
    """The fixed first syzygy 0 -> K -> F0 -> D of a module D."""
    free: "FPModule"
    cover: "ModuleMorphism"
    module: "FPModule"
    inclusion: "ModuleMorphism"


@dataclass(frozen=True, eq=False)
class FPModule:
    """
    A finitely presented module: the cokernel of ``presentation``
    (relations x generators).

    Presentations are not unique. Anything that compares modules goes
    through ``invariants``; identity of objects only matters for the
    registered syzygy.
    """

    ring: Ring
    presentation: Matrix

    def __post_init__(self):
        if self.presentation.ring != self.ring:
            raise RingMismatchError(f"presentation over {self.presentation.ring}, module over {self.ring}")

    # -- constructors -------------------------------------------------

    @classmethod
    def free(cls, ring: Ring, rank: int) -> "FPModule":
        return cls(ring, Matrix.zeros(ring, 0, rank))

    @classmethod
    def zero(cls, ring: Ring) -> "FPModule":
        return cls(ring, Matrix.zeros(ring, 0, 0))

    @classmethod
    def cyclic(cls, ring: Ring, order: int) -> "FPModule":
        """Z/order as a Z/n-module; ``order`` must divide n."""
        return cls.from_invariants(ring, [order])

    @classmethod
    def from_invariants(cls, ring: Ring, invariants: Sequence[int]) -> "FPModule":
        """The module Z/e_1 + ... + Z/e_k; each e_i divides n, e_i == n is a free summand."""
        n = ring.modulus
        gens = []
        for e in invariants:
            e = int(e)
            if e < 1 or n % e:
                raise ValueError(f"invariant {e} does not divide {n}")
            if e != 1:
                gens.append(e)
        rows = []
        for i, e in enumerate(gens):
            if e != n:
                row = [0] * len(gens)
                row[i] = e
                rows.append(row)
        return cls(ring, Matrix.from_rows(ring, rows, len(gens)))

    # -- shape --------------------------------------------------------

    @property
    def generators(self) -> int:
        return self.presentation.cols

    @property
    def relations(self) -> int:
        return self.presentation.rows

    def same_as(self, other: "FPModule") -> bool:
        """Equal presentations (not merely isomorphic)."""
        return self is other or (self.ring == other.ring and self.presentation == other.presentation)

    # -- canonical data -------------------------------------------------

    @cached_property
    def invariants(self) -> Tuple[int, ...]:
        """Orders e_1 | e_2 | ... of the cyclic summands (free summand = n, trivial ones dropped)."""
        ring = self.ring
        g = self.generators
        if g == 0:
            return ()
        diag = smith_form(self.presentation).diag
        orders = []
        for i in range(g):
            d = diag[i].value if i < len(diag) else 0
            e = ring.ideal(d)
            if e != 1:
                orders.append(e)
        return tuple(sorted(orders))

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.invariants)

    @property
    def is_zero(self) -> bool:
        return self.cardinality == 1

    @cached_property
    def howell(self) -> Matrix:
        """Howell form of the relation span."""
        return span_basis(self.presentation)

    def reduce(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Canonical coset representative of a generator-coordinate vector."""
        if len(vector) != self.generators:
            raise ShapeError(f"vector of length {len(vector)} for a module with {self.generators} generators")
        return howell_reduce(self.howell, vector)

    def is_zero_element(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))

    def elements(self) -> Iterator[Tuple[int, ...]]:
        """Iterate canonical representatives of all elements, zero first."""
        n = self.ring.modulus
        bounds = [n] * self.generators
        for col, p in howell_pivots(self.howell):
            bounds[col] = p
        for combo in itertools.product(*(range(b) for b in bounds)):
            yield tuple(combo)

    def random_element(self, rng: random.Random) -> Tuple[int, ...]:
        n = self.ring.modulus
        return self.reduce([rng.randrange(n) for _ in range(self.generators)])

    @cached_property
    def syzygy(self) -> Syzygy:
        """Free cover on the presentation's generators and its kernel, fixed once per module."""
        free = FPModule.free(self.ring, self.generators)
        cover = ModuleMorphism(free, self, _unit_rows(self.ring, self.generators))
        k = kernel(cover)
        return Syzygy(free, cover, k.module, k.inclusion)

    # -- serialization ------------------------------------------------

    def describe(self) -> str:
        if not self.invariants:
            return "0"
        return " ⊕ ".join(f"Z/{e}" for e in self.invariants)

    def to_json(self) -> Dict[str, Any]:
        return {"ring": self.ring.modulus, "presentation": self.presentation.to_json()}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "FPModule":
        if "ring" not in data:
            raise ValueError("module JSON lacks 'ring'")
        ring = Ring(int(data["ring"]))
        if "invariants" in data:
            return cls.from_invariants(ring, data["invariants"])
        if "presentation" not in data:
            raise ValueError("module JSON needs 'presentation' or 'invariants'")
        pres = data["presentation"]
        if isinstance(pres, Mapping):
            matrix = Matrix.from_json(pres)
            if matrix.ring != ring:
                raise RingMismatchError(f"presentation over {matrix.ring}, module over {ring}")
        else:
            rows = [list(r) for r in pres]
            cols = int(data.get("generators", len(rows[0]) if rows else 0))
            matrix = Matrix.from_rows(ring, rows, cols)
        return cls(ring, matrix)

    def __repr__(self) -> str:
        return f"FPModule({self.ring}, {self.describe()})"


def canonical_form(m: FPModule) -> List[int]:
    return list(m.invariants)


def is_isomorphic(a: FPModule, b: FPModule) -> bool:
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    return a.invariants == b.invariants


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    """A module map given on generators: row i of ``matrix`` is the image of generator i."""

    source: FPModule
    target: FPModule
    matrix: Matrix
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        ring = self.source.ring
        if self.target.ring != ring or self.matrix.ring != ring:
            raise RingMismatchError(f"morphism between {ring} and {self.target.ring}")
        if self.matrix.shape != (self.source.generators, self.target.generators):
            raise ShapeError(
                f"matrix {self.matrix.shape} for {self.source.generators} -> {self.target.generators} generators")
        if check:
            images = self.source.presentation @ self.matrix
            for i in range(images.rows):
                if not self.target.is_zero_element(images.row(i)):
                    raise NotWellDefinedError(
                        f"relation {self.source.presentation.row(i)} maps to nonzero {images.row(i)}")

    @property
    def ring(self) -> Ring:
        return self.source.ring

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        v = Matrix.from_rows(self.ring, [list(vector)], self.source.generators)
        return self.target.reduce((v @ self.matrix).row(0))

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``other`` after ``self``."""
        if not self.target.same_as(other.source):
            raise ShapeError(f"cannot compose {self} with {other}")
        return ModuleMorphism(self.source, other.target, self.matrix @ other.matrix, check=False)

    def _check_parallel(self, other: "ModuleMorphism") -> None:
        if not (self.source.same_as(other.source) and self.target.same_as(other.target)):
            raise ShapeError("morphisms are not parallel")

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        self._check_parallel(other)
        return ModuleMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        self._check_parallel(other)
        return ModuleMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, -self.matrix, check=False)

    def scale(self, k: int) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, self.matrix.scale(k), check=False)

    def is_zero(self) -> bool:
        return all(self.target.is_zero_element(self.matrix.row(i)) for i in range(self.matrix.rows))

    def equals(self, other: "ModuleMorphism") -> bool:
        return (self - other).is_zero()

    def canonical_key(self) -> Tuple[Tuple[int, ...], ...]:
        """Hashable key; equal keys iff equal maps (for fixed source and target)."""
        return tuple(self.target.reduce(self.matrix.row(i)) for i in range(self.matrix.rows))

    def to_json(self) -> Dict[str, Any]:
        return {"source": self.source.to_json(), "target": self.target.to_json(), "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ModuleMorphism":
        source = FPModule.from_json(data["source"])
        target = FPModule.from_json(data["target"])
        raw = data["matrix"]
        matrix = Matrix.from_json(raw) if isinstance(raw, Mapping) else \
            Matrix.from_rows(source.ring, raw, target.generators)
        return cls(source, target, matrix)

    def __repr__(self) -> str:
        return f"ModuleMorphism({self.source.describe()} -> {self.target.describe()}, {self.matrix.to_rows()})"


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """g∘f."""
    return f.then(g)


def identity(m: FPModule) -> ModuleMorphism:
    return ModuleMorphism(m, m, Matrix.identity(m.ring, m.generators), check=False)


def zero_morphism(a: FPModule, b: FPModule) -> ModuleMorphism:
    return ModuleMorphism(a, b, Matrix.zeros(a.ring, a.generators, b.generators), check=False)


def multiplication(m: FPModule, k: int) -> ModuleMorphism:
    return identity(m).scale(k)


def random_morphism(a: FPModule, b: FPModule, rng: random.Random) -> ModuleMorphism:
    """A uniformly random element of Hom(a, b)."""
    from cotlab.algebra.bifunctors import hom_space
    return hom_space(a, b).random_morphism(rng)


# ---------------------------------------------------------------------------
# Element tables (brute-force side)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ElementTable:
    module: FPModule
    elements: Tuple[Tuple[int, ...], ...]

    @cached_property
    def index(self) -> Dict[Tuple[int, ...], int]:
        return {e: i for i, e in enumerate(self.elements)}

    def add(self, x: Sequence[int], y: Sequence[int]) -> Tuple[int, ...]:
        return self.module.reduce([a + b for a, b in zip(x, y)])

    def scale(self, k: int, x: Sequence[int]) -> Tuple[int, ...]:
        return self.module.reduce([k * a for a in x])

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x) in self.index


def element_table(m: FPModule) -> ElementTable:
    cap = max_card()
    if m.cardinality > cap:
        raise LimitExceededError(f"{m.describe()} has {m.cardinality} elements, above the bound {cap}")
    return ElementTable(m, tuple(m.elements()))


def apply_elementwise(f: ModuleMorphism) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    return {x: f.apply(x) for x in element_table(f.source).elements}


# ---------------------------------------------------------------------------
# Kernels, cokernels, images, sums
# ---------------------------------------------------------------------------

class SubModule(NamedTuple):
    module: FPModule
    inclusion: ModuleMorphism


class QuotientModule(NamedTuple):
    module: FPModule
    projection: ModuleMorphism


def submodule(ambient: FPModule, generators: Matrix) -> SubModule:
    """The submodule of ``ambient`` spanned by the rows of ``generators``."""
    ring = ambient.ring
    g = ambient.generators
    if generators.cols != g:
        raise ShapeError(f"{generators.cols} columns for a module with {g} generators")
    spanned = span_basis(generators.vstack(ambient.presentation))
    rows = [ambient.reduce(spanned.row(i)) for i in range(spanned.rows)]
    rows = [r for r in rows if any(r)]
    if not rows:
        zero = FPModule.zero(ring)
        return SubModule(zero, ModuleMorphism(zero, ambient, Matrix.zeros(ring, 0, g), check=False))
    G = Matrix.from_rows(ring, rows, g)
    m = G.rows
    syz = left_kernel(G.vstack(ambient.presentation))
    relations = span_basis(syz.take_columns(range(m)))
    sub = FPModule(ring, relations)
    return SubModule(sub, ModuleMorphism(sub, ambient, G, check=False))


def kernel(f: ModuleMorphism) -> SubModule:
    """Kernel with its monic inclusion into ``f.source``."""
    src, tgt = f.source, f.target
    stacked = f.matrix.vstack(tgt.presentation)
    z = left_kernel(stacked)
    gens = z.take_columns(range(src.generators)) if z.rows else Matrix.zeros(f.ring, 0, src.generators)
    return submodule(src, gens)


def cokernel(f: ModuleMorphism) -> QuotientModule:
    """Cokernel; the projection is the identity on generators."""
    tgt = f.target
    quotient = FPModule(f.ring, span_basis(tgt.presentation.vstack(f.matrix)))
    return QuotientModule(quotient, ModuleMorphism(tgt, quotient, _unit_rows(f.ring, tgt.generators), check=False))


def image(f: ModuleMorphism) -> SubModule:
    return submodule(f.target, f.matrix)


class DirectSum(NamedTuple):
    module: FPModule
    injections: Tuple[ModuleMorphism, ...]
    projections: Tuple[ModuleMorphism, ...]


def direct_sum(modules: Sequence[FPModule], ring: Optional[Ring] = None) -> DirectSum:
    """Direct sum with its injections and projections; generators are concatenated in order."""
    modules = list(modules)
    if ring is None:
        if not modules:
            raise ValueError("direct_sum of no modules needs an explicit ring")
        ring = modules[0].ring
    for m in modules:
        if m.ring != ring:
            raise RingMismatchError(f"{m.ring} vs {ring}")
    total = FPModule(ring, Matrix.block_diagonal(ring, [m.presentation for m in modules])
                     if modules else Matrix.zeros(ring, 0, 0))
    width = total.generators
    injections, projections = [], []
    offset = 0
    for m in modules:
        g = m.generators
        inj = np.zeros((g, width), dtype=np.int64)
        inj[:, offset:offset + g] = np.eye(g, dtype=np.int64)
        injections.append(ModuleMorphism(m, total, Matrix.from_array(ring, inj) if g and width
                                         else Matrix.zeros(ring, g, width), check=False))
        projections.append(ModuleMorphism(total, m, Matrix.from_array(ring, inj.T) if g and width
                                          else Matrix.zeros(ring, width, g), check=False))
        offset += g
    return DirectSum(total, tuple(injections), tuple(projections))


def direct_sum_morphism(maps: Sequence[ModuleMorphism], ring: Optional[Ring] = None) -> ModuleMorphism:
    """The block map between the direct sums of sources and targets."""
    src = direct_sum([f.source for f in maps], ring)
    tgt = direct_sum([f.target for f in maps], ring)
    r = src.module.ring
    return ModuleMorphism(src.module, tgt.module, Matrix.block_diagonal(r, [f.matrix for f in maps])
                          if maps else Matrix.zeros(r, 0, 0), check=False)


def hstack_maps(maps: Sequence[ModuleMorphism], target: FPModule) -> ModuleMorphism:
    """The map from the direct sum of sources given by ``maps`` on each summand."""
    src = direct_sum([f.source for f in maps], target.ring).module
    matrix = Matrix.zeros(target.ring, 0, target.generators)
    for f in maps:
        matrix = matrix.vstack(f.matrix)
    return ModuleMorphism(src, target, matrix)


# ---------------------------------------------------------------------------
# Pushouts, pullbacks, lifts
# ---------------------------------------------------------------------------

class Pushout(NamedTuple):
    module: FPModule
    legs: Tuple[ModuleMorphism, ModuleMorphism]


class Pullback(NamedTuple):
    module: FPModule
    legs: Tuple[ModuleMorphism, ModuleMorphism]


def pushout(f: ModuleMorphism, g: ModuleMorphism) -> Pushout:
    """Pushout of B <-f- A -g-> C as coker(A -> B+C, a -> (f a, -g a))."""
    if not f.source.same_as(g.source):
        raise ShapeError("pushout legs do not share a source")
    s = direct_sum([f.target, g.target])
    glue = ModuleMorphism(f.source, s.module, f.matrix.hstack(-g.matrix), check=False)
    q = cokernel(glue)
    return Pushout(q.module, (s.injections[0].then(q.projection), s.injections[1].then(q.projection)))


def pullback(f: ModuleMorphism, g: ModuleMorphism) -> Pullback:
    """Pullback of B -f-> A <-g- C as ker(B+C -> A, (b, c) -> f b - g c)."""
    if not f.target.same_as(g.target):
        raise ShapeError("pullback legs do not share a target")
    s = direct_sum([f.source, g.source])
    diff = ModuleMorphism(s.module, f.target, f.matrix.vstack(-g.matrix), check=False)
    k = kernel(diff)
    return Pullback(k.module, (k.inclusion.then(s.projections[0]), k.inclusion.then(s.projections[1])))


def preimage(f: ModuleMorphism, vector: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Some x with f(x) == vector, or None."""
    ring = f.ring
    target = Matrix.from_rows(ring, [list(vector)], f.target.generators)
    y = solve_left(f.matrix.vstack(f.target.presentation), target)
    if y is None:
        return None
    return f.source.reduce(y.row(0)[:f.source.generators])


def factor_through_mono(f: ModuleMorphism, mono: ModuleMorphism) -> Optional[ModuleMorphism]:
    """The h with mono∘h == f, or None when f does not land in the image."""
    if not f.target.same_as(mono.target):
        raise ShapeError("factor_through_mono needs a common target")
    rows = []
    for i in range(f.matrix.rows):
        x = preimage(mono, f.matrix.row(i))
        if x is None:
            return None
        rows.append(list(x))
    return ModuleMorphism(f.source, mono.source, Matrix.from_rows(f.ring, rows, mono.source.generators))


def lift_along_epi(f: ModuleMorphism, epi: ModuleMorphism) -> Optional[ModuleMorphism]:
    """
    Some h with epi∘h == f, lifting generator by generator.

    The lift always exists for a free source; for other sources a None
    result only means the generator-wise lift broke a relation.
    """
    if not f.target.same_as(epi.target):
        raise ShapeError("lift_along_epi needs a common target")
    rows = []
    for i in range(f.matrix.rows):
        x = preimage(epi, f.matrix.row(i))
        if x is None:
            return None
        rows.append(list(x))
    matrix = Matrix.from_rows(f.ring, rows, epi.source.generators)
    try:
        return ModuleMorphism(f.source, epi.source, matrix)
    except NotWellDefinedError:
        return None


def minimal_presentation(m: FPModule) -> Tuple[FPModule, ModuleMorphism, ModuleMorphism]:
    """
    An isomorphic module presented by its invariants.

    Returns:
        (canonical module, iso m -> canonical, iso canonical -> m)
    """
    ring = m.ring
    g = m.generators
    if g == 0:
        return m, identity(m), identity(m)
    diag, _, R = smith_form(m.presentation)
    keep = []
    orders = []
    for i in range(g):
        d = diag[i].value if i < len(diag) else 0
        e = ring.ideal(d)
        if e != 1:
            keep.append(i)
            orders.append(e)
    rows = []
    for j, e in enumerate(orders):
        if e != ring.modulus:
            row = [0] * len(orders)
            row[j] = e
            rows.append(row)
    small = FPModule(ring, Matrix.from_rows(ring, rows, len(orders)))
    r_inv = solve_linear(R, Matrix.identity(ring, g)).solution
    to_small = ModuleMorphism(m, small, R.take_columns(keep))
    from_small = ModuleMorphism(small, m, r_inv.take_rows(keep))
    return small, to_small, from_small


# ---------------------------------------------------------------------------
# Mono/epi tests and exactness
# ---------------------------------------------------------------------------

def _agree(name: str, normal: bool, elementwise: bool, f: ModuleMorphism) -> None:
    if normal != elementwise:
        raise CotlabError(f"{name}: normal-form ({normal}) and elementwise ({elementwise}) tests disagree on {f}")


def is_monic(f: ModuleMorphism, method: str = "normal") -> bool:
    """
    Injectivity test.

    Args:
        f: The morphism
        method: 'normal' (kernel order), 'elementwise', or 'both' (cross-checked
            when the source is below the enumeration bound)
    """
    if method == "elementwise":
        return len(set(apply_elementwise(f).values())) == f.source.cardinality
    normal = kernel(f).module.is_zero
    if method == "both" and f.source.cardinality <= max_card():
        _agree("is_monic", normal, len(set(apply_elementwise(f).values())) == f.source.cardinality, f)
    return normal


def is_epic(f: ModuleMorphism, method: str = "normal") -> bool:
    """Surjectivity test; ``method`` as for is_monic."""
    if method == "elementwise":
        return len(set(apply_elementwise(f).values())) == f.target.cardinality
    normal = cokernel(f).module.is_zero
    if method == "both" and f.source.cardinality <= max_card():
        _agree("is_epic", normal, len(set(apply_elementwise(f).values())) == f.target.cardinality, f)
    return normal


def is_exact_at(f: ModuleMorphism, g: ModuleMorphism, method: str = "normal") -> bool:
    """Exactness of A -f-> B -g-> C at B."""
    if not f.target.same_as(g.source):
        raise ShapeError("is_exact_at needs composable maps")
    if method == "elementwise":
        images = set(apply_elementwise(f).values())
        zero = tuple([0] * g.target.generators)
        kernel_set = {x for x, y in apply_elementwise(g).items() if y == zero}
        return images == kernel_set
    if not f.then(g).is_zero():
        return False
    return image(f).module.cardinality == kernel(g).module.cardinality


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    """0 -> left -inj-> mid -surj-> right -> 0, validated on construction."""

    left: FPModule
    mid: FPModule
    right: FPModule
    inj: ModuleMorphism
    surj: ModuleMorphism
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if not (self.inj.source.same_as(self.left) and self.inj.target.same_as(self.mid)
                and self.surj.source.same_as(self.mid) and self.surj.target.same_as(self.right)):
            raise ShapeError("short exact sequence maps do not match its objects")
        if check and not is_short_exact(self.inj, self.surj):
            raise CotlabError(f"not short exact: {self.left.describe()} -> {self.mid.describe()} -> {self.right.describe()}")

    @classmethod
    def from_maps(cls, inj: ModuleMorphism, surj: ModuleMorphism, check: bool = True) -> "ShortExactSequence":
        return cls(inj.source, inj.target, surj.target, inj, surj, check=check)

    def is_split(self) -> bool:
        return is_isomorphic(self.mid, direct_sum([self.left, self.right]).module)

    def to_json(self) -> Dict[str, Any]:
        return {"inj": self.inj.to_json(), "surj": self.surj.to_json()}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ShortExactSequence":
        inj = ModuleMorphism.from_json(data["inj"])
        surj = ModuleMorphism.from_json(data["surj"])
        return cls.from_maps(inj, surj)

    def describe(self) -> str:
        return f"0 -> {self.left.describe()} -> {self.mid.describe()} -> {self.right.describe()} -> 0"


def is_short_exact(inj: ModuleMorphism, surj: ModuleMorphism) -> bool:
    if not inj.then(surj).is_zero():
        return False
    if not (is_monic(inj) and is_epic(surj)):
        return False
    return inj.source.cardinality * surj.target.cardinality == inj.target.cardinality


# ---------------------------------------------------------------------------
# Extensions
# ---------------------------------------------------------------------------

def realize_extension(d: FPModule, x: FPModule, cls: ModuleMorphism) -> ShortExactSequence:
    """
    The extension 0 -> x -> Y -> d -> 0 classified by ``cls``: K -> x.

    Y is the pushout of the syzygy inclusion K -> F0 along ``cls``.
    """
    syz = d.syzygy
    if cls.source is not syz.module:
        raise SyzygyError(f"class source is not the registered syzygy of {d.describe()}")
    if not cls.target.same_as(x):
        raise ShapeError("class target differs from the extended module")
    po = pushout(syz.inclusion, cls)
    mid = po.module
    matrix = syz.cover.matrix.vstack(Matrix.zeros(d.ring, x.generators, d.generators))
    surj = ModuleMorphism(mid, d, matrix)
    return ShortExactSequence(x, mid, d, po.legs[1], surj)


def split_extension(d: FPModule, x: FPModule) -> ShortExactSequence:
    return realize_extension(d, x, zero_morphism(d.syzygy.module, x))


def extension_class(ses: ShortExactSequence) -> ModuleMorphism:
    """The syzygy morphism K -> left classifying ``ses`` (inverse of realize_extension up to Hom(F0, left))."""
    syz = ses.right.syzygy
    lift = lift_along_epi(syz.cover, ses.surj)
    if lift is None:
        raise CotlabError("free cover does not lift through the epimorphism")
    restricted = syz.inclusion.then(lift)
    cls = factor_through_mono(restricted, ses.inj)
    if cls is None:
        raise CotlabError("syzygy image does not land in the kernel of the epimorphism")
    return cls


# ---------------------------------------------------------------------------
# Snake lemma
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnakeSequence:
    """ker a -> ker b -> ker c -δ-> coker a -> coker b -> coker c."""

    maps: Tuple[ModuleMorphism, ...]

    @property
    def connecting(self) -> ModuleMorphism:
        return self.maps[2]

    def is_exact(self, method: str = "normal") -> bool:
        return all(is_exact_at(f, g, method) for f, g in zip(self.maps, self.maps[1:]))


def snake_sequence(top: ShortExactSequence, bottom: ShortExactSequence,
                   a: ModuleMorphism, b: ModuleMorphism, c: ModuleMorphism) -> SnakeSequence:
    """
    The six-term sequence of a morphism of short exact sequences.

    Args:
        top: 0 -> A -> B -> C -> 0
        bottom: 0 -> A' -> B' -> C' -> 0
        a, b, c: Vertical maps A -> A', B -> B', C -> C'
    """
    if not top.inj.then(b).equals(a.then(bottom.inj)) or not top.surj.then(c).equals(b.then(bottom.surj)):
        raise DiagramError("snake squares do not commute")
    ka, kb, kc = kernel(a), kernel(b), kernel(c)
    ca, cb, cc = cokernel(a), cokernel(b), cokernel(c)
    k_ab = factor_through_mono(ka.inclusion.then(top.inj), kb.inclusion)
    k_bc = factor_through_mono(kb.inclusion.then(top.surj), kc.inclusion)
    c_ab = ModuleMorphism(ca.module, cb.module, bottom.inj.matrix)
    c_bc = ModuleMorphism(cb.module, cc.module, bottom.surj.matrix)

    rows = []
    for i in range(kc.module.generators):
        z = kc.inclusion.matrix.row(i)
        y = preimage(top.surj, z)
        w = b.apply(y)
        x = preimage(bottom.inj, w)
        if x is None:
            raise CotlabError("connecting map: image does not lie in the bottom kernel")
        rows.append(list(x))
    delta = ModuleMorphism(kc.module, ca.module, Matrix.from_rows(a.ring, rows, ca.module.generators))
    return SnakeSequence((k_ab, k_bc, delta, c_ab, c_bc))

# ---------------------------------------------------------------------------
# Subquotients
# ---------------------------------------------------------------------------

class Homology(NamedTuple):
    """Z = ker(next), B = im(prev), H = Z/B at the middle of prev, next."""
    cycles: FPModule
    boundaries: FPModule
    homology: FPModule
    cycle_inclusion: ModuleMorphism
    projection: ModuleMorphism


def homology_at(prev: ModuleMorphism, nxt: ModuleMorphism) -> Homology:
    if not prev.then(nxt).is_zero():
        raise DiagramError("consecutive maps do not compose to zero")
    z = kernel(nxt)
    b = image(prev)
    to_cycles = factor_through_mono(prev, z.inclusion)
    q = cokernel(to_cycles)
    return Homology(z.module, b.module, q.module, z.inclusion, q.projection)
