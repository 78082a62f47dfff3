"""
Finitely supported cochain complexes of Z/nZ-modules.

Differentials raise degree, d^k: C^k -> C^{k+1}. A complex stores the
modules of its support [lo, hi]; every degree outside it holds the zero
module. This module provides homology, chain maps and homotopies,
classification against a pair of classes, total complexes of
multicomplexes and the lift of a multi-variable adjunction to complexes.
"""

from dataclasses import InitVar
from typing import NamedTuple

from cotlab.algebra.common import *
from cotlab.algebra.ring import Matrix, Ring
from cotlab.algebra.modules import (
    FPModule, ModuleMorphism, Homology, ShortExactSequence, cokernel, direct_sum, element_table,
    homology_at, identity, is_exact_at, is_short_exact, kernel, preimage, realize_extension, zero_morphism,
)
from cotlab.algebra.bifunctors import HomSpace, MultiAdjunction, _power, ext1_space, ext_vanishes, hom_space

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChainComplex:
    """modules[i] sits in degree lo + i; differentials[i] goes from degree lo + i to lo + i + 1."""

    ring: Ring
    lo: int
    modules: Tuple[FPModule, ...]
    differentials: Tuple[ModuleMorphism, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        object.__setattr__(self, "modules", tuple(self.modules))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.modules) - 1, 0):
            raise ShapeError(f"{len(self.modules)} modules need {max(len(self.modules) - 1, 0)} differentials")
        for m in self.modules:
            if m.ring != self.ring:
                raise RingMismatchError(f"{m.ring} vs {self.ring}")
        for i, f in enumerate(self.differentials):
            if not (f.source.same_as(self.modules[i]) and f.target.same_as(self.modules[i + 1])):
                raise ShapeError(f"differential in degree {self.lo + i} has the wrong endpoints")
        if check:
            for i in range(len(self.differentials) - 1):
                if not self.differentials[i].then(self.differentials[i + 1]).is_zero():
                    raise DiagramError(f"d∘d != 0 at degree {self.lo + i}")

    @classmethod
    def from_maps(cls, maps: Sequence[ModuleMorphism], lo: int = 0) -> "ChainComplex":
        if not maps:
            raise ValueError("from_maps needs at least one differential")
        modules = [maps[0].source] + [f.target for f in maps]
        return cls(maps[0].ring, lo, tuple(modules), tuple(maps))

    @classmethod
    def zero(cls, ring: Ring, lo: int = 0) -> "ChainComplex":
        return cls(ring, lo, (), ())

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @cached_property
    def _zero(self) -> FPModule:
        return FPModule.zero(self.ring)

    def module(self, k: int) -> FPModule:
        if self.lo <= k <= self.hi:
            return self.modules[k - self.lo]
        return self._zero

    def diff(self, k: int) -> ModuleMorphism:
        if self.lo <= k < self.hi:
            return self.differentials[k - self.lo]
        return zero_morphism(self.module(k), self.module(k + 1))

    def is_zero(self) -> bool:
        return all(m.is_zero for m in self.modules)

    def describe(self) -> str:
        if not self.modules:
            return "0"
        body = " -> ".join(m.describe() for m in self.modules)
        return f"[{body}]@{self.lo}"

    def to_json(self) -> Dict[str, Any]:
        return {
            "ring": self.ring.modulus,
            "lo": self.lo,
            "modules": [m.to_json() for m in self.modules],
            "differentials": [f.matrix.to_json() for f in self.differentials],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ChainComplex":
        ring = Ring(int(data["ring"]))
        modules = tuple(FPModule.from_json({"ring": ring.modulus, **m}) for m in data.get("modules", []))
        raw = data.get("differentials", [])
        if len(raw) != max(len(modules) - 1, 0):
            raise ValueError(f"{len(modules)} modules but {len(raw)} differentials")
        diffs = []
        for i, d in enumerate(raw):
            src, tgt = modules[i], modules[i + 1]
            matrix = Matrix.from_json(d) if isinstance(d, Mapping) else Matrix.from_rows(ring, d, tgt.generators)
            diffs.append(ModuleMorphism(src, tgt, matrix))
        return cls(ring, int(data.get("lo", 0)), modules, tuple(diffs))

    def __repr__(self) -> str:
        return f"ChainComplex({self.ring}, {self.describe()})"


def sphere(n: int, a: FPModule) -> ChainComplex:
    """S^n(a): a concentrated in degree n."""
    if a.is_zero:
        return ChainComplex.zero(a.ring, n)
    return ChainComplex(a.ring, n, (a,), ())


def disc(n: int, a: FPModule) -> ChainComplex:
    """D^n(a): a in degrees n and n + 1 joined by the identity."""
    if a.is_zero:
        return ChainComplex.zero(a.ring, n)
    return ChainComplex(a.ring, n, (a, a), (identity(a),))


def elementary_complex(kind: str, n: int, a: FPModule) -> ChainComplex:
    if kind == "sphere":
        return sphere(n, a)
    if kind == "disc":
        return disc(n, a)
    raise ValueError(f"unknown elementary complex {kind!r}")


def homology(c: ChainComplex, k: int) -> Homology:
    """Z^k = ker d^k, B^k = im d^{k-1} and H^k = Z^k / B^k."""
    return homology_at(c.diff(k - 1), c.diff(k))


def is_exact(c: ChainComplex) -> bool:
    return all(homology(c, k).homology.is_zero for k in c.degrees)


def cycles(c: ChainComplex, k: int) -> FPModule:
    return homology(c, k).cycles


# ---------------------------------------------------------------------------
# Chain maps
# ---------------------------------------------------------------------------

def _union(*complexes: ChainComplex) -> List[int]:
    """Contiguous degree range covering every support."""
    present = [c for c in complexes if c.modules]
    if not present:
        return []
    return list(range(min(c.lo for c in present), max(c.hi for c in present) + 1))


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, ModuleMorphism]
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if self.source.ring != self.target.ring:
            raise RingMismatchError(f"{self.source.ring} vs {self.target.ring}")
        for k, f in self.components.items():
            if not (f.source.same_as(self.source.module(k)) and f.target.same_as(self.target.module(k))):
                raise ShapeError(f"component in degree {k} has the wrong endpoints")
        if check:
            for k in self.degrees:
                left = self.source.diff(k).then(self.component(k + 1))
                right = self.component(k).then(self.target.diff(k))
                if not left.equals(right):
                    raise DiagramError(f"chain map square at degree {k} does not commute")

    @property
    def degrees(self) -> List[int]:
        return _union(self.source, self.target)

    def component(self, k: int) -> ModuleMorphism:
        f = self.components.get(k)
        if f is None:
            return zero_morphism(self.source.module(k), self.target.module(k))
        return f

    def then(self, other: "ChainMap") -> "ChainMap":
        degrees = _union(self.source, self.target, other.target)
        comps = {k: self.component(k).then(other.component(k)) for k in degrees}
        return ChainMap(self.source, other.target, comps, check=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {k: self.component(k) - other.component(k) for k in self.degrees}, check=False)

    def is_zero(self) -> bool:
        return all(self.component(k).is_zero() for k in self.degrees)

    def equals(self, other: "ChainMap") -> bool:
        return (self - other).is_zero()


def identity_chain_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {k: identity(c.module(k)) for k in c.degrees}, check=False)


def zero_chain_map(c: ChainComplex, d: ChainComplex) -> ChainMap:
    return ChainMap(c, d, {}, check=False)


class _LinearSystem:
    """
    Unknown morphisms between modules, constrained by linear equations on
    their generator matrices.

    An equation lives in a power module; each term maps the flattened
    generator matrix of one unknown into it (rows indexed by the unknown's
    entries).
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self.unknowns: List[HomSpace] = []
        self.equations: List[Tuple[FPModule, Dict[int, Matrix]]] = []

    def unknown(self, a: FPModule, b: FPModule) -> int:
        self.unknowns.append(hom_space(a, b))
        return len(self.unknowns) - 1

    def equation(self, target: FPModule, terms: Mapping[int, Matrix]) -> None:
        self.equations.append((target, dict(terms)))

    @cached_property
    def operator(self) -> ModuleMorphism:
        ring = self.ring
        params = direct_sum([hs.module for hs in self.unknowns], ring)
        targets = direct_sum([t for t, _ in self.equations], ring)
        rows, cols = params.module.generators, targets.module.generators
        out = np.zeros((rows, cols), dtype=np.int64)
        row_offsets = np.cumsum([0] + [hs.module.generators for hs in self.unknowns])
        col = 0
        for target, terms in self.equations:
            width = target.generators
            for i, term in terms.items():
                block = self.unknowns[i].inclusion.matrix @ term
                if block.rows and block.cols:
                    out[row_offsets[i]:row_offsets[i + 1], col:col + width] += block.array
            col += width
        matrix = Matrix.from_array(ring, out) if rows and cols else Matrix.zeros(ring, rows, cols)
        return ModuleMorphism(params.module, targets.module, matrix, check=False)

    def split(self, coordinates: Sequence[int]) -> List[ModuleMorphism]:
        out, offset = [], 0
        for hs in self.unknowns:
            g = hs.module.generators
            out.append(hs.to_morphism(coordinates[offset:offset + g]))
            offset += g
        return out


def _left_mult(a: Matrix, width: int) -> Matrix:
    """X -> a @ X on flattened X with ``width`` columns."""
    return a.T.kron(Matrix.identity(a.ring, width))


def _right_mult(height: int, b: Matrix) -> Matrix:
    """X -> X @ b on flattened X with ``height`` rows."""
    return Matrix.identity(b.ring, height).kron(b)


@dataclass(frozen=True, eq=False)
class ChainMapSpace:
    """All chain maps source -> target as a submodule of the degreewise Hom modules."""

    source: ChainComplex
    target: ChainComplex
    module: FPModule
    inclusion: ModuleMorphism
    system: _LinearSystem
    degrees: Tuple[int, ...]

    def to_chain_map(self, vector: Sequence[int]) -> ChainMap:
        v = Matrix.from_rows(self.module.ring, [list(vector)], self.module.generators) @ self.inclusion.matrix
        comps = self.system.split(v.row(0))
        return ChainMap(self.source, self.target, dict(zip(self.degrees, comps)), check=False)

    def generators(self) -> List[ChainMap]:
        g = self.module.generators
        return [self.to_chain_map([1 if j == i else 0 for j in range(g)]) for i in range(g)]

    def maps(self) -> Iterator[ChainMap]:
        for v in element_table(self.module).elements:
            yield self.to_chain_map(v)

    def random_map(self, rng: random.Random) -> ChainMap:
        return self.to_chain_map(self.module.random_element(rng))

    @property
    def cardinality(self) -> int:
        return self.module.cardinality


def chain_map_space(c: ChainComplex, d: ChainComplex) -> ChainMapSpace:
    """Solve f^{k+1} after d_c = d_d after f^k degreewise."""
    ring = c.ring
    degrees = _union(c, d)
    system = _LinearSystem(ring)
    idx = {k: system.unknown(c.module(k), d.module(k)) for k in degrees}
    for k in degrees:
        if k + 1 not in idx:
            continue
        g, g_next = c.module(k).generators, d.module(k + 1).generators
        system.equation(_power(d.module(k + 1), g), {
            idx[k + 1]: _left_mult(c.diff(k).matrix, g_next),
            idx[k]: -_right_mult(g, d.diff(k).matrix),
        })
    ker = kernel(system.operator)
    return ChainMapSpace(c, d, ker.module, ker.inclusion, system, tuple(degrees))


def chain_maps(c: ChainComplex, d: ChainComplex) -> List[ChainMap]:
    """Generators of the module of chain maps c -> d."""
    return chain_map_space(c, d).generators()


# ---------------------------------------------------------------------------
# Homotopies
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Homotopy:
    """s^k: source^k -> target^{k-1}."""

    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, ModuleMorphism]

    def component(self, k: int) -> ModuleMorphism:
        s = self.components.get(k)
        if s is None:
            return zero_morphism(self.source.module(k), self.target.module(k - 1))
        return s

    def boundary(self) -> ChainMap:
        """d s + s d, the chain map this homotopy connects to zero."""
        comps = {}
        for k in _union(self.source, self.target):
            ds = self.component(k).then(self.target.diff(k - 1))
            sd = self.source.diff(k).then(self.component(k + 1))
            comps[k] = ds + sd
        return ChainMap(self.source, self.target, comps, check=False)


def null_homotopy(f: ChainMap) -> Optional[Homotopy]:
    """A homotopy from f to zero, or None when none exists."""
    c, d = f.source, f.target
    degrees = f.degrees
    system = _LinearSystem(c.ring)
    idx = {k: system.unknown(c.module(k), d.module(k - 1)) for k in degrees}
    rhs: List[int] = []
    for k in degrees:
        g = c.module(k).generators
        terms = {idx[k]: _right_mult(g, d.diff(k - 1).matrix)}
        if k + 1 in idx:
            terms[idx[k + 1]] = _left_mult(c.diff(k).matrix, d.module(k).generators)
        system.equation(_power(d.module(k), g), terms)
        rhs.extend(f.component(k).matrix.entries)
    x = preimage(system.operator, rhs)
    if x is None:
        return None
    h = Homotopy(c, d, dict(zip(degrees, system.split(x))))
    if not h.boundary().equals(f):
        raise CotlabError("null homotopy solution does not reproduce the chain map")
    return h


def is_null_homotopic(f: ChainMap) -> bool:
    return null_homotopy(f) is not None


def is_contractible(c: ChainComplex) -> bool:
    """The identity of c is null-homotopic."""
    return is_null_homotopic(identity_chain_map(c))


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class ComplexClassification:
    complex: str
    exact: bool
    entrywise_in_d: bool
    cycles_in_d: bool
    entrywise_in_e: bool
    cycles_in_e: bool

    @property
    def is_tilde_d(self) -> bool:
        return self.exact and self.cycles_in_d

    @property
    def is_tilde_e(self) -> bool:
        return self.exact and self.cycles_in_e

    # finite support: dg membership is entrywise membership
    @property
    def is_dg_d(self) -> bool:
        return self.entrywise_in_d

    @property
    def is_dg_e(self) -> bool:
        return self.entrywise_in_e

    @property
    def consistent(self) -> bool:
        """tilde implies dg and exact on both sides."""
        return (not self.is_tilde_d or (self.is_dg_d and self.exact)) and \
            (not self.is_tilde_e or (self.is_dg_e and self.exact))

    def to_json(self) -> Dict[str, Any]:
        return {
            "complex": self.complex,
            "exact": self.exact,
            "entrywise_in_d": self.entrywise_in_d,
            "cycles_in_d": self.cycles_in_d,
            "is_tilde_d": self.is_tilde_d,
            "is_dg_d": self.is_dg_d,
            "entrywise_in_e": self.entrywise_in_e,
            "cycles_in_e": self.cycles_in_e,
            "is_tilde_e": self.is_tilde_e,
            "is_dg_e": self.is_dg_e,
        }


def classify(c: ChainComplex, d, e) -> ComplexClassification:
    """
    Flags of ``c`` against the classes ``d`` and ``e`` (ClassSpecs).

    Raises:
        RingMismatchError: if the classes live over another ring
    """
    if d.ring != c.ring or e.ring != c.ring:
        raise RingMismatchError(f"classes over {d.ring}/{e.ring}, complex over {c.ring}")
    hs = [homology(c, k) for k in c.degrees]
    result = ComplexClassification(
        complex=c.describe(),
        exact=all(h.homology.is_zero for h in hs),
        entrywise_in_d=all(d.contains(m) for m in c.modules),
        cycles_in_d=all(d.contains(h.cycles) for h in hs),
        entrywise_in_e=all(e.contains(m) for m in c.modules),
        cycles_in_e=all(e.contains(h.cycles) for h in hs),
    )
    if not result.consistent:
        logger.error(f"{c.describe()}: tilde class without dg membership for ({d.name}, {e.name})")
    return result


def tilde_criterion_check(c: ChainComplex, d, e, u) -> bool:
    """
    Exact, and Ext^1(c^k / B^k, E) = 0 for every degree k and every E in e ∩ u.

    For a cotorsion pair this agrees with classify(c, d, e).is_tilde_d.
    """
    members = e.members(u)
    for k in c.degrees:
        if not homology(c, k).homology.is_zero:
            return False
        quotient = cokernel(c.diff(k - 1)).module
        for x in members:
            if not ext_vanishes(1, quotient, x):
                logger.debug(f"{c.describe()}: Ext¹({quotient.describe()}, {x.describe()}) ≠ 0 at degree {k}")
                return False
    return True


# ---------------------------------------------------------------------------
# Short exact sequences of complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexSES:
    """0 -> left -inj-> mid -surj-> right -> 0, degreewise short exact."""

    left: ChainComplex
    mid: ChainComplex
    right: ChainComplex
    inj: ChainMap
    surj: ChainMap

    def __post_init__(self):
        for k in self.degrees:
            if not is_short_exact(self.inj.component(k), self.surj.component(k)):
                raise CotlabError(f"not short exact in degree {k}")

    @property
    def degrees(self) -> List[int]:
        return _union(self.left, self.mid, self.right)


def twisted_sum(a: ChainComplex, d: ChainComplex, twist: Mapping[int, ModuleMorphism]) -> ComplexSES:
    """
    The complex a ⊕ d with differential (x, y) -> (x d_a + y t^k, y d_d), t^k: d^k -> a^{k+1},
    and its degreewise split sequence 0 -> a -> a ⊕ d -> d -> 0.
    """
    ring = a.ring
    degrees = _union(a, d)
    lo, hi = degrees[0], degrees[-1]
    sums = {k: direct_sum([a.module(k), d.module(k)], ring) for k in degrees}
    diffs = []
    for k in range(lo, hi):
        t = twist.get(k) or zero_morphism(d.module(k), a.module(k + 1))
        top = a.diff(k).matrix.hstack(Matrix.zeros(ring, a.module(k).generators, d.module(k + 1).generators))
        bottom = t.matrix.hstack(d.diff(k).matrix)
        diffs.append(ModuleMorphism(sums[k].module, sums[k + 1].module, top.vstack(bottom)))
    mid = ChainComplex(ring, lo, tuple(sums[k].module for k in degrees), tuple(diffs))
    inj = ChainMap(a, mid, {k: ModuleMorphism(a.module(k), mid.module(k), sums[k].injections[0].matrix, check=False)
                            for k in degrees})
    surj = ChainMap(mid, d, {k: ModuleMorphism(mid.module(k), d.module(k), sums[k].projections[1].matrix, check=False)
                             for k in degrees})
    return ComplexSES(a, mid, d, inj, surj)


def coboundary_twist(a: ChainComplex, d: ChainComplex, phi: Mapping[int, ModuleMorphism]) -> Dict[int, ModuleMorphism]:
    """t^k = φ^k d_a - d_d φ^{k+1} for degreewise maps φ^k: d^k -> a^k."""
    def p(k):
        return phi.get(k) or zero_morphism(d.module(k), a.module(k))
    return {k: p(k).then(a.diff(k)) - d.diff(k).then(p(k + 1)) for k in _union(a, d)}


def splice(sequences: Sequence[ShortExactSequence], lo: int = 0) -> ChainComplex:
    """
    The exact complex A_0 -> B_0 -> B_1 -> ... -> B_m -> C_m, with A_0 in degree ``lo``.

    Consecutive sequences must satisfy C_i == A_{i+1}.
    """
    if not sequences:
        raise ValueError("splice needs at least one short exact sequence")
    for s, t in zip(sequences, sequences[1:]):
        if not s.right.same_as(t.left):
            raise DiagramError(f"cannot splice {s.describe()} with {t.describe()}")
    maps = [sequences[0].inj]
    for s, t in zip(sequences, sequences[1:]):
        maps.append(s.surj.then(t.inj))
    maps.append(sequences[-1].surj)
    return ChainComplex.from_maps(maps, lo)


def induced_on_homology(f: ChainMap, k: int) -> ModuleMorphism:
    """H^k(f): H^k(source) -> H^k(target)."""
    hs, ht = homology(f.source, k), homology(f.target, k)
    return _induced(hs, ht, f.component(k))


def _induced(hs: Homology, ht: Homology, fk: ModuleMorphism) -> ModuleMorphism:
    rows = []
    for i in range(hs.cycles.generators):
        image = fk.apply(hs.cycle_inclusion.matrix.row(i))
        z = preimage(ht.cycle_inclusion, image)
        if z is None:
            raise CotlabError("chain map sends a cycle outside the cycles")
        rows.append(list(z))
    return ModuleMorphism(hs.homology, ht.homology, Matrix.from_rows(fk.ring, rows, ht.homology.generators))


def connecting_map(ses: ComplexSES, k: int) -> ModuleMorphism:
    """δ: H^k(right) -> H^{k+1}(left)."""
    hr, hl = homology(ses.right, k), homology(ses.left, k + 1)
    rows = []
    for i in range(hr.cycles.generators):
        z = hr.cycle_inclusion.matrix.row(i)
        y = preimage(ses.surj.component(k), z)
        w = ses.mid.diff(k).apply(y)
        x = preimage(ses.inj.component(k + 1), w)
        if x is None:
            raise CotlabError(f"connecting map: boundary leaves the left complex at degree {k + 1}")
        c = preimage(hl.cycle_inclusion, x)
        if c is None:
            raise CotlabError("connecting map: lifted element is not a cycle")
        rows.append(list(c))
    return ModuleMorphism(hr.homology, hl.homology, Matrix.from_rows(ses.left.ring, rows, hl.homology.generators))


def long_exact_sequence_holds(ses: ComplexSES, method: str = "normal") -> bool:
    """Exactness of ... -> H^k(left) -> H^k(mid) -> H^k(right) -> H^{k+1}(left) -> ... over the support."""
    degrees = ses.degrees
    hl = {k: homology(ses.left, k) for k in range(degrees[0] - 1, degrees[-1] + 2)}
    hm = {k: homology(ses.mid, k) for k in hl}
    hr = {k: homology(ses.right, k) for k in hl}
    chain: List[ModuleMorphism] = []
    for k in range(degrees[0] - 1, degrees[-1] + 1):
        chain.append(_induced(hl[k], hm[k], ses.inj.component(k)))
        chain.append(_induced(hm[k], hr[k], ses.surj.component(k)))
        delta = connecting_map(ses, k)
        chain.append(ModuleMorphism(hr[k].homology, hl[k + 1].homology, delta.matrix, check=False))
    for f, g in zip(chain, chain[1:]):
        if not is_exact_at(f, g, method):
            return False
    return True


# ---------------------------------------------------------------------------
# Multicomplexes and total complexes
# ---------------------------------------------------------------------------

Index = Tuple[int, ...]


def _unit(arity: int, i: int) -> Index:
    return tuple(1 if t == i else 0 for t in range(arity))


def _add(a: Index, b: Index) -> Index:
    return tuple(x + y for x, y in zip(a, b))


@dataclass(frozen=True, eq=False)
class MultiComplex:
    """
    A box-supported n-fold complex with commuting directional differentials.

    differentials[(α, i)] goes from entry α to entry α + e_i; the total
    complex introduces the signs.
    """

    ring: Ring
    lo: Index
    hi: Index
    entries: Mapping[Index, FPModule]
    differentials: Mapping[Tuple[Index, int], ModuleMorphism]

    def __post_init__(self):
        check_arity(self.arity)
        for alpha in self.box:
            if alpha not in self.entries:
                raise DiagramError(f"multicomplex lacks entry {alpha}")
        for alpha in self.box:
            for i in range(self.arity):
                for j in range(self.arity):
                    first = self.diff(alpha, i).then(self.diff(_add(alpha, _unit(self.arity, i)), j))
                    second = self.diff(alpha, j).then(self.diff(_add(alpha, _unit(self.arity, j)), i))
                    if i == j and not first.is_zero():
                        raise DiagramError(f"direction {i} does not square to zero at {alpha}")
                    if i < j and not first.equals(second):
                        raise DiagramError(f"directions {i}, {j} do not commute at {alpha}")

    @property
    def arity(self) -> int:
        return len(self.lo)

    @property
    def box(self) -> List[Index]:
        return [tuple(a) for a in itertools.product(*(range(l, h + 1) for l, h in zip(self.lo, self.hi)))]

    @cached_property
    def _zero(self) -> FPModule:
        return FPModule.zero(self.ring)

    def entry(self, alpha: Index) -> FPModule:
        return self.entries.get(alpha, self._zero)

    def diff(self, alpha: Index, i: int) -> ModuleMorphism:
        f = self.differentials.get((alpha, i))
        if f is None:
            return zero_morphism(self.entry(alpha), self.entry(_add(alpha, _unit(self.arity, i))))
        return f


def _sign(alpha: Index, i: int) -> int:
    return -1 if sum(alpha[:i]) % 2 else 1


def _layer(mc: MultiComplex, k: int) -> List[Index]:
    return [a for a in mc.box if sum(a) == k]


def _total_by_sums(mc: MultiComplex, src: List[Index], tgt: List[Index]) -> np.ndarray:
    rows = [mc.entry(a).generators for a in src]
    cols = [mc.entry(b).generators for b in tgt]
    out = np.zeros((sum(rows), sum(cols)), dtype=np.int64)
    col_at = dict(zip(tgt, np.cumsum([0] + cols)))
    r = 0
    for a, height in zip(src, rows):
        for i in range(mc.arity):
            b = _add(a, _unit(mc.arity, i))
            if b not in col_at or not height:
                continue
            f = mc.diff(a, i)
            if f.matrix.cols:
                out[r:r + height, col_at[b]:col_at[b] + f.matrix.cols] += _sign(a, i) * f.matrix.array
        r += height
    return out


def _total_by_products(mc: MultiComplex, src: List[Index], tgt: List[Index]) -> np.ndarray:
    height = sum(mc.entry(a).generators for a in src)
    columns = [np.zeros((height, 0), dtype=np.int64)]
    for b in tgt:
        g = mc.entry(b).generators
        blocks = []
        for a in src:
            ga = mc.entry(a).generators
            block = np.zeros((ga, g), dtype=np.int64)
            for i in range(mc.arity):
                if _add(a, _unit(mc.arity, i)) == b and ga and g:
                    block = block + _sign(a, i) * mc.diff(a, i).matrix.array
            blocks.append(block)
        columns.append(np.vstack(blocks) if blocks else np.zeros((0, g), dtype=np.int64))
    return np.hstack(columns)


def total_complex(mc: MultiComplex, flavor: str = "sum") -> ChainComplex:
    """
    Tot^k = ⊕_{|α| = k} M^α with differential Σ_i (-1)^{α_1 + ... + α_{i-1}} d_i.

    Sum and product totals coincide for box support; ``flavor`` picks the
    assembly path and the other one is computed as a cross-check.

    Raises:
        DiagramError: if the assembled differential does not square to zero
    """
    if flavor not in ("sum", "product"):
        raise ValueError(f"flavor must be 'sum' or 'product', got {flavor!r}")
    ring = mc.ring
    lo, hi = sum(mc.lo), sum(mc.hi)
    layers = {k: _layer(mc, k) for k in range(lo, hi + 2)}
    sums = {k: direct_sum([mc.entry(a) for a in layers[k]], ring) for k in range(lo, hi + 1)}
    diffs = []
    for k in range(lo, hi):
        primary, secondary = (_total_by_sums, _total_by_products) if flavor == "sum" else \
            (_total_by_products, _total_by_sums)
        arr = primary(mc, layers[k], layers[k + 1])
        if not np.array_equal(arr % ring.modulus, secondary(mc, layers[k], layers[k + 1]) % ring.modulus):
            raise DiagramError(f"sum and product totals disagree at degree {k}")
        matrix = Matrix.from_array(ring, arr) if arr.size else Matrix.zeros(ring, int(arr.shape[0]), int(arr.shape[1]))
        diffs.append(ModuleMorphism(sums[k].module, sums[k + 1].module, matrix, check=False))
    try:
        return ChainComplex(ring, lo, tuple(sums[k].module for k in range(lo, hi + 1)), tuple(diffs))
    except DiagramError as e:
        raise DiagramError(f"total complex sign check failed: {e}") from e


def lift_functor(ma: MultiAdjunction, complexes: Sequence[ChainComplex]) -> ChainComplex:
    """Ch(F)(A_1, ..., A_n): the total complex of F applied entrywise."""
    if len(complexes) != ma.arity:
        raise ValueError(f"{ma.name} takes {ma.arity} complexes, got {len(complexes)}")
    if any(not c.modules for c in complexes):
        return ChainComplex.zero(ma.target_ring)
    lo = tuple(c.lo for c in complexes)
    hi = tuple(c.hi for c in complexes)
    entries: Dict[Index, FPModule] = {}
    box = [tuple(a) for a in itertools.product(*(c.degrees for c in complexes))]
    for alpha in box:
        entries[alpha] = ma.left([c.module(a) for c, a in zip(complexes, alpha)])
    diffs = {}
    for alpha in box:
        for i, c in enumerate(complexes):
            if alpha[i] >= c.hi:
                continue
            maps = [c.diff(a) if t == i else identity(c.module(a)) for t, (c, a) in enumerate(zip(complexes, alpha))]
            f = ma.left_on_morphisms(maps)
            beta = _add(alpha, _unit(ma.arity, i))
            diffs[(alpha, i)] = ModuleMorphism(entries[alpha], entries[beta], f.matrix, check=False)
    mc = MultiComplex(ma.target_ring, lo, hi, entries, diffs)
    return total_complex(mc)


def lift_right_adjoint(ma: MultiAdjunction, j: int, complexes: Sequence[Optional[ChainComplex]],
                       a0: ChainComplex) -> ChainComplex:
    """
    Ch(G^j)(A_1, ..., A_0): entry G^j(A_i^{-α_i} ..., A_0^{α_0}) in degree Σ α.

    ``complexes`` is full length; entry j is ignored.
    """
    ma._check_slot(j)
    others = [i for i in range(ma.arity) if i != j]
    if any(not complexes[i].modules for i in others) or not a0.modules:
        return ChainComplex.zero(ma.source_rings[j])
    axes = others + [None]
    lo = tuple(-complexes[i].hi for i in others) + (a0.lo,)
    hi = tuple(-complexes[i].lo for i in others) + (a0.hi,)

    def objs(alpha):
        out: List[Optional[FPModule]] = [None] * ma.arity
        for t, i in enumerate(others):
            out[i] = complexes[i].module(-alpha[t])
        return out

    box = [tuple(a) for a in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))]
    entries = {alpha: ma.right(j, objs(alpha), a0.module(alpha[-1])) for alpha in box}
    diffs = {}
    for alpha in box:
        for t, axis in enumerate(axes):
            if alpha[t] >= hi[t]:
                continue
            base = objs(alpha)
            if axis is None:
                maps = [None if i == j else identity(base[i]) for i in range(ma.arity)]
                g = a0.diff(alpha[-1])
            else:
                # contravariant slot: d^{b-1}: A^{b-1} -> A^{b} with b = -α_t
                maps = [None if i == j else
                        (complexes[i].diff(-alpha[t] - 1) if i == axis else identity(base[i]))
                        for i in range(ma.arity)]
                g = identity(a0.module(alpha[-1]))
            f = ma.right_on_morphisms(j, maps, g)
            beta = _add(alpha, _unit(len(axes), t))
            diffs[(alpha, t)] = ModuleMorphism(entries[alpha], entries[beta], f.matrix, check=False)
    mc = MultiComplex(ma.source_rings[j], lo, hi, entries, diffs)
    return total_complex(mc)


# ---------------------------------------------------------------------------
# Sampling and compatibility
# ---------------------------------------------------------------------------

def spliced_complex(mods: Sequence[FPModule], rng: random.Random, lo: int = 0) -> ChainComplex:
    """An exact complex whose cycles are ``mods`` (in order), with random extension classes."""
    if len(mods) < 2:
        raise ValueError("a spliced complex needs at least two cycle modules")
    sequences = []
    for left, right in zip(mods, mods[1:]):
        cls = ext1_space(right, left).random_class(rng)
        sequences.append(realize_extension(right, left, cls))
    return splice(sequences, lo)


def random_complex(mods: Sequence[FPModule], rng: random.Random, lo: int = 0) -> ChainComplex:
    """A complex with the given entries and random differentials (each factors through the previous cokernel)."""
    if not mods:
        raise ValueError("random_complex needs at least one module")
    if len(mods) == 1:
        return ChainComplex(mods[0].ring, lo, (mods[0],), ())
    maps = [hom_space(mods[0], mods[1]).random_morphism(rng)]
    for k in range(1, len(mods) - 1):
        q = cokernel(maps[-1])
        g = hom_space(q.module, mods[k + 1]).random_morphism(rng)
        maps.append(ModuleMorphism(mods[k], mods[k + 1], g.matrix, check=False))
    return ChainComplex.from_maps(maps, lo)


def sample_complexes(d, u, seed: int = 0, samples: Optional[int] = None) -> List[ChainComplex]:
    """
    Seeded sample of finitely supported complexes over ``u``.

    Spheres and discs on every universe module come first, then spliced
    exact complexes with cycles in ``d`` (length at most four) and random
    entrywise-``d`` complexes (length at most three), alternating.
    """
    if samples is None:
        samples = get_config().get_config_for_level()["complex_samples"]
    rng = random.Random(seed)
    out: List[ChainComplex] = []
    for m in u.modules:
        if m.is_zero:
            continue
        out.append(sphere(0, m))
        out.append(disc(0, m))
    members = [m for m in d.members(u)]
    nonzero = [m for m in members if not m.is_zero]
    turn = 0
    while len(out) < samples and nonzero:
        if turn % 2 == 0:
            length = rng.randint(2, 3)
            mods = [FPModule.zero(u.ring)] + [rng.choice(members) for _ in range(length - 1)] + [FPModule.zero(u.ring)]
            c = spliced_complex(mods, rng, lo=rng.randint(-1, 1))
        else:
            length = rng.randint(2, 3)
            c = random_complex([rng.choice(nonzero) for _ in range(length)], rng, lo=rng.randint(-1, 1))
        out.append(c)
        turn += 1
    logger.debug(f"sampled {len(out)} complexes over {u.ring}")
    return out[:samples]


@dataclass
class CompatibilityReport:
    checked: int
    witnesses: List[Witness]

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def to_json(self) -> Dict[str, Any]:
        return {"checked": self.checked, "holds": self.holds, "witnesses": [w.to_json() for w in self.witnesses]}


def check_bounded_dg(c: ChainComplex, targets: Sequence[ChainComplex], rng: random.Random,
                     budget: int) -> Optional[Witness]:
    """Every sampled chain map from ``c`` into a ``targets`` complex is null-homotopic."""
    for t in targets:
        space = chain_map_space(c, t)
        if space.cardinality <= budget:
            maps = list(space.maps())
        else:
            maps = [space.random_map(rng) for _ in range(budget)]
        for f in maps:
            if not is_null_homotopic(f):
                return witness(f"chain map {c.describe()} -> {t.describe()} is not null-homotopic")
    return None


def compatibility_check(d, e, complexes: Sequence[ChainComplex], seed: int = 0) -> CompatibilityReport:
    """
    On the given complexes: exact entrywise-𝒟 complexes have cycles in 𝒟
    (dually for ℰ), tilde membership implies dg membership, and chain maps
    from dg-𝒟 complexes into tilde-ℰ complexes are null-homotopic.
    """
    level = get_config().get_config_for_level()
    rng = random.Random(seed)
    witnesses = []
    flags = [(c, classify(c, d, e)) for c in complexes]
    for c, cl in flags:
        if cl.exact and cl.entrywise_in_d and not cl.cycles_in_d:
            witnesses.append(witness(f"{c.describe()} is exact with entries in {d.name} but a cycle outside it", c))
        if cl.exact and cl.entrywise_in_e and not cl.cycles_in_e:
            witnesses.append(witness(f"{c.describe()} is exact with entries in {e.name} but a cycle outside it", c))
        if not cl.consistent:
            witnesses.append(witness(f"{c.describe()} is a tilde complex outside the dg class", c))
    tilde_e = [c for c, cl in flags if cl.is_tilde_e and not c.is_zero()][:3]
    dg_d = [c for c, cl in flags if cl.is_dg_d and not c.is_zero()][:level["lemma_trials"]]
    for c in dg_d:
        w = check_bounded_dg(c, tilde_e, rng, level["hom_sample_cap"])
        if w is not None:
            witnesses.append(w)
    report = CompatibilityReport(len(flags), witnesses)
    logger.info(f"compatibility of ({d.name}, {e.name}) on {len(flags)} complexes: holds={report.holds}")
    return report
