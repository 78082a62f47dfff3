"""Brute-force oracles shared by the tests."""

import itertools
from typing import List, Sequence, Set, Tuple

from sympy import Matrix as SympyMatrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from cotlab.algebra.common import NotWellDefinedError
from cotlab.algebra.ring import Matrix
from cotlab.algebra.modules import FPModule, ModuleMorphism, is_epic, is_monic, is_short_exact
from cotlab.algebra.cotorsion import enumerate_universe


def row_span(m: Matrix) -> Set[Tuple[int, ...]]:
    """Every Z/n-combination of the rows of m."""
    n = m.ring.modulus
    rows = m.to_rows()
    span = {tuple([0] * m.shape[1])}
    for row in rows:
        span = {tuple((s[j] + k * row[j]) % n for j in range(len(row))) for s in span for k in range(n)}
    return span


def integer_invariants(presentation: Matrix) -> List[int]:
    """Invariant factors of the cokernel of the presentation, computed by sympy over Z."""
    n = presentation.ring.modulus
    rows, cols = presentation.shape
    stacked = presentation.to_rows() + [[n if i == j else 0 for j in range(cols)] for i in range(cols)]
    snf = smith_normal_form(SympyMatrix(stacked), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    return sorted(d for d in diag if d != 1)


def all_morphisms(a: FPModule, b: FPModule) -> List[ModuleMorphism]:
    """Every well-defined generator matrix a -> b, deduplicated as maps."""
    n = a.ring.modulus
    seen = {}
    for entries in itertools.product(range(n), repeat=a.generators * b.generators):
        rows = [list(entries[i * b.generators:(i + 1) * b.generators]) for i in range(a.generators)]
        try:
            f = ModuleMorphism(a, b, Matrix.from_rows(a.ring, rows, b.generators))
        except NotWellDefinedError:
            continue
        seen.setdefault(f.canonical_key(), f)
    return list(seen.values())


def brute_ext1_order(d: FPModule, x: FPModule) -> int:
    """
    |Ext^1(d, x)| by searching middle objects.

    For each Y with |Y| = |d||x| the short exact pairs x -> Y -> d fall into
    classes of |Aut(Y)| / |Hom(d, x)| each, since Aut(Y) acts on them with
    stabilizers id + p h i for h in Hom(d, x).
    """
    hom_dx = len(all_morphisms(d, x))
    total = 0
    for y in enumerate_universe(d.ring, 2):
        if y.cardinality != d.cardinality * x.cardinality:
            continue
        monos = [i for i in all_morphisms(x, y) if is_monic(i)]
        epis = [p for p in all_morphisms(y, d) if is_epic(p)]
        pairs = sum(1 for i in monos for p in epis if is_short_exact(i, p))
        if not pairs:
            continue
        auts = sum(1 for f in all_morphisms(y, y) if is_monic(f) and is_epic(f))
        total += pairs * hom_dx // auts
    return total


def cardinalities(modules: Sequence[FPModule]) -> List[int]:
    return [m.cardinality for m in modules]
