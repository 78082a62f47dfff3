"""
Exact arithmetic over Z/nZ for cotlab.
This module provides rings, residues, matrices and the canonical forms
(Howell, Smith) plus linear solving that everything else is built on.
"""

from typing import NamedTuple

import sympy

from cotlab.algebra.common import *

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ring:
    """The ring Z/nZ."""

    modulus: int

    def __post_init__(self):
        if not isinstance(self.modulus, (int, np.integer)) or self.modulus < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")
        cap = get_config().max_modulus
        if self.modulus > cap:
            raise LimitExceededError(f"modulus {self.modulus} exceeds the configured maximum {cap}")
        object.__setattr__(self, "modulus", int(self.modulus))

    @cached_property
    def factorization(self) -> Dict[int, int]:
        """Prime factorization {p: k} of the modulus."""
        return {int(p): int(k) for p, k in sympy.factorint(self.modulus).items()}

    @cached_property
    def divisors(self) -> Tuple[int, ...]:
        """All positive divisors of the modulus, ascending."""
        return tuple(int(d) for d in sympy.divisors(self.modulus))

    def reduce(self, value: int) -> int:
        return int(value) % self.modulus

    def residue(self, value: int) -> "Residue":
        return Residue(self.reduce(value), self)

    def ideal(self, a: int) -> int:
        """The divisor of n generating the ideal (a); gcd(0, n) = n."""
        return math.gcd(int(a) % self.modulus, self.modulus)

    def is_zero(self, a: int) -> bool:
        return int(a) % self.modulus == 0

    def is_unit(self, a: int) -> bool:
        return self.ideal(a) == 1

    def inverse(self, a: int) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit modulo {self.modulus}")
        return pow(int(a) % self.modulus, -1, self.modulus)

    def divides(self, a: int, b: int) -> bool:
        """Whether a divides b in Z/nZ, i.e. b lies in the ideal (a)."""
        return int(b) % self.modulus % self.ideal(a) == 0

    def annihilator(self, a: int) -> int:
        """Generator n/gcd(a, n) of the annihilator ideal of a (0 when a is a unit)."""
        return (self.modulus // self.ideal(a)) % self.modulus

    def divide(self, b: int, a: int) -> Optional[int]:
        """Some x with a*x == b, or None if b is not in (a)."""
        n = self.modulus
        g = self.ideal(a)
        b = int(b) % n
        if b % g:
            return None
        if g == n:
            return 0
        m = n // g
        return (b // g) * pow((int(a) % n) // g % m, -1, m) % m

    def unit_normalizer(self, a: int) -> int:
        """A unit u with u*a == gcd(a, n) (mod n)."""
        return _unit_normalizer(self.modulus, int(a) % self.modulus)

    def __str__(self) -> str:
        return f"Z/{self.modulus}"


@functools.lru_cache(maxsize=None)
def _unit_normalizer(n: int, a: int) -> int:
    g = math.gcd(a, n)
    if g == n:
        return 1
    m = n // g
    u0 = pow(a // g % m, -1, m) if m > 1 else 0
    for j in range(g + 1):
        u = u0 + j * m
        if math.gcd(u, n) == 1:
            return u % n
    raise CotlabError(f"no unit normalizer for {a} mod {n}")


@dataclass(frozen=True)
class Residue:
    """An element of Z/nZ."""

    value: int
    ring: Ring

    def __post_init__(self):
        if not 0 <= self.value < self.ring.modulus:
            raise ValueError(f"residue {self.value} out of range for {self.ring}")

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other.value
        return int(other)

    def __add__(self, other):
        return self.ring.residue(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring.residue(self.value - self._coerce(other))

    def __mul__(self, other):
        return self.ring.residue(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.ring.residue(-self.value)

    def __int__(self):
        return self.value

    def divides(self, other) -> bool:
        return self.ring.divides(self.value, self._coerce(other))

    def __repr__(self) -> str:
        return f"{self.value} mod {self.ring.modulus}"


@dataclass(frozen=True)
class Matrix:
    """A dense rows x cols matrix over Z/nZ, stored row-major."""

    ring: Ring
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")
        n = self.ring.modulus
        object.__setattr__(self, "entries", tuple(int(e) % n for e in self.entries))

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError(f"ragged row of length {len(r)}, expected {cols}")
        return cls(ring, len(rows), cols, tuple(e for r in rows for e in r))

    @classmethod
    def from_array(cls, ring: Ring, array: np.ndarray) -> "Matrix":
        array = np.asarray(array, dtype=np.int64)
        if array.ndim != 2:
            raise ShapeError(f"expected a 2-d array, got shape {array.shape}")
        r, c = array.shape
        return cls(ring, r, c, tuple(int(x) for x in (array % ring.modulus).reshape(-1)))

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        return cls(ring, rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, ring: Ring, size: int) -> "Matrix":
        return cls(ring, size, size, tuple(1 if i == j else 0 for i in range(size) for j in range(size)))

    @classmethod
    def diagonal(cls, ring: Ring, values: Sequence[int], rows: int, cols: int) -> "Matrix":
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = int(v)
        return cls.from_rows(ring, data, cols)

    @classmethod
    def block_diagonal(cls, ring: Ring, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            out[r:r + b.rows, c:c + b.cols] = b.array
            r += b.rows
            c += b.cols
        return cls.from_array(ring, out)

    # -- views --------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def to_rows(self) -> List[List[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def is_zero(self) -> bool:
        return not any(self.entries)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.ring, self.rows, other.cols)
        return Matrix.from_array(self.ring, (self.array @ other.array) % self.ring.modulus)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.ring, self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "Matrix":
        return Matrix(self.ring, self.rows, self.cols, tuple(k * a for a in self.entries))

    @property
    def T(self) -> "Matrix":
        return Matrix.from_array(self.ring, self.array.T) if self.rows and self.cols else Matrix.zeros(self.ring, self.cols, self.rows)

    def kron(self, other: "Matrix") -> "Matrix":
        self._check(other)
        rows, cols = self.rows * other.rows, self.cols * other.cols
        if rows == 0 or cols == 0:
            return Matrix.zeros(self.ring, rows, cols)
        return Matrix.from_array(self.ring, np.kron(self.array, other.array) % self.ring.modulus)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.rows != other.rows:
            raise ShapeError(f"hstack of {self.shape} and {other.shape}")
        return Matrix.from_rows(self.ring, [list(a) + list(b) for a, b in zip(self.to_rows(), other.to_rows())],
                                self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.cols:
            raise ShapeError(f"vstack of {self.shape} and {other.shape}")
        return Matrix(self.ring, self.rows + other.rows, self.cols, self.entries + other.entries)

    def take_rows(self, indices: Sequence[int]) -> "Matrix":
        return Matrix.from_rows(self.ring, [self.row(i) for i in indices], self.cols)

    def take_columns(self, indices: Sequence[int]) -> "Matrix":
        return Matrix.from_rows(self.ring, [[r[j] for j in indices] for r in self.to_rows()], len(indices))

    def drop_zero_rows(self) -> "Matrix":
        return Matrix.from_rows(self.ring, [r for r in self.to_rows() if any(r)], self.cols)

    def reduce_to(self, ring: Ring) -> "Matrix":
        """Reinterpret the entries modulo another modulus (lift or reduction)."""
        return Matrix(ring, self.rows, self.cols, self.entries)

    # -- serialization ------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {"ring": self.ring.modulus, "rows": self.rows, "cols": self.cols, "entries": list(self.entries)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Matrix":
        try:
            return cls(Ring(int(data["ring"])), int(data["rows"]), int(data["cols"]),
                       tuple(int(e) for e in data["entries"]))
        except KeyError as e:
            raise ValueError(f"matrix JSON lacks field {e}") from e

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.to_rows()})"


# ---------------------------------------------------------------------------
# Howell normal form
# ---------------------------------------------------------------------------

def _combine(n: int, r1: List[int], r2: List[int], a: int, b: int, c: int, d: int) -> Tuple[List[int], List[int]]:
    """Apply the 2x2 transform [[a, b], [c, d]] to the row pair (r1, r2)."""
    return ([(a * x + b * y) % n for x, y in zip(r1, r2)],
            [(c * x + d * y) % n for x, y in zip(r1, r2)])


def howell_form(m: Matrix) -> Tuple[Matrix, Matrix]:
    """
    Compute the Howell normal form of a matrix over Z/nZ.

    The input is padded with ``m.cols`` zero rows so the annihilator rows the
    algorithm introduces have somewhere to live. Zero rows are pruned from
    ``H``. ``U`` has shape (H.rows, m.rows) and ``U @ m == H``: row i of ``U``
    writes row i of ``H`` as a combination of the rows of ``m``.

    Args:
        m: Input matrix

    Returns:
        Tuple (H, U)
    """
    ring = m.ring
    n = ring.modulus
    width = m.cols
    k = m.rows + m.cols

    work: List[List[int]] = []
    for i in range(k):
        data = list(m.row(i)) if i < m.rows else [0] * width
        work.append(data + [1 if j == i else 0 for j in range(k)])

    pivots: List[Tuple[int, List[int]]] = []
    pending = work
    for col in range(width):
        nonzero = [r for r in pending if r[col] % n]
        rest = [r for r in pending if not r[col] % n]
        if not nonzero:
            continue
        pivot = nonzero[0]
        for other in nonzero[1:]:
            a, b = pivot[col], other[col]
            g, s, t = xgcd(a, b)
            pivot, other = _combine(n, pivot, other, s, t, -(b // g), a // g)
            rest.append(other)
        u = ring.unit_normalizer(pivot[col])
        pivot = [(u * x) % n for x in pivot]
        ann = n // pivot[col]
        shifted = [(ann * x) % n for x in pivot]
        if any(shifted[:width]):
            slot = next((r for r in rest if not any(r[:width])), None)
            if slot is None:
                raise CotlabError("Howell reduction ran out of padding rows")
            rest.remove(slot)
            rest.append([(x + y) % n for x, y in zip(slot, shifted)])
        pivots.append((col, pivot))
        pending = rest

    # reduce entries above each pivot into [0, pivot)
    for idx, (col, prow) in enumerate(pivots):
        p = prow[col]
        for j in range(idx):
            upper = pivots[j][1]
            q = upper[col] // p
            if q:
                pivots[j] = (pivots[j][0], [(x - q * y) % n for x, y in zip(upper, prow)])

    h_rows = [r[:width] for _, r in pivots]
    # padding rows are zero, so their coefficients do not contribute
    u_rows = [r[width:width + m.rows] for _, r in pivots]
    H = Matrix.from_rows(ring, h_rows, width)
    U = Matrix.from_rows(ring, u_rows, m.rows)
    return H, U


def howell_pivots(H: Matrix) -> List[Tuple[int, int]]:
    """(column, pivot value) for each row of a Howell form."""
    out = []
    for i in range(H.rows):
        row = H.row(i)
        col = next(j for j, x in enumerate(row) if x)
        out.append((col, row[col]))
    return out


def howell_reduce(H: Matrix, vector: Sequence[int]) -> Tuple[int, ...]:
    """Canonical representative of ``vector`` modulo the row span of the Howell form ``H``."""
    n = H.ring.modulus
    v = [int(x) % n for x in vector]
    for i, (col, p) in enumerate(howell_pivots(H)):
        q = v[col] // p
        if q:
            row = H.row(i)
            v = [(x - q * y) % n for x, y in zip(v, row)]
    return tuple(v)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

class SmithForm(NamedTuple):
    diag: List[Residue]
    L: Matrix
    R: Matrix


def _pivot_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """xgcd, keeping the pivot line unchanged when it already divides b."""
    if b % a == 0:
        return a, 1, 0
    return xgcd(a, b)


def smith_form(m: Matrix) -> SmithForm:
    """
    Compute L, R invertible and a diagonal d_1 | d_2 | ... with L @ m @ R = diag(d).

    Works over Z/nZ throughout. Each step picks the entry whose gcd with n
    is smallest as pivot and clears its row and column with 2x2 xgcd
    transforms. When the pivot fails to divide some remaining entry, that
    entry's row is added to the pivot row and the step repeats. The pivot is
    then scaled by a unit to the divisor of n it generates, so every nonzero
    d_i is a divisor of n.

    Args:
        m: Input matrix

    Returns:
        SmithForm(diag, L, R); diag has length min(rows, cols)
    """
    ring = m.ring
    n = ring.modulus
    r, c = m.rows, m.cols
    A = m.to_rows()
    L = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    R = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def row_op(i, j, a, b, cc, d):
        A[i], A[j] = _combine(n, A[i], A[j], a, b, cc, d)
        L[i], L[j] = _combine(n, L[i], L[j], a, b, cc, d)

    def col_op(i, j, a, b, cc, d):
        for M in (A, R):
            for row in M:
                x, y = row[i], row[j]
                row[i] = (a * x + b * y) % n
                row[j] = (cc * x + d * y) % n

    size = min(r, c)
    t = 0
    while t < size:
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j]:
                    g = math.gcd(A[i][j], n)
                    if best is None or g < best[0]:
                        best = (g, i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            A[t], A[bi] = A[bi], A[t]
            L[t], L[bi] = L[bi], L[t]
        if bj != t:
            col_op(t, bj, 0, 1, 1, 0)

        while True:
            for i in range(t + 1, r):
                if A[i][t]:
                    a, b = A[t][t], A[i][t]
                    g, s, u = _pivot_gcd(a, b)
                    row_op(t, i, s, u, -(b // g), a // g)
            for j in range(t + 1, c):
                if A[t][j]:
                    a, b = A[t][t], A[t][j]
                    g, s, u = _pivot_gcd(a, b)
                    col_op(t, j, s, u, -(b // g), a // g)
            if any(A[i][t] for i in range(t + 1, r)):
                continue
            p = A[t][t]
            offender = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                             if not ring.divides(p, A[i][j])), None)
            if offender is None:
                break
            oi = offender[0]
            A[t] = [(x + y) % n for x, y in zip(A[t], A[oi])]
            L[t] = [(x + y) % n for x, y in zip(L[t], L[oi])]

        unit = ring.unit_normalizer(A[t][t])
        A[t] = [(unit * x) % n for x in A[t]]
        L[t] = [(unit * x) % n for x in L[t]]
        t += 1

    diag = [ring.residue(A[i][i]) for i in range(size)]
    return SmithForm(diag, Matrix.from_rows(ring, L, r), Matrix.from_rows(ring, R, c))


# ---------------------------------------------------------------------------
# Linear systems
# ---------------------------------------------------------------------------

class LinearSolution(NamedTuple):
    solution: Optional[Matrix]
    kernel: Matrix

    @property
    def solvable(self) -> bool:
        return self.solution is not None


def solve_linear(A: Matrix, b: Matrix) -> LinearSolution:
    """
    Solve A @ x == b over Z/nZ.

    Args:
        A: Coefficient matrix (r x c)
        b: Right-hand sides (r x k)

    Returns:
        LinearSolution with one particular solution (c x k, or None when the
        system has none) and a c x m matrix whose columns generate the kernel of A
    """
    if A.ring != b.ring:
        raise RingMismatchError(f"{A.ring} vs {b.ring}")
    if A.rows != b.rows:
        raise ShapeError(f"A has {A.rows} rows but b has {b.rows}")
    ring = A.ring
    n = ring.modulus
    r, c = A.shape
    diag, L, R = smith_form(A)
    size = len(diag)

    kernel_cols = []
    for i in range(size):
        gen = ring.annihilator(diag[i].value)
        if gen:
            kernel_cols.append([gen * x % n for x in R.column(i)])
    for i in range(size, c):
        kernel_cols.append(list(R.column(i)))
    kernel = Matrix.from_rows(ring, kernel_cols, c).T if kernel_cols else Matrix.zeros(ring, c, 0)

    Lb = L @ b
    y = [[0] * b.cols for _ in range(c)]
    for col in range(b.cols):
        for i in range(r):
            target = Lb[i, col]
            if i < size:
                yi = ring.divide(target, diag[i].value)
                if yi is None:
                    return LinearSolution(None, kernel)
                y[i][col] = yi
            elif target:
                return LinearSolution(None, kernel)
    x = R @ Matrix.from_rows(ring, y, b.cols)
    if A @ x != b:
        raise CotlabError("substitution check failed in solve_linear")
    return LinearSolution(x, kernel)


def left_kernel(m: Matrix) -> Matrix:
    """Rows generating {z : z @ m == 0}."""
    zero = Matrix.zeros(m.ring, m.cols, 1)
    return solve_linear(m.T, zero).kernel.T


def solve_left(m: Matrix, target: Matrix) -> Optional[Matrix]:
    """Some y with y @ m == target (row form), or None."""
    sol = solve_linear(m.T, target.T).solution
    return None if sol is None else sol.T
