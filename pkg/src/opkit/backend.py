"""Exact finite-dimensional matrix oracle.

Commuting families of rational matrices realize the abstract operators;
polynomials are instantiated through the evaluation homomorphism, and
kernel/solve/range questions are answered by fraction-free Gaussian
elimination over the integers (denominators cleared per row, Bareiss
updates) followed by back-substitution, which keeps intermediate growth
polynomial and the pivoting fully deterministic.

Everything is exact; nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Optional, Sequence

from . import kernels
from .errors import InputError, ResourceLimitError
from .poly import Polynomial

Vector = tuple[Fraction, ...]

DIMENSION_CAP = 2000


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def as_vector(values: Iterable) -> Vector:
    return tuple(_frac(v) for v in values)


class Matrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(_frac(v) for v in row) for row in entries]
        if not rows:
            raise InputError("a matrix needs at least one row")
        width = len(rows[0])
        if width == 0 or any(len(r) != width for r in rows):
            raise InputError("matrix rows must be nonempty and equal length")
        self.rows = len(rows)
        self.cols = width
        self._entries = tuple(rows)

    @classmethod
    def _wrap(cls, entries: list[list[Fraction]]) -> "Matrix":
        self = object.__new__(cls)
        self._entries = tuple(tuple(r) for r in entries)
        self.rows = len(entries)
        self.cols = len(entries[0])
        return self

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._wrap([[one if i == j else zero for j in range(n)]
                          for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        zero = Fraction(0)
        return cls._wrap([[zero] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values: Iterable) -> "Matrix":
        vals = [_frac(v) for v in values]
        zero = Fraction(0)
        return cls._wrap([[vals[i] if i == j else zero for j in range(len(vals))]
                          for i in range(len(vals))])

    @classmethod
    def from_strings(cls, grid: Sequence[Sequence[str]]) -> "Matrix":
        """Rational-string grid, the JSON wire format for matrices."""
        return cls([[Fraction(v) for v in row] for row in grid])

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self._entries]

    def entry(self, i: int, j: int) -> Fraction:
        return self._entries[i][j]

    def row_list(self) -> list[list[Fraction]]:
        return [list(r) for r in self._entries]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not v for row in self._entries for v in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self._entries == other._entries)

    def __hash__(self) -> int:
        return hash(self._entries)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._wrap([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self._entries, other._entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix._wrap([[a - b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self._entries, other._entries)])

    def __neg__(self) -> "Matrix":
        return Matrix._wrap([[-a for a in row] for row in self._entries])

    def scale(self, c) -> "Matrix":
        c = _frac(c)
        return Matrix._wrap([[a * c for a in row] for row in self._entries])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise InputError(
                    f"cannot multiply {self.rows}x{self.cols} by "
                    f"{other.rows}x{other.cols}")
            return Matrix._wrap(kernels.mat_mul(self.row_list(), other.row_list()))
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Fraction, int)):
            return self.scale(other)
        return NotImplemented

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vector length {len(v)} != column count {self.cols}")
        return tuple(kernels.mat_apply(self.row_list(), [_frac(x) for x in v]))

    def _same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix shape mismatch")

    def __repr__(self) -> str:
        return f"Matrix({self.to_strings()!r})"


def commutator_is_zero(a: Matrix, b: Matrix) -> bool:
    return (a * b - b * a).is_zero()


@dataclass(frozen=True)
class OperatorInstance:
    """A commuting family of square matrices realizing the variables."""

    dimension: int
    generators: tuple[Matrix, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise InputError("dimension must be positive")
        if self.dimension > DIMENSION_CAP:
            raise ResourceLimitError(
                f"dimension {self.dimension} exceeds cap {DIMENSION_CAP}")
        if not self.generators:
            raise InputError("need at least one generator matrix")
        for i, g in enumerate(self.generators):
            if not (g.is_square() and g.rows == self.dimension):
                raise InputError(f"generator {i} is not {self.dimension} square")
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                if not commutator_is_zero(self.generators[i], self.generators[j]):
                    raise InputError(
                        f"generators {i} and {j} do not commute")

    @classmethod
    def of(cls, generators: Sequence[Matrix]) -> "OperatorInstance":
        return cls(generators[0].rows, tuple(generators))

    @property
    def variable_count(self) -> int:
        return len(self.generators)


def instantiate(p: Polynomial, inst: OperatorInstance) -> Matrix:
    """Evaluate a polynomial at the generator matrices (1 maps to identity)."""
    if p.variable_count != inst.variable_count:
        raise InputError(
            f"polynomial has {p.variable_count} variables, instance has "
            f"{inst.variable_count} generators")
    n = inst.dimension
    max_exp = [0] * inst.variable_count
    for exp in p.terms:
        for v, e in enumerate(exp):
            max_exp[v] = max(max_exp[v], e)
    powers: list[list[Matrix]] = []
    for v, top in enumerate(max_exp):
        cache = [Matrix.identity(n)]
        for _ in range(top):
            cache.append(cache[-1] * inst.generators[v])
        powers.append(cache)
    acc = Matrix.zeros(n, n)
    for exp, coeff in sorted(p.terms.items()):
        term = Matrix.identity(n)
        for v, e in enumerate(exp):
            if e:
                term = term * powers[v][e]
        acc = acc + term.scale(coeff)
    return acc


# ---------------------------------------------------------------------------
# Exact elimination
# ---------------------------------------------------------------------------

def _int_rows(entries: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Clear denominators row by row (row scaling preserves row space)."""
    out = []
    for row in entries:
        scale = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * scale) for v in row])
    return out


def _rref(entries: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with pivot columns, fully deterministic.

    Forward pass: fraction-free Bareiss elimination on the denominator-
    cleared integer matrix (exact divisions, polynomial entry growth).
    Backward pass: normalize pivots to 1 and clear above, in fractions.
    """
    mat = _int_rows(entries)
    n = len(mat)
    m = len(mat[0])
    prev = 1
    pivots: list[int] = []
    r = 0
    for col in range(m):
        pivot_row = None
        for i in range(r, n):
            if mat[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        piv = mat[r][col]
        for i in range(r + 1, n):
            f = mat[i][col]
            mat[i] = kernels.row_combine_int(mat[i], piv, mat[r], f, prev, col)
        prev = piv
        pivots.append(col)
        r += 1
        if r == n:
            break
    frows = [[Fraction(v) for v in row] for row in mat]
    for idx in range(len(pivots) - 1, -1, -1):
        col = pivots[idx]
        piv = frows[idx][col]
        frows[idx] = [v / piv for v in frows[idx]]
        for i in range(idx):
            f = frows[i][col]
            if f:
                frows[i] = [a - f * b for a, b in zip(frows[i], frows[idx])]
    return frows, pivots


def rank(m: Matrix) -> int:
    return len(_rref(m._entries)[1])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Deterministic exact nullspace basis (reduced-echelon convention).

    One basis vector per free column, with a 1 in the free position and the
    negated reduced-echelon entries in the pivot positions.
    """
    rref, pivots = _rref(m._entries)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis: list[Vector] = []
    for j in free:
        v = [Fraction(0)] * m.cols
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][j]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class AffineSolutionSet:
    """particular + span(kernel_vectors); particular None means no solution."""

    particular: Optional[Vector]
    kernel_vectors: tuple[Vector, ...]

    def is_empty(self) -> bool:
        return self.particular is None

    def dimension(self) -> int:
        if self.is_empty():
            raise InputError("empty solution set has no dimension")
        return len(self.kernel_vectors)


def solve_affine(m: Matrix, f: Sequence) -> AffineSolutionSet:
    """Full exact solution set of m u = f."""
    f = as_vector(f)
    if len(f) != m.rows:
        raise InputError(f"rhs length {len(f)} != row count {m.rows}")
    augmented = [list(row) + [fv] for row, fv in zip(m._entries, f)]
    rref, pivots = _rref(augmented)
    if pivots and pivots[-1] == m.cols:
        return AffineSolutionSet(None, ())
    particular = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        particular[pc] = rref[r][m.cols]
    # Kernel from the same elimination: the rref of m is the rref of the
    # augmented matrix without its last column.
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [Fraction(0)] * m.cols
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][j]
        basis.append(tuple(v))
    return AffineSolutionSet(tuple(particular), tuple(basis))


def range_member(m: Matrix, f: Sequence) -> bool:
    """True exactly when f lies in the column space of m."""
    return not solve_affine(m, f).is_empty()


# ---------------------------------------------------------------------------
# Subspace utilities (exact)
# ---------------------------------------------------------------------------

def _rank_of_vectors(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    return len(_rref([tuple(v) for v in vectors])[1])


def in_span(vectors: Sequence[Vector], v: Vector) -> bool:
    """Exact membership of v in the span of the given vectors."""
    if all(x == 0 for x in v):
        return True
    if not vectors:
        return False
    base = _rank_of_vectors(vectors)
    return _rank_of_vectors(list(vectors) + [v]) == base


def span_basis(vectors: Sequence[Vector]) -> list[Vector]:
    """Deterministic basis (reduced-echelon rows) of the span of the inputs."""
    if not vectors:
        return []
    rref, pivots = _rref([tuple(v) for v in vectors])
    return [tuple(row) for row in rref[: len(pivots)]]


def spans_equal(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    ra = _rank_of_vectors(a)
    rb = _rank_of_vectors(b)
    if ra != rb:
        return False
    return _rank_of_vectors(list(a) + list(b)) == ra


def affine_sets_equal(s1: AffineSolutionSet, s2: AffineSolutionSet) -> bool:
    """Exact equality of affine solution sets."""
    if s1.is_empty() or s2.is_empty():
        return s1.is_empty() and s2.is_empty()
    if not spans_equal(s1.kernel_vectors, s2.kernel_vectors):
        return False
    diff = tuple(a - b for a, b in zip(s1.particular, s2.particular))
    return in_span(s1.kernel_vectors, diff)


# ---------------------------------------------------------------------------
# Truncated derivative instance
# ---------------------------------------------------------------------------

def graded_monomials(k: int, max_degree: int) -> list[tuple[int, ...]]:
    """Monomial exponents of total degree < max_degree, graded then lexicographic."""
    out: list[tuple[int, ...]] = []
    for grade in range(max_degree):
        block: list[tuple[int, ...]] = []

        def rec(prefix: list[int], remaining: int, slots: int):
            if slots == 1:
                block.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining + 1):
                rec(prefix + [e], remaining - e, slots - 1)

        rec([], grade, k)
        out.extend(sorted(block))
    return out


def make_truncated_derivative_instance(k: int, max_degree: int) -> OperatorInstance:
    """Partial-derivative matrices on polynomials of total degree < max_degree.

    The basis is the graded monomial list; each generator maps the monomial
    with exponents e to e_i times the monomial with e_i lowered by one, so
    the generators commute exactly and are nilpotent of index max_degree.
    """
    if k < 1 or max_degree < 1:
        raise InputError("need k >= 1 and max_degree >= 1")
    dimension = comb(max_degree - 1 + k, k)
    if dimension > DIMENSION_CAP:
        raise ResourceLimitError(
            f"instance dimension {dimension} exceeds cap {DIMENSION_CAP}")
    basis = graded_monomials(k, max_degree)
    index = {exp: i for i, exp in enumerate(basis)}
    zero = Fraction(0)
    generators = []
    for v in range(k):
        entries = [[zero] * dimension for _ in range(dimension)]
        for col, exp in enumerate(basis):
            if exp[v] > 0:
                lowered = list(exp)
                lowered[v] -= 1
                entries[index[tuple(lowered)]][col] = Fraction(exp[v])
        generators.append(Matrix._wrap(entries))
    return OperatorInstance(dimension, tuple(generators))
