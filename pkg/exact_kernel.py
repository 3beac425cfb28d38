"""Exact linear algebra over the rationals and finite-dimensional algebra utilities.

Echelon forms come from sympy's DomainMatrix over QQ; values cross the boundary
as `fractions.Fraction` so that every other module can treat scalars as plain
hashable numbers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Poly, Rational, Symbol, factor_list, gcdex
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from errors import IdempotentSearchIncomplete, InvariantViolation

logger = logging.getLogger(__name__)

Scalar = Fraction
Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_T = Symbol("t")


def as_scalar(value) -> Fraction:
    """Read ints, Fractions, 'p/q' strings and QQ elements as an exact Scalar."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot read {value!r} as an exact scalar")


def _to_qq(x: Fraction):
    return QQ(x.numerator, x.denominator)


# Vector helpers

def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def is_zero_vector(v: Iterable[Fraction]) -> bool:
    return not any(v)


def linear_combination(coefficients: Sequence[Fraction], vectors: Sequence[Vector], n: int) -> Vector:
    result = [ZERO] * n
    for c, v in zip(coefficients, vectors):
        if not c:
            continue
        for k, x in enumerate(v):
            if x:
                result[k] += c * x
    return tuple(result)


def rref_rows(rows: Sequence[Sequence[Fraction]], width: int) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """Nonzero rows of the reduced row echelon form, with their pivot columns."""
    rows = [tuple(r) for r in rows if any(r)]
    if not rows or width == 0:
        return (), ()
    dm = DomainMatrix([[_to_qq(x) for x in row] for row in rows], (len(rows), width), QQ)
    reduced, pivots = dm.rref()
    data = reduced.to_list()
    echelon = tuple(tuple(as_scalar(x) for x in data[i]) for i in range(len(pivots)))
    return echelon, tuple(pivots)


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix. Echelon data is computed once and cached."""

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        data = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        width = cols if cols is not None else (len(data[0]) if data else 0)
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        return cls(len(data), width, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(as_scalar(x) for x in c) for c in columns]
        return cls(rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(rows)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def column_vector(cls, values: Sequence) -> "Matrix":
        return cls.from_rows([[v] for v in values], cols=1)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        columns = [other.column(j) for j in range(other.cols)]
        return Matrix(self.rows, other.cols, tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in columns)
            for row in self.entries
        ))

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(add_vectors(a, b) for a, b in zip(self.entries, other.entries)))

    def is_zero(self) -> bool:
        return all(is_zero_vector(row) for row in self.entries)

    @cached_property
    def _echelon(self) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
        return rref_rows(self.entries, self.cols)

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        rows, pivots = self._echelon
        padded = rows + tuple(zero_vector(self.cols) for _ in range(self.rows - len(rows)))
        return Matrix(self.rows, self.cols, padded), pivots

    @property
    def rank(self) -> int:
        return len(self._echelon[1])

    def kernel(self) -> Tuple[Vector, ...]:
        """Basis of the null space, one vector per free column."""
        rows, pivots = self._echelon
        free = [j for j in range(self.cols) if j not in pivots]
        basis = []
        for j in free:
            v = [ZERO] * self.cols
            v[j] = ONE
            for row, p in zip(rows, pivots):
                v[p] = -row[j]
            basis.append(tuple(v))
        return tuple(basis)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        if self.rows == 0:
            return self
        dm = DomainMatrix([[_to_qq(x) for x in row] for row in self.entries], (self.rows, self.cols), QQ)
        inv = dm.inv().to_list()
        return Matrix(self.rows, self.cols, tuple(tuple(as_scalar(x) for x in row) for row in inv))


@dataclass(frozen=True)
class SolutionSpace:
    """Particular solution (None when inconsistent) plus a kernel basis."""

    particular: Optional[Matrix]
    kernel: Tuple[Vector, ...]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def vector(self) -> Optional[Vector]:
        if self.particular is None:
            return None
        return self.particular.column(0)


def solve(A: Matrix, B) -> SolutionSpace:
    """Solve A·X = B exactly. B may be a Matrix or a single right-hand side."""
    if not isinstance(B, Matrix):
        B = Matrix.column_vector(B)
    if A.rows != B.rows:
        raise ValueError(f"solve needs matching row counts, got {A.rows} and {B.rows}")
    width = A.cols + B.cols
    augmented = [a + b for a, b in zip(A.entries, B.entries)]
    rows, pivots = rref_rows(augmented, width)
    kernel = A.kernel()
    if any(p >= A.cols for p in pivots):
        return SolutionSpace(None, kernel)
    solution = [[ZERO] * B.cols for _ in range(A.cols)]
    for row, p in zip(rows, pivots):
        for k in range(B.cols):
            solution[p][k] = row[A.cols + k]
    particular = Matrix.from_rows(solution, cols=B.cols)
    for k in range(B.cols):
        col = particular.column(k)
        if A.apply(col) != B.column(k):
            raise InvariantViolation("solve produced a vector that fails re-multiplication")
    return SolutionSpace(particular, kernel)


class Subspace:
    """A subspace of Q^n held in reduced echelon form."""

    def __init__(self, dimension: int, vectors: Iterable[Sequence[Fraction]] = ()):
        self.dimension = dimension
        self.basis, self.pivots = rref_rows(list(vectors), dimension)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Fraction]) -> Vector:
        v = tuple(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = tuple(a - c * b for a, b in zip(v, row))
        return v

    def contains(self, v: Sequence[Fraction]) -> bool:
        return is_zero_vector(self.reduce(v))

    @cached_property
    def complement(self) -> Tuple[int, ...]:
        """Coordinates not used as pivots; their unit vectors span a complement."""
        return tuple(i for i in range(self.dimension) if i not in self.pivots)

    def quotient_coordinates(self, v: Sequence[Fraction]) -> Vector:
        reduced = self.reduce(v)
        return tuple(reduced[i] for i in self.complement)

    def quotient_lift(self, coordinates: Sequence[Fraction]) -> Vector:
        v = [ZERO] * self.dimension
        for i, c in zip(self.complement, coordinates):
            v[i] = c
        return tuple(v)

    def extended(self, vectors: Iterable[Sequence[Fraction]]) -> "Subspace":
        return Subspace(self.dimension, list(self.basis) + [tuple(v) for v in vectors])


class CoordinateSystem:
    """Coordinates with respect to a fixed independent family of vectors."""

    def __init__(self, vectors: Sequence[Sequence[Fraction]], dimension: int):
        self.vectors = tuple(tuple(v) for v in vectors)
        self.dimension = dimension
        k = len(self.vectors)
        self._rows: Tuple[int, ...] = ()
        self._inverse: Optional[Matrix] = None
        if k == 0:
            return
        _, rows = rref_rows(self.vectors, dimension)
        if len(rows) != k:
            raise InvariantViolation("coordinate family is not linearly independent")
        square = Matrix.from_rows([[self.vectors[j][r] for j in range(k)] for r in rows], cols=k)
        self._rows = rows
        self._inverse = square.inverse()

    def __len__(self) -> int:
        return len(self.vectors)

    def coordinates(self, w: Sequence[Fraction]) -> Vector:
        if self._inverse is None:
            return ()
        return self._inverse.apply([w[r] for r in self._rows])

    def combine(self, coordinates: Sequence[Fraction]) -> Vector:
        return linear_combination(coordinates, self.vectors, self.dimension)

    def contains(self, w: Sequence[Fraction]) -> bool:
        return self.combine(self.coordinates(w)) == tuple(w)


@dataclass(frozen=True, eq=False)
class FinDimAlgebra:
    """Associative unital algebra given by structure constants.

    structure[i][j] holds the coordinates of b_i * b_j.
    """

    dimension: int
    structure: Tuple[Tuple[Vector, ...], ...]
    unit: Vector

    def basis_vector(self, i: int) -> Vector:
        return unit_vector(self.dimension, i)

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        result = [ZERO] * self.dimension
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.structure[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, v in enumerate(row[j]):
                    if v:
                        result[k] += c * v
        return tuple(result)

    def trace_of_left(self, x: Sequence[Fraction]) -> Fraction:
        return sum((self.multiply(x, self.basis_vector(j))[j] for j in range(self.dimension)), ZERO)

    def check(self) -> None:
        """Raise InvariantViolation unless associativity and the unit laws hold."""
        d = self.dimension
        for i in range(d):
            b = self.basis_vector(i)
            if self.multiply(self.unit, b) != b or self.multiply(b, self.unit) != b:
                raise InvariantViolation(f"unit fails on basis vector {i}")
        for i in range(d):
            for j in range(d):
                ij = self.structure[i][j]
                for k in range(d):
                    left = self.multiply(ij, self.basis_vector(k))
                    right = self.multiply(self.basis_vector(i), self.structure[j][k])
                    if left != right:
                        raise InvariantViolation(f"associativity fails on basis triple ({i}, {j}, {k})")

    def quotient(self, ideal: Subspace) -> "FinDimAlgebra":
        complement = ideal.complement
        structure = tuple(
            tuple(ideal.quotient_coordinates(self.structure[a][b]) for b in complement)
            for a in complement
        )
        return FinDimAlgebra(len(complement), structure, ideal.quotient_coordinates(self.unit))

    def corner_basis(self, e: Sequence[Fraction]) -> Tuple[Vector, ...]:
        products = [self.multiply(self.multiply(e, self.basis_vector(i)), e) for i in range(self.dimension)]
        return Subspace(self.dimension, products).basis

    def corner_dimension(self, e: Sequence[Fraction]) -> int:
        return len(self.corner_basis(e))


def _radical_basis(A: FinDimAlgebra) -> Tuple[Vector, ...]:
    d = A.dimension
    traces = [A.trace_of_left(A.basis_vector(k)) for k in range(d)]
    form = Matrix.from_rows([
        [sum((c * t for c, t in zip(A.structure[i][j], traces) if c), ZERO) for i in range(d)]
        for j in range(d)
    ], cols=d)
    return Subspace(d, form.kernel()).basis


def _check_nilpotent_ideal(A: FinDimAlgebra, basis: Sequence[Vector]) -> None:
    d = A.dimension
    span = Subspace(d, basis)
    for n in span.basis:
        for i in range(d):
            b = A.basis_vector(i)
            if not span.contains(A.multiply(b, n)) or not span.contains(A.multiply(n, b)):
                raise InvariantViolation("radical candidate is not a two-sided ideal")
    power = span
    for _ in range(d + 1):
        if power.dim == 0:
            return
        power = Subspace(d, [A.multiply(p, n) for p in power.basis for n in span.basis])
    raise InvariantViolation("radical candidate is not nilpotent")


def radical(A: FinDimAlgebra) -> Tuple[Vector, ...]:
    """Jacobson radical as the kernel of the trace form (characteristic zero)."""
    A.check()
    basis = _radical_basis(A)
    _check_nilpotent_ideal(A, basis)
    semisimple = A.quotient(Subspace(A.dimension, basis))
    if _radical_basis(semisimple):
        raise InvariantViolation("quotient by the radical still has a radical")
    return basis


def is_local(A: FinDimAlgebra) -> bool:
    return A.dimension - len(_radical_basis(A)) == 1


def _power_sequence(B: FinDimAlgebra, e: Vector, x: Vector) -> List[Vector]:
    powers = [e]
    while True:
        nxt = B.multiply(powers[-1], x)
        if Subspace(B.dimension, powers).contains(nxt):
            return powers + [nxt]
        powers.append(nxt)


def _minimal_polynomial(B: FinDimAlgebra, e: Vector, x: Vector) -> Poly:
    powers = _power_sequence(B, e, x)
    independent, last = powers[:-1], powers[-1]
    coords = CoordinateSystem(independent, B.dimension).coordinates(last)
    # t^k - sum coords[i] t^i
    coefficients = [ONE] + [-c for c in reversed(coords)]
    return Poly([Rational(c.numerator, c.denominator) for c in coefficients], _T, domain="QQ")


def _evaluate(B: FinDimAlgebra, e: Vector, x: Vector, p: Poly) -> Vector:
    result = zero_vector(B.dimension)
    for c in p.all_coeffs():
        result = add_vectors(B.multiply(result, x), scale_vector(as_scalar(c), e))
    return result


def _splitting_pool(B: FinDimAlgebra, corner: Sequence[Vector]) -> List[Vector]:
    pool = list(corner)
    for a, b in combinations(range(len(corner)), 2):
        for k in (1, 2):
            pool.append(add_vectors(corner[a], scale_vector(Fraction(k), corner[b])))
    pool.append(linear_combination([Fraction(i + 1) for i in range(len(corner))], corner, B.dimension))
    return pool


def _find_splitting(B: FinDimAlgebra, e: Vector) -> Optional[Vector]:
    corner = B.corner_basis(e)
    if len(corner) <= 1:
        return None
    for x in _splitting_pool(B, corner):
        m = _minimal_polynomial(B, e, x)
        if m.degree() <= 1:
            continue
        _, factors = factor_list(m)
        if len(factors) < 2:
            continue
        g = factors[0][0] ** factors[0][1]
        h = Poly(1, _T, domain="QQ")
        for f, mult in factors[1:]:
            h = h * f ** mult
        s, t, one = gcdex(g, h)
        if one.degree() != 0:
            continue
        u = (t * h).rem(m)
        eps = _evaluate(B, e, x, u)
        if B.multiply(eps, eps) == eps and not is_zero_vector(eps) and eps != e:
            logger.debug(f"Split corner of dimension {len(corner)} with minimal polynomial {m.as_expr()}")
            return eps
    return None


def _split_semisimple(B: FinDimAlgebra) -> List[Vector]:
    work = [B.unit]
    done: List[Vector] = []
    while work:
        e = work.pop(0)
        eps = _find_splitting(B, e)
        if eps is None:
            if B.corner_dimension(e) != 1:
                raise IdempotentSearchIncomplete(
                    f"could not split a corner of dimension {B.corner_dimension(e)} modulo the radical"
                )
            done.append(e)
        else:
            work[0:0] = [eps, sub_vectors(e, eps)]
    return done


def _newton_idempotent(A: FinDimAlgebra, a: Vector) -> Vector:
    for _ in range(2 * A.dimension + 8):
        square = A.multiply(a, a)
        if square == a:
            return a
        cube = A.multiply(square, a)
        a = sub_vectors(scale_vector(Fraction(3), square), scale_vector(Fraction(2), cube))
    raise InvariantViolation("idempotent lifting did not converge")


def decompose_idempotents(A: FinDimAlgebra) -> Tuple[Vector, ...]:
    """Complete set of orthogonal primitive idempotents of A."""
    A.check()
    J = Subspace(A.dimension, _radical_basis(A))
    B = A.quotient(J)
    reduced = _split_semisimple(B)
    lifted: List[Vector] = []
    remaining = A.unit
    for k, ebar in enumerate(reduced):
        if k == len(reduced) - 1:
            lifted.append(remaining)
            break
        a = J.quotient_lift(ebar)
        a = A.multiply(A.multiply(remaining, a), remaining)
        e = _newton_idempotent(A, a)
        lifted.append(e)
        remaining = sub_vectors(remaining, e)

    total = zero_vector(A.dimension)
    for i, e in enumerate(lifted):
        if A.multiply(e, e) != e:
            raise InvariantViolation(f"lifted element {i} is not idempotent")
        for j, f in enumerate(lifted):
            if i != j and not is_zero_vector(A.multiply(e, f)):
                raise InvariantViolation(f"lifted idempotents {i} and {j} are not orthogonal")
        if B.corner_dimension(J.quotient_coordinates(e)) != 1:
            raise InvariantViolation(f"corner of idempotent {i} is not local")
        total = add_vectors(total, e)
    if total != A.unit:
        raise InvariantViolation("idempotents do not sum to the unit")
    logger.debug(f"Decomposed algebra of dimension {A.dimension} into {len(lifted)} primitive idempotents")
    return tuple(lifted)
