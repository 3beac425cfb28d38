"""Modules over the linearly oriented A_n path algebra, by explicit representations.

A representation assigns a vector space V_k to each vertex k = 1..n and a
matrix V_k -> V_{k+1} to each arrow. The indecomposables are the interval
modules [a,b]; P_i = [i,n] is projective and I_i = [1,i] injective.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from errors import InvariantViolation
from exact_kernel import (
    CoordinateSystem,
    Matrix,
    Subspace,
    Vector,
    linear_combination,
    unit_vector,
)
from models import ExtClass, FiniteZeroAuslanderModel, ObjectSum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Representation:
    """dims[k] = dim V_k; maps[k] is the dims[k+1] x dims[k] matrix of arrow k."""

    dims: Tuple[int, ...]
    maps: Tuple[Matrix, ...]

    @property
    def length(self) -> int:
        return len(self.dims)

    @property
    def dimension(self) -> int:
        return sum(self.dims)


def interval_name(a: int, b: int) -> str:
    return f"[{a},{b}]"


def parse_interval(name: str) -> Tuple[int, int]:
    a, b = name.strip("[]").split(",")
    return int(a), int(b)


def interval_representation(n: int, a: int, b: int) -> Representation:
    if not 1 <= a <= b <= n:
        raise ValueError(f"[{a},{b}] is not an interval of 1..{n}")
    dims = tuple(1 if a <= k <= b else 0 for k in range(1, n + 1))
    maps = tuple(
        Matrix.identity(1) if dims[k] and dims[k + 1] else Matrix.zeros(dims[k + 1], dims[k])
        for k in range(n - 1)
    )
    return Representation(dims, maps)


def _block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(m.rows for m in blocks)
    cols = sum(m.cols for m in blocks)
    entries = [[Fraction(0)] * cols for _ in range(rows)]
    r = c = 0
    for m in blocks:
        for i, row in enumerate(m.entries):
            for j, x in enumerate(row):
                entries[r + i][c + j] = x
        r, c = r + m.rows, c + m.cols
    return Matrix(rows, cols, tuple(tuple(row) for row in entries))


def direct_sum(reps: Sequence[Representation], n: int) -> Representation:
    dims = tuple(sum(r.dims[k] for r in reps) for k in range(n))
    maps = tuple(_block_diagonal([r.maps[k] for r in reps]) if reps else Matrix.zeros(0, 0) for k in range(n - 1))
    return Representation(dims, maps)


def _split_vector(vector: Sequence[Fraction], shapes: Sequence[Tuple[int, int]]) -> List[Matrix]:
    out = []
    offset = 0
    for rows, cols in shapes:
        size = rows * cols
        chunk = vector[offset:offset + size]
        out.append(Matrix(rows, cols, tuple(tuple(chunk[i * cols:(i + 1) * cols]) for i in range(rows))))
        offset += size
    return out


def _flatten(matrices: Sequence[Matrix]) -> Vector:
    return tuple(x for m in matrices for row in m.entries for x in row)


@dataclass
class RepHomSpace:
    source: Representation
    target: Representation
    shapes: Tuple[Tuple[int, int], ...]
    basis: Tuple[Vector, ...]

    @property
    def width(self) -> int:
        return sum(r * c for r, c in self.shapes)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def components(self, vector: Sequence[Fraction]) -> List[Matrix]:
        return _split_vector(vector, self.shapes)

    def coordinates(self, vector: Sequence[Fraction]) -> Vector:
        return CoordinateSystem(self.basis, self.width).coordinates(vector)


def hom_space(M: Representation, N: Representation) -> RepHomSpace:
    """Families φ_k: M_k -> N_k with N_k φ_k = φ_{k+1} M_k."""
    n = M.length
    shapes = tuple((N.dims[k], M.dims[k]) for k in range(n))
    space = RepHomSpace(M, N, shapes, ())
    width = space.width
    columns = []
    for i in range(width):
        phi = space.components(unit_vector(width, i))
        columns.append(_flatten([
            (N.maps[k] @ phi[k]) + Matrix(N.dims[k + 1], M.dims[k], tuple(
                tuple(-x for x in row) for row in (phi[k + 1] @ M.maps[k]).entries
            ))
            for k in range(n - 1)
        ]))
    rows = sum(N.dims[k + 1] * M.dims[k] for k in range(n - 1))
    space.basis = Matrix.from_columns(columns, rows=rows).kernel() if columns else ()
    return space


@dataclass
class RepExtSpace:
    """Coker of δ: ⊕Hom(M_k, N_k) -> ⊕Hom(M_k, N_{k+1})."""

    source: Representation
    target: Representation
    shapes: Tuple[Tuple[int, int], ...]
    image: Subspace

    @property
    def dim(self) -> int:
        return len(self.image.complement)

    def representative(self, coordinates: Sequence[Fraction]) -> List[Matrix]:
        return _split_vector(self.image.quotient_lift(coordinates), self.shapes)


def ext_space(M: Representation, N: Representation) -> RepExtSpace:
    n = M.length
    shapes = tuple((N.dims[k + 1], M.dims[k]) for k in range(n - 1))
    hom_shapes = tuple((N.dims[k], M.dims[k]) for k in range(n))
    width = sum(r * c for r, c in hom_shapes)
    image = []
    for i in range(width):
        phi = _split_vector(unit_vector(width, i), hom_shapes)
        image.append(_flatten([
            (N.maps[k] @ phi[k]) + Matrix(N.dims[k + 1], M.dims[k], tuple(
                tuple(-x for x in row) for row in (phi[k + 1] @ M.maps[k]).entries
            ))
            for k in range(n - 1)
        ]))
    return RepExtSpace(M, N, shapes, Subspace(sum(r * c for r, c in shapes), image))


def extension_middle(N: Representation, M: Representation, eta: Sequence[Matrix]) -> Representation:
    """E_k = N_k ⊕ M_k with arrow maps [[N_k, η_k], [0, M_k]]."""
    n = M.length
    dims = tuple(N.dims[k] + M.dims[k] for k in range(n))
    maps = []
    for k in range(n - 1):
        rows = []
        for i in range(N.dims[k + 1]):
            rows.append(N.maps[k].entries[i] + eta[k].entries[i])
        for i in range(M.dims[k + 1]):
            rows.append((Fraction(0),) * N.dims[k] + M.maps[k].entries[i])
        maps.append(Matrix(dims[k + 1], dims[k], tuple(rows)))
    return Representation(dims, tuple(maps))


def _path_rank(R: Representation, a: int, b: int) -> int:
    """Rank of V_a -> V_b along the arrows (1-based, a <= b)."""
    if a < 1 or b > R.length:
        return 0
    if a == b:
        return R.dims[a - 1]
    product = R.maps[a - 1]
    for k in range(a, b - 1):
        product = R.maps[k] @ product
    return product.rank


def interval_multiplicities(R: Representation) -> Dict[Tuple[int, int], int]:
    """Multiplicity of each [a,b] in R from the ranks of composite arrow maps."""
    n = R.length
    result = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            m = (_path_rank(R, a, b) - _path_rank(R, a - 1, b)
                 - _path_rank(R, a, b + 1) + _path_rank(R, a - 1, b + 1))
            if m < 0:
                raise InvariantViolation(f"negative multiplicity for [{a},{b}]")
            if m:
                result[(a, b)] = m
    if sum((b - a + 1) * m for (a, b), m in result.items()) != R.dimension:
        raise InvariantViolation("interval multiplicities do not account for the whole representation")
    return result


class IntervalModel(FiniteZeroAuslanderModel):
    """mod of the linearly oriented A_n path algebra."""

    name = "interval"
    supports_composition = True

    def __init__(self, n: int):
        super().__init__()
        if n < 1:
            raise ValueError("interval backend needs n >= 1")
        self.n = n
        intervals = sorted(((a, b) for a in range(1, n + 1) for b in range(a, n + 1)), key=lambda ab: (-ab[1], ab[0]))
        self._ids = tuple(interval_name(a, b) for a, b in intervals)
        self._reps = {interval_name(a, b): interval_representation(n, a, b) for a, b in intervals}
        self._homs: Dict[Tuple[str, str], RepHomSpace] = {}
        self._exts: Dict[Tuple[str, str], RepExtSpace] = {}
        self.name = f"interval:{n}"
        logger.info(f"Interval model for n={n} with {len(self._ids)} indecomposables")

    def objects(self) -> ObjectSum:
        return self._ids

    def representation(self, x: str) -> Representation:
        return self._reps[x]

    def _hom(self, x: str, y: str) -> RepHomSpace:
        space = self._homs.get((x, y))
        if space is None:
            space = hom_space(self._reps[x], self._reps[y])
            with self._lock:
                self._homs[(x, y)] = space
        return space

    def _ext(self, x: str, y: str) -> RepExtSpace:
        space = self._exts.get((x, y))
        if space is None:
            space = ext_space(self._reps[x], self._reps[y])
            with self._lock:
                self._exts[(x, y)] = space
        return space

    def hom_dim(self, x: str, y: str) -> int:
        return self._hom(x, y).dim

    def _ext_dim(self, x: str, y: str) -> int:
        return self._ext(x, y).dim

    def hom_basis(self, x: str, y: str) -> List[List[Matrix]]:
        space = self._hom(x, y)
        return [space.components(b) for b in space.basis]

    def compose(self, x: str, y: str, z: str, f: Sequence[Fraction], g: Sequence[Fraction]) -> Vector:
        hxy, hyz, hxz = self._hom(x, y), self._hom(y, z), self._hom(x, z)
        phi = hxy.components(linear_combination(f, hxy.basis, hxy.width))
        psi = hyz.components(linear_combination(g, hyz.basis, hyz.width))
        return hxz.coordinates(_flatten([p @ q for p, q in zip(psi, phi)]))

    def identity(self, x: str) -> Vector:
        space = self._hom(x, x)
        rep = self._reps[x]
        return space.coordinates(_flatten([Matrix.identity(d) for d in rep.dims]))

    def _middle(self, ext: ExtClass) -> ObjectSum:
        C = direct_sum([self._reps[c] for c in ext.source], self.n)
        A = direct_sum([self._reps[a] for a in ext.target], self.n)
        # η_k : C_k -> A_{k+1}, assembled from the summand pair components
        eta = [[[Fraction(0)] * C.dims[k] for _ in range(A.dims[k + 1])] for k in range(self.n - 1)]
        c_offsets = self._offsets(ext.source)
        a_offsets = self._offsets(ext.target)
        for (i, j), coords in ext.components(self).items():
            if not any(coords):
                continue
            block = self._ext(ext.source[i], ext.target[j]).representative(coords)
            for k in range(self.n - 1):
                for r, row in enumerate(block[k].entries):
                    for s, value in enumerate(row):
                        eta[k][a_offsets[j][k + 1] + r][c_offsets[i][k] + s] = value
        matrices = [Matrix(A.dims[k + 1], C.dims[k], tuple(tuple(row) for row in eta[k])) for k in range(self.n - 1)]
        return self.decompose(extension_middle(A, C, matrices))

    def _offsets(self, objects: Sequence[str]) -> List[List[int]]:
        offsets = []
        running = [0] * self.n
        for x in objects:
            offsets.append(list(running))
            running = [r + d for r, d in zip(running, self._reps[x].dims)]
        return offsets

    def decompose(self, obj) -> ObjectSum:
        if isinstance(obj, Representation):
            result: List[str] = []
            for (a, b), m in interval_multiplicities(obj).items():
                result.extend([interval_name(a, b)] * m)
            return self.normalize(result)
        return super().decompose(obj)
