"""Two-term complexes of projectives over a bound quiver algebra.

A complex X is P_1 -> P_0 with both terms sums of indecomposable projectives
P_v = e_v Λ. Slots list the vertex of each summand. A map between sums of
projectives is a matrix whose entry [t][s] lies in e_{target t} Λ e_{source s}.

Hom is chain maps modulo homotopy, E(X, Y) is Hom(X, ΣY) and the middle of a
class ξ ∈ E(C, A) is the cone complex A_1 ⊕ C_1 -> A_0 ⊕ C_0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from config import DEFAULT_BUDGETS, Budgets
from errors import BudgetExceeded, InvariantViolation
from exact_kernel import (
    ZERO,
    CoordinateSystem,
    FinDimAlgebra,
    Matrix,
    Subspace,
    Vector,
    add_vectors,
    decompose_idempotents,
    is_local,
    linear_combination,
    scale_vector,
    sub_vectors,
    unit_vector,
)
from models import ExtClass, FiniteZeroAuslanderModel, ObjectSum, coordinate_patterns
from quiver_algebra import BoundQuiverAlgebra

logger = logging.getLogger(__name__)

Slots = Tuple[str, ...]
Entries = Tuple[Tuple[Vector, ...], ...]


@dataclass(frozen=True)
class SlotMap:
    """Map ⊕P_{sources[s]} -> ⊕P_{targets[t]}."""

    targets: Slots
    sources: Slots
    entries: Entries

    def is_zero(self) -> bool:
        return not any(any(x) for row in self.entries for x in row)


def zero_map(alg: BoundQuiverAlgebra, targets: Slots, sources: Slots) -> SlotMap:
    zero = alg.zero()
    return SlotMap(tuple(targets), tuple(sources), tuple(tuple(zero for _ in sources) for _ in targets))


def identity_map(alg: BoundQuiverAlgebra, slots: Slots) -> SlotMap:
    zero = alg.zero()
    return SlotMap(tuple(slots), tuple(slots), tuple(
        tuple(alg.idempotent(v) if s == t else zero for s in range(len(slots)))
        for t, v in enumerate(slots)
    ))


def compose_maps(alg: BoundQuiverAlgebra, g: SlotMap, f: SlotMap) -> SlotMap:
    """g∘f; entries multiply as g[u][t]·f[t][s]."""
    if g.sources != f.targets:
        raise InvariantViolation(f"cannot compose maps through {g.sources} and {f.targets}")
    zero = alg.zero()
    rows = []
    for u in range(len(g.targets)):
        row = []
        for s in range(len(f.sources)):
            total = zero
            for t in range(len(f.targets)):
                a, b = g.entries[u][t], f.entries[t][s]
                if any(a) and any(b):
                    total = add_vectors(total, alg.multiply(a, b))
            row.append(total)
        rows.append(tuple(row))
    return SlotMap(g.targets, f.sources, tuple(rows))


def add_maps(f: SlotMap, g: SlotMap) -> SlotMap:
    return SlotMap(f.targets, f.sources, tuple(
        tuple(add_vectors(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(f.entries, g.entries)
    ))


def subtract_maps(f: SlotMap, g: SlotMap) -> SlotMap:
    return SlotMap(f.targets, f.sources, tuple(
        tuple(sub_vectors(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(f.entries, g.entries)
    ))


def select_rows(f: SlotMap, rows: Sequence[int]) -> SlotMap:
    return SlotMap(tuple(f.targets[t] for t in rows), f.sources, tuple(f.entries[t] for t in rows))


def select_columns(f: SlotMap, cols: Sequence[int]) -> SlotMap:
    return SlotMap(f.targets, tuple(f.sources[s] for s in cols),
                   tuple(tuple(row[s] for s in cols) for row in f.entries))


def top_matrix(alg: BoundQuiverAlgebra, f: SlotMap) -> Matrix:
    """Image of f modulo the radical, as a scalar matrix."""
    return Matrix.from_rows([
        [alg.top_coefficient(f.entries[t][s], v) if v == f.sources[s] else ZERO
         for s in range(len(f.sources))]
        for t, v in enumerate(f.targets)
    ], cols=len(f.sources))


def invert_map(alg: BoundQuiverAlgebra, f: SlotMap) -> SlotMap:
    """Inverse of an isomorphism of sums of projectives."""
    n = len(f.targets)
    if n != len(f.sources):
        raise InvariantViolation("only square slot maps are invertible")
    top = top_matrix(alg, f)
    if top.rank != n:
        raise InvariantViolation("slot map is not invertible modulo the radical")
    top_inverse = top.inverse()
    zero = alg.zero()
    lifted = SlotMap(f.sources, f.targets, tuple(
        tuple(
            scale_vector(top_inverse.entries[c][r], alg.idempotent(v))
            if v == f.targets[r] and top_inverse.entries[c][r] else zero
            for r in range(n)
        )
        for c, v in enumerate(f.sources)
    ))
    identity = identity_map(alg, f.sources)
    # lifted∘f = 1 + N with N nilpotent; (1 + N)^-1 = sum of (-N)^k
    negated = subtract_maps(identity, compose_maps(alg, lifted, f))
    series, term = identity, identity
    for _ in range(alg.vanishing_length * max(n, 1) + 1):
        term = compose_maps(alg, term, negated)
        if term.is_zero():
            break
        series = add_maps(series, term)
    inverse = compose_maps(alg, series, lifted)
    if compose_maps(alg, inverse, f) != identity:
        raise InvariantViolation("nilpotent series did not invert the slot map")
    return inverse


def map_coordinates(alg: BoundQuiverAlgebra, targets: Slots, sources: Slots) -> Tuple[Tuple[int, int, int], ...]:
    """(t, s, k) for each path basis index k of each corner entry."""
    return tuple(
        (t, s, k)
        for t, vt in enumerate(targets)
        for s, vs in enumerate(sources)
        for k in alg.corner(vt, vs)
    )


def map_to_vector(f: SlotMap, coords: Sequence[Tuple[int, int, int]]) -> Vector:
    return tuple(f.entries[t][s][k] for t, s, k in coords)


def map_from_vector(alg: BoundQuiverAlgebra, targets: Slots, sources: Slots,
                    coords: Sequence[Tuple[int, int, int]], vector: Sequence[Fraction]) -> SlotMap:
    entries = [[[ZERO] * alg.dimension for _ in sources] for _ in targets]
    for (t, s, k), c in zip(coords, vector):
        entries[t][s][k] = c
    return SlotMap(tuple(targets), tuple(sources), tuple(tuple(tuple(e) for e in row) for row in entries))


def block_map(alg: BoundQuiverAlgebra, targets: Slots, sources: Slots,
              blocks: Sequence[Tuple[int, int, SlotMap]]) -> SlotMap:
    entries = [[alg.zero() for _ in sources] for _ in targets]
    for row_offset, col_offset, block in blocks:
        for t, row in enumerate(block.entries):
            for s, x in enumerate(row):
                entries[row_offset + t][col_offset + s] = x
    return SlotMap(tuple(targets), tuple(sources), tuple(tuple(row) for row in entries))


@dataclass(frozen=True)
class TwoTermComplex:
    """P_1 --d--> P_0 with d a slot map from deg1 slots to deg0 slots."""

    differential: SlotMap

    @property
    def deg1(self) -> Slots:
        return self.differential.sources

    @property
    def deg0(self) -> Slots:
        return self.differential.targets

    @property
    def size(self) -> int:
        return len(self.deg1) + len(self.deg0)

    @property
    def shape(self) -> Tuple[Slots, Slots]:
        return tuple(sorted(self.deg1)), tuple(sorted(self.deg0))

    def multiplicities(self, alg: BoundQuiverAlgebra) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (tuple(self.deg1.count(v) for v in alg.vertices),
                tuple(self.deg0.count(v) for v in alg.vertices))

    def is_zero(self) -> bool:
        return self.size == 0


def stalk(alg: BoundQuiverAlgebra, vertex: str) -> TwoTermComplex:
    return TwoTermComplex(zero_map(alg, (vertex,), ()))


def shifted_stalk(alg: BoundQuiverAlgebra, vertex: str) -> TwoTermComplex:
    return TwoTermComplex(zero_map(alg, (), (vertex,)))


def direct_sum(alg: BoundQuiverAlgebra, complexes: Sequence[TwoTermComplex]) -> TwoTermComplex:
    deg1: List[str] = []
    deg0: List[str] = []
    blocks = []
    for X in complexes:
        blocks.append((len(deg0), len(deg1), X.differential))
        deg1.extend(X.deg1)
        deg0.extend(X.deg0)
    return TwoTermComplex(block_map(alg, tuple(deg0), tuple(deg1), blocks))


def sort_slots(alg: BoundQuiverAlgebra, X: TwoTermComplex) -> TwoTermComplex:
    """Reorder summands by vertex; a permutation is an isomorphism."""
    order = {v: i for i, v in enumerate(alg.vertices)}
    cols = sorted(range(len(X.deg1)), key=lambda s: order[X.deg1[s]])
    rows = sorted(range(len(X.deg0)), key=lambda t: order[X.deg0[t]])
    return TwoTermComplex(select_columns(select_rows(X.differential, rows), cols))


def minimalize(alg: BoundQuiverAlgebra, X: TwoTermComplex) -> TwoTermComplex:
    """Strip contractible summands P -> P by Gaussian elimination on units."""
    rows = list(X.deg0)
    cols = list(X.deg1)
    d = [list(row) for row in X.differential.entries]
    while True:
        pivot = next(
            ((t, s) for t in range(len(rows)) for s in range(len(cols))
             if rows[t] == cols[s] and alg.top_coefficient(d[t][s], rows[t])),
            None,
        )
        if pivot is None:
            break
        t, s = pivot
        inverse = alg.inverse_in_corner(d[t][s], rows[t])
        for t2 in range(len(rows)):
            if t2 != t and any(d[t2][s]):
                factor = alg.multiply(d[t2][s], inverse)
                d[t2] = [sub_vectors(d[t2][j], alg.multiply(factor, d[t][j])) for j in range(len(cols))]
        for s2 in range(len(cols)):
            if s2 != s and any(d[t][s2]):
                factor = alg.multiply(inverse, d[t][s2])
                for i in range(len(rows)):
                    if any(d[i][s]):
                        d[i][s2] = sub_vectors(d[i][s2], alg.multiply(d[i][s], factor))
        del rows[t]
        del cols[s]
        del d[t]
        for row in d:
            del row[s]
    return TwoTermComplex(SlotMap(tuple(rows), tuple(cols), tuple(tuple(row) for row in d)))


# Chain maps

@dataclass
class ChainMapSpace:
    """Chain maps X -> Y as vectors over the corner coordinates of (f1, f0)."""

    source: TwoTermComplex
    target: TwoTermComplex
    coords1: Tuple[Tuple[int, int, int], ...]
    coords0: Tuple[Tuple[int, int, int], ...]
    basis: Tuple[Vector, ...]

    @property
    def width(self) -> int:
        return len(self.coords1) + len(self.coords0)

    def maps(self, alg: BoundQuiverAlgebra, vector: Sequence[Fraction]) -> Tuple[SlotMap, SlotMap]:
        n1 = len(self.coords1)
        f1 = map_from_vector(alg, self.target.deg1, self.source.deg1, self.coords1, vector[:n1])
        f0 = map_from_vector(alg, self.target.deg0, self.source.deg0, self.coords0, vector[n1:])
        return f1, f0

    def vector(self, f1: SlotMap, f0: SlotMap) -> Vector:
        return map_to_vector(f1, self.coords1) + map_to_vector(f0, self.coords0)


def chain_maps(alg: BoundQuiverAlgebra, X: TwoTermComplex, Y: TwoTermComplex) -> ChainMapSpace:
    """Solve d_Y∘f1 = f0∘d_X."""
    coords1 = map_coordinates(alg, Y.deg1, X.deg1)
    coords0 = map_coordinates(alg, Y.deg0, X.deg0)
    constraint = map_coordinates(alg, Y.deg0, X.deg1)
    space = ChainMapSpace(X, Y, coords1, coords0, ())
    columns = []
    for i in range(space.width):
        f1, f0 = space.maps(alg, unit_vector(space.width, i))
        defect = subtract_maps(compose_maps(alg, Y.differential, f1), compose_maps(alg, f0, X.differential))
        columns.append(map_to_vector(defect, constraint))
    if not columns:
        return space
    space.basis = Matrix.from_columns(columns, rows=len(constraint)).kernel()
    return space


def compose_chain(alg: BoundQuiverAlgebra, g: Tuple[SlotMap, SlotMap], f: Tuple[SlotMap, SlotMap]) -> Tuple[SlotMap, SlotMap]:
    return compose_maps(alg, g[0], f[0]), compose_maps(alg, g[1], f[1])


def endomorphism_algebra(alg: BoundQuiverAlgebra, X: TwoTermComplex) -> Tuple[FinDimAlgebra, ChainMapSpace]:
    """Strict chain-map endomorphism algebra; b_i * b_j is b_i ∘ b_j."""
    space = chain_maps(alg, X, X)
    system = CoordinateSystem(space.basis, space.width)
    maps = [space.maps(alg, b) for b in space.basis]
    structure = tuple(
        tuple(system.coordinates(space.vector(*compose_chain(alg, bi, bj))) for bj in maps)
        for bi in maps
    )
    unit = system.coordinates(space.vector(identity_map(alg, X.deg1), identity_map(alg, X.deg0)))
    return FinDimAlgebra(len(space.basis), structure, unit), space


def _tops_invertible(alg: BoundQuiverAlgebra, f: Tuple[SlotMap, SlotMap]) -> bool:
    for part in f:
        n = len(part.targets)
        if n != len(part.sources):
            return False
        if n and top_matrix(alg, part).rank != n:
            return False
    return True


def is_isomorphic(alg: BoundQuiverAlgebra, X: TwoTermComplex, Y: TwoTermComplex) -> bool:
    """Isomorphism test for minimal indecomposable complexes."""
    if X.shape != Y.shape:
        return False
    if X == Y or X.size == 1:
        return True
    if X.differential.is_zero() != Y.differential.is_zero():
        return False
    forward = chain_maps(alg, X, Y)
    backward = chain_maps(alg, Y, X)
    for f in forward.basis:
        fm = forward.maps(alg, f)
        for g in backward.basis:
            if _tops_invertible(alg, compose_chain(alg, backward.maps(alg, g), fm)):
                return True
    return False


# Decomposition

def _image_summand(alg: BoundQuiverAlgebra, X: TwoTermComplex,
                   e: Tuple[SlotMap, SlotMap]) -> TwoTermComplex:
    """Complex isomorphic to the image of the idempotent chain map e."""
    inclusions = []
    projections = []
    for part in e:
        _, J = top_matrix(alg, part).rref()
        included = select_columns(part, J)
        _, K = top_matrix(alg, included).transpose().rref()
        square = select_rows(included, K)
        projections.append(compose_maps(alg, invert_map(alg, square), select_rows(part, K)))
        inclusions.append(included)
    iota1, _ = inclusions
    _, pi0 = projections
    return TwoTermComplex(compose_maps(alg, pi0, compose_maps(alg, X.differential, iota1)))


def _split_by_idempotents(alg: BoundQuiverAlgebra, X: TwoTermComplex) -> List[TwoTermComplex]:
    algebra, space = endomorphism_algebra(alg, X)
    idempotents = decompose_idempotents(algebra)
    if len(idempotents) == 1:
        return [X]
    pieces = []
    for e in idempotents:
        vector = linear_combination(e, space.basis, space.width)
        pieces.append(_image_summand(alg, X, space.maps(alg, vector)))
    if sum(p.size for p in pieces) != X.size:
        raise InvariantViolation("summands do not account for every slot of the complex")
    logger.debug(f"Split a component with {X.size} slots into {len(pieces)} summands")
    return pieces


def split_complex(alg: BoundQuiverAlgebra, X: TwoTermComplex) -> List[TwoTermComplex]:
    """Indecomposable summands of X, each minimal with slots sorted."""
    X = minimalize(alg, X)
    d = X.differential.entries
    pieces: List[TwoTermComplex] = []
    graph = nx.Graph()
    for t, v in enumerate(X.deg0):
        if any(any(x) for x in d[t]):
            graph.add_node(("row", t))
        else:
            pieces.append(stalk(alg, v))
    for s, v in enumerate(X.deg1):
        if any(any(d[t][s]) for t in range(len(X.deg0))):
            graph.add_node(("col", s))
        else:
            pieces.append(shifted_stalk(alg, v))
    for t in range(len(X.deg0)):
        for s in range(len(X.deg1)):
            if any(d[t][s]):
                graph.add_edge(("row", t), ("col", s))
    components = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    for component in components:
        rows = [i for kind, i in component if kind == "row"]
        cols = [i for kind, i in component if kind == "col"]
        piece = TwoTermComplex(select_columns(select_rows(X.differential, rows), cols))
        if len(rows) == 1 and len(cols) == 1:
            pieces.append(piece)
        else:
            pieces.extend(_split_by_idempotents(alg, piece))
    return [sort_slots(alg, p) for p in pieces]


# Hom and E spaces

@dataclass
class HomSpace:
    """Hom_K(X, Y): a complement of the homotopies inside the chain maps."""

    chains: ChainMapSpace
    basis: Tuple[Vector, ...]
    system: CoordinateSystem

    @property
    def dim(self) -> int:
        return len(self.basis)

    def representative(self, coordinates: Sequence[Fraction]) -> Vector:
        return linear_combination(coordinates, self.basis, self.chains.width)

    def coordinates(self, vector: Sequence[Fraction]) -> Vector:
        return self.system.coordinates(vector)[:self.dim]


def hom_space(alg: BoundQuiverAlgebra, X: TwoTermComplex, Y: TwoTermComplex) -> HomSpace:
    chains = chain_maps(alg, X, Y)
    h_coords = map_coordinates(alg, Y.deg1, X.deg0)
    homotopies = []
    for i in range(len(h_coords)):
        h = map_from_vector(alg, Y.deg1, X.deg0, h_coords, unit_vector(len(h_coords), i))
        homotopies.append(chains.vector(compose_maps(alg, h, X.differential), compose_maps(alg, Y.differential, h)))
    null = Subspace(chains.width, homotopies)
    basis = []
    span = null
    for z in chains.basis:
        if not span.contains(z):
            basis.append(z)
            span = span.extended([z])
    system = CoordinateSystem(basis + list(null.basis), chains.width)
    return HomSpace(chains, tuple(basis), system)


@dataclass
class ExtSpace:
    """E(X, Y) = Hom(X1, Y0) / (d_Y·Hom(X1, Y1) + Hom(X0, Y0)·d_X)."""

    source: TwoTermComplex
    target: TwoTermComplex
    coords: Tuple[Tuple[int, int, int], ...]
    image: Subspace

    @property
    def dim(self) -> int:
        return len(self.image.complement)

    def representative(self, alg: BoundQuiverAlgebra, coordinates: Sequence[Fraction]) -> SlotMap:
        return map_from_vector(alg, self.target.deg0, self.source.deg1, self.coords,
                               self.image.quotient_lift(coordinates))


def ext_space(alg: BoundQuiverAlgebra, X: TwoTermComplex, Y: TwoTermComplex) -> ExtSpace:
    coords = map_coordinates(alg, Y.deg0, X.deg1)
    image = []
    c11 = map_coordinates(alg, Y.deg1, X.deg1)
    for i in range(len(c11)):
        u = map_from_vector(alg, Y.deg1, X.deg1, c11, unit_vector(len(c11), i))
        image.append(map_to_vector(compose_maps(alg, Y.differential, u), coords))
    c00 = map_coordinates(alg, Y.deg0, X.deg0)
    for i in range(len(c00)):
        v = map_from_vector(alg, Y.deg0, X.deg0, c00, unit_vector(len(c00), i))
        image.append(map_to_vector(compose_maps(alg, v, X.differential), coords))
    return ExtSpace(X, Y, coords, Subspace(len(coords), image))


def cone(alg: BoundQuiverAlgebra, A: TwoTermComplex, C: TwoTermComplex, f: SlotMap) -> TwoTermComplex:
    """Middle of the conflation A ↣ M ↠ C with connecting map f: C_1 -> A_0."""
    deg1 = A.deg1 + C.deg1
    deg0 = A.deg0 + C.deg0
    return TwoTermComplex(block_map(alg, deg0, deg1, [
        (0, 0, A.differential),
        (0, len(A.deg1), f),
        (len(A.deg0), len(A.deg1), C.differential),
    ]))


# Naming

def _kind(X: TwoTermComplex) -> int:
    if not X.deg1:
        return 0
    if not X.deg0:
        return 2
    return 1


def complex_name(X: TwoTermComplex) -> str:
    if _kind(X) == 0:
        return "+".join(f"P{v}" for v in X.deg0)
    if _kind(X) == 2:
        return "+".join(f"P{v}[1]" for v in X.deg1)
    return "+".join(f"P{v}" for v in X.deg1) + ">" + "+".join(f"P{v}" for v in X.deg0)


class TwoTermModel(FiniteZeroAuslanderModel):
    """The two-term category of a bound quiver algebra."""

    name = "two-term"
    supports_composition = True

    def __init__(self, algebra: BoundQuiverAlgebra, budgets: Budgets = DEFAULT_BUDGETS):
        super().__init__()
        self.algebra = algebra
        self.budgets = budgets
        self._homs: Dict[Tuple[TwoTermComplex, TwoTermComplex], HomSpace] = {}
        self._exts: Dict[Tuple[TwoTermComplex, TwoTermComplex], ExtSpace] = {}
        self._complex: Dict[str, TwoTermComplex] = {}
        self._ids: Tuple[str, ...] = ()
        self._build_universe()

    # Registry

    def objects(self) -> ObjectSum:
        return self._ids

    def complex(self, x: str) -> TwoTermComplex:
        return self._complex[x]

    def _order_key(self, X: TwoTermComplex, discovered: int):
        order = {v: i for i, v in enumerate(self.algebra.vertices)}
        return (_kind(X), X.size, tuple(order[v] for v in X.deg1), tuple(order[v] for v in X.deg0), discovered)

    def _build_universe(self) -> None:
        alg = self.algebra
        entries: List[TwoTermComplex] = [stalk(alg, v) for v in alg.vertices]
        entries += [shifted_stalk(alg, v) for v in alg.vertices]
        seen = set()
        logger.info(f"Closing the two-term universe from {len(entries)} stalks")
        grew = True
        while grew:
            grew = False
            for c_index in range(len(entries)):
                for a_index in range(len(entries)):
                    if (c_index, a_index) in seen:
                        continue
                    seen.add((c_index, a_index))
                    for piece in self._pair_middles(entries[c_index], entries[a_index]):
                        if self._find(entries, piece) is None:
                            entries.append(piece)
                            grew = True
                            if len(entries) > self.budgets.universe_objects:
                                raise BudgetExceeded(
                                    f"two-term universe exceeded {self.budgets.universe_objects} objects",
                                    partial=[complex_name(X) for X in entries],
                                )
        order = sorted(range(len(entries)), key=lambda i: self._order_key(entries[i], i))
        for i in order:
            self._register(entries[i])
        logger.info(f"Two-term universe has {len(self._ids)} indecomposables")

    def _pair_middles(self, C: TwoTermComplex, A: TwoTermComplex) -> List[TwoTermComplex]:
        alg = self.algebra
        m = self.budgets.universe_multiplicity
        pieces = []
        for k in range(1, m + 1):
            Cs, As = direct_sum(alg, [C] * k), direct_sum(alg, [A] * k)
            space = self._ext(Cs, As)
            for coords in coordinate_patterns(space.dim)[1:]:
                middle = cone(alg, As, Cs, space.representative(alg, coords))
                pieces.extend(split_complex(alg, middle))
        return pieces

    def _find(self, entries: Sequence[TwoTermComplex], X: TwoTermComplex) -> Optional[int]:
        for i, Y in enumerate(entries):
            if is_isomorphic(self.algebra, X, Y):
                return i
        return None

    def _register(self, X: TwoTermComplex) -> str:
        name = complex_name(X)
        if name in self._complex:
            k = 2
            while f"{name}#{k}" in self._complex:
                k += 1
            name = f"{name}#{k}"
        with self._lock:
            self._complex[name] = X
            self._ids = self._ids + (name,)
        return name

    def identify(self, X: TwoTermComplex) -> str:
        """Registry id of an indecomposable, registering it when new."""
        for x in self._ids:
            if is_isomorphic(self.algebra, X, self._complex[x]):
                return x
        name = self._register(X)
        logger.warning(f"Registered {name} outside the closed universe")
        self.cache.clear()
        self._flags = None
        return name

    # Hom and E

    def _hom(self, X: TwoTermComplex, Y: TwoTermComplex) -> HomSpace:
        key = (X, Y)
        space = self._homs.get(key)
        if space is None:
            space = hom_space(self.algebra, X, Y)
            with self._lock:
                self._homs[key] = space
        return space

    def _ext(self, X: TwoTermComplex, Y: TwoTermComplex) -> ExtSpace:
        key = (X, Y)
        space = self._exts.get(key)
        if space is None:
            space = ext_space(self.algebra, X, Y)
            with self._lock:
                self._exts[key] = space
        return space

    def hom_dim(self, x: str, y: str) -> int:
        return self._hom(self._complex[x], self._complex[y]).dim

    def _ext_dim(self, x: str, y: str) -> int:
        return self._ext(self._complex[x], self._complex[y]).dim

    def hom_basis(self, x: str, y: str) -> List[Tuple[SlotMap, SlotMap]]:
        space = self._hom(self._complex[x], self._complex[y])
        return [space.chains.maps(self.algebra, b) for b in space.basis]

    def compose(self, x: str, y: str, z: str, f: Sequence[Fraction], g: Sequence[Fraction]) -> Vector:
        X, Y, Z = self._complex[x], self._complex[y], self._complex[z]
        hxy, hyz, hxz = self._hom(X, Y), self._hom(Y, Z), self._hom(X, Z)
        fm = hxy.chains.maps(self.algebra, hxy.representative(f))
        gm = hyz.chains.maps(self.algebra, hyz.representative(g))
        return hxz.coordinates(hxz.chains.vector(*compose_chain(self.algebra, gm, fm)))

    def identity(self, x: str) -> Vector:
        X = self._complex[x]
        space = self._hom(X, X)
        return space.coordinates(space.chains.vector(identity_map(self.algebra, X.deg1),
                                                     identity_map(self.algebra, X.deg0)))

    # Realization

    def sum_complex(self, objects: Sequence[str]) -> TwoTermComplex:
        return direct_sum(self.algebra, [self._complex[x] for x in objects])

    def _middle(self, ext: ExtClass) -> ObjectSum:
        alg = self.algebra
        C, A = self.sum_complex(ext.source), self.sum_complex(ext.target)
        a_rows = [0]
        for a in ext.target:
            a_rows.append(a_rows[-1] + len(self._complex[a].deg0))
        c_cols = [0]
        for c in ext.source:
            c_cols.append(c_cols[-1] + len(self._complex[c].deg1))
        blocks = []
        for (i, j), coords in ext.components(self).items():
            if not any(coords):
                continue
            space = self._ext(self._complex[ext.source[i]], self._complex[ext.target[j]])
            blocks.append((a_rows[j], c_cols[i], space.representative(alg, coords)))
        f = block_map(alg, A.deg0, C.deg1, blocks)
        return self.decompose(cone(alg, A, C, f))

    def decompose(self, obj) -> ObjectSum:
        if isinstance(obj, TwoTermComplex):
            return self.normalize(self.identify(p) for p in split_complex(self.algebra, obj))
        return super().decompose(obj)

    def endomorphism_algebra(self, x: str) -> FinDimAlgebra:
        return endomorphism_algebra(self.algebra, self._complex[x])[0]

    def is_indecomposable(self, x: str) -> bool:
        return is_local(self.endomorphism_algebra(x))

    def describe(self) -> Dict:
        info = super().describe()
        info["algebra_dimension"] = self.algebra.dimension
        return info
