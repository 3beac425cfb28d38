"""Silting subcategories: the rank test, mutation and the exchange poset."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from errors import (
    ApproximationNotMinimalizable,
    BudgetExceeded,
    InvariantViolation,
    MutationUndefined,
    NotRigid,
    RankUnknown,
)
from exact_kernel import Subspace, Vector, unit_vector
from models import FiniteZeroAuslanderModel, ObjectSum, RigidSubcat, enumerate_rigid, make_rigid

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"
DIRECTIONS = (LEFT, RIGHT)


def is_silting(model: FiniteZeroAuslanderModel, R) -> bool:
    """Rank criterion: a rigid subcategory is silting iff it has rank many members."""
    members = R.members if isinstance(R, RigidSubcat) else tuple(R)
    return len(set(members)) == model.rank


def silting_geq(model: FiniteZeroAuslanderModel, S: Iterable[str], T: Iterable[str]) -> bool:
    """S >= T iff E(s, t) = 0 for all s ∈ S, t ∈ T."""
    return model.ext_vanishes(S, T)


def brute_force_siltings(model: FiniteZeroAuslanderModel) -> List[RigidSubcat]:
    rank = model.rank
    return [R for R in enumerate_rigid(model) if len(R) == rank]


# Approximations

Component = Tuple[str, Vector]


def _basis(model: FiniteZeroAuslanderModel, x: str, y: str) -> List[Vector]:
    dim = model.hom_dim(x, y)
    return [unit_vector(dim, i) for i in range(dim)]


def _is_left_approximation(model: FiniteZeroAuslanderModel, x: str, components: Sequence[Component],
                           targets: Sequence[str]) -> bool:
    """Every map x -> n factors through the components."""
    for n in targets:
        dim = model.hom_dim(x, n)
        if not dim:
            continue
        vectors = [model.compose(x, s, n, f, h) for s, f in components for h in _basis(model, s, n)]
        if Subspace(dim, vectors).dim != dim:
            return False
    return True


def _is_right_approximation(model: FiniteZeroAuslanderModel, x: str, components: Sequence[Component],
                            targets: Sequence[str]) -> bool:
    """Every map n -> x factors through the components."""
    for n in targets:
        dim = model.hom_dim(n, x)
        if not dim:
            continue
        vectors = [model.compose(n, s, x, h, g) for s, g in components for h in _basis(model, n, s)]
        if Subspace(dim, vectors).dim != dim:
            return False
    return True


def minimal_approximation(model: FiniteZeroAuslanderModel, x: str, targets: Sequence[str],
                          direction: str) -> ObjectSum:
    """Middle of a minimal left (x -> s') or right (s' -> x) add(targets)-approximation.

    Starts from the universal map and greedily drops components in registry order.
    """
    targets = model.normalize(targets)
    if direction == LEFT:
        components = [(n, f) for n in targets for f in _basis(model, x, n)]
        check = _is_left_approximation
    else:
        components = [(n, g) for n in targets for g in _basis(model, n, x)]
        check = _is_right_approximation
    if not check(model, x, components, targets):
        raise ApproximationNotMinimalizable(f"universal {direction} approximation of {x} does not approximate")
    chosen = list(components)
    for component in components:
        trial = [c for c in chosen if c is not component]
        if check(model, x, trial, targets):
            chosen = trial
    return model.normalize(n for n, _ in chosen)


# Mutation

def _conflation_partner(model: FiniteZeroAuslanderModel, x: str, middle_sum: ObjectSum,
                        keep: Sequence[str], direction: str) -> Optional[str]:
    for y in model.objects():
        if y == x or y in keep or not model.is_rigid(tuple(keep) + (y,)):
            continue
        # left: x ↣ s' ↠ y realizes ξ ∈ E(y, x); right: y ↣ s' ↠ x realizes ξ ∈ E(x, y)
        c, a = ((y,), (x,)) if direction == LEFT else ((x,), (y,))
        for ext in model.ext_classes(c, a)[1:]:
            if model.middle(ext) == middle_sum:
                return y
    return None


def _exchange_partner(model: FiniteZeroAuslanderModel, S: RigidSubcat, x: str, direction: str) -> Optional[str]:
    keep = tuple(m for m in S.members if m != x)
    for y in model.objects():
        if y in S.members or not model.is_rigid(keep + (y,)):
            continue
        candidate = keep + (y,)
        if direction == LEFT and silting_geq(model, S.members, candidate):
            return y
        if direction == RIGHT and silting_geq(model, candidate, S.members):
            return y
    return None


def mutate(model: FiniteZeroAuslanderModel, S: RigidSubcat, x: str, direction: str) -> RigidSubcat:
    """Replace x in the silting S by its exchange partner; left goes down the order."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown mutation direction {direction!r}")
    if x not in S.members:
        raise MutationUndefined(f"{x} is not a member of {S.label}")
    if not is_silting(model, S):
        raise MutationUndefined(f"{S.label} is not silting")
    if model.is_projective(x) and model.is_injective(x):
        raise MutationUndefined(f"{x} is projective-injective")
    keep = tuple(m for m in S.members if m != x)
    if model.supports_composition:
        middle_sum = minimal_approximation(model, x, keep, direction)
        y = _conflation_partner(model, x, middle_sum, keep, direction)
    else:
        y = _exchange_partner(model, S, x, direction)
    if y is None:
        raise MutationUndefined(f"no {direction} exchange partner for {x} in {S.label}")
    result = make_rigid(model, keep + (y,))
    ordered = silting_geq(model, S.members, result.members) if direction == LEFT else silting_geq(model, result.members, S.members)
    if not ordered:
        raise InvariantViolation(f"{direction} mutation of {S.label} at {x} gave {result.label} out of order")
    logger.debug(f"Mutated {S.label} at {x} ({direction}) to {result.label}")
    return result


# Exploration

@dataclass
class SiltingPoset:
    """Silting subcategories with their order; edges (i, j) mean nodes[i] covers nodes[j]."""

    nodes: Tuple[RigidSubcat, ...]
    edges: Tuple[Tuple[int, int], ...]
    order: Tuple[Tuple[bool, ...], ...]
    mutation_edges: Tuple[Tuple[int, int], ...] = ()
    complete: bool = True
    _index: Dict[FrozenSet[str], int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index = {node.key: i for i, node in enumerate(self.nodes)}

    def __len__(self) -> int:
        return len(self.nodes)

    def index(self, members: Iterable[str]) -> int:
        return self._index[frozenset(members)]

    def geq(self, i: int, j: int) -> bool:
        return self.order[i][j]

    @property
    def maximum(self) -> int:
        return 0

    @property
    def minimum(self) -> int:
        return len(self.nodes) - 1

    def interval(self, i: int, j: int) -> List[int]:
        """Nodes k with nodes[i] >= nodes[k] >= nodes[j]."""
        return [k for k in range(len(self.nodes)) if self.order[i][k] and self.order[k][j]]

    def intervals(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(len(self.nodes)) for j in range(len(self.nodes)) if self.order[i][j]]

    def is_irreducible(self, i: int, j: int) -> bool:
        return (i, j) in set(self.edges)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.nodes)))
        g.add_edges_from(self.edges)
        return g

    def maximal_chains(self, i: int, j: int) -> List[List[int]]:
        """Chains of covering relations from i down to j, in lexicographic order."""
        if i == j:
            return [[i]]
        return sorted(nx.all_simple_paths(self.graph(), i, j))

    def within(self, members: Iterable[str]) -> List[int]:
        """Nodes containing every given member."""
        members = set(members)
        return [k for k, node in enumerate(self.nodes) if members <= set(node.members)]

    def as_dict(self) -> Dict:
        return {
            "schema": 1,
            "nodes": [list(node.members) for node in self.nodes],
            "hasse": [list(e) for e in self.edges],
            "complete": self.complete,
        }

    def to_dot(self) -> str:
        lines = ["digraph silt {"]
        for k, node in enumerate(self.nodes):
            lines.append(f'  s{k} [label="{node.label}"];')
        for i, j in self.edges:
            lines.append(f"  s{i} -> s{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"{len(self.nodes)} silting subcategories"]
        for k, node in enumerate(self.nodes):
            lines.append(f"s{k}: {node.label}")
        for i, j in self.edges:
            lines.append(f"s{i} > s{j}")
        return "\n".join(lines) + "\n"


def build_poset(model: FiniteZeroAuslanderModel, found: Iterable[RigidSubcat],
                mutation_edges: Iterable[Tuple[FrozenSet[str], FrozenSet[str]]] = (),
                complete: bool = True) -> SiltingPoset:
    """Order, Hasse diagram and canonical node order for a set of siltings."""
    found = list(found)
    geq = [[silting_geq(model, a.members, b.members) for b in found] for a in found]
    down = [sum(row) for row in geq]
    positions = [[model.index(x) for x in node.members] for node in found]
    order = sorted(range(len(found)), key=lambda k: (-down[k], positions[k]))
    nodes = tuple(found[k] for k in order)
    matrix = tuple(tuple(geq[a][b] for b in order) for a in order)
    strict = nx.DiGraph()
    strict.add_nodes_from(range(len(nodes)))
    strict.add_edges_from((i, j) for i in range(len(nodes)) for j in range(len(nodes)) if i != j and matrix[i][j])
    if not nx.is_directed_acyclic_graph(strict):
        raise InvariantViolation("silting order has a cycle")
    hasse = tuple(sorted(nx.transitive_reduction(strict).edges()))
    poset = SiltingPoset(nodes, hasse, matrix, complete=complete)
    moves = tuple(sorted({(poset.index(a), poset.index(b)) for a, b in mutation_edges}))
    poset.mutation_edges = moves
    return poset


def _neighbours(model: FiniteZeroAuslanderModel, S: RigidSubcat) -> List[Tuple[str, RigidSubcat]]:
    out = []
    for x in S.members:
        for direction in DIRECTIONS:
            try:
                out.append((direction, mutate(model, S, x, direction)))
            except MutationUndefined:
                continue
    return out


def explore_silt_poset(model: FiniteZeroAuslanderModel, budget: int = 500, threads: int = 1) -> SiltingPoset:
    """Mutation closure of the projectives, breadth first, layer by layer."""
    projectives = model.projectives()
    if not projectives:
        raise RankUnknown(f"{model.name} has no projectives to start from")
    try:
        start = make_rigid(model, projectives)
    except NotRigid as e:
        raise RankUnknown(f"projectives of {model.name} are not rigid: {e.detail}")
    seen: Dict[FrozenSet[str], RigidSubcat] = {start.key: start}
    moves = set()
    frontier = [start]
    logger.info(f"Exploring silting poset of {model.name} from {start.label}")
    while frontier:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda S: _neighbours(model, S), frontier))
        else:
            results = [_neighbours(model, S) for S in frontier]
        nxt = []
        for S, neighbours in zip(frontier, results):
            for direction, T in neighbours:
                moves.add((S.key, T.key) if direction == LEFT else (T.key, S.key))
                if T.key not in seen:
                    seen[T.key] = T
                    nxt.append(T)
                    if len(seen) > budget:
                        partial = build_poset(model, seen.values(), complete=False)
                        raise BudgetExceeded(f"silting poset exceeded {budget} nodes", partial=partial)
        frontier = nxt
    poset = build_poset(model, seen.values(), moves)
    _check_poset(model, poset)
    logger.info(f"Silting poset has {len(poset)} nodes and {len(poset.edges)} covering relations")
    return poset


def _check_poset(model: FiniteZeroAuslanderModel, poset: SiltingPoset) -> None:
    rank = model.rank
    for node in poset.nodes:
        if len(node) != rank:
            raise InvariantViolation(f"silting node {node.label} has {len(node)} members, rank is {rank}")
    n = len(poset)
    for k in range(n):
        if not poset.geq(poset.maximum, k) or not poset.geq(k, poset.minimum):
            raise InvariantViolation("silting poset has no unique maximum and minimum")
    if set(poset.nodes[poset.maximum].members) != set(model.projectives()):
        raise InvariantViolation("maximum of the silting poset is not the projectives")
    if set(poset.nodes[poset.minimum].members) != set(model.injectives()):
        raise InvariantViolation("minimum of the silting poset is not the injectives")
    hasse = set(poset.edges)
    for edge in poset.mutation_edges:
        if edge not in hasse:
            a, b = poset.nodes[edge[0]], poset.nodes[edge[1]]
            raise InvariantViolation(f"mutation {a.label} -> {b.label} is not a covering relation")


def cached_poset(model: FiniteZeroAuslanderModel, budget: int = 500, threads: int = 1) -> SiltingPoset:
    """Explore once per model; later calls reuse the stored poset."""
    poset = model.cache.get("silting_poset")
    if poset is None:
        poset = explore_silt_poset(model, budget, threads)
        model.cache["silting_poset"] = poset
    return poset
