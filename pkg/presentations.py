"""Presentations of the picture group.

Two independent routes: intervals of the silting poset with chain
relators, and the edge-path group of the picture category's nerve based at
the zero object. The routes are compared through abelianization and
homomorphism counts into small finite groups.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel
from sympy import ZZ
from sympy.combinatorics.named_groups import CyclicGroup, SymmetricGroup
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from config import DEFAULT_BUDGETS, TARGET_GROUPS, Budgets
from errors import HomCountBudgetExceeded, InvariantViolation, NotRigid, RewritingFailed
from models import make_rigid
from picture import PictureCategory
from silting import SiltingPoset, cached_poset

logger = logging.getLogger(__name__)

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]

GENERATOR_NAME = re.compile(r"^[a-z][a-z0-9_]*$")


# Words

def inverse(word: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(word))


def free_reduce(word: Iterable[Letter]) -> Word:
    out: List[Letter] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word: Iterable[Letter]) -> Word:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def word_text(word: Sequence[Letter]) -> str:
    if not word:
        return "1"
    return "*".join(g if e > 0 else g.upper() for g, e in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for token in text.split("*"):
        token = token.strip()
        if token[:1].isupper():
            letters.append((token.lower(), -1))
        else:
            letters.append((token, 1))
    return free_reduce(letters)


def exponent_sums(word: Sequence[Letter], generators: Sequence[str]) -> List[int]:
    sums = {g: 0 for g in generators}
    for g, e in word:
        sums[g] += e
    return [sums[g] for g in generators]


@dataclass(frozen=True)
class GroupPresentation:
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    log: Tuple[Dict, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be unique")
        for g in self.generators:
            if not GENERATOR_NAME.match(g):
                raise ValueError(f"generator name {g!r} must start with a lowercase letter")
        known = set(self.generators)
        for r in self.relators:
            if free_reduce(r) != tuple(r):
                raise ValueError(f"relator {word_text(r)} is not freely reduced")
            if any(g not in known for g, _ in r):
                raise ValueError(f"relator {word_text(r)} uses an unknown generator")

    @classmethod
    def build(cls, generators: Iterable[str], relators: Iterable[Sequence[Letter]],
              log: Iterable[Dict] = ()) -> "GroupPresentation":
        """Cyclically reduce, drop trivial relators and exact repeats."""
        seen = []
        for r in relators:
            r = cyclic_reduce(r)
            if r and r not in seen:
                seen.append(r)
        return cls(tuple(generators), tuple(seen), tuple(log))

    def to_text(self) -> str:
        return (f"gens: {' '.join(self.generators)}\n"
                f"rels: {' '.join(word_text(r) for r in self.relators)}\n")

    def as_dict(self) -> Dict:
        return {
            "schema": 1,
            "generators": list(self.generators),
            "relators": [word_text(r) for r in self.relators],
            "tietze": list(self.log),
        }


def parse_presentation(text: str) -> GroupPresentation:
    generators: List[str] = []
    relators: List[Word] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("gens:"):
            generators = line[len("gens:"):].split()
        elif line.startswith("rels:"):
            relators = [parse_word(tok) for tok in line[len("rels:"):].split()]
    return GroupPresentation.build(generators, relators)


# Tietze moves

def _substitute(word: Sequence[Letter], g: str, replacement: Word) -> Word:
    out: List[Letter] = []
    for h, e in word:
        if h == g:
            out.extend(replacement if e > 0 else inverse(replacement))
        else:
            out.append((h, e))
    return free_reduce(out)


def _eliminate(pres: GroupPresentation, index: int, g: str) -> Tuple[GroupPresentation, Word]:
    """Solve relator `index` for its single occurrence of g and substitute everywhere."""
    r = pres.relators[index]
    k = next(i for i, (h, _) in enumerate(r) if h == g)
    before, exponent, after = r[:k], r[k][1], r[k + 1:]
    value = free_reduce(inverse(before) + inverse(after))
    if exponent < 0:
        value = inverse(value)
    relators = [_substitute(w, g, value) for i, w in enumerate(pres.relators) if i != index]
    generators = [h for h in pres.generators if h != g]
    return GroupPresentation.build(generators, relators, pres.log), value


def _trivial_pass(pres: GroupPresentation, log: List[Dict]) -> GroupPresentation:
    """Drop generators that a relator of length one kills."""
    while True:
        single = next((i for i, r in enumerate(pres.relators) if len(r) == 1), None)
        if single is None:
            return pres
        g = pres.relators[single][0][0]
        pres, _ = _eliminate(pres, single, g)
        log.append({"move": "remove_generator", "generator": g, "value": "1"})


def tietze_simplify(pres: GroupPresentation, budget: int = DEFAULT_BUDGETS.tietze_steps) -> GroupPresentation:
    """Eliminate generators that occur exactly once in some relator, shortest relator first."""
    log: List[Dict] = list(pres.log)
    start = abelianization(pres)
    current = GroupPresentation.build(pres.generators, pres.relators)
    if len(current.relators) != len(pres.relators):
        log.append({"move": "remove_relators", "count": len(pres.relators) - len(current.relators)})
    steps = 0
    while steps < budget:
        steps += 1
        current = _trivial_pass(current, log)
        choice = None
        for i in sorted(range(len(current.relators)), key=lambda i: (len(current.relators[i]), i)):
            r = current.relators[i]
            counts: Dict[str, int] = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            single = [g for g in current.generators if counts.get(g) == 1]
            if single:
                choice = (i, single[0])
                break
        if choice is None:
            break
        relator = word_text(current.relators[choice[0]])
        current, value = _eliminate(current, *choice)
        log.append({"move": "remove_generator", "generator": choice[1], "relator": relator,
                    "value": word_text(value)})
    else:
        logger.warning(f"Tietze simplification stopped after {budget} steps")
    result = GroupPresentation(current.generators, current.relators, tuple(log))
    if abelianization(result) != start:
        raise InvariantViolation("Tietze simplification changed the abelianization")
    logger.debug(f"Simplified to {len(result.generators)} generators and {len(result.relators)} relators")
    return result


# Poset route

def interval_generator(hi: int, lo: int, labels: Optional[Dict[Tuple[int, int], str]] = None) -> str:
    if labels and (hi, lo) in labels:
        return labels[(hi, lo)]
    return f"g{hi}_{lo}"


def _chain_relator(hi: int, mid: int, lo: int, labels) -> Word:
    return cyclic_reduce((
        (interval_generator(hi, mid, labels), 1),
        (interval_generator(mid, lo, labels), 1),
        (interval_generator(hi, lo, labels), -1),
    ))


def presentation_from_poset(poset: SiltingPoset,
                            labels: Optional[Dict[Tuple[int, int], str]] = None) -> GroupPresentation:
    """One generator per interval, one relator per chain hi >= mid >= lo.

    `labels` renames covering intervals; equal labels identify generators.
    Degenerate intervals are removed before returning.
    """
    generators: List[str] = []
    relators: List[Word] = []
    for hi, lo in poset.intervals():
        name = interval_generator(hi, lo, labels)
        if name not in generators:
            generators.append(name)
        for mid in poset.interval(hi, lo):
            relators.append(_chain_relator(hi, mid, lo, labels))
    pres = GroupPresentation.build(generators, relators)
    log: List[Dict] = []
    pres = _trivial_pass(pres, log)
    logger.info(f"Poset presentation: {len(pres.generators)} generators, {len(pres.relators)} relators")
    return GroupPresentation(pres.generators, pres.relators, tuple(log))


class IntervalRewriting(BaseModel):
    upper: List[str]
    lower: List[str]
    generator: str
    word: str
    steps: int
    verified: bool


def _solve_for(pres: GroupPresentation, g: str, value: Word) -> Optional[Word]:
    """A relator with a single occurrence of g that expresses g as `value`, solved for g."""
    for r in pres.relators:
        if sum(1 for h, _ in r if h == g) != 1:
            continue
        k = next(i for i, (h, _) in enumerate(r) if h == g)
        solved = free_reduce(inverse(r[:k]) + inverse(r[k + 1:]))
        if r[k][1] < 0:
            solved = inverse(solved)
        if solved == value:
            return solved
    return None


def interval_rewriting(poset: SiltingPoset, pres: Optional[GroupPresentation] = None,
                       labels: Optional[Dict[Tuple[int, int], str]] = None) -> List[IntervalRewriting]:
    """Rewrite each interval generator into covering-interval generators.

    Every step substitutes one chain relator of `pres` along a maximal
    chain; the result must equal the chain word of covering generators.
    """
    if pres is None:
        pres = presentation_from_poset(poset, labels)
    out = []
    for hi, lo in poset.intervals():
        if hi == lo:
            continue
        chain = poset.maximal_chains(hi, lo)[0]
        target = free_reduce((interval_generator(a, b, labels), 1) for a, b in zip(chain, chain[1:]))
        word: Word = ((interval_generator(hi, lo, labels), 1),)
        steps = 0
        for k in range(len(chain) - 2):
            g = interval_generator(chain[k], lo, labels)
            step = ((interval_generator(chain[k], chain[k + 1], labels), 1),
                    (interval_generator(chain[k + 1], lo, labels), 1))
            value = _solve_for(pres, g, step)
            if value is None:
                logger.debug(f"No chain relator in the presentation rewrites {g}")
                break
            word = _substitute(word, g, value)
            steps += 1
        out.append(IntervalRewriting(
            upper=list(poset.nodes[hi].members),
            lower=list(poset.nodes[lo].members),
            generator=interval_generator(hi, lo, labels),
            word=word_text(word),
            steps=steps,
            verified=free_reduce(word) == target,
        ))
    return out


# Nerve route

def pi1_nerve(cat: PictureCategory) -> GroupPresentation:
    """Edge-path group of the nerve based at the zero object, tree edges collapsed."""
    arrows = [m for m in cat.morphisms if not m.is_identity]
    graph = nx.Graph()
    graph.add_nodes_from(o.id for o in cat.objects)
    for m in arrows:
        if not graph.has_edge(m.source, m.target):
            graph.add_edge(m.source, m.target, morphism=m.id)
    tree = {graph.edges[u, v]["morphism"] for u, v in nx.bfs_edges(graph, cat.sink)}
    if len(tree) != len(cat.objects) - 1:
        raise InvariantViolation("nerve of the picture category is not connected")
    generators = [m.id for m in arrows if m.id not in tree]
    relators = []
    identities = {m.id for m in cat.morphisms if m.is_identity}
    for (f, g), h in cat.composition.items():
        if f in identities or g in identities:
            continue
        word = [(f, 1), (g, 1), (h, -1)]
        relators.append(tuple((x, e) for x, e in word if x not in tree))
    pres = GroupPresentation.build(generators, relators)
    logger.info(f"Nerve presentation: {len(pres.generators)} generators, {len(pres.relators)} relators")
    return pres


# Invariants

def abelianization(pres: GroupPresentation) -> List[int]:
    """Torsion coefficients (> 1) followed by one 0 per free factor."""
    n = len(pres.generators)
    if n == 0:
        return []
    rows = [exponent_sums(r, pres.generators) for r in pres.relators]
    rows = [row for row in rows if any(row)]
    if not rows:
        return [0] * n
    matrix = DomainMatrix([[ZZ(c) for c in row] for row in rows], (len(rows), n), ZZ)
    factors = [abs(int(d)) for d in invariant_factors(matrix)]
    nonzero = [d for d in factors if d]
    return [d for d in nonzero if d != 1] + [0] * (n - len(nonzero))


def abelian_label(coefficients: Sequence[int]) -> str:
    if not coefficients:
        return "1"
    torsion = [f"Z/{d}" for d in coefficients if d]
    free = sum(1 for d in coefficients if not d)
    if free:
        torsion.append("Z" if free == 1 else f"Z^{free}")
    return " x ".join(torsion)


def target_group(name: str):
    if name == "Z2":
        return CyclicGroup(2)
    if name == "Z3":
        return CyclicGroup(3)
    if name == "S3":
        return SymmetricGroup(3)
    raise ValueError(f"unknown target group {name!r}")


def count_homomorphisms(pres: GroupPresentation, name: str, budget: int = DEFAULT_BUDGETS.hom_count) -> int:
    group = target_group(name)
    elements = sorted(group.elements, key=lambda p: p.array_form)
    n = len(pres.generators)
    if len(elements) ** n > budget:
        raise HomCountBudgetExceeded(f"{len(elements)}^{n} assignments into {name} exceed {budget}")
    position = {g: i for i, g in enumerate(pres.generators)}
    inverses = [p ** -1 for p in elements]
    count = 0
    for images in product(range(len(elements)), repeat=n):
        ok = True
        for r in pres.relators:
            value = group.identity
            for g, e in r:
                k = images[position[g]]
                value = value * (elements[k] if e > 0 else inverses[k])
            if not value.is_Identity:
                ok = False
                break
        if ok:
            count += 1
    return count


class GroupInvariants(BaseModel):
    abelianization: List[int]
    label: str
    hom_counts: Dict[str, int]


def invariants(pres: GroupPresentation, targets: Sequence[str] = TARGET_GROUPS,
               budgets: Budgets = DEFAULT_BUDGETS) -> GroupInvariants:
    ab = abelianization(pres)
    counts = {name: count_homomorphisms(pres, name, budgets.hom_count) for name in targets}
    return GroupInvariants(abelianization=ab, label=abelian_label(ab), hom_counts=counts)


# Generators from objects

class BRewriting(BaseModel):
    upper: List[str]
    lower: List[str]
    hi: int
    lo: int
    intersection: List[str]
    object: str
    generator: str
    first: str
    upper_morphism: str
    lower_morphism: str
    loop: str


class BGeneratorReport(BaseModel):
    schema_version: int = 1
    objects: List[str]
    names: Dict[str, str]
    rewritings: List[BRewriting]

    def edge_labels(self) -> Dict[Tuple[int, int], str]:
        return {(w.hi, w.lo): w.generator for w in self.rewritings}


def _is_b_object(cat: PictureCategory, x: str) -> bool:
    if x == cat.sink:
        return False
    outgoing = [m for m in cat.out_of(x) if not m.is_identity]
    return all(m.target == cat.sink for m in outgoing) and len(cat.hom(x, cat.sink)) == 2


def b_generators(cat: PictureCategory, poset: Optional[SiltingPoset] = None) -> BGeneratorReport:
    """Objects all of whose nonzero rigid subcategories are silting, and the covering intervals they carry.

    A covering S > S' factors through the object of S ∩ S': the two siltings
    are composites of the morphism A -> [S ∩ S'] with the two arrows into O.
    """
    objects = [o.id for o in cat.objects if _is_b_object(cat, o.id)]
    names = {x: f"b{k}" for k, x in enumerate(objects)}
    if poset is None:
        poset = cached_poset(cat.model, cat.budgets.poset_nodes)
    rewritings = []
    for hi, lo in poset.edges:
        upper, lower = poset.nodes[hi].members, poset.nodes[lo].members
        try:
            meet = make_rigid(cat.model, set(upper) & set(lower)).members
        except NotRigid as e:
            raise RewritingFailed(f"intersection of {'+'.join(upper)} and {'+'.join(lower)} is not rigid: {e.detail}")
        first = cat.find(cat.root, meet)
        if first is None or first.target not in names:
            raise RewritingFailed(f"{'+'.join(meet) or '0'} does not reach a generating object")
        top, bottom = cat.find(cat.root, upper), cat.find(cat.root, lower)
        through = {cat.composition.get((first.id, g.id)): g for g in cat.out_of(first.target)}
        if top is None or bottom is None or top.id not in through or bottom.id not in through:
            raise RewritingFailed(f"covering {'+'.join(upper)} > {'+'.join(lower)} does not factor "
                                  f"through {first.target}")
        g_top, g_bottom = through[top.id], through[bottom.id]
        rewritings.append(BRewriting(
            upper=list(upper), lower=list(lower), hi=hi, lo=lo, intersection=list(meet),
            object=first.target, generator=names[first.target], first=first.id,
            upper_morphism=g_top.id, lower_morphism=g_bottom.id,
            loop=word_text(((g_top.id, 1), (g_bottom.id, -1))),
        ))
    logger.info(f"{len(objects)} generating objects for {len(rewritings)} covering intervals")
    return BGeneratorReport(objects=objects, names=names, rewritings=rewritings)


# Both routes

class PictureGroupReport(BaseModel):
    schema_version: int = 1
    poset_route: Dict
    nerve_route: Dict
    poset_invariants: GroupInvariants
    nerve_invariants: GroupInvariants
    generating_objects: List[str]
    agree: bool


def picture_group(cat: PictureCategory, poset: Optional[SiltingPoset] = None,
                  targets: Sequence[str] = TARGET_GROUPS, budgets: Budgets = DEFAULT_BUDGETS) -> PictureGroupReport:
    if poset is None:
        poset = cached_poset(cat.model, budgets.poset_nodes)
    generators = b_generators(cat, poset)
    by_poset = tietze_simplify(presentation_from_poset(poset, generators.edge_labels()), budgets.tietze_steps)
    by_nerve = tietze_simplify(pi1_nerve(cat), budgets.tietze_steps)
    left = invariants(by_poset, targets, budgets)
    right = invariants(by_nerve, targets, budgets)
    agree = left.abelianization == right.abelianization and left.hom_counts == right.hom_counts
    if not agree:
        logger.warning(f"Picture group routes disagree on {cat.model.name}: {left.label} vs {right.label}")
    return PictureGroupReport(
        poset_route=by_poset.as_dict(),
        nerve_route=by_nerve.as_dict(),
        poset_invariants=left,
        nerve_invariants=right,
        generating_objects=generators.objects,
        agree=agree,
    )
