"""Reduction along a rigid subcategory R.

Z_R is the full subcategory of objects with no extensions to or from R, and
the reduced category is Z_R modulo the maps factoring through add(R). This
module builds both as models, computes Bongartz completions, witnesses the
cotorsion-pair conditions, evaluates the approximation functor F and decides
when two rigid subcategories generate the same thick subcategory.
"""
from __future__ import annotations

import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel

from check_flags import is_choice_independence_enabled
from config import DEFAULT_BUDGETS, Budgets
from errors import (
    InvariantViolation,
    NoSiltingExtension,
    NonUniqueExtremum,
    RealizationUnavailable,
    WitnessSearchExhausted,
)
from exact_kernel import Subspace, Vector, unit_vector
from models import (
    Conflation,
    ExtClass,
    FiniteZeroAuslanderModel,
    ObjectSum,
    RigidSubcat,
    enumerate_rigid,
    in_add,
    make_rigid,
    multisets,
    strip,
)
from silting import SiltingPoset, cached_poset, explore_silt_poset, is_silting

logger = logging.getLogger(__name__)

MAX = "max"
MIN = "min"
LEFT = "left"
RIGHT = "right"
BOTH = "both"


def _members(R) -> ObjectSum:
    return R.members if isinstance(R, RigidSubcat) else tuple(R)


# Perpendicular categories

def perp(model: FiniteZeroAuslanderModel, R, side: str = BOTH) -> ObjectSum:
    """R^⊥ (right), ^⊥R (left) or Z_R = R^⊥ ∩ ^⊥R (both), in registry order."""
    members = _members(R)
    key = ("perp", frozenset(members), side)
    if key in model.cache:
        return model.cache[key]
    result = []
    for x in model.objects():
        right_ok = all(model.ext_dim(r, x) == 0 for r in members)
        left_ok = all(model.ext_dim(x, r) == 0 for r in members)
        if (side == RIGHT and right_ok) or (side == LEFT and left_ok) or (side == BOTH and right_ok and left_ok):
            result.append(x)
    result = tuple(result)
    if not check_extension_closed(model, result):
        raise InvariantViolation(f"{side} perpendicular of {'+'.join(members) or '0'} is not extension-closed")
    model.cache[key] = result
    return result


def check_extension_closed(model: FiniteZeroAuslanderModel, ids: Sequence[str]) -> bool:
    """Middles of enumerated classes between members stay inside."""
    allowed = set(ids)
    for x in ids:
        for y in ids:
            for ext in model.ext_classes((x,), (y,))[1:]:
                try:
                    if not in_add(model.middle(ext), allowed):
                        logger.warning(f"Middle of a class in E({x}, {y}) leaves the subcategory")
                        return False
                except RealizationUnavailable:
                    continue
    return True


class SubcategoryModel(FiniteZeroAuslanderModel):
    """Full subcategory on given ambient ids; ids are kept as they are."""

    def __init__(self, ambient: FiniteZeroAuslanderModel, members: Sequence[str]):
        super().__init__()
        self.ambient = ambient
        self._ids = tuple(x for x in ambient.objects() if x in set(members))
        self.supports_composition = ambient.supports_composition
        self.name = f"{ambient.name}|sub"

    def objects(self) -> ObjectSum:
        return self._ids

    def hom_dim(self, x: str, y: str) -> int:
        return self.ambient.hom_dim(x, y)

    def _ext_dim(self, x: str, y: str) -> int:
        return self.ambient.ext_dim(x, y)

    def compose(self, x, y, z, f, g) -> Vector:
        return self.ambient.compose(x, y, z, f, g)

    def identity(self, x: str) -> Vector:
        return self.ambient.identity(x)

    def ext_classes(self, c: ObjectSum, a: ObjectSum, permuted: bool = False) -> List[ExtClass]:
        return self.ambient.ext_classes(c, a, permuted)

    def _middle(self, ext: ExtClass) -> ObjectSum:
        return self.ambient.middle(ext)


def perp_submodel(model: FiniteZeroAuslanderModel, R) -> SubcategoryModel:
    sub = SubcategoryModel(model, perp(model, R, BOTH))
    sub.name = f"{model.name}|Z({'+'.join(_members(R)) or '0'})"
    return sub


class ReducedModel(SubcategoryModel):
    """Z_R / [R]: objects Z_R minus R, Hom modulo maps through add(R), E as in the ambient."""

    def __init__(self, ambient: FiniteZeroAuslanderModel, rigid: Sequence[str]):
        self.rigid = tuple(rigid)
        zr = perp(ambient, self.rigid, BOTH)
        super().__init__(ambient, [x for x in zr if x not in set(self.rigid)])
        self.name = f"{ambient.name}/{'+'.join(self.rigid) or '0'}"
        self._ideals: Dict[Tuple[str, str], Subspace] = {}

    def _ideal(self, x: str, y: str) -> Subspace:
        """Span of compositions x -> r -> y over r ∈ R, in ambient coordinates."""
        key = (x, y)
        ideal = self._ideals.get(key)
        if ideal is not None:
            return ideal
        dim = self.ambient.hom_dim(x, y)
        vectors = []
        for r in self.rigid:
            left, right = self.ambient.hom_dim(x, r), self.ambient.hom_dim(r, y)
            if not left or not right:
                continue
            if not self.ambient.supports_composition:
                raise RealizationUnavailable(
                    f"{self.ambient.name} cannot compose through {r} to reduce Hom({x}, {y})"
                )
            for i in range(left):
                for j in range(right):
                    vectors.append(self.ambient.compose(x, r, y, unit_vector(left, i), unit_vector(right, j)))
        ideal = Subspace(dim, vectors)
        with self._lock:
            self._ideals[key] = ideal
        return ideal

    def hom_dim(self, x: str, y: str) -> int:
        return self.ambient.hom_dim(x, y) - self._ideal(x, y).dim

    def compose(self, x, y, z, f, g) -> Vector:
        fa = self._ideal(x, y).quotient_lift(f)
        ga = self._ideal(y, z).quotient_lift(g)
        return self._ideal(x, z).quotient_coordinates(self.ambient.compose(x, y, z, fa, ga))

    def identity(self, x: str) -> Vector:
        return self._ideal(x, x).quotient_coordinates(self.ambient.identity(x))

    def _middle(self, ext: ExtClass) -> ObjectSum:
        return strip(self.ambient.middle(ext), self.rigid)

    def lift(self, ids: Iterable[str]) -> ObjectSum:
        """Members of the ambient rigid subcategory add(lifts ∪ R)."""
        return self.ambient.normalize(set(ids) | set(self.rigid))


def reduce(model: FiniteZeroAuslanderModel, R, budgets: Budgets = DEFAULT_BUDGETS,
           verify: bool = True) -> ReducedModel:
    """Reduced model; its projectives and injectives are checked against the Bongartz completions."""
    members = make_rigid(model, _members(R)).members
    reduced = ReducedModel(model, members)
    logger.info(f"Reduced {model.name} along {'+'.join(members) or '0'}: {len(reduced.objects())} objects remain")
    if verify and reduced.objects():
        top = set(bongartz(model, members, MAX, budgets).members) - set(members)
        bottom = set(bongartz(model, members, MIN, budgets).members) - set(members)
        if set(reduced.projectives()) != top:
            raise InvariantViolation(
                f"projectives of {reduced.name} are {sorted(reduced.projectives())}, expected {sorted(top)}"
            )
        if set(reduced.injectives()) != bottom:
            raise InvariantViolation(
                f"injectives of {reduced.name} are {sorted(reduced.injectives())}, expected {sorted(bottom)}"
            )
    return reduced


# Bongartz completions

class BongartzResult(BaseModel):
    schema_version: int = 1
    rigid: List[str]
    direction: str
    members: List[str]
    witnesses: List[Dict]
    constructive_complete: bool


def _extremum(poset: SiltingPoset, members: Sequence[str], direction: str) -> int:
    candidates = poset.within(members)
    if not candidates:
        raise NoSiltingExtension(f"no silting subcategory contains {'+'.join(members) or '0'}")
    for k in candidates:
        if direction == MAX and all(poset.geq(k, j) for j in candidates):
            return k
        if direction == MIN and all(poset.geq(j, k) for j in candidates):
            return k
    raise NonUniqueExtremum(f"siltings containing {'+'.join(members)} have no unique {direction}imum")


def _completion_witness(model: FiniteZeroAuslanderModel, members: Sequence[str], y: str,
                        direction: str) -> Optional[Conflation]:
    """max: u ↣ r' ↠ y with E(R, u) = 0; min: y ↣ r' ↠ v with E(v, R) = 0; r' ∈ add(R ∪ proj-inj)."""
    allowed = set(members) | set(model.projective_injectives())
    if y in allowed:
        return Conflation((), (y,), (y,)) if direction == MAX else Conflation((y,), (y,), ())
    for other in multisets(model.objects(), 2, 2):
        if not other:
            continue
        if direction == MAX:
            if not model.ext_vanishes(members, other):
                continue
            classes = model.ext_classes((y,), other)
        else:
            if not model.ext_vanishes(other, members):
                continue
            classes = model.ext_classes(other, (y,))
        for ext in classes[1:]:
            try:
                mid = model.middle(ext)
            except RealizationUnavailable:
                continue
            if in_add(mid, allowed):
                if direction == MAX:
                    return Conflation(other, mid, (y,), ext)
                return Conflation((y,), mid, other, ext)
    return None


def bongartz(model: FiniteZeroAuslanderModel, R, direction: str = MAX,
             budgets: Budgets = DEFAULT_BUDGETS, poset: Optional[SiltingPoset] = None) -> BongartzResult:
    """Maximum (or minimum) silting containing R, with a constructive cross-check."""
    members = model.normalize(set(_members(R)))
    if direction not in (MAX, MIN):
        raise ValueError(f"unknown direction {direction!r}")
    if poset is None:
        poset = cached_poset(model, budgets.poset_nodes)
    found = poset.nodes[_extremum(poset, members, direction)].members

    ends = model.injectives() if direction == MAX else model.projectives()
    witnesses = []
    built: Set[str] = set(members) | set(model.projective_injectives())
    complete = True
    for y in ends:
        witness = _completion_witness(model, members, y, direction)
        if witness is None:
            complete = False
            logger.warning(f"No constructive Bongartz witness for {y} over {'+'.join(members) or '0'}")
            continue
        witnesses.append({"end": y, **witness.as_dict()})
        built |= set(witness.left if direction == MAX else witness.right)
    if complete and built != set(found):
        raise InvariantViolation(
            f"constructive {direction} completion {sorted(built)} differs from the poset extremum {sorted(found)}"
        )
    return BongartzResult(rigid=list(members), direction=direction, members=list(found),
                          witnesses=witnesses, constructive_complete=complete)


def bongartz_silting(model: FiniteZeroAuslanderModel, R, direction: str = MAX,
                     budgets: Budgets = DEFAULT_BUDGETS) -> RigidSubcat:
    return make_rigid(model, bongartz(model, R, direction, budgets).members)


# Cotorsion-pair witnesses

class GcpWitness(BaseModel):
    object: str
    side: str
    left: List[str]
    middle: List[str]
    right: List[str]
    coordinates: List[str]


class GcpReport(BaseModel):
    schema_version: int = 1
    rigid: List[str]
    bound: int
    witnesses: List[GcpWitness]


def _ordered_sums(members: Sequence[str], bound: int, permuted: bool) -> List[ObjectSum]:
    sums = multisets(members, bound)
    if not permuted:
        return sums
    by_size: Dict[int, List[ObjectSum]] = {}
    for s in sums:
        by_size.setdefault(len(s), []).append(s)
    return [s for size in sorted(by_size) for s in reversed(by_size[size])]


def find_witness(model: FiniteZeroAuslanderModel, x: ObjectSum, members: Sequence[str], side: str,
                 bound: int, permuted: bool = False) -> Conflation:
    """left: x ↣ b ↠ c with c ∈ add(R), b ∈ R^⊥; right: a ↣ b' ↠ x with a ∈ add(R), b' ∈ ^⊥R."""
    x = tuple(x)
    for r_sum in _ordered_sums(members, bound, permuted):
        if side == LEFT:
            classes = model.ext_classes(r_sum, x, permuted)
        else:
            classes = model.ext_classes(x, r_sum, permuted)
        for ext in classes:
            try:
                mid = model.middle(ext)
            except RealizationUnavailable:
                continue
            if side == LEFT and model.ext_vanishes(members, mid):
                return Conflation(x, mid, r_sum, ext)
            if side == RIGHT and model.ext_vanishes(mid, members):
                return Conflation(r_sum, mid, x, ext)
    raise WitnessSearchExhausted(
        f"no {side} witness for {'+'.join(x) or '0'} over add({'+'.join(members) or '0'})", bound=bound
    )


def check_gcp(model: FiniteZeroAuslanderModel, R, budgets: Budgets = DEFAULT_BUDGETS) -> GcpReport:
    """Left and right witnesses for every indecomposable; raises WitnessSearchExhausted if one is missing."""
    members = model.normalize(_members(R))
    witnesses = []
    for x in model.objects():
        for side in (LEFT, RIGHT):
            w = find_witness(model, (x,), members, side, budgets.search_multiplicity)
            d = w.as_dict()
            witnesses.append(GcpWitness(object=x, side=side, left=d["left"], middle=d["middle"],
                                        right=d["right"], coordinates=d["coordinates"]))
    return GcpReport(rigid=list(members), bound=budgets.search_multiplicity, witnesses=witnesses)


def _approx(model: FiniteZeroAuslanderModel, members: Sequence[str], x: ObjectSum, bound: int,
            permuted: bool) -> ObjectSum:
    left = find_witness(model, x, members, LEFT, bound, permuted)
    right = find_witness(model, left.middle, members, RIGHT, bound, permuted)
    return model.normalize(strip(right.middle, members))


def approx_functor_F(model: FiniteZeroAuslanderModel, R, x, budgets: Budgets = DEFAULT_BUDGETS) -> ObjectSum:
    """Image of x in the reduced category, as ambient ids with R stripped."""
    members = model.normalize(_members(R))
    x = (x,) if isinstance(x, str) else tuple(x)
    image = _approx(model, members, x, budgets.search_multiplicity, permuted=False)
    if is_choice_independence_enabled():
        again = _approx(model, members, x, budgets.search_multiplicity, permuted=True)
        if again != image:
            raise InvariantViolation(
                f"F({'+'.join(x)}) depends on witness choice: {'+'.join(image) or '0'} vs {'+'.join(again) or '0'}"
            )
    return image


# Thick closure

class ThickClosureState(BaseModel):
    generators: List[str]
    members: List[str]
    log: List[str]
    status: str
    fast_path_agrees: bool


def conflation_catalog(model: FiniteZeroAuslanderModel, multiplicity: int) -> List[Conflation]:
    """All enumerated conflations with nonzero class and ends of bounded size."""
    key = ("conflations", multiplicity)
    catalog = model.cache.get(key)
    if catalog is not None:
        return catalog
    sums = [s for s in multisets(model.objects(), multiplicity, multiplicity) if s]
    catalog = []
    for c in sums:
        for a in sums:
            if not model.ext_total(c, a):
                continue
            for ext in model.ext_classes(c, a)[1:]:
                try:
                    catalog.append(Conflation(a, model.middle(ext), c, ext))
                except RealizationUnavailable:
                    continue
    model.cache[key] = catalog
    logger.debug(f"Conflation catalog of {model.name}: {len(catalog)} entries")
    return catalog


def thick_closure(model: FiniteZeroAuslanderModel, R, budgets: Budgets = DEFAULT_BUDGETS) -> ThickClosureState:
    """Saturate under the two-out-of-three rule on catalogued conflations."""
    generators = model.normalize(set(_members(R)))
    catalog = conflation_catalog(model, budgets.closure_multiplicity)
    members = set(generators)
    log = []
    status = "budget-limited"
    for step in range(budgets.closure_passes):
        grew = False
        for conf in catalog:
            ends = (conf.left, conf.middle, conf.right)
            inside = [in_add(part, members) for part in ends]
            if sum(inside) == 2:
                missing = ends[inside.index(False)]
                new = set(missing) - members
                if new:
                    members |= new
                    grew = True
                    log.append(f"pass {step}: {'+'.join(conf.left) or '0'} > {'+'.join(conf.middle) or '0'} "
                               f"> {'+'.join(conf.right) or '0'} adds {'+'.join(sorted(new))}")
        if not grew:
            status = "closed"
            break
    fast = set(generators)
    for conf in catalog:
        ends = (conf.left, conf.middle, conf.right)
        inside = [in_add(part, generators) for part in ends]
        if sum(inside) == 2:
            fast |= set(ends[inside.index(False)])
    agrees = fast == members
    if not agrees:
        logger.debug(f"Single-step candidate for {'+'.join(generators) or '0'} differs from saturation")
    return ThickClosureState(generators=list(generators), members=list(model.normalize(members)),
                             log=log, status=status, fast_path_agrees=agrees)


class ThickVerdict(BaseModel):
    value: Optional[bool]
    reason: str
    certificate: List[str] = []


def thick_equal(model: FiniteZeroAuslanderModel, R1, R2, budgets: Budgets = DEFAULT_BUDGETS) -> ThickVerdict:
    """True, False or None (undecided) for thick(R1) = thick(R2)."""
    a, b = model.normalize(set(_members(R1))), model.normalize(set(_members(R2)))
    if set(a) == set(b):
        return ThickVerdict(value=True, reason="identical")
    sa, sb = is_silting(model, a), is_silting(model, b)
    if sa and sb:
        return ThickVerdict(value=True, reason="both silting")
    if sa != sb:
        return ThickVerdict(value=False, reason="exactly one is silting",
                            certificate=[f"silting: {'+'.join(a if sa else b)}"])
    if len(a) != len(b):
        return ThickVerdict(value=False, reason="different number of members",
                            certificate=[f"{len(a)} != {len(b)}"])
    za, zb = len(perp(model, a)) - len(a), len(perp(model, b)) - len(b)
    if za != zb:
        return ThickVerdict(value=False, reason="reduced registries differ in size",
                            certificate=[f"{za} != {zb}"])
    ca, cb = thick_closure(model, a, budgets), thick_closure(model, b, budgets)
    if set(a) <= set(cb.members) and set(b) <= set(ca.members):
        return ThickVerdict(value=True, reason="mutual membership",
                            certificate=ca.log + cb.log)
    for gens, other in ((a, b), (b, a)):
        for g in gens:
            if g in other:
                continue
            try:
                image = approx_functor_F(model, other, g, budgets)
            except WitnessSearchExhausted as e:
                logger.debug(f"Separation test skipped {g}: {str(e)}")
                continue
            if image:
                return ThickVerdict(value=False, reason="separating generator",
                                    certificate=[f"F_{'+'.join(other)}({g}) = {'+'.join(image)}"])
    return ThickVerdict(value=None, reason="undecided at the search bound")


# Bijections and coherence

class RigidBijectionReport(BaseModel):
    schema_version: int = 1
    rigid: List[str]
    forward: List[Tuple[List[str], List[str]]]
    roundtrip: bool
    all_in_perp: bool
    ambient_silting: int
    reduced_silting: int
    order_preserved: bool


def rigid_bijection(model: FiniteZeroAuslanderModel, R, budgets: Budgets = DEFAULT_BUDGETS) -> RigidBijectionReport:
    """Q ⊇ R in the ambient against rigid subcategories of the reduced model."""
    members = model.normalize(set(_members(R)))
    reduced = reduce(model, members, budgets)
    zr = set(perp(model, members))
    above = [Q for Q in enumerate_rigid(model) if set(members) <= set(Q.members)]
    forward = {Q.key: reduced.normalize(strip(Q.members, members)) for Q in above}
    all_in_perp = all(set(Q.members) <= zr for Q in above)
    reduced_rigid = {Q.key for Q in enumerate_rigid(reduced)}
    images = {frozenset(v) for v in forward.values()}
    roundtrip = (
        images == reduced_rigid
        and len(images) == len(above)
        and all(frozenset(reduced.lift(v)) == k for k, v in forward.items())
    )

    ambient_poset = cached_poset(model, budgets.poset_nodes)
    ambient_nodes = ambient_poset.within(members)
    if reduced.objects():
        reduced_poset = explore_silt_poset(reduced, budgets.poset_nodes)
        reduced_count = len(reduced_poset)
        order_preserved = reduced_count == len(ambient_nodes)
        try:
            image = {i: reduced_poset.index(strip(ambient_poset.nodes[i].members, members)) for i in ambient_nodes}
        except KeyError:
            image = {}
            order_preserved = False
        for i in image:
            for j in image:
                if ambient_poset.geq(i, j) != reduced_poset.geq(image[i], image[j]):
                    order_preserved = False
    else:
        reduced_count = 1
        order_preserved = len(ambient_nodes) == 1
    return RigidBijectionReport(
        rigid=list(members),
        forward=[(list(Q.members), list(forward[Q.key])) for Q in above],
        roundtrip=roundtrip,
        all_in_perp=all_in_perp,
        ambient_silting=len(ambient_nodes),
        reduced_silting=reduced_count,
        order_preserved=order_preserved,
    )


class ReductionCoherenceReport(BaseModel):
    schema_version: int = 1
    first: List[str]
    second: List[str]
    registry_match: bool
    hom_match: bool
    ext_match: bool
    silting_match: bool


def _silting_sets(model: FiniteZeroAuslanderModel, budgets: Budgets) -> Set[FrozenSet[str]]:
    if not model.objects():
        return {frozenset()}
    return {node.key for node in explore_silt_poset(model, budgets.poset_nodes).nodes}


def compare_reductions(model: FiniteZeroAuslanderModel, R, Q, budgets: Budgets = DEFAULT_BUDGETS) -> ReductionCoherenceReport:
    """reduce(reduce(C, R), Q∖R) against reduce(C, Q) for rigid Q ⊇ R."""
    r = model.normalize(set(_members(R)))
    q = model.normalize(set(_members(Q)))
    if not set(r) <= set(q):
        raise ValueError("the second rigid subcategory must contain the first")
    once = reduce(model, r, budgets)
    twice = reduce(once, strip(q, r), budgets)
    direct = reduce(model, q, budgets)
    objects = twice.objects()
    registry = set(objects) == set(direct.objects())
    homs = registry and all(twice.hom_dim(x, y) == direct.hom_dim(x, y) for x in objects for y in objects)
    exts = registry and all(twice.ext_dim(x, y) == direct.ext_dim(x, y) for x in objects for y in objects)
    silting = registry and _silting_sets(twice, budgets) == _silting_sets(direct, budgets)
    return ReductionCoherenceReport(first=list(r), second=list(q), registry_match=registry,
                                    hom_match=homs, ext_match=exts, silting_match=silting)
