"""The picture category of a finite 0-Auslander category.

Objects are the thick classes of rigid subcategories, each carried by a
canonical representative R and its reduced model. A morphism out of [R] is
a rigid subcategory of the reduced model; its target is the class of R
together with that payload. Composition moves payloads between
representatives with the approximation functor F.
"""
from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from check_flags import is_certificates_enabled
from config import DEFAULT_BUDGETS, Budgets
from errors import InvariantViolation, UndecidedIdentity
from models import FiniteZeroAuslanderModel, ObjectSum, RigidSubcat, enumerate_rigid, make_rigid, strip
from reduction import MAX, approx_functor_F, bongartz, check_gcp, reduce, thick_closure, thick_equal
from silting import brute_force_siltings, is_silting

logger = logging.getLogger(__name__)

ROOT = "A"
SINK = "O"


@dataclass
class PictureObject:
    id: str
    representative: RigidSubcat
    reduced: FiniteZeroAuslanderModel = field(repr=False)
    members: List[RigidSubcat] = field(default_factory=list)
    provenance: List[Dict[str, Any]] = field(default_factory=list)


@dataclass(frozen=True)
class PictureMorphism:
    id: str
    source: str
    target: str
    payload: RigidSubcat
    full: ObjectSum

    @property
    def rank(self) -> int:
        return len(self.payload)

    @property
    def is_identity(self) -> bool:
        return not self.payload.members


def object_id(representative: RigidSubcat, root: bool, sink: bool) -> str:
    if sink:
        return SINK
    if root:
        return ROOT
    return f"{ROOT}/{representative.label}"


class PictureCategory:
    """Finite category with an explicit composition table; immutable once built."""

    def __init__(self, model: FiniteZeroAuslanderModel, objects: Sequence[PictureObject],
                 morphisms: Sequence[PictureMorphism], classes: Dict[FrozenSet[str], str],
                 budgets: Budgets = DEFAULT_BUDGETS):
        self.model = model
        self.budgets = budgets
        self.objects: Tuple[PictureObject, ...] = tuple(objects)
        self.morphisms: Tuple[PictureMorphism, ...] = tuple(morphisms)
        self.composition: Dict[Tuple[str, str], str] = {}
        self._classes = dict(classes)
        self._objects = {o.id: o for o in self.objects}
        self._morphisms = {m.id: m for m in self.morphisms}
        self._lookup = {(m.source, m.payload.key): m for m in self.morphisms}
        self._memo: Dict[Tuple[FrozenSet[str], str], ObjectSum] = {}
        self._lock = threading.Lock()
        self._factorizations: Optional[Dict[str, List[Tuple[str, str]]]] = None

    @property
    def root(self) -> str:
        return self.objects[0].id

    @property
    def sink(self) -> str:
        return self.objects[-1].id

    def object(self, object_id: str) -> PictureObject:
        return self._objects[object_id]

    def morphism(self, morphism_id: str) -> PictureMorphism:
        return self._morphisms[morphism_id]

    def class_of(self, members: Iterable[str]) -> str:
        return self._classes[frozenset(members)]

    def find(self, source: str, payload: Iterable[str]) -> Optional[PictureMorphism]:
        return self._lookup.get((source, frozenset(payload)))

    def out_of(self, x: str) -> List[PictureMorphism]:
        return [m for m in self.morphisms if m.source == x]

    def into(self, y: str) -> List[PictureMorphism]:
        return [m for m in self.morphisms if m.target == y]

    def hom(self, x: str, y: str) -> List[PictureMorphism]:
        return [m for m in self.morphisms if m.source == x and m.target == y]

    def identity(self, x: str) -> PictureMorphism:
        return self._lookup[(x, frozenset())]

    def compose(self, f: PictureMorphism, g: PictureMorphism) -> PictureMorphism:
        """g ∘ f, read from the table."""
        return self._morphisms[self.composition[(f.id, g.id)]]

    # Moving payloads between representatives

    def transport(self, payload: Iterable[str], representative: Sequence[str]) -> ObjectSum:
        """Images under F_representative, with the representative stripped."""
        rep = self.model.normalize(set(representative))
        images = set()
        for u in payload:
            if u in rep:
                continue
            key = (frozenset(rep), u)
            image = self._memo.get(key)
            if image is None:
                image = approx_functor_F(self.model, rep, u, self.budgets)
                with self._lock:
                    self._memo[key] = image
            images |= set(image)
        return self.model.normalize(images - set(rep))

    def relocate(self, representative: Sequence[str], payload: Iterable[str]) -> Optional[PictureMorphism]:
        """The morphism out of [representative] matching `payload` over that representative."""
        target = self.object(self.class_of(representative))
        canonical = target.representative.members
        if set(representative) == set(canonical):
            moved = self.model.normalize(set(payload) - set(canonical))
        else:
            moved = self.transport(payload, canonical)
        return self.find(target.id, moved)

    def _composite(self, f: PictureMorphism, g: PictureMorphism) -> PictureMorphism:
        middle = self.object(f.target).representative.members
        if set(f.full) == set(middle):
            moved = g.payload.members
        else:
            moved = self.transport(g.payload.members, f.full)
        full = self.model.normalize(set(f.full) | set(moved))
        if not self.model.is_rigid(full):
            raise InvariantViolation(f"composite of {f.id} and {g.id} is not rigid: {'+'.join(full)}")
        rep = self.object(f.source).representative.members
        h = self.find(f.source, set(full) - set(rep))
        if h is None or h.target != g.target:
            raise InvariantViolation(f"composite of {f.id} and {g.id} does not land in {g.target}")
        return h

    # Factorizations

    def factorizations(self) -> Dict[str, List[Tuple[str, str]]]:
        """h -> all (f, g) with g ∘ f = h."""
        if self._factorizations is None:
            table: Dict[str, List[Tuple[str, str]]] = {m.id: [] for m in self.morphisms}
            for (f, g), h in self.composition.items():
                table[h].append((f, g))
            self._factorizations = table
        return self._factorizations

    # Export

    def as_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "schema": 1,
            "model": self.model.name,
            "root": self.root,
            "sink": self.sink,
            "objects": [
                {
                    "id": o.id,
                    "representative": list(o.representative.members),
                    "reduced_objects": list(o.reduced.objects()),
                    "identified": [list(m.members) for m in o.members],
                }
                for o in self.objects
            ],
            "morphisms": [
                {"id": m.id, "source": m.source, "target": m.target,
                 "payload": list(m.payload.members), "rank": m.rank}
                for m in self.morphisms
            ],
            "composition": [
                {"first": f, "second": g, "composite": h} for (f, g), h in self.composition.items()
            ],
        }
        if is_certificates_enabled():
            doc["provenance"] = {o.id: o.provenance for o in self.objects}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph picture {"]
        for o in self.objects:
            lines.append(f'  "{o.id}";')
        for m in self.morphisms:
            if m.is_identity:
                continue
            lines.append(f'  "{m.source}" -> "{m.target}" [label="{m.payload.label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"{len(self.objects)} objects, {len(self.morphisms)} morphisms"]
        for o in self.objects:
            lines.append(f"{o.id}: {o.representative.label} ({len(o.members)} rigid subcategories)")
        for m in self.morphisms:
            if not m.is_identity:
                lines.append(f"{m.id}: {m.source} -> {m.target} [{m.payload.label}]")
        return "\n".join(lines) + "\n"


# Construction

def _classify(model: FiniteZeroAuslanderModel, budgets: Budgets) -> List[List[Tuple[RigidSubcat, Dict[str, Any]]]]:
    """Group rigid subcategories by thick closure: root first, sink last."""
    root: List[Tuple[RigidSubcat, Dict[str, Any]]] = []
    sink: List[Tuple[RigidSubcat, Dict[str, Any]]] = []
    middle: List[List[Tuple[RigidSubcat, Dict[str, Any]]]] = []
    for R in enumerate_rigid(model):
        if is_silting(model, R):
            sink.append((R, {"members": list(R.members), "reason": "silting"}))
            continue
        if not R.members:
            root.append((R, {"members": [], "reason": "zero"}))
            continue
        for group in middle:
            generator = group[0][0]
            if len(generator) != len(R):
                continue
            verdict = thick_equal(model, generator, R, budgets)
            if verdict.value is None:
                raise UndecidedIdentity(
                    f"cannot decide thick({generator.label}) = thick({R.label}): {verdict.reason}",
                    pair=(generator.label, R.label),
                )
            if verdict.value:
                group.append((R, {"members": list(R.members), "reason": verdict.reason,
                                  "certificate": verdict.certificate}))
                break
        else:
            middle.append([(R, {"members": list(R.members), "reason": "generator"})])
    return [g for g in [root] + middle + [sink] if g]


def _canonical(model: FiniteZeroAuslanderModel, group: Sequence[RigidSubcat], budgets: Budgets) -> RigidSubcat:
    """Generator's Bongartz completion cut down to its thick closure, when that stays in the class."""
    generator = group[0]
    if not generator.members or is_silting(model, generator):
        return generator
    top = bongartz(model, generator, MAX, budgets).members
    closure = thick_closure(model, generator, budgets).members
    candidate = frozenset(top) & frozenset(closure)
    if candidate and candidate in {R.key for R in group}:
        return make_rigid(model, candidate)
    return generator


def build_picture_category(model: FiniteZeroAuslanderModel, budgets: Budgets = DEFAULT_BUDGETS,
                           threads: int = 1) -> PictureCategory:
    """Objects, then morphisms, then the composition table; each phase checked before the next."""
    groups = _classify(model, budgets)
    classes: Dict[FrozenSet[str], str] = {}
    reps = []
    for k, group in enumerate(groups):
        members = [R for R, _ in group]
        rep = _canonical(model, members, budgets)
        oid = object_id(rep, root=k == 0, sink=is_silting(model, rep))
        reps.append((oid, rep, group))
        for R in members:
            classes[R.key] = oid
    logger.info(f"Picture category of {model.name}: {len(reps)} objects")

    def reduce_rep(item):
        return reduce(model, item[1], budgets)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reduced_models = list(pool.map(reduce_rep, reps))
    else:
        reduced_models = [reduce_rep(item) for item in reps]

    certificates = is_certificates_enabled()
    objects = []
    for (oid, rep, group), reduced in zip(reps, reduced_models):
        provenance = [info for _, info in group] if certificates else []
        if certificates:
            provenance.append({"gcp": check_gcp(model, rep, budgets).model_dump()})
        objects.append(PictureObject(oid, rep, reduced, [R for R, _ in group], provenance))

    morphisms = []
    for obj in objects:
        rep = obj.representative.members
        for Q in enumerate_rigid(obj.reduced):
            full = model.normalize(set(rep) | set(Q.members))
            target = classes.get(frozenset(full))
            if target is None:
                raise InvariantViolation(f"{'+'.join(full)} is rigid but was never classified")
            morphisms.append(PictureMorphism(f"m{len(morphisms)}", obj.id, target, Q, full))

    cat = PictureCategory(model, objects, morphisms, classes, budgets)
    _check_hom_sets(cat)

    for f in cat.morphisms:
        for g in cat.out_of(f.target):
            cat.composition[(f.id, g.id)] = cat._composite(f, g).id
    failures = check_associativity(cat)
    if failures:
        raise InvariantViolation(f"picture category is not associative: {failures[0]}")
    logger.info(f"Picture category of {model.name}: {len(cat.morphisms)} morphisms, "
                f"{len(cat.composition)} composable pairs")
    return cat


def _check_hom_sets(cat: PictureCategory) -> None:
    model = cat.model
    if len(cat.out_of(cat.root)) != len(enumerate_rigid(model)):
        raise InvariantViolation("morphisms out of the root do not match the rigid subcategories")
    for obj in cat.objects:
        reduced = obj.reduced
        expected = len(brute_force_siltings(reduced)) if reduced.objects() else 1
        found = len(cat.hom(obj.id, cat.sink))
        if found != expected:
            raise InvariantViolation(f"Hom({obj.id}, {cat.sink}) has {found} morphisms, "
                                     f"{reduced.name} has {expected} siltings")
        if not cat.hom(cat.root, obj.id):
            raise InvariantViolation(f"no morphism from {cat.root} to {obj.id}")


def check_associativity(cat: PictureCategory) -> List[str]:
    failures = []
    for f in cat.morphisms:
        ident = cat.identity(f.source)
        if cat.composition.get((ident.id, f.id)) != f.id:
            failures.append(f"{f.id} after the identity of {f.source} is not {f.id}")
        ident = cat.identity(f.target)
        if cat.composition.get((f.id, ident.id)) != f.id:
            failures.append(f"identity of {f.target} after {f.id} is not {f.id}")
        for g in cat.out_of(f.target):
            gf = cat.composition[(f.id, g.id)]
            for h in cat.out_of(g.target):
                left = cat.composition[(gf, h.id)]
                right = cat.composition[(f.id, cat.composition[(g.id, h.id)])]
                if left != right:
                    failures.append(f"({h.id} {g.id}) {f.id} = {right} but {h.id} ({g.id} {f.id}) = {left}")
    return failures


# Cubical structure

class CubicalReport(BaseModel):
    schema_version: int = 1
    morphisms: int
    rank_additive: bool
    boolean_lattices: bool
    first_factors_determine: bool
    last_factors_determine: bool
    failures: List[str]
    passed: bool


def _first_factors(cat: PictureCategory, m: PictureMorphism) -> List[PictureMorphism]:
    ids = sorted({f for f, _ in cat.factorizations()[m.id]}, key=lambda i: int(i[1:]))
    return [cat.morphism(i) for i in ids]


def _last_factors(cat: PictureCategory, m: PictureMorphism) -> List[PictureMorphism]:
    ids = sorted({g for _, g in cat.factorizations()[m.id]}, key=lambda i: int(i[1:]))
    return [cat.morphism(i) for i in ids]


def _factors_through(cat: PictureCategory, f: PictureMorphism, h: PictureMorphism) -> bool:
    """h = g ∘ f for some g."""
    return any(cat.composition.get((f.id, g.id)) == h.id for g in cat.out_of(f.target))


def check_cubical(cat: PictureCategory) -> CubicalReport:
    failures = []
    additive = True
    for (f, g), h in cat.composition.items():
        if cat.morphism(h).rank != cat.morphism(f).rank + cat.morphism(g).rank:
            additive = False
            failures.append(f"rank of {h} is not rank {f} + rank {g}")

    lattices = True
    firsts, lasts = {}, {}
    for m in cat.morphisms:
        first = _first_factors(cat, m)
        firsts[m.id] = frozenset(f.id for f in first)
        lasts[m.id] = frozenset(g.id for g in _last_factors(cat, m))
        payloads = {f.payload.key for f in first}
        subsets = {frozenset(c) for size in range(m.rank + 1) for c in combinations(m.payload.members, size)}
        if len(first) != 2 ** m.rank or payloads != subsets:
            lattices = False
            failures.append(f"first factors of {m.id} are not the subsets of {m.payload.label}")
            continue
        for a in first:
            for b in first:
                if _factors_through(cat, a, b) != (a.payload.key <= b.payload.key):
                    lattices = False
                    failures.append(f"factorization order of {m.id} disagrees with inclusion at {a.id}, {b.id}")

    first_unique = len(set(firsts.values())) == len(firsts)
    last_unique = len(set(lasts.values())) == len(lasts)
    if not first_unique:
        failures.append("two morphisms share their first factors")
    if not last_unique:
        failures.append("two morphisms share their last factors")
    passed = additive and lattices and first_unique and last_unique
    return CubicalReport(morphisms=len(cat.morphisms), rank_additive=additive, boolean_lattices=lattices,
                         first_factors_determine=first_unique, last_factors_determine=last_unique,
                         failures=failures, passed=passed)


class InterchangeReport(BaseModel):
    """Pairwise against joint compatibility of rank-one morphisms."""

    schema_version: int = 1
    checked: int
    discrepancies: List[str]
    passed: bool


def _compatibility(cat: PictureCategory, groups: Dict[str, List[PictureMorphism]],
                   factors: Dict[str, FrozenSet[str]], label: str) -> Tuple[int, List[str]]:
    max_rank = max((m.rank for m in cat.morphisms), default=0)
    checked = 0
    discrepancies = []
    for anchor, arrows in groups.items():
        candidates = [m for m in cat.morphisms if (m.source if label == "I1" else m.target) == anchor]
        by_rank: Dict[int, List[FrozenSet[str]]] = {}
        for m in candidates:
            by_rank.setdefault(m.rank, []).append(factors[m.id])
        pairs = by_rank.get(2, [])
        for size in range(1, min(len(arrows), max_rank + 1) + 1):
            for combo in combinations(arrows, size):
                checked += 1
                ids = {a.id for a in combo}
                pairwise = all(any({a, b} <= s for s in pairs) for a, b in combinations(sorted(ids), 2))
                joint = any(ids <= s for s in by_rank.get(size, []))
                if pairwise != joint:
                    discrepancies.append(f"{label} at {anchor}: {'+'.join(sorted(ids))} pairwise {pairwise}, "
                                         f"jointly {joint}")
    return checked, discrepancies


def check_i1_i2(cat: PictureCategory) -> InterchangeReport:
    """Rank-one morphisms out of (into) one object that are pairwise first (last) factors are jointly so."""
    rank_one_first = {m.id: frozenset(f.id for f in _first_factors(cat, m) if f.rank == 1) for m in cat.morphisms}
    rank_one_last = {m.id: frozenset(g.id for g in _last_factors(cat, m) if g.rank == 1) for m in cat.morphisms}
    out_groups = {o.id: [m for m in cat.out_of(o.id) if m.rank == 1] for o in cat.objects}
    in_groups = {o.id: [m for m in cat.into(o.id) if m.rank == 1] for o in cat.objects}
    checked_out, bad_out = _compatibility(cat, out_groups, rank_one_first, "I1")
    checked_in, bad_in = _compatibility(cat, in_groups, rank_one_last, "I2")
    discrepancies = bad_out + bad_in
    return InterchangeReport(checked=checked_out + checked_in, discrepancies=discrepancies,
                             passed=not discrepancies)


# Reduction by projective-injectives

class HomotopyReductionReport(BaseModel):
    schema_version: int = 1
    projective_injectives: List[str]
    object_map: Dict[str, str]
    functorial: bool
    surjective_on_objects: bool
    injective_on_homs: bool
    counit_identity: bool
    unit_natural: bool
    triangle_identities: bool
    fully_faithful: bool
    failures: List[str]
    passed: bool


def homotopy_reduction_check(model: FiniteZeroAuslanderModel, budgets: Budgets = DEFAULT_BUDGETS,
                             cat: Optional[PictureCategory] = None) -> HomotopyReductionReport:
    """λ: T(C) -> T(C/P) for P the projective-injectives, its unit and the inclusion back."""
    pi = model.projective_injectives()
    if cat is None:
        cat = build_picture_category(model, budgets)
    if pi:
        reduced_cat = build_picture_category(reduce(model, pi, budgets), budgets)
    else:
        reduced_cat = cat
    failures = []

    def lam_object(x: str) -> str:
        return reduced_cat.class_of(strip(cat.object(x).representative.members, pi))

    def lam(f: PictureMorphism) -> Optional[PictureMorphism]:
        rep = strip(cat.object(f.source).representative.members, pi)
        return reduced_cat.relocate(rep, strip(f.payload.members, pi))

    def iota_object(y: str) -> str:
        return cat.class_of(set(reduced_cat.object(y).representative.members) | set(pi))

    def iota(g: PictureMorphism) -> Optional[PictureMorphism]:
        rep = model.normalize(set(reduced_cat.object(g.source).representative.members) | set(pi))
        return cat.relocate(rep, g.payload.members)

    def unit(x: str) -> Optional[PictureMorphism]:
        return cat.find(x, set(pi) - set(cat.object(x).representative.members))

    object_map = {o.id: lam_object(o.id) for o in cat.objects}
    images = {f.id: lam(f) for f in cat.morphisms}

    functorial = True
    for f in cat.morphisms:
        if images[f.id] is None or images[f.id].source != object_map[f.source] \
                or images[f.id].target != object_map[f.target]:
            functorial = False
            failures.append(f"{f.id} has no image over {object_map[f.source]} -> {object_map[f.target]}")
    if functorial:
        for o in cat.objects:
            if not images[cat.identity(o.id).id].is_identity:
                functorial = False
                failures.append(f"identity of {o.id} is not sent to an identity")
        for (f, g), h in cat.composition.items():
            if reduced_cat.compose(images[f], images[g]).id != images[h].id:
                functorial = False
                failures.append(f"image of {h} is not the composite of the images of {f} and {g}")

    surjective = set(object_map.values()) == {o.id for o in reduced_cat.objects}
    if not surjective:
        failures.append("some reduced objects are not hit")

    counit = True
    full_faithful = True
    injective = True
    for y in reduced_cat.objects:
        iy = iota_object(y.id)
        if object_map[iy] != y.id:
            counit = False
            failures.append(f"λ(ι({y.id})) = {object_map[iy]}")
        for g in reduced_cat.out_of(y.id):
            ig = iota(g)
            if ig is None or images[ig.id] is None or images[ig.id].id != g.id:
                counit = False
                failures.append(f"λ(ι({g.id})) differs from {g.id}")
        seen = {}
        for f in cat.out_of(iy):
            image = images[f.id]
            if image is not None and image.id in seen:
                injective = False
                failures.append(f"{f.id} and {seen[image.id]} have the same image")
            elif image is not None:
                seen[image.id] = f.id
        for z in reduced_cat.objects:
            mapped = [iota(g) for g in reduced_cat.hom(y.id, z.id)]
            expected = {m.id for m in cat.hom(iy, iota_object(z.id))}
            if None in mapped or {m.id for m in mapped} != expected or len(set(m.id for m in mapped)) != len(mapped):
                full_faithful = False
                failures.append(f"ι is not bijective on Hom({y.id}, {z.id})")

    units = {o.id: unit(o.id) for o in cat.objects}
    natural = True
    triangles = True
    for o in cat.objects:
        u = units[o.id]
        if u is None or u.target != iota_object(object_map[o.id]):
            natural = False
            failures.append(f"unit at {o.id} does not land in ι(λ({o.id}))")
            continue
        if images[u.id] is None or not images[u.id].is_identity:
            triangles = False
            failures.append(f"λ of the unit at {o.id} is not an identity")
    for y in reduced_cat.objects:
        u = units[iota_object(y.id)]
        if u is None or not u.is_identity:
            triangles = False
            failures.append(f"unit at ι({y.id}) is not an identity")
    if natural:
        for f in cat.morphisms:
            ilf = iota(images[f.id]) if images[f.id] is not None else None
            left = cat.compose(f, units[f.target])
            if ilf is None or cat.compose(units[f.source], ilf).id != left.id:
                natural = False
                failures.append(f"unit is not natural at {f.id}")

    passed = functorial and surjective and injective and counit and natural and triangles and full_faithful
    if not passed:
        logger.warning(f"Projective-injective reduction of {model.name} fails: {failures[0]}")
    return HomotopyReductionReport(
        projective_injectives=list(pi),
        object_map=object_map,
        functorial=functorial,
        surjective_on_objects=surjective,
        injective_on_homs=injective,
        counit_identity=counit,
        unit_natural=natural,
        triangle_identities=triangles,
        fully_faithful=full_faithful,
        failures=failures,
        passed=passed,
    )


def export(cat: PictureCategory, fmt: str = "json") -> str:
    if fmt == "dot":
        return cat.to_dot()
    if fmt == "json":
        return cat.to_json()
    if fmt == "text":
        return cat.to_text()
    raise ValueError(f"unknown export format {fmt!r}")
