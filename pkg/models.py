"""Finite 0-Auslander extriangulated categories behind one interface.

Objects are referred to by registry ids (strings). A non-indecomposable
object is an `ObjectSum`: a tuple of ids sorted by registry position, with
repetition for multiplicity and `()` for zero.
"""
from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from errors import NotRigid, RankUnknown, RealizationUnavailable
from exact_kernel import ONE, ZERO, Vector, unit_vector

logger = logging.getLogger(__name__)

ObjectSum = Tuple[str, ...]

COEFFICIENT_CHOICES = (Fraction(0), Fraction(1), Fraction(-1))


def coordinate_patterns(dimension: int, permuted: bool = False) -> List[Vector]:
    """Coordinate vectors tried when searching E(c, a) for a witness.

    Every {0, 1, -1} vector when the space has dimension at most 2; otherwise
    zero, the signed basis vectors, e_i +- e_j and the all-ones vector.
    Zero always comes first.
    """
    if dimension == 0:
        return [()]
    if dimension <= 2:
        patterns = [tuple(p) for p in product(COEFFICIENT_CHOICES, repeat=dimension)]
        patterns.sort(key=lambda p: (sum(1 for c in p if c), [COEFFICIENT_CHOICES.index(c) for c in p]))
    else:
        patterns = [tuple(ZERO for _ in range(dimension))]
        for i in range(dimension):
            e = unit_vector(dimension, i)
            patterns.append(e)
            patterns.append(tuple(-c for c in e))
        for i, j in combinations(range(dimension), 2):
            for sign in (ONE, -ONE):
                v = [ZERO] * dimension
                v[i], v[j] = ONE, sign
                patterns.append(tuple(v))
        patterns.append(tuple(ONE for _ in range(dimension)))
    if permuted:
        patterns = patterns[:1] + list(reversed(patterns[1:]))
    return patterns


@dataclass(frozen=True)
class ExtClass:
    """ξ ∈ E(c, a), realized by a conflation a ↣ middle ↠ c.

    Coordinates are blocked by summand pairs (c_i, a_j) in c-major order.
    """

    source: ObjectSum
    target: ObjectSum
    coordinates: Tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def components(self, model: "FiniteZeroAuslanderModel") -> Dict[Tuple[int, int], Tuple[Fraction, ...]]:
        """Coordinates restricted to each indecomposable summand pair."""
        parts = {}
        for i, j, offset, dim in model.ext_blocks(self.source, self.target):
            parts[(i, j)] = tuple(self.coordinates[offset:offset + dim])
        return parts

    @classmethod
    def assemble(cls, model: "FiniteZeroAuslanderModel", source: ObjectSum, target: ObjectSum,
                 components: Dict[Tuple[int, int], Sequence[Fraction]]) -> "ExtClass":
        coordinates: List[Fraction] = []
        for i, j, _, dim in model.ext_blocks(source, target):
            coordinates.extend(components.get((i, j), (ZERO,) * dim))
        return cls(tuple(source), tuple(target), tuple(coordinates))


@dataclass(frozen=True)
class Conflation:
    """a ↣ middle ↠ c realizing `ext`."""

    left: ObjectSum
    middle: ObjectSum
    right: ObjectSum
    ext: Optional[ExtClass] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "left": list(self.left),
            "middle": list(self.middle),
            "right": list(self.right),
            "coordinates": [str(c) for c in self.ext.coordinates] if self.ext else [],
        }


@dataclass(frozen=True)
class RigidSubcat:
    """Set of indecomposables with the verified E-vanishing pairs."""

    members: ObjectSum
    certificate: Tuple[Tuple[str, str], ...] = ()

    @property
    def key(self) -> frozenset:
        return frozenset(self.members)

    @property
    def label(self) -> str:
        return "+".join(self.members) if self.members else "0"

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[str]:
        return iter(self.members)

    def __contains__(self, x: object) -> bool:
        return x in self.members


class FiniteZeroAuslanderModel(ABC):
    """Abstract finite extriangulated category with Hom, E and realizations."""

    name = "model"
    supports_composition = False

    def __init__(self):
        self._lock = threading.RLock()
        self._ext_cache: Dict[Tuple[str, str], int] = {}
        self._middle_cache: Dict[ExtClass, ObjectSum] = {}
        self._flags: Optional[Dict[str, Tuple[bool, bool]]] = None
        self.cache: Dict[Any, Any] = {}

    # Registry

    @abstractmethod
    def objects(self) -> ObjectSum:
        """Registered indecomposable ids in registry order."""

    def index(self, x: str) -> int:
        return self._positions()[x]

    def _positions(self) -> Dict[str, int]:
        objects = self.objects()
        cached = self.cache.get("positions")
        if cached is None or cached[0] != objects:
            cached = (objects, {x: i for i, x in enumerate(objects)})
            self.cache["positions"] = cached
        return cached[1]

    def normalize(self, objects: Iterable[str]) -> ObjectSum:
        positions = self._positions()
        return tuple(sorted(objects, key=lambda x: (positions.get(x, len(positions)), x)))

    # Hom and E

    @abstractmethod
    def hom_dim(self, x: str, y: str) -> int:
        """dim Hom(x, y) for registered indecomposables."""

    @abstractmethod
    def _ext_dim(self, x: str, y: str) -> int:
        ...

    def ext_dim(self, x: str, y: str) -> int:
        key = (x, y)
        value = self._ext_cache.get(key)
        if value is None:
            value = self._ext_dim(x, y)
            with self._lock:
                self._ext_cache[key] = value
        return value

    def ext_blocks(self, c: ObjectSum, a: ObjectSum) -> List[Tuple[int, int, int, int]]:
        """(i, j, offset, dim) for each summand pair (c_i, a_j), c-major."""
        blocks = []
        offset = 0
        for i, ci in enumerate(c):
            for j, aj in enumerate(a):
                dim = self.ext_dim(ci, aj)
                blocks.append((i, j, offset, dim))
                offset += dim
        return blocks

    def ext_total(self, c: Iterable[str], a: Iterable[str]) -> int:
        a = tuple(a)
        return sum(self.ext_dim(x, y) for x in c for y in a)

    def ext_classes(self, c: ObjectSum, a: ObjectSum, permuted: bool = False) -> List[ExtClass]:
        """Extension classes tried by witness searches, zero first."""
        dim = self.ext_total(c, a)
        return [ExtClass(tuple(c), tuple(a), p) for p in coordinate_patterns(dim, permuted)]

    def hom_basis(self, x: str, y: str) -> List[Any]:
        return [unit_vector(self.hom_dim(x, y), i) for i in range(self.hom_dim(x, y))]

    def compose(self, x: str, y: str, z: str, f: Sequence[Fraction], g: Sequence[Fraction]) -> Vector:
        """Coordinates of g∘f in Hom(x, z) for f ∈ Hom(x, y), g ∈ Hom(y, z)."""
        raise RealizationUnavailable(f"{self.name} has no composition data")

    def identity(self, x: str) -> Vector:
        raise RealizationUnavailable(f"{self.name} has no composition data")

    # Realization

    @abstractmethod
    def _middle(self, ext: ExtClass) -> ObjectSum:
        ...

    def middle(self, ext: ExtClass) -> ObjectSum:
        cached = self._middle_cache.get(ext)
        if cached is not None:
            return cached
        if ext.is_zero:
            result = self.normalize(ext.target + ext.source)
        else:
            result = self.normalize(self._middle(ext))
        with self._lock:
            self._middle_cache[ext] = result
        return result

    def realize(self, ext: ExtClass) -> ObjectSum:
        """Middle computed by the backend itself, bypassing the split shortcut and cache."""
        return self.normalize(self._middle(ext))

    def decompose(self, obj: Any) -> ObjectSum:
        if isinstance(obj, tuple):
            return self.normalize(obj)
        raise TypeError(f"{self.name} cannot decompose {obj!r}")

    # Projective and injective flags

    def _computed_flags(self) -> Dict[str, Tuple[bool, bool]]:
        if self._flags is None:
            objects = self.objects()
            flags = {}
            for x in objects:
                proj = all(self.ext_dim(x, y) == 0 for y in objects)
                inj = all(self.ext_dim(y, x) == 0 for y in objects)
                flags[x] = (proj, inj)
            self._flags = flags
        return self._flags

    def declared_flags(self, x: str) -> Tuple[bool, bool]:
        """Flags as stated by the backend; computed from E unless overridden."""
        return self._computed_flags()[x]

    def computed_flags(self, x: str) -> Tuple[bool, bool]:
        return self._computed_flags()[x]

    def is_projective(self, x: str) -> bool:
        return self.declared_flags(x)[0]

    def is_injective(self, x: str) -> bool:
        return self.declared_flags(x)[1]

    def projectives(self) -> ObjectSum:
        return tuple(x for x in self.objects() if self.is_projective(x))

    def injectives(self) -> ObjectSum:
        return tuple(x for x in self.objects() if self.is_injective(x))

    def projective_injectives(self) -> ObjectSum:
        return tuple(x for x in self.objects() if self.is_projective(x) and self.is_injective(x))

    @property
    def rank(self) -> int:
        """Number of summands of a silting subcategory: the projectives."""
        if not self.objects():
            return 0
        projectives = self.projectives()
        if not projectives or not self.is_rigid(projectives):
            raise RankUnknown(f"{self.name} has no registered silting object")
        return len(projectives)

    def is_reduced(self) -> bool:
        return not self.projective_injectives()

    # Rigidity

    def ext_vanishes(self, xs: Iterable[str], ys: Iterable[str]) -> bool:
        ys = tuple(ys)
        return all(self.ext_dim(x, y) == 0 for x in xs for y in ys)

    def is_rigid(self, ids: Iterable[str]) -> bool:
        ids = tuple(ids)
        return self.ext_vanishes(ids, ids)

    def describe(self) -> Dict[str, Any]:
        objects = self.objects()
        return {
            "name": self.name,
            "objects": list(objects),
            "projective": [x for x in objects if self.is_projective(x)],
            "injective": [x for x in objects if self.is_injective(x)],
        }


# Operations on any model

def hom(model: FiniteZeroAuslanderModel, x: str, y: str) -> List[Any]:
    """Basis of Hom(x, y); representatives when the backend has them."""
    return model.hom_basis(x, y)


def ext(model: FiniteZeroAuslanderModel, x: str, y: str) -> List[ExtClass]:
    """Basis of E(x, y) as unit-coordinate classes."""
    dim = model.ext_dim(x, y)
    return [ExtClass((x,), (y,), unit_vector(dim, i)) for i in range(dim)]


def middle(model: FiniteZeroAuslanderModel, xi: ExtClass) -> ObjectSum:
    return model.middle(xi)


def decompose(model: FiniteZeroAuslanderModel, obj: Any) -> ObjectSum:
    return model.decompose(obj)


def make_rigid(model: FiniteZeroAuslanderModel, ids: Iterable[str]) -> RigidSubcat:
    """Certify rigidity, raising NotRigid with the first failing pair."""
    members = model.normalize(set(ids))
    certificate = []
    for x in members:
        for y in members:
            if model.ext_dim(x, y) != 0:
                raise NotRigid(f"E({x}, {y}) != 0")
            certificate.append((x, y))
    return RigidSubcat(members, tuple(certificate))


def enumerate_rigid(model: FiniteZeroAuslanderModel) -> List[RigidSubcat]:
    """All rigid subsets of the registry: by size, then registry order."""
    cached = model.cache.get("rigid")
    if cached is not None:
        return cached
    objects = [x for x in model.objects() if model.ext_dim(x, x) == 0]
    compatible = {
        (x, y) for x in objects for y in objects
        if model.ext_dim(x, y) == 0 and model.ext_dim(y, x) == 0
    }
    result = [RigidSubcat(())]
    size = 1
    while True:
        found = [
            combo for combo in combinations(objects, size)
            if all((x, y) in compatible for x, y in combinations(combo, 2))
        ]
        if not found:
            break
        result.extend(make_rigid(model, combo) for combo in found)
        size += 1
    model.cache["rigid"] = result
    logger.debug(f"{model.name}: {len(result)} rigid subcategories")
    return result


def strip(objects: Iterable[str], removed: Iterable[str]) -> ObjectSum:
    removed = set(removed)
    return tuple(x for x in objects if x not in removed)


def in_add(objects: Iterable[str], members: Iterable[str]) -> bool:
    members = set(members)
    return all(x in members for x in objects)


def multisets(ids: Sequence[str], max_multiplicity: int, max_total: Optional[int] = None) -> List[ObjectSum]:
    """Multisets over ids ordered by total size, then lexicographically; () first."""
    result: List[Tuple[int, Tuple[int, ...]]] = []
    for counts in product(range(max_multiplicity + 1), repeat=len(ids)):
        total = sum(counts)
        if max_total is not None and total > max_total:
            continue
        result.append((total, tuple(-c for c in counts)))
    result.sort()
    out = []
    for total, negative in result:
        objs: List[str] = []
        for x, c in zip(ids, negative):
            objs.extend([x] * (-c))
        out.append(tuple(objs))
    return out
