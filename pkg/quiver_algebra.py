"""Bound quiver algebras kQ/I with an explicit path basis.

Paths are read left to right: `a.b` is `a` followed by `b`. The basis consists
of the standard paths left after eliminating the leading terms of the ideal,
ordered by (length, arrow names).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path as FilePath
from typing import Dict, List, Sequence, Tuple, Union

from errors import InfiniteDimensional, MalformedSpec
from exact_kernel import (
    FinDimAlgebra,
    ONE,
    Subspace,
    Vector,
    ZERO,
    as_scalar,
    unit_vector,
)

logger = logging.getLogger(__name__)

DEFAULT_PATH_LENGTH = 12


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: Tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def label(self) -> str:
        return ".".join(self.arrows) if self.arrows else f"e{self.source}"


Relation = Tuple[Tuple[Fraction, Tuple[str, ...]], ...]


class BoundQuiverAlgebra:
    """kQ/I with a certified finite path basis and its multiplication table."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[Arrow],
                 relations: Sequence[Relation] = (), max_length: int = DEFAULT_PATH_LENGTH):
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.relations = tuple(relations)
        self._arrow = {a.name: a for a in self.arrows}
        self._check_declarations()
        self.vanishing_length, self.paths, self._reduce_path = self._path_basis(max_length)
        self._index = {p: i for i, p in enumerate(self.paths)}
        self._table = self._multiplication_table()
        logger.info(f"Loaded algebra with {len(self.vertices)} vertices, dimension {self.dimension}")

    @property
    def dimension(self) -> int:
        return len(self.paths)

    def _check_declarations(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedSpec("duplicate vertex names")
        if len(self._arrow) != len(self.arrows):
            raise MalformedSpec("duplicate arrow names")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise MalformedSpec(f"arrow {a.name} references an undeclared vertex")
        for relation in self.relations:
            ends = set()
            for coefficient, word in relation:
                ends.add(self._path_of(word))
            paths = {(p.source, p.target) for p in ends}
            if len(paths) > 1:
                raise MalformedSpec(f"relation {self._relation_label(relation)} mixes non-parallel paths")
            if any(p.length < 2 for p in ends):
                raise MalformedSpec(f"relation {self._relation_label(relation)} has a path shorter than 2")

    @staticmethod
    def _relation_label(relation: Relation) -> str:
        return " + ".join(f"{c}*{'.'.join(w)}" for c, w in relation)

    def _path_of(self, word: Sequence[str]) -> Path:
        if not word:
            raise MalformedSpec("empty path in relation")
        for name in word:
            if name not in self._arrow:
                raise MalformedSpec(f"relation references undeclared arrow {name}")
        for a, b in zip(word, word[1:]):
            if self._arrow[a].target != self._arrow[b].source:
                raise MalformedSpec(f"arrows {a} and {b} do not compose")
        return Path(self._arrow[word[0]].source, self._arrow[word[-1]].target, tuple(word))

    def _paths_up_to(self, length: int) -> List[Path]:
        level = [Path(v, v) for v in self.vertices]
        result = list(level)
        outgoing: Dict[str, List[Arrow]] = {}
        for a in sorted(self.arrows, key=lambda a: a.name):
            outgoing.setdefault(a.source, []).append(a)
        for _ in range(length):
            nxt = [Path(p.source, a.target, p.arrows + (a.name,))
                   for p in level for a in outgoing.get(p.target, [])]
            nxt.sort(key=lambda p: p.arrows)
            if not nxt:
                break
            result.extend(nxt)
            level = nxt
        return result

    def _ideal_vectors(self, paths: List[Path], bound: int) -> List[Vector]:
        """Truncations to length <= bound of u*rho*v for all paths u, v."""
        index = {p: i for i, p in enumerate(paths)}
        vectors = []
        for relation in self.relations:
            src = self._path_of(relation[0][1]).source
            tgt = self._path_of(relation[0][1]).target
            shortest = min(len(w) for _, w in relation)
            lefts = [u for u in paths if u.target == src and u.length + shortest <= bound]
            rights = [v for v in paths if v.source == tgt and v.length + shortest <= bound]
            for u in lefts:
                for v in rights:
                    vec = [ZERO] * len(paths)
                    for coefficient, word in relation:
                        p = Path(u.source, v.target, u.arrows + tuple(word) + v.arrows)
                        if p.length <= bound:
                            vec[index[p]] += coefficient
                    if any(vec):
                        vectors.append(tuple(vec))
        return vectors

    def _path_basis(self, max_length: int):
        for m in range(1, max_length + 1):
            paths = self._paths_up_to(m)
            top = [p for p in paths if p.length == m]
            if top:
                # descending path order: pivots are leading terms
                ordered = list(reversed(paths))
                ideal = Subspace(len(ordered), [tuple(reversed(v)) for v in self._ideal_vectors(paths, m)])
                position = {p: i for i, p in enumerate(ordered)}
                if not all(ideal.contains(unit_vector(len(ordered), position[p])) for p in top):
                    continue
            return m, *self._standard_paths(m)
        raise InfiniteDimensional(f"path growth did not close within length {max_length}")

    def _standard_paths(self, m: int):
        paths = [p for p in self._paths_up_to(m - 1) if p.length < m]
        ordered = list(reversed(paths))
        position = {p: i for i, p in enumerate(ordered)}
        ideal = Subspace(len(ordered), [tuple(reversed(v)) for v in self._ideal_vectors(paths, m - 1)])
        standard = [ordered[i] for i in ideal.complement]
        standard.sort(key=lambda p: (p.length, p.arrows, self.vertices.index(p.source)))
        basis_index = {p: i for i, p in enumerate(standard)}

        def reduce_path(p: Path) -> Vector:
            out = [ZERO] * len(standard)
            if p.length >= m:
                return tuple(out)
            reduced = ideal.reduce(unit_vector(len(ordered), position[p]))
            for i, c in enumerate(reduced):
                if c:
                    out[basis_index[ordered[i]]] += c
            return tuple(out)

        return tuple(standard), reduce_path

    def _multiplication_table(self) -> Dict[Tuple[int, int], Vector]:
        table = {}
        for i, p in enumerate(self.paths):
            for j, q in enumerate(self.paths):
                if p.target != q.source:
                    continue
                product = self._reduce_path(Path(p.source, q.target, p.arrows + q.arrows))
                if any(product):
                    table[(i, j)] = product
        return table

    # Elements are coordinate tuples over self.paths.

    def zero(self) -> Vector:
        return (ZERO,) * self.dimension

    def idempotent(self, vertex: str) -> Vector:
        return unit_vector(self.dimension, self._index[Path(vertex, vertex)])

    def path_element(self, path: Path) -> Vector:
        return unit_vector(self.dimension, self._index[path])

    def element(self, label: str) -> Vector:
        """Basis element by label, e.g. `e1` or `a.b`."""
        for p in self.paths:
            if p.label == label:
                return self.path_element(p)
        raise KeyError(label)

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        result = [ZERO] * self.dimension
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                product = self._table.get((i, j))
                if product is None:
                    continue
                c = xi * yj
                for k, v in enumerate(product):
                    if v:
                        result[k] += c * v
        return tuple(result)

    def corner(self, i: str, j: str) -> Tuple[int, ...]:
        """Basis indices spanning e_i Λ e_j, i.e. paths from i to j."""
        return self._corners.get((i, j), ())

    @cached_property
    def _corners(self) -> Dict[Tuple[str, str], Tuple[int, ...]]:
        corners: Dict[Tuple[str, str], List[int]] = {}
        for k, p in enumerate(self.paths):
            corners.setdefault((p.source, p.target), []).append(k)
        return {key: tuple(v) for key, v in corners.items()}

    def top_coefficient(self, x: Sequence[Fraction], vertex: str) -> Fraction:
        return x[self._index[Path(vertex, vertex)]]

    def radical_part(self, x: Sequence[Fraction]) -> Vector:
        return tuple(ZERO if self.paths[k].length == 0 else c for k, c in enumerate(x))

    def inverse_in_corner(self, x: Sequence[Fraction], vertex: str) -> Vector:
        """Inverse of a unit of e_v Λ e_v via the nilpotent series."""
        top = self.top_coefficient(x, vertex)
        if not top:
            raise ValueError(f"element has no invertible top at vertex {vertex}")
        n = tuple(c / top for c in self.radical_part(x))
        term = self.idempotent(vertex)
        total = term
        for _ in range(self.vanishing_length + 1):
            term = tuple(-c for c in self.multiply(term, n))
            if not any(term):
                break
            total = tuple(a + b for a, b in zip(total, term))
        return tuple(c / top for c in total)

    def as_fin_dim_algebra(self) -> FinDimAlgebra:
        d = self.dimension
        structure = tuple(
            tuple(self._table.get((i, j), (ZERO,) * d) for j in range(d)) for i in range(d)
        )
        unit = tuple(ONE if p.length == 0 else ZERO for p in self.paths)
        return FinDimAlgebra(d, structure, unit)


# AlgebraSpec text format

_TERM = re.compile(r"([+-]?)\s*([^+\-]+)")
_NAME = re.compile(r"^[A-Za-z_][\w]*$")


def _parse_relation(text: str) -> Relation:
    if "=" not in text:
        raise MalformedSpec(f"relation without '=': {text!r}")
    lhs, rhs = text.split("=", 1)
    terms: Dict[Tuple[str, ...], Fraction] = {}
    for side, sign0 in ((lhs, 1), (rhs, -1)):
        for sign, chunk in _TERM.findall(side):
            chunk = chunk.strip()
            if not chunk or chunk == "0":
                continue
            if "*" in chunk:
                coefficient_text, word_text = (s.strip() for s in chunk.split("*", 1))
            else:
                coefficient_text, word_text = "1", chunk
            try:
                coefficient = as_scalar(coefficient_text)
            except (ValueError, ZeroDivisionError):
                raise MalformedSpec(f"bad coefficient {coefficient_text!r} in relation {text!r}")
            word = tuple(w.strip() for w in word_text.split("."))
            if not all(_NAME.match(w) for w in word):
                raise MalformedSpec(f"bad path {word_text!r} in relation {text!r}")
            if sign == "-":
                coefficient = -coefficient
            terms[word] = terms.get(word, ZERO) + sign0 * coefficient
    relation = tuple((c, w) for w, c in terms.items() if c)
    if not relation:
        raise MalformedSpec(f"relation {text!r} is trivial")
    return relation


def parse_algebra_spec(text: str):
    """Parse AlgebraSpec text into (vertices, arrows, relations)."""
    vertices: List[str] = []
    arrows: List[Arrow] = []
    relations: List[Relation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep:
            raise MalformedSpec(f"line {lineno}: expected 'key: value'")
        if key == "vertices":
            vertices.extend(rest.split())
        elif key in ("arrows", "arrow"):
            for decl in filter(None, (d.strip() for d in rest.split(","))):
                match = re.match(r"^([A-Za-z_]\w*)\s*:\s*(\S+)\s*->\s*(\S+)$", decl)
                if not match:
                    raise MalformedSpec(f"line {lineno}: bad arrow declaration {decl!r}")
                arrows.append(Arrow(*match.groups()))
        elif key in ("relations", "relation"):
            for decl in filter(None, (d.strip() for d in rest.split(","))):
                relations.append(_parse_relation(decl))
        else:
            raise MalformedSpec(f"line {lineno}: unknown key {key!r}")
    if not vertices:
        raise MalformedSpec("no vertices declared")
    return vertices, arrows, relations


def load_algebra(source: Union[str, FilePath], max_length: int = DEFAULT_PATH_LENGTH) -> BoundQuiverAlgebra:
    """Load an AlgebraSpec from a file path or from its text."""
    if isinstance(source, FilePath) or (isinstance(source, str) and "\n" not in source and FilePath(source).is_file()):
        try:
            text = FilePath(source).read_text()
        except OSError as e:
            raise MalformedSpec(f"cannot read algebra file {source}: {str(e)}")
    else:
        text = source
    vertices, arrows, relations = parse_algebra_spec(text)
    algebra = BoundQuiverAlgebra(vertices, arrows, relations, max_length=max_length)
    logger.debug(f"Path basis: {[p.label for p in algebra.paths]}")
    return algebra


def linear_quiver(n: int) -> BoundQuiverAlgebra:
    """Path algebra of 1 -> 2 -> ... -> n without relations."""
    vertices = [str(i) for i in range(1, n + 1)]
    arrows = [Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
    return BoundQuiverAlgebra(vertices, arrows)
