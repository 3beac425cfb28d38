"""Categories given by finite tables, as text or as a TinyDB JSON document.

Text layout, one statement per line, `#` starts a comment:

    bound 1
    object p proj
    object n proj inj
    object i inj
    hom p n = 1
    ext i p = 1
    middle i p [1] = n
    middle i+i p [1,0] = n+i

Missing hom and ext entries are zero. A middle of `0` is the zero object.
"""
from __future__ import annotations

import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from tinydb import Query, TinyDB

from errors import MalformedSpec, RealizationUnavailable
from exact_kernel import as_scalar
from models import ExtClass, FiniteZeroAuslanderModel, ObjectSum, multisets

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

_MIDDLE = re.compile(r"^middle\s+(\S+)\s+(\S+)\s+\[([^\]]*)\]\s*=\s*(\S+)$")
_DIM = re.compile(r"^(hom|ext)\s+(\S+)\s+(\S+)\s*=\s*(\d+)$")


class TabulatedModel(FiniteZeroAuslanderModel):
    """Finite category read from tables; no composition data."""

    name = "tabulated"
    supports_composition = False

    def __init__(self, objects: Sequence[str], flags: Dict[str, Tuple[bool, bool]],
                 homs: Dict[Tuple[str, str], int], exts: Dict[Tuple[str, str], int],
                 middles: Dict[ExtClass, ObjectSum], bound: int = 1):
        super().__init__()
        self._ids = tuple(objects)
        self._declared = dict(flags)
        self._homs = dict(homs)
        self._exts = dict(exts)
        self.bound = bound
        self._middles: Dict[ExtClass, ObjectSum] = {}
        for ext, mid in middles.items():
            self._check_entry(ext, mid)
            self._middles[ext] = self.normalize(mid)

    def _check_entry(self, ext: ExtClass, mid: ObjectSum) -> None:
        for x in ext.source + ext.target + tuple(mid):
            if x not in self._declared:
                raise MalformedSpec(f"middle entry references unknown object {x}")
        expected = self.ext_total(ext.source, ext.target)
        if len(ext.coordinates) != expected:
            raise MalformedSpec(
                f"middle entry for {'+'.join(ext.source)} / {'+'.join(ext.target)} "
                f"has {len(ext.coordinates)} coordinates, expected {expected}"
            )

    def objects(self) -> ObjectSum:
        return self._ids

    def hom_dim(self, x: str, y: str) -> int:
        return self._homs.get((x, y), 0)

    def _ext_dim(self, x: str, y: str) -> int:
        return self._exts.get((x, y), 0)

    def declared_flags(self, x: str) -> Tuple[bool, bool]:
        return self._declared[x]

    def ext_classes(self, c: ObjectSum, a: ObjectSum, permuted: bool = False) -> List[ExtClass]:
        """Zero plus the tabulated classes of E(c, a), in file order."""
        c, a = self.normalize(c), self.normalize(a)
        zero = ExtClass(c, a, (Fraction(0),) * self.ext_total(c, a))
        found = [ext for ext in self._middles if ext.source == c and ext.target == a and not ext.is_zero]
        if permuted:
            found.reverse()
        return [zero] + found

    def _middle(self, ext: ExtClass) -> ObjectSum:
        key = ExtClass(self.normalize(ext.source), self.normalize(ext.target), ext.coordinates)
        if key in self._middles:
            return self._middles[key]
        if key.is_zero:
            return self.normalize(key.target + key.source)
        if len(key.source) > self.bound or len(key.target) > self.bound:
            raise RealizationUnavailable(
                f"no middle for classes of {'+'.join(key.source)} by {'+'.join(key.target)} beyond bound {self.bound}"
            )
        raise RealizationUnavailable(
            f"no tabulated middle for {'+'.join(key.source)} / {'+'.join(key.target)} at {list(map(str, key.coordinates))}"
        )

    def middle_entries(self) -> Dict[ExtClass, ObjectSum]:
        return dict(self._middles)


# Text format

def _object_sum(text: str, lineno: int) -> ObjectSum:
    if text == "0":
        return ()
    parts = tuple(p for p in text.split("+"))
    if any(not p for p in parts):
        raise MalformedSpec(f"line {lineno}: malformed object sum {text!r}")
    return parts


def parse_tabulated(text: str) -> TabulatedModel:
    objects: List[str] = []
    flags: Dict[str, Tuple[bool, bool]] = {}
    homs: Dict[Tuple[str, str], int] = {}
    exts: Dict[Tuple[str, str], int] = {}
    raw_middles: List[Tuple[int, ObjectSum, ObjectSum, Tuple[Fraction, ...], ObjectSum]] = []
    bound = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split()[0]
        if keyword == "object":
            tokens = line.split()
            if len(tokens) < 2:
                raise MalformedSpec(f"line {lineno}: object without an id")
            x = tokens[1]
            if x in flags:
                raise MalformedSpec(f"line {lineno}: duplicate object {x}")
            extra = set(tokens[2:]) - {"proj", "inj"}
            if extra:
                raise MalformedSpec(f"line {lineno}: unknown flags {sorted(extra)}")
            objects.append(x)
            flags[x] = ("proj" in tokens[2:], "inj" in tokens[2:])
        elif keyword in ("hom", "ext"):
            match = _DIM.match(line)
            if not match:
                raise MalformedSpec(f"line {lineno}: expected `{keyword} X Y = d`")
            _, x, y, d = match.groups()
            table = homs if keyword == "hom" else exts
            table[(x, y)] = int(d)
        elif keyword == "middle":
            match = _MIDDLE.match(line)
            if not match:
                raise MalformedSpec(f"line {lineno}: expected `middle C A [coords] = Z`")
            c, a, coords, result = match.groups()
            try:
                coordinates = tuple(as_scalar(v) for v in coords.split(",") if v.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise MalformedSpec(f"line {lineno}: bad coordinates: {str(e)}")
            raw_middles.append((lineno, _object_sum(c, lineno), _object_sum(a, lineno),
                                coordinates, _object_sum(result, lineno)))
        elif keyword == "bound":
            tokens = line.split()
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                raise MalformedSpec(f"line {lineno}: bound must be a positive integer")
            bound = int(tokens[1])
        else:
            raise MalformedSpec(f"line {lineno}: unknown statement {keyword!r}")

    for (x, y) in list(homs) + list(exts):
        if x not in flags or y not in flags:
            raise MalformedSpec(f"table entry references undeclared object in ({x}, {y})")
    order = {x: i for i, x in enumerate(objects)}
    middles = {}
    for lineno, c, a, coordinates, result in raw_middles:
        for x in c + a + result:
            if x not in order:
                raise MalformedSpec(f"line {lineno}: undeclared object {x}")
        key = ExtClass(tuple(sorted(c, key=order.get)), tuple(sorted(a, key=order.get)), coordinates)
        middles[key] = result
    return TabulatedModel(objects, flags, homs, exts, middles, bound)


def dump_tabulated(model: FiniteZeroAuslanderModel, bound: int = 1) -> str:
    """Text form of any model, with middles for sums of at most `bound` objects."""
    lines = [f"# {model.name}", f"bound {bound}"]
    objects = model.objects()
    for x in objects:
        proj, inj = model.declared_flags(x)
        flags = " ".join(f for f, on in (("proj", proj), ("inj", inj)) if on)
        lines.append(f"object {x} {flags}".rstrip())
    for x in objects:
        for y in objects:
            d = model.hom_dim(x, y)
            if d:
                lines.append(f"hom {x} {y} = {d}")
    for x in objects:
        for y in objects:
            d = model.ext_dim(x, y)
            if d:
                lines.append(f"ext {x} {y} = {d}")
    for ext, mid in _middle_entries(model, bound):
        coords = ",".join(str(c) for c in ext.coordinates)
        lines.append(f"middle {'+'.join(ext.source)} {'+'.join(ext.target)} [{coords}] = {'+'.join(mid) or '0'}")
    return "\n".join(lines) + "\n"


def _middle_entries(model: FiniteZeroAuslanderModel, bound: int) -> List[Tuple[ExtClass, ObjectSum]]:
    entries = []
    sums = [s for s in multisets(model.objects(), bound, bound) if s]
    for c in sums:
        for a in sums:
            if not model.ext_total(c, a):
                continue
            for ext in model.ext_classes(c, a)[1:]:
                try:
                    entries.append((ext, model.middle(ext)))
                except RealizationUnavailable as e:
                    logger.debug(f"Skipping middle: {str(e)}")
    return entries


# TinyDB format

def write_tabulated_db(model: FiniteZeroAuslanderModel, path: Union[str, Path], bound: int = 1) -> None:
    path = Path(path)
    if path.exists():
        path.unlink()
    db = TinyDB(path, indent=2, sort_keys=True)
    try:
        db.table("meta").insert_multiple([
            {"key": "schema", "value": SCHEMA_VERSION},
            {"key": "bound", "value": bound},
            {"key": "source", "value": model.name},
        ])
        objects = model.objects()
        db.table("objects").insert_multiple([
            {"id": x, "index": i, "proj": model.declared_flags(x)[0], "inj": model.declared_flags(x)[1]}
            for i, x in enumerate(objects)
        ])
        db.table("hom").insert_multiple([
            {"source": x, "target": y, "dim": model.hom_dim(x, y)}
            for x in objects for y in objects if model.hom_dim(x, y)
        ])
        db.table("ext").insert_multiple([
            {"source": x, "target": y, "dim": model.ext_dim(x, y)}
            for x in objects for y in objects if model.ext_dim(x, y)
        ])
        db.table("middle").insert_multiple([
            {
                "source": list(ext.source),
                "target": list(ext.target),
                "coordinates": [str(c) for c in ext.coordinates],
                "middle": list(mid),
            }
            for ext, mid in _middle_entries(model, bound)
        ])
        logger.info(f"Wrote tabulated model with {len(objects)} objects to {path}")
    finally:
        db.close()


def read_tabulated_db(path: Union[str, Path]) -> TabulatedModel:
    db = TinyDB(path)
    try:
        Meta = Query()
        schema = db.table("meta").get(Meta.key == "schema")
        if schema is None or schema["value"] != SCHEMA_VERSION:
            raise MalformedSpec(f"{path}: missing or unsupported schema")
        bound_doc = db.table("meta").get(Meta.key == "bound")
        bound = int(bound_doc["value"]) if bound_doc else 1
        docs = sorted(db.table("objects").all(), key=lambda d: d["index"])
        objects = [d["id"] for d in docs]
        flags = {d["id"]: (bool(d["proj"]), bool(d["inj"])) for d in docs}
        homs = {(d["source"], d["target"]): int(d["dim"]) for d in db.table("hom").all()}
        exts = {(d["source"], d["target"]): int(d["dim"]) for d in db.table("ext").all()}
        for x, y in list(homs) + list(exts):
            if x not in flags or y not in flags:
                raise MalformedSpec(f"{path}: table entry references undeclared object in ({x}, {y})")
        middles = {}
        for d in db.table("middle").all():
            key = ExtClass(tuple(d["source"]), tuple(d["target"]), tuple(as_scalar(c) for c in d["coordinates"]))
            middles[key] = tuple(d["middle"])
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedSpec(f"{path}: malformed document: {str(e)}")
    finally:
        db.close()
    return TabulatedModel(objects, flags, homs, exts, middles, bound)


def load_tabulated(path: Union[str, Path]) -> TabulatedModel:
    """Load either format; `.json` files are read as TinyDB documents."""
    path = Path(path)
    if not path.is_file():
        raise MalformedSpec(f"tabulated file {path} does not exist")
    if path.suffix == ".json":
        model = read_tabulated_db(path)
    else:
        try:
            model = parse_tabulated(path.read_text())
        except OSError as e:
            raise MalformedSpec(f"cannot read {path}: {str(e)}")
    logger.info(f"Loaded tabulated model with {len(model.objects())} objects from {path}")
    return model


def export_tabulated(model: FiniteZeroAuslanderModel, path: Union[str, Path], bound: int = 1) -> None:
    path = Path(path)
    if path.suffix == ".json":
        write_tabulated_db(model, path, bound)
    else:
        path.write_text(dump_tabulated(model, bound))
