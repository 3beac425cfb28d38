"""Axiom checks for finite 0-Auslander extriangulated categories."""
from __future__ import annotations

import logging
from typing import Iterable, List, Optional

from pydantic import BaseModel

from check_flags import ENOUGH_INJECTIVES, CheckFlags
from errors import RealizationUnavailable
from exact_kernel import ZERO
from models import Conflation, ExtClass, FiniteZeroAuslanderModel, ObjectSum, in_add, multisets

logger = logging.getLogger(__name__)

WITNESS_SIZE = 2


class AxiomResult(BaseModel):
    name: str
    passed: bool
    witnesses: List[str] = []
    failures: List[str] = []


class ValidationReport(BaseModel):
    schema_version: int = 1
    model: str
    objects: List[str]
    axioms: List[AxiomResult]
    reduced: bool
    passed: bool

    def axiom(self, name: str) -> Optional[AxiomResult]:
        return next((a for a in self.axioms if a.name == name), None)

    def failing(self) -> List[str]:
        return [a.name for a in self.axioms if not a.passed]


def _describe(conf: Conflation) -> str:
    left = "+".join(conf.left) or "0"
    middle = "+".join(conf.middle) or "0"
    right = "+".join(conf.right) or "0"
    return f"{left} >-> {middle} ->> {right}"


def _candidates(model: FiniteZeroAuslanderModel, preferred: Iterable[str]) -> List[ObjectSum]:
    """Nonempty multisets of size <= 2, those inside add(preferred) first."""
    preferred = set(preferred)
    sums = [s for s in multisets(model.objects(), WITNESS_SIZE, WITNESS_SIZE) if s]
    return [s for s in sums if in_add(s, preferred)] + [s for s in sums if not in_add(s, preferred)]


def _search(model: FiniteZeroAuslanderModel, x: str, others: Iterable[ObjectSum], allowed: Iterable[str],
            deflation: bool) -> Optional[Conflation]:
    """deflation: other ↣ m ↠ x; otherwise x ↣ m ↠ other. The middle must lie in add(allowed)."""
    allowed = set(allowed)
    for other in others:
        classes = model.ext_classes((x,), other) if deflation else model.ext_classes(other, (x,))
        for ext in classes[1:]:
            try:
                mid = model.middle(ext)
            except RealizationUnavailable:
                continue
            if in_add(mid, allowed):
                return Conflation(other, mid, (x,), ext) if deflation else Conflation((x,), mid, other, ext)
    return None


def check_split_sequences(model: FiniteZeroAuslanderModel) -> AxiomResult:
    failures = []
    for x in model.objects():
        for y in model.objects():
            zero = ExtClass((x,), (y,), (ZERO,) * model.ext_dim(x, y))
            try:
                realized = model.realize(zero)
            except RealizationUnavailable as e:
                failures.append(f"{x}, {y}: {e.detail}")
                continue
            if realized != model.normalize((y, x)):
                failures.append(f"zero class of E({x}, {y}) realized by {'+'.join(realized) or '0'}")
    return AxiomResult(name="split_sequence", passed=not failures, failures=failures)


def check_flags(model: FiniteZeroAuslanderModel) -> AxiomResult:
    failures = []
    for x in model.objects():
        declared, computed = model.declared_flags(x), model.computed_flags(x)
        if declared != computed:
            failures.append(f"{x}: declared (proj, inj) = {declared}, computed {computed}")
    return AxiomResult(name="flag_consistency", passed=not failures, failures=failures)


def _projective_presentation(model: FiniteZeroAuslanderModel, x: str,
                             projective_ends: bool = False) -> Optional[Conflation]:
    """x' ↣ p ↠ x with p projective; x' projective too when `projective_ends`."""
    projectives = model.projectives()
    others = [s for s in _candidates(model, projectives) if not projective_ends or in_add(s, projectives)]
    return _search(model, x, others, projectives, deflation=True)


def check_enough_projectives(model: FiniteZeroAuslanderModel) -> AxiomResult:
    projectives = model.projectives()
    witnesses, failures = [], []
    for x in model.objects():
        if x in projectives:
            witnesses.append(f"{x} is projective")
            continue
        conf = _projective_presentation(model, x)
        if conf is None:
            failures.append(f"no conflation ending in {x} with projective middle")
        else:
            witnesses.append(_describe(conf))
    return AxiomResult(name="enough_projectives", passed=not failures, witnesses=witnesses, failures=failures)


def check_heredity(model: FiniteZeroAuslanderModel) -> AxiomResult:
    """Objects without any projective presentation are left to check_enough_projectives."""
    projectives = model.projectives()
    witnesses, failures = [], []
    for x in model.objects():
        if x in projectives or _projective_presentation(model, x) is None:
            continue
        conf = _projective_presentation(model, x, projective_ends=True)
        if conf is None:
            failures.append(f"no projective presentation of {x} has a projective kernel")
        else:
            witnesses.append(_describe(conf))
    return AxiomResult(name="heredity", passed=not failures, witnesses=witnesses, failures=failures)


def check_second_extensions(model: FiniteZeroAuslanderModel) -> AxiomResult:
    """E²(x, -) ≅ E(x', -) for x' ↣ p ↠ x with p projective."""
    projectives = model.projectives()
    failures, witnesses = [], []
    for x in model.objects():
        if x in projectives:
            continue
        conf = _projective_presentation(model, x)
        if conf is None:
            continue
        shifted = [y for y in model.objects() if model.ext_total(conf.left, (y,))]
        if shifted:
            failures.append(f"E^2({x}, y) != 0 for y in {shifted}")
        else:
            witnesses.append(f"E^2({x}, -) = 0 via {_describe(conf)}")
    return AxiomResult(name="second_extensions_vanish", passed=not failures, witnesses=witnesses, failures=failures)


def check_projective_inflations(model: FiniteZeroAuslanderModel) -> AxiomResult:
    """Each projective inflates into add of the projective-injectives."""
    pi = model.projective_injectives()
    witnesses, failures = [], []
    for p in model.projectives():
        if p in pi:
            witnesses.append(f"{p} is projective-injective")
            continue
        conf = _search(model, p, _candidates(model, model.objects()), pi, deflation=False)
        if conf is None:
            failures.append(f"projective {p} has no inflation into a projective-injective")
        else:
            witnesses.append(_describe(conf))
    return AxiomResult(name="projective_inflation", passed=not failures, witnesses=witnesses, failures=failures)


@CheckFlags.require_flag(ENOUGH_INJECTIVES)
def check_enough_injectives(model: FiniteZeroAuslanderModel) -> AxiomResult:
    injectives = model.injectives()
    witnesses, failures = [], []
    for x in model.objects():
        if x in injectives:
            continue
        conf = _search(model, x, _candidates(model, model.objects()), injectives, deflation=False)
        if conf is None:
            failures.append(f"no conflation starting at {x} with injective middle")
        else:
            witnesses.append(_describe(conf))
    return AxiomResult(name="enough_injectives", passed=not failures, witnesses=witnesses, failures=failures)


def validate_zero_auslander(model: FiniteZeroAuslanderModel) -> ValidationReport:
    """Run every axiom check; failures become report content, not exceptions."""
    axioms = [
        check_split_sequences(model),
        check_flags(model),
        check_enough_projectives(model),
        check_heredity(model),
        check_second_extensions(model),
        check_projective_inflations(model),
    ]
    injectives = check_enough_injectives(model)
    if injectives is not None:
        axioms.append(injectives)
    passed = all(a.passed for a in axioms)
    for a in axioms:
        if not a.passed:
            logger.warning(f"Axiom {a.name} fails on {model.name}: {a.failures[0]}")
    return ValidationReport(
        model=model.name,
        objects=list(model.objects()),
        axioms=axioms,
        reduced=not model.projective_injectives(),
        passed=passed,
    )
