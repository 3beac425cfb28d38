"""Command-line entry point: `python cli.py <command> [input] --backend ...`."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from check_flags import CERTIFICATES, ENOUGH_INJECTIVES, CheckFlags
from config import BACKENDS, OUTPUT_FORMATS, TARGET_GROUPS, Budgets, RunConfig
from errors import BudgetExceeded, NotRigid, SiltredError, UndecidedIdentity
from interval_modules import IntervalModel
from models import FiniteZeroAuslanderModel, make_rigid
from picture import build_picture_category, check_cubical, check_i1_i2, export
from presentations import picture_group
from quiver_algebra import load_algebra
from reduction import MAX, MIN, bongartz, check_gcp, reduce, rigid_bijection
from silting import SiltingPoset, explore_silt_poset
from tabulated import export_tabulated, load_tabulated
from two_term import TwoTermModel
from validator import validate_zero_auslander

logger = logging.getLogger(__name__)

COMMANDS = ("validate", "silt-poset", "reduce", "picture", "picgroup", "export-tabulated")


def load_model(config: RunConfig) -> FiniteZeroAuslanderModel:
    kind = config.backend_kind
    if kind == "interval":
        return IntervalModel(config.interval_size)
    if kind == "two-term":
        algebra = load_algebra(config.input_path, config.budgets.path_length)
        return TwoTermModel(algebra, config.budgets)
    return load_tabulated(config.input_path)


def apply_flags(config: RunConfig) -> None:
    CheckFlags.reset()
    CheckFlags.set_flag(CERTIFICATES, config.certificates)
    CheckFlags.set_flag(ENOUGH_INJECTIVES, config.enough_injectives)


def emit(config: RunConfig, text: str) -> None:
    if config.output_path is not None:
        config.output_path.write_text(text)
        logger.info(f"✅ Wrote {config.output_path}")
    else:
        sys.stdout.write(text)


def document(command: str, body: Dict[str, Any], **extra: Any) -> str:
    return json.dumps({"schema": 1, "command": command, **extra, "result": body}, indent=2) + "\n"


# Commands

def cmd_validate(config: RunConfig) -> int:
    model = load_model(config)
    report = validate_zero_auslander(model)
    if config.output_format == "json":
        emit(config, document("validate", report.model_dump()))
    else:
        lines = [f"{report.model}: {len(report.objects)} objects, reduced={str(report.reduced).lower()}"]
        for axiom in report.axioms:
            lines.append(f"{'PASS' if axiom.passed else 'FAIL'} {axiom.name}")
            lines.extend(f"  {failure}" for failure in axiom.failures)
        emit(config, "\n".join(lines) + "\n")
    return 0 if report.passed else 1


def _poset_output(config: RunConfig, poset: SiltingPoset, partial: bool) -> str:
    if config.output_format == "json":
        body = poset.as_dict()
        body["maximum"], body["minimum"] = poset.maximum, poset.minimum
        return document("silt-poset", body, partial=partial)
    if config.output_format == "dot":
        return poset.to_dot()
    text = poset.to_text()
    return text + ("partial: true\n" if partial else "")


def cmd_silt_poset(config: RunConfig) -> int:
    model = load_model(config)
    try:
        poset = explore_silt_poset(model, config.budgets.poset_nodes, config.threads)
    except BudgetExceeded as e:
        if e.partial is not None:
            emit(config, _poset_output(config, e.partial, partial=True))
        raise
    emit(config, _poset_output(config, poset, partial=False))
    return 0


def dimension_tables(model: FiniteZeroAuslanderModel) -> Dict[str, List[List[int]]]:
    ids = model.objects()
    return {
        "hom": [[model.hom_dim(x, y) for y in ids] for x in ids],
        "ext": [[model.ext_dim(x, y) for y in ids] for x in ids],
    }


def _table_lines(label: str, ids: Tuple[str, ...], rows: List[List[int]]) -> List[str]:
    lines = [f"{label}: {' '.join(ids)}"]
    lines.extend(f"  {x}: {' '.join(str(d) for d in row)}" for x, row in zip(ids, rows))
    return lines


def cmd_reduce(config: RunConfig, rigid: List[str], export_path: Optional[Path] = None) -> int:
    model = load_model(config)
    unknown = [x for x in rigid if x not in model.objects()]
    if unknown:
        raise ValueError(f"unknown objects in --rigid: {', '.join(unknown)}")
    try:
        members = make_rigid(model, rigid).members
    except NotRigid as e:
        raise ValueError(f"--rigid is not rigid: {e.detail}")
    reduced = reduce(model, members, config.budgets)
    if export_path is not None:
        export_tabulated(reduced, export_path)
        logger.info(f"✅ Exported {reduced.name} to {export_path}")
    body = {
        "rigid": list(members),
        "reduced": reduced.describe(),
        "tables": dimension_tables(reduced),
        "bongartz_max": bongartz(model, members, MAX, config.budgets).model_dump(),
        "bongartz_min": bongartz(model, members, MIN, config.budgets).model_dump(),
        "gcp": check_gcp(model, members, config.budgets).model_dump(),
        "bijection": rigid_bijection(model, members, config.budgets).model_dump(),
    }
    if config.output_format == "json":
        emit(config, document("reduce", body))
    else:
        described, ids = body["reduced"], reduced.objects()
        lines = [
            f"reduced along {'+'.join(members) or '0'}: {' '.join(described['objects']) or '(zero)'}",
            f"projective: {' '.join(described['projective'])}",
            f"injective: {' '.join(described['injective'])}",
        ]
        lines += _table_lines("hom", ids, body["tables"]["hom"])
        lines += _table_lines("ext", ids, body["tables"]["ext"])
        lines += [
            f"silting: {body['bijection']['reduced_silting']}",
            f"bongartz max: {'+'.join(body['bongartz_max']['members'])}",
            f"bongartz min: {'+'.join(body['bongartz_min']['members'])}",
            f"bijection roundtrip: {str(body['bijection']['roundtrip']).lower()}",
        ]
        emit(config, "\n".join(lines) + "\n")
    return 0 if body["bijection"]["roundtrip"] and body["bijection"]["order_preserved"] else 1


def cmd_picture(config: RunConfig) -> int:
    model = load_model(config)
    cat = build_picture_category(model, config.budgets, config.threads)
    cubical, interchange = check_cubical(cat), check_i1_i2(cat)
    if config.output_format == "json":
        body = cat.as_dict()
        body["cubical"] = cubical.model_dump()
        body["interchange"] = interchange.model_dump()
        emit(config, json.dumps(body, indent=2) + "\n")
    else:
        emit(config, export(cat, config.output_format))
    return 0 if cubical.passed and interchange.passed else 1


def cmd_picgroup(config: RunConfig) -> int:
    model = load_model(config)
    cat = build_picture_category(model, config.budgets, config.threads)
    report = picture_group(cat, targets=config.targets, budgets=config.budgets)
    if config.output_format == "json":
        emit(config, document("picgroup", report.model_dump()))
    else:
        inv = report.poset_invariants
        homs = " ".join(f"{k}={v}" for k, v in inv.hom_counts.items())
        emit(config, "\n".join([
            f"poset route (labelled by generating objects): gens: {' '.join(report.poset_route['generators'])}",
            f"  rels: {' '.join(report.poset_route['relators'])}",
            f"nerve route: gens: {' '.join(report.nerve_route['generators'])}",
            f"  rels: {' '.join(report.nerve_route['relators'])}",
            f"generating objects: {' '.join(report.generating_objects)}",
            f"abelianization: {inv.label}",
            f"homomorphisms: {homs}",
            f"agree: {str(report.agree).lower()}",
        ]) + "\n")
    return 0 if report.agree else 1


def cmd_export_tabulated(config: RunConfig, bound: int) -> int:
    if config.output_path is None:
        raise ValueError("export-tabulated needs --output")
    model = load_model(config)
    export_tabulated(model, config.output_path, bound)
    logger.info(f"✅ Exported {model.name} to {config.output_path}")
    return 0


# Argument handling

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siltred", description="Silting reduction and picture groups")
    parser.add_argument("--log-level", default="WARNING", help="logging level for stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?", type=Path, help="algebra or tabulated file")
        p.add_argument("--backend", default="two-term",
                       help=f"one of {', '.join(BACKENDS)}; interval takes a size, e.g. interval:3")
        p.add_argument("--format", dest="output_format", default="text", choices=OUTPUT_FORMATS)
        p.add_argument("--output", dest="output_path", type=Path)
        p.add_argument("--certificates", action="store_true")
        p.add_argument("--enough-injectives", action="store_true")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--poset-budget", type=int, default=500)
        p.add_argument("--search-multiplicity", type=int, default=3)
        p.add_argument("--closure-passes", type=int, default=50)
        p.add_argument("--path-length", type=int, default=12)
        p.add_argument("--hom-budget", type=int, default=2_000_000)
        if name == "reduce":
            p.add_argument("--rigid", action="append", default=[], help="indecomposable id; repeat for several")
            p.add_argument("--export", dest="export_path", type=Path, help="write the reduced model as a tabulated file")
        if name == "picgroup":
            p.add_argument("--targets", default=",".join(TARGET_GROUPS))
        if name == "export-tabulated":
            p.add_argument("--bound", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    budgets = Budgets(
        poset_nodes=args.poset_budget,
        search_multiplicity=args.search_multiplicity,
        closure_passes=args.closure_passes,
        path_length=args.path_length,
        hom_count=args.hom_budget,
    )
    targets = tuple(t for t in getattr(args, "targets", ",".join(TARGET_GROUPS)).split(",") if t)
    return RunConfig(
        input_path=args.input,
        backend=args.backend,
        budgets=budgets,
        output_format=args.output_format,
        output_path=args.output_path,
        certificates=args.certificates,
        enough_injectives=args.enough_injectives,
        threads=args.threads,
        targets=targets,
    )


def run(args: argparse.Namespace) -> int:
    try:
        config = config_from_args(args)
    except ValidationError as e:
        logger.error(f"❌ Invalid arguments: {str(e)}")
        return 2
    apply_flags(config)
    try:
        if args.command == "validate":
            return cmd_validate(config)
        if args.command == "silt-poset":
            return cmd_silt_poset(config)
        if args.command == "reduce":
            return cmd_reduce(config, args.rigid, args.export_path)
        if args.command == "picture":
            return cmd_picture(config)
        if args.command == "picgroup":
            return cmd_picgroup(config)
        return cmd_export_tabulated(config, args.bound)
    except UndecidedIdentity as e:
        logger.error(f"❌ Undecided identity between {' and '.join(e.pair)}: {e.detail}")
        return e.exit_code
    except SiltredError as e:
        logger.error(f"❌ Error running {args.command}: {e.detail}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"❌ Error running {args.command}: {str(e)}")
        return 2


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
