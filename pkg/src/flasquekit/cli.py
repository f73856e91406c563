from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

if sys.platform == "win32":
    try:
        sys.stdout.reconfigure(encoding="utf-8")
    except Exception:
        pass

from flasquekit.algebra.classify import is_coflasque, is_flasque, search_permutation_basis
from flasquekit.algebra.cohomology import cohomology, describe_factors
from flasquekit.algebra.documents import load_lattice, save_lattice
from flasquekit.algebra.groups import subgroup_generated, whole_group
from flasquekit.algebra.lattice import restrict
from flasquekit.algebra.symbols import verify_annullamento, verify_annullamento_p2_with_i
from flasquekit.config.settings import FlasqueKitConfig, load_settings
from flasquekit.constructions.builders import (
    build_esempio,
    build_flasque_with_z,
    build_lemma_esatta,
    build_prop_piatto,
    lemma_esatta_preset,
    verify_splitting_exceeds_p,
)
from flasquekit.execution.pool import SweepPool
from flasquekit.utils.errors import FlasqueKitError, InvalidInputError
from flasquekit.utils.logger import Logger
from flasquekit.utils.rich_renderer import render_json, render_text

Handler = Callable[[argparse.Namespace, SweepPool, Logger], dict[str, Any]]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="Report format (default: text).")
    common.add_argument("--out", type=str, default=None,
                        help="Write the report to this file instead of stdout.")
    common.add_argument("--threads", type=int, default=None,
                        help="Worker threads for subgroup sweeps (default: from settings).")
    common.add_argument("--budget", type=int, default=None,
                        help="Maximum nonzero boundary entries per complex (default: from settings).")
    common.add_argument("--seed", type=int, default=None,
                        help="Reserved; every algorithm is deterministic.")
    common.add_argument("--config", type=str, default=None,
                        help="Settings file (YAML or JSON) overriding the packaged defaults.")
    common.add_argument("--log-dir", type=str, default=None,
                        help="Write a run log into this directory.")
    common.add_argument("--timings", action="store_true",
                        help="Include stage timings in the report (breaks byte-identical output).")
    common.add_argument("--verbose", action="store_true",
                        help="Echo progress to stderr.")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="flasquekit",
        description="Exact group cohomology and flasque/coflasque verification for lattices over finite groups.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    reproduce = commands.add_parser("reproduce", help="Rebuild and verify a named construction.")
    constructions = reproduce.add_subparsers(dest="construction", required=True)

    esempio = constructions.add_parser("esempio", parents=[common], help="F_tilde over (Z/p)^2.")
    esempio.add_argument("--p", type=int, default=2)
    esempio.add_argument("--save-lattice", type=str, default=None,
                         help="Save F_tilde as a lattice document.")
    esempio.set_defaults(handler=_reproduce_esempio)

    flasque_z = constructions.add_parser("flasque-z", parents=[common], help="F_hat and z over (Z/p)^3.")
    flasque_z.add_argument("--p", type=int, default=2)
    flasque_z.add_argument("--stretch", action="store_true", help="Allow p = 3.")
    flasque_z.add_argument("--save-lattice", type=str, default=None)
    flasque_z.set_defaults(handler=_reproduce_flasque_z)

    esatta = constructions.add_parser("esatta", parents=[common], help="Coflasque cokernel of (Delta, psi).")
    esatta.add_argument("--preset", choices=("norm", "p-mult"), default="norm")
    esatta.add_argument("--save-lattice", type=str, default=None)
    esatta.set_defaults(handler=_reproduce_esatta)

    piatto = constructions.add_parser("piatto", parents=[common], help="Flasque F_hat from (Delta, p).")
    piatto.add_argument("--p", type=int, default=2)
    piatto.add_argument("--save-lattice", type=str, default=None)
    piatto.set_defaults(handler=_reproduce_piatto)

    split = constructions.add_parser("split-index", parents=[common], help="Splitting index of z.")
    split.add_argument("--p", type=int, default=2)
    split.add_argument("--stretch", action="store_true")
    split.set_defaults(handler=_reproduce_split_index)

    annullamento = constructions.add_parser("annullamento", parents=[common], help="Symbol vanishing chain.")
    annullamento.add_argument("--p", type=int, default=3)
    annullamento.add_argument("--with-i", action="store_true", help="p = 2 with a square root of -1.")
    annullamento.add_argument("--trace", action="store_true", help="Record each reduction step.")
    annullamento.set_defaults(handler=_reproduce_annullamento)

    classify = commands.add_parser("classify", parents=[common], help="Flasque/coflasque/permutation verdicts.")
    classify.add_argument("--input", type=str, required=True)
    classify.add_argument("--effort", type=int, default=None,
                          help="Permutation basis search effort (default: from settings).")
    classify.set_defaults(handler=_classify)

    coho = commands.add_parser("cohomology", parents=[common], help="H^n of a lattice file.")
    coho.add_argument("--input", type=str, required=True)
    coho.add_argument("--degree", type=int, required=True)
    coho.add_argument("--subgroup", type=str, default=None,
                      help="Comma-separated element indices; their closure is used.")
    coho.add_argument("--cocycles", action="store_true", help="Include generator cocycles.")
    coho.set_defaults(handler=_cohomology)
    return parser


def _save(args: argparse.Namespace, lattice, payload: dict[str, Any]) -> None:
    if getattr(args, "save_lattice", None):
        path = save_lattice(lattice, args.save_lattice)
        payload.setdefault("data", {})["saved_lattice"] = str(path)


def _reproduce_esempio(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    result = build_esempio(args.p, pool, logger)
    payload = result.report.to_dict(args.timings)
    _save(args, result.f_tilde, payload)
    return payload


def _reproduce_flasque_z(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    result = build_flasque_with_z(args.p, args.stretch, pool, logger)
    payload = result.report.to_dict(args.timings)
    _save(args, result.f_hat.lattice, payload)
    return payload


def _reproduce_esatta(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    group, q, psi = lemma_esatta_preset(args.preset)
    result = build_lemma_esatta(group, q, psi, pool, logger)
    result.report.parameters["preset"] = args.preset
    payload = result.report.to_dict(args.timings)
    _save(args, result.n, payload)
    return payload


def _reproduce_piatto(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    result = build_prop_piatto(args.p, pool, logger)
    payload = result.report.to_dict(args.timings)
    _save(args, result.f_hat, payload)
    return payload


def _reproduce_split_index(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    report = verify_splitting_exceeds_p(args.p, stretch=args.stretch, pool=pool, logger=logger)
    return report.to_dict(args.timings)


def _reproduce_annullamento(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    del pool
    if args.with_i:
        if args.p != 2:
            raise InvalidInputError("--with-i is the p = 2 variant; drop it for odd p")
        report = verify_annullamento_p2_with_i(trace=args.trace)
    else:
        report = verify_annullamento(args.p, trace=args.trace)
    logger.log_print(f"annullamento p={args.p}: {len(report['points'])} points vanish", level="SUCCESS", module="symbols")
    return {
        "construction": "annullamento",
        "parameters": {"p": args.p, "with_i": args.with_i},
        "data": {k: v for k, v in report.items() if k not in ("passed",)},
        "checks": [
            {"name": f"symbol vanishes for [{pt['point'][0]}:{pt['point'][1]}]", "passed": pt["verdict"] == "zero", "detail": pt["verdict"]}
            for pt in report["points"]
        ],
        "passed": report["passed"],
    }


def _classify(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    lattice = load_lattice(args.input)
    logger.log_print(f"classifying {lattice!r}", module="classify")
    flasque = is_flasque(lattice, pool)
    coflasque = is_coflasque(lattice, pool)
    if not (flasque.holds and coflasque.holds):
        permutation = "not-permutation"
    elif search_permutation_basis(lattice, args.effort, pool) is not None:
        permutation = "certified"
    else:
        permutation = "unknown"
    name = lattice.label or "M"
    return {
        "command": "classify",
        "parameters": {"input": Path(args.input).name, "rank": lattice.rank, "group_order": lattice.group.order},
        "verdicts": {name: {"flasque": flasque.to_dict(), "coflasque": coflasque.to_dict()}},
        "result": {"flasque": flasque.holds, "coflasque": coflasque.holds, "permutation": permutation},
    }


def _parse_subgroup(text: str) -> list[int]:
    try:
        return [int(part) for part in text.replace(" ", "").split(",") if part]
    except ValueError:
        raise InvalidInputError(f"--subgroup must be comma-separated element indices, got {text!r}") from None


def _cohomology(args: argparse.Namespace, pool: SweepPool, logger: Logger) -> dict[str, Any]:
    del pool
    lattice = load_lattice(args.input)
    if args.subgroup is None:
        subgroup = whole_group(lattice.group)
    else:
        subgroup = subgroup_generated(lattice.group, _parse_subgroup(args.subgroup))
    local = restrict(lattice, subgroup)
    h = cohomology(local.group, local, args.degree)
    logger.log_print(repr(h), module="cohomology")
    result: dict[str, Any] = {
        "degree": args.degree,
        "subgroup": list(subgroup.elements),
        "invariant_factors": list(h.invariant_factors),
        "description": describe_factors(h.invariant_factors),
    }
    if args.cocycles:
        result["cocycles"] = [sorted([k, v] for k, v in g.items()) for g in h.generators]
    return {
        "command": "cohomology",
        "parameters": {"input": Path(args.input).name, "rank": lattice.rank, "group_order": lattice.group.order},
        "result": result,
    }


def _emit(payload: dict[str, Any], args: argparse.Namespace) -> None:
    if args.out:
        target = Path(args.out)
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8") as f:
            _write(payload, args.format, f)
    else:
        _write(payload, args.format, sys.stdout)


def _write(payload: dict[str, Any], fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(render_json(payload))
    else:
        render_text(payload, stream)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command, emit its report; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2

    previous = FlasqueKitConfig.current()
    logger: Logger | None = None
    pool: SweepPool | None = None
    command = args.command if args.command != "reproduce" else f"reproduce {args.construction}"
    try:
        settings = load_settings(args.config).with_overrides(nonzero_budget=args.budget, threads=args.threads)
        FlasqueKitConfig.configure(settings)
        logger = Logger(log_dir=args.log_dir, print_to_console=args.verbose)
        pool = SweepPool(settings.threads)
        logger.log_section(command)
        logger.log_dict(settings.__dict__, title="settings", level="DEBUG")
        payload = args.handler(args, pool, logger)
        code = 0 if payload.get("passed", True) else 1
    except FlasqueKitError as exc:
        if logger is not None:
            logger.error(f"{exc.kind}: {exc}")
        payload = {"command": command, "error": exc.to_payload(), "exit_code": exc.exit_code}
        code = exc.exit_code
    except KeyboardInterrupt:
        return 130
    finally:
        FlasqueKitConfig.configure(previous)
        if pool is not None:
            pool.close()
        if logger is not None:
            logger.close()
    _emit(payload, args)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
