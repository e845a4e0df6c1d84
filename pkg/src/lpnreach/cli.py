"""Command-line front end: ``lpnreach --model FILE --backend mdd``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .generators import FAMILIES, generate_model
from .model import ModelError
from .modelfile import ModelFormatError, builtin_model_path, load_model
from .reach import (COMPLETED, DEFAULT_MAX_NODES, DEFAULT_TIME_LIMIT, NODE_CAP, STATE_CAP,
                    TIMEOUT, Limits, dfs_reach)
from .stores import DEFAULT_THRESHOLD, KINDS, make_store

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TIMEOUT = 3
EXIT_STATE_CAP = 4
EXIT_PARSE = 5
EXIT_MODEL = 6
EXIT_DISAGREE = 7
EXIT_NODE_CAP = 8

_EXIT_FOR = {COMPLETED: EXIT_OK, TIMEOUT: EXIT_TIMEOUT, STATE_CAP: EXIT_STATE_CAP,
             NODE_CAP: EXIT_NODE_CAP}


def _positive_int(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _positive_float(text):
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _backend_list(text):
    kinds = [k.strip() for k in text.split(",") if k.strip()]
    for k in kinds:
        if k not in KINDS:
            raise argparse.ArgumentTypeError(
                f"unknown backend {k!r} (choose from {', '.join(KINDS)})")
    return kinds


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lpnreach",
        description="Depth-first reachability for labeled Petri nets with a choice "
                    "of state store.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", metavar="PATH",
                     help="model file (built-in names such as fig1_circuit.lpn also work)")
    src.add_argument("--generate", choices=FAMILIES, metavar="FAMILY",
                     help=f"built-in model family: {', '.join(FAMILIES)}")
    p.add_argument("--n", type=int, help="size parameter for --generate")
    p.add_argument("--backend", choices=KINDS, default="hash")
    p.add_argument("--threshold", type=_positive_int, default=DEFAULT_THRESHOLD,
                   metavar="STATES",
                   help="hybrid: flush the tree buffer once it holds this many states "
                        f"(default {DEFAULT_THRESHOLD})")
    p.add_argument("--time-limit", type=_positive_float, default=DEFAULT_TIME_LIMIT,
                   metavar="SECONDS", help=f"default {DEFAULT_TIME_LIMIT:g}")
    p.add_argument("--max-states", type=_positive_int, metavar="N")
    p.add_argument("--max-nodes", type=_positive_int, default=DEFAULT_MAX_NODES, metavar="N",
                   help="cap on store entries/nodes, the memory bound "
                        f"(default {DEFAULT_MAX_NODES})")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--compare", type=_backend_list, metavar="BACKEND[,BACKEND...]",
                   help="also run these backends and check they agree")
    p.add_argument("--dump-store", metavar="PATH",
                   help="write a deterministic dump of the final store")
    return p


def _load(args, parser):
    if args.generate:
        if args.n is None:
            parser.error("--generate requires --n")
        try:
            system = generate_model(args.generate, args.n)
        except ModelError as exc:
            parser.error(str(exc))
        return system, f"{args.generate}{args.n}"
    if args.n is not None:
        parser.error("--n only applies to --generate")
    path = Path(args.model)
    if not path.exists() and builtin_model_path(path.name).exists():
        path = builtin_model_path(path.name)
    try:
        return load_model(path), path.stem
    except OSError as exc:
        raise ModelFormatError(f"cannot read {args.model}: {exc.strerror}") from exc


def agreement(reports) -> bool:
    """True unless two completed runs disagree on the reachable state count."""
    done = [r.states for r in reports if r.completed]
    return len(set(done)) <= 1


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        system, name = _load(args, parser)
    except SystemExit:
        return EXIT_USAGE
    except ModelError as exc:
        print(f"lpnreach: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    backends = [args.backend]
    for k in args.compare or ():
        if k not in backends:
            backends.append(k)

    limits = Limits(max_states=args.max_states, time_limit=args.time_limit,
                    max_nodes=args.max_nodes)
    arity = len(system.modules)
    reports = []
    for kind in backends:
        store = make_store(kind, arity, args.threshold)
        try:
            rep = dfs_reach(system, store, limits, name)
        except ModelError as exc:
            print(f"lpnreach: model error: {exc}", file=sys.stderr)
            return EXIT_MODEL
        reports.append(rep)
        if kind == args.backend and args.dump_store:
            Path(args.dump_store).write_text(store.dump())

    agree = agreement(reports) if args.compare is not None else None
    if args.format == "json":
        out = report.to_json(reports, agree)
    elif args.format == "csv":
        out = report.to_csv(reports)
    else:
        out = report.to_text(reports, agree)
    sys.stdout.write(out)

    for r in reports:
        if not r.completed:
            print(f"lpnreach: {r.backend}: search stopped early ({r.termination}) "
                  f"after {r.states} states", file=sys.stderr)
    if agree is False:
        print("lpnreach: backends disagree on the reachable state count", file=sys.stderr)
        return EXIT_DISAGREE
    return _EXIT_FOR[reports[0].termination]


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
