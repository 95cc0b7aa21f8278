"""Command-line interface.

Subcommands load a trace archive (or directory) and print one table or curve
set to stdout (or ``--out``). Exit codes: 0 success, 1 usage error, 2 data
error. Output is deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .align import Perspective, Scale
from .datasets import load_experiment
from .errors import IohaError
from .tables import export_table

DEFAULT_ALPHA = 0.01
DEFAULT_ROUNDS = 25
DEFAULT_SEED = 0


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ioha", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, archive=True):
        p = sub.add_parser(name, help=help_text)
        if archive:
            p.add_argument("archive", help="trace archive (.zip/.tar[.gz|.bz2|.xz]) or directory")
        p.add_argument("--out", type=Path, help="write output to this file instead of stdout")
        return p

    def add_selection(p, func=True, dim=True, algs=True):
        if dim:
            p.add_argument("--dim", type=int, help="problem dimension")
        if func:
            p.add_argument("--func", help="function id")
        if algs:
            p.add_argument("--alg", action="append", dest="algs", help="algorithm id (repeatable)")

    def add_range(p):
        p.add_argument("--fmin", type=float, help="anchor range minimum")
        p.add_argument("--fmax", type=float, help="anchor range maximum")
        group = p.add_mutually_exclusive_group()
        group.add_argument("--step", type=float, help="anchor step size")
        group.add_argument("--count", type=int, help="number of anchors")
        p.add_argument(
            "--scale", choices=["linear", "log", "auto"], default="auto", help="anchor spacing"
        )
        p.add_argument(
            "--perspective",
            choices=["target", "budget"],
            default="target",
            help="fixed-target or fixed-budget view",
        )

    def add_format(p, choices=("csv", "latex"), default="csv"):
        p.add_argument("--format", choices=list(choices), default=default)

    p = add("summary", "list the loaded data sets")
    add_format(p)

    p = add("overview", "function-value overview per algorithm")
    add_selection(p, algs=False)
    add_format(p)

    p = add("stats", "per-anchor descriptive statistics")
    add_selection(p)
    add_range(p)
    p.add_argument("--target", type=float, help="value target for fixed-budget success counts")
    p.add_argument("--layout", choices=["long", "wide"], help="emit raw samples instead")
    add_format(p, ("csv", "latex", "json"))

    p = add("ecdf", "aggregated runtime ECDF curves")
    add_selection(p)
    add_range(p)
    p.add_argument("--targets-file", type=Path, help="CSV funcId,target map for multi-function aggregation")
    add_format(p, ("json", "csv"), default="json")

    p = add("auc", "area under the aggregated ECDF")
    add_selection(p)
    add_range(p)
    p.add_argument("--targets-file", type=Path)
    p.add_argument("--tmin", type=float, help="AUC budget range start (default 1)")
    p.add_argument("--tmax", type=float, help="AUC budget range end (default max budget)")
    add_format(p, ("csv", "latex", "json"))

    p = add("test", "pairwise two-sample tests with multiple-testing correction")
    add_selection(p)
    p.add_argument("--target", type=float, help="target value (default: near-best rule)")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    add_format(p, ("json", "csv", "latex"), default="json")

    p = add("rank", "rating-based ranking over functions and dimensions")
    add_selection(p, func=False)
    p.add_argument("--rounds", type=int, default=DEFAULT_ROUNDS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--target-source", choices=["radar", "file"], default="radar")
    p.add_argument("--targets-file", type=Path)
    p.add_argument(
        "--perspective", choices=["target", "budget"], default="target"
    )
    add_format(p, ("csv", "latex", "json"))

    p = add("params", "tracked-parameter statistics")
    add_selection(p)
    add_range(p)
    p.add_argument("--param", action="append", dest="params", help="parameter name (repeatable)")
    add_format(p, ("csv", "latex", "json"))

    p = add("serve", "start the HTTP service", archive=False)
    p.add_argument("archive", nargs="?", help="optional archive to preload as a session")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--max-upload-mb", type=int, default=64)
    p.add_argument("--session-ttl-min", type=int, default=60)
    p.add_argument("--allow-origin", default="*")
    p.add_argument("--ui-dir", type=Path, help="directory of built UI assets to serve at /")
    return parser


def _emit(data: bytes, out: Path | None) -> None:
    if out is not None:
        out.write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _json_bytes(payload) -> bytes:
    return (json.dumps(analysis.jsonable(payload), indent=2) + "\n").encode()


def _anchors(args, datasets):
    return analysis.resolve_anchors(
        datasets,
        Perspective(args.perspective),
        lo=args.fmin,
        hi=args.fmax,
        step=args.step,
        count=args.count,
        scale=Scale(args.scale),
    )


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise _UsageError(f"--{name} is required for this subcommand")


def _target_map(args):
    if args.targets_file is None:
        return None
    return analysis.parse_target_map(Path(args.targets_file).read_text())


_REQUIRED_FLAGS = {
    "overview": ("func", "dim"),
    "stats": ("func", "dim"),
    "test": ("func", "dim"),
    "params": ("func", "dim"),
    "ecdf": ("dim",),
    "auc": ("dim",),
}


def _run(args) -> bytes:
    _require(args, *_REQUIRED_FLAGS.get(args.command, ()))
    if args.command in ("ecdf", "auc") and args.targets_file is None:
        _require(args, "func")

    collection = load_experiment(args.archive)

    if args.command == "summary":
        return export_table(analysis.summary_table(collection), args.format)

    if args.command == "overview":
        return export_table(
            analysis.overview_table(collection, args.func, args.dim), args.format
        )

    if args.command == "stats":
        datasets = analysis.select_datasets(collection, args.func, args.dim, args.algs)
        anchors = _anchors(args, datasets)
        if args.layout:
            return export_table(
                analysis.samples_table(datasets, anchors, args.layout),
                args.format if args.format != "json" else "csv",
            )
        if args.format == "json":
            return _json_bytes(analysis.stats_payload(datasets, anchors, args.target))
        return export_table(
            analysis.stats_table(datasets, anchors, args.target), args.format
        )

    if args.command in ("ecdf", "auc"):
        target_map = _target_map(args)
        targets = None
        if target_map is None:
            datasets = analysis.select_datasets(collection, args.func, args.dim, args.algs)
            if args.fmin is not None:
                targets = _anchors(args, datasets)
        curves, meta = analysis.ecdf_curves(
            collection,
            args.dim,
            args.algs,
            func_id=args.func,
            targets=targets,
            target_map=target_map,
            perspective=Perspective(args.perspective),
        )
        if args.command == "ecdf":
            if args.format == "json":
                return _json_bytes(analysis.ecdf_payload(curves, meta))
            return export_table(analysis.ecdf_long_table(curves), args.format)
        t_min, t_max = analysis.default_auc_range(curves)
        if args.tmin is not None:
            t_min = args.tmin
        if args.tmax is not None:
            t_max = args.tmax
        table = analysis.auc_table(curves, t_min, t_max)
        if args.format == "json":
            return _json_bytes(
                {"tMin": t_min, "tMax": t_max, **meta,
                 "auc": {row[0]: row[1] for row in table.rows}}
            )
        return export_table(table, args.format)

    if args.command == "test":
        payload = analysis.ks_payload(
            collection, args.func, args.dim, args.algs, target=args.target, alpha=args.alpha
        )
        if args.format == "json":
            return _json_bytes(payload)
        return export_table(analysis.ks_table(payload), args.format)

    if args.command == "rank":
        target_map = _target_map(args) if args.target_source == "file" else None
        if args.target_source == "file" and target_map is None:
            raise _UsageError("--target-source file requires --targets-file")
        table = analysis.rank_table(
            collection,
            dimensions=[args.dim] if args.dim else None,
            alg_ids=args.algs,
            rounds=args.rounds,
            seed=args.seed,
            perspective=Perspective(args.perspective),
            target_map=target_map,
        )
        if args.format == "json":
            return _json_bytes(
                {"rounds": args.rounds, "seed": args.seed,
                 "ranking": [dict(zip(table.header, row)) for row in table.rows]}
            )
        return export_table(table, args.format)

    if args.command == "params":
        datasets = analysis.select_datasets(collection, args.func, args.dim, args.algs)
        anchors = _anchors(args, datasets)
        table = analysis.params_table(datasets, anchors, args.params)
        if args.format == "json":
            return _json_bytes([dict(zip(table.header, row)) for row in table.rows])
        return export_table(table, args.format)

    raise _UsageError(f"unknown command {args.command!r}")


def _serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        max_upload_mb=args.max_upload_mb,
        session_ttl_min=args.session_ttl_min,
        allow_origin=args.allow_origin,
        ui_dir=args.ui_dir,
    )
    if args.archive:
        session_id = app.state.registry.create(load_experiment(args.archive))
        print(f"preloaded session: {session_id}")
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            return _serve(args)
        _emit(_run(args), args.out)
        return 0
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (IohaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
