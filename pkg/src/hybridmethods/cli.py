"""Command-line entry point: clean, hypotheses, mine, rank, construct, serve.

Every subcommand prints JSON to stdout (or --output) and logs to stderr;
exit codes are 0 on success, 1 on engine errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .catalog import ItemCatalog, ItemKind, default_catalog
from .constructor import ConstructionSession, enumerate_cores, enumerate_frames
from .dataset import (
    CleaningPolicy,
    Filter,
    MappingDescriptor,
    clean,
    ingest_raw,
    load_clean_csv,
    project,
    write_clean_csv,
)
from .errors import EngineError
from .miner import (
    METHOD_THRESHOLD_DEFAULT,
    PRACTICE_THRESHOLD_DEFAULT,
    MiningConfig,
    frame_subset_matrix,
    mine,
)
from .stats import company_size_independence, sector_independence
from .variants import rank_variants

USAGE_ERROR = 2
ENGINE_ERROR = 1


def _emit(payload: dict | list, output: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _load_policy(path: str | None) -> CleaningPolicy:
    return CleaningPolicy.from_json(path) if path else CleaningPolicy()


def _load_catalog(path: str | None) -> ItemCatalog:
    return ItemCatalog.from_json(path) if path else default_catalog()


def _parse_filters(parts: list[str] | None) -> Filter:
    flt = Filter()
    for part in parts or []:
        for term in Filter.parse(part).terms:
            flt = flt.with_term(term)
    return flt


def cmd_clean(args) -> dict:
    mapping = MappingDescriptor.from_json(args.mapping)
    policy = _load_policy(args.policy)
    table = ingest_raw(args.input, mapping)
    cleaned = clean(table, policy)
    write_clean_csv(cleaned, args.output, policy)
    return {"rows_in": table.n_rows, "rows_out": cleaned.n_rows,
            "variables": len(cleaned.variables),
            "warnings": list(table.warnings), "output": args.output}


def cmd_hypotheses(args) -> dict:
    table = load_clean_csv(args.data)
    report: dict = {"alpha": args.alpha}
    h1_table, h1 = company_size_independence(table, alpha=args.alpha)
    report["company_size"] = {
        "counts": [list(r) for r in h1_table.counts],
        "categories": list(h1_table.row_labels),
        **h1.as_dict(),
    }
    sector_results = sector_independence(table, alpha=args.alpha)
    report["sectors"] = [r.as_dict() for r in sector_results]
    return report


def cmd_mine(args) -> list:
    table = load_clean_csv(args.data)
    catalog = _load_catalog(args.catalog)
    policy = _load_policy(args.policy)
    flt = _parse_filters(args.filter)
    kind = ItemKind.METHOD if args.items == "methods" else ItemKind.PRACTICE
    threshold = args.threshold
    if threshold is None:
        threshold = (METHOD_THRESHOLD_DEFAULT if kind is ItemKind.METHOD
                     else PRACTICE_THRESHOLD_DEFAULT)
    if args.frame:
        if kind is not ItemKind.PRACTICE:
            print("mine: --frame scopes a practice search; use --items practices",
                  file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
        frame = catalog.resolve_many(args.frame.split(","))
        matrix = frame_subset_matrix(table, frame, flt, policy, catalog)
    else:
        matrix = project(table, kind, flt, policy, catalog)
    config = MiningConfig(threshold=threshold, min_size=args.min_size,
                          max_size=args.max_size)
    return [s.as_dict() for s in mine(matrix, config)]


def cmd_rank(args) -> dict:
    table = load_clean_csv(args.data)
    catalog = _load_catalog(args.catalog)
    policy = _load_policy(args.policy)
    frame = catalog.resolve_many(args.frame.split(","))
    ranking = rank_variants(table, frame, _parse_filters(args.filter),
                            args.threshold, policy, catalog)
    body = ranking.as_dict()
    if args.set_size is not None:
        body["sizes"] = [s for s in body["sizes"]
                         if s["set_size"] == args.set_size]
    return body


def cmd_construct(args) -> dict:
    script = json.loads(Path(args.script).read_text(encoding="utf-8"))
    frame = script.get("frame")
    if not frame:
        print("construct: script must name a non-empty frame", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)
    table = load_clean_csv(args.data)
    catalog = _load_catalog(args.catalog)
    policy = _load_policy(args.policy)
    session = ConstructionSession(
        table,
        catalog.resolve_many(frame),
        Filter.parse(script.get("filter")),
        policy,
        catalog,
        core=catalog.resolve_many(script.get("core", [])),
        set_size=script.get("set_size"),
        threshold=script.get("threshold", PRACTICE_THRESHOLD_DEFAULT),
    )
    steps = script.get("steps")
    if steps is None:
        steps = [{"add": p} for p in script.get("add", [])]
    for step in steps:
        if "add" in step:
            session.add_practice(catalog.resolve(step["add"]))
        elif "remove" in step:
            session.remove_practice(catalog.resolve(step["remove"]))
        else:
            print(f"construct: unsupported step {step!r}", file=sys.stderr)
            raise SystemExit(USAGE_ERROR)
    return session.export()


def cmd_frames(args) -> dict:
    table = load_clean_csv(args.data)
    catalog = _load_catalog(args.catalog)
    policy = _load_policy(args.policy)
    flt = _parse_filters(args.filter)
    frames = enumerate_frames(table, flt, policy, catalog,
                              threshold=args.threshold)
    cores = enumerate_cores(table, flt, policy, catalog,
                            threshold=args.core_threshold)
    return {"frames": [f.as_dict() for f in frames],
            "cores": [c.as_dict() for c in cores]}


def cmd_serve(args) -> None:
    import uvicorn

    from .service import ServiceConfig, create_app

    ttl = float(os.environ.get("HYBRIDMETHODS_SESSION_TTL", args.ttl))
    port = int(os.environ.get("HYBRIDMETHODS_PORT", args.port))
    app = create_app(ServiceConfig(
        data_path=args.data,
        catalog=_load_catalog(args.catalog),
        policy=_load_policy(args.policy),
        session_ttl=ttl,
        snapshot_path=args.snapshot,
    ))
    uvicorn.run(app, host=args.host, port=port, log_level="info")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridmethods",
        description="Mine, rank and construct hybrid development methods "
                    "from survey usage data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", help="decode a raw export and write the canonical CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--mapping", required=True)
    p.add_argument("--policy")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("hypotheses", help="chi-squared independence report")
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--output", dest="output_json")
    p.set_defaults(func=cmd_hypotheses)

    p = sub.add_parser("mine", help="frequent method/practice combinations")
    p.add_argument("--data", required=True)
    p.add_argument("--items", choices=["methods", "practices"], required=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--min-size", type=int, default=1, dest="min_size")
    p.add_argument("--max-size", type=int, default=8, dest="max_size")
    p.add_argument("--filter", action="append")
    p.add_argument("--frame", help="comma-separated method ids scoping a practice search")
    p.add_argument("--catalog")
    p.add_argument("--policy")
    p.add_argument("--output", dest="output_json")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("rank", help="variant ranking with first-appearance indices")
    p.add_argument("--data", required=True)
    p.add_argument("--frame", required=True)
    p.add_argument("--filter", action="append")
    p.add_argument("--threshold", type=float, default=PRACTICE_THRESHOLD_DEFAULT)
    p.add_argument("--set-size", type=int, dest="set_size")
    p.add_argument("--catalog")
    p.add_argument("--policy")
    p.add_argument("--output", dest="output_json")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("construct", help="replay a construction script")
    p.add_argument("--script", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--catalog")
    p.add_argument("--policy")
    p.add_argument("--output", dest="output_json")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("frames", help="enumerate method frames and practice cores")
    p.add_argument("--data", required=True)
    p.add_argument("--threshold", type=float, default=METHOD_THRESHOLD_DEFAULT)
    p.add_argument("--core-threshold", type=float,
                   default=PRACTICE_THRESHOLD_DEFAULT, dest="core_threshold")
    p.add_argument("--filter", action="append")
    p.add_argument("--catalog")
    p.add_argument("--policy")
    p.add_argument("--output", dest="output_json")
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("serve", help="run the HTTP/JSON service")
    p.add_argument("--data", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ttl", type=float, default=24 * 3600)
    p.add_argument("--snapshot")
    p.add_argument("--catalog")
    p.add_argument("--policy")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except EngineError as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}},
              getattr(args, "output_json", None))
        print(f"error: {exc}", file=sys.stderr)
        return ENGINE_ERROR
    except SystemExit as exc:
        return int(exc.code or 0)
    if result is not None:
        _emit(result, getattr(args, "output_json", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
