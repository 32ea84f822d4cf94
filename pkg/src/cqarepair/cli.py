"""Command-line front end.

Exit codes: 0 success (consistent, yes), 1 inconsistent or no, 2 usage or
parse error, 3 a solver cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from . import cqa, gadgets, graphlab, incremental
from . import hypergraph as hg
from .errors import (
    CqaError, InternalConsistencyError, PreconditionError, QueryError, SchemaError, SolverLimitError,
)
from .parser import (
    ParseError, format_aspec, format_constraints, format_query, format_schema, format_updates,
    parse_aspec, parse_constraints, parse_instance, parse_query, parse_schema, parse_updates,
    parse_weights, write_csv_dir,
)
from .repairs import repairs
from .semantics import C, S, Semantics, attribute, weighted

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

SEMANTICS = {"s": "S", "c": "C", "wc": "wC", "a": "A"}


class UsageError(CqaError):
    pass


@dataclasses.dataclass
class RunConfig:
    schema: object
    instance: object
    constraints: tuple
    limits: hg.SolverLimits
    fmt: str


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _limits(args) -> hg.SolverLimits:
    lim = hg.SolverLimits.from_env()
    over = {}
    if getattr(args, "max_vertices", None) is not None:
        over["max_vertices"] = args.max_vertices
    if getattr(args, "time_budget", None) is not None:
        over["time_budget"] = args.time_budget
    if getattr(args, "max_repairs", None) is not None:
        over["max_repairs"] = args.max_repairs
    try:
        return dataclasses.replace(lim, **over)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _config(args) -> RunConfig:
    schema = parse_schema(_read(args.schema), args.schema)
    if not Path(args.instance).exists():
        raise UsageError(f"instance path {args.instance} does not exist")
    instance = parse_instance(args.instance, schema)
    ic = parse_constraints(_read(args.constraints), schema, args.constraints)
    return RunConfig(schema, instance, ic, _limits(args), args.format)


def _query(args, schema):
    if args.query_text is not None:
        return parse_query(args.query_text, schema, "<command line>")
    if args.query is not None:
        return parse_query(_read(args.query), schema, args.query)
    return None


def _semantics(args, cfg: RunConfig) -> Semantics:
    kind = SEMANTICS[args.semantics]
    if kind == "S":
        return S
    if kind == "C":
        return C
    if kind == "wC":
        w = {t: 1 for t in cfg.instance}
        if args.weights:
            w.update(parse_weights(_read(args.weights), cfg.schema, args.weights))
        return weighted(w)
    if not args.aspec:
        raise UsageError("--semantics a needs --aspec FILE")
    spec = parse_aspec(_read(args.aspec), cfg.schema, args.aspec)
    spec.check(cfg.schema)
    return attribute(spec)


# ---------------------------------------------------------------- output


class Out:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self._csv = csv.writer(self.stream, lineterminator="\n")

    def line(self, text: str = ""):
        self.stream.write(text + "\n")

    def record(self, obj: dict):
        self.stream.write(json.dumps(obj, sort_keys=False) + "\n")

    def row(self, values):
        self._csv.writerow(values)


def _tuple_json(t):
    return {"relation": t.relation, "values": list(t.values)}


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    cfg = _config(args)
    h = hg.build_hypergraph(cfg.instance, cfg.constraints)
    out = Out(cfg.fmt)
    edges = h.describe_edges()
    if cfg.fmt == "jsonl":
        for e in edges:
            out.record({"kind": "violation", "tuples": [_tuple_json(t) for t in e]})
        out.record({"kind": "summary", "consistent": not edges, "violations": len(edges)})
    elif cfg.fmt == "csv":
        out.row(["violation", "tuple"])
        for i, e in enumerate(edges, 1):
            for t in e:
                out.row([i, str(t)])
    else:
        if not edges:
            out.line("consistent")
        else:
            out.line(f"{len(edges)} violation(s)")
            for e in edges:
                out.line("  {" + ", ".join(map(str, e)) + "}")
    return EXIT_OK if not edges else EXIT_NO


def cmd_repairs(args) -> int:
    cfg = _config(args)
    sem = _semantics(args, cfg)
    out = Out(cfg.fmt)
    if args.distance:
        if sem.kind == "S":
            raise UsageError("--distance is defined for c, wc and a semantics")
        rs = repairs(cfg.instance, cfg.constraints, sem, cfg.limits)
        if not len(rs):
            raise PreconditionError("no repair exists under these settings")
        if cfg.fmt == "jsonl":
            out.record({"kind": "distance", "semantics": sem.kind, "value": rs.distance})
        else:
            out.line(str(rs.distance))
        return EXIT_OK
    rs = repairs(cfg.instance, cfg.constraints, sem, cfg.limits)
    diffs = rs.differences()
    if cfg.fmt == "jsonl":
        for i, (r, d) in enumerate(zip(rs, diffs), 1):
            out.record({"kind": "repair", "index": i, "semantics": sem.kind,
                        "removed": [_tuple_json(t) for t in sorted(d.removed)],
                        "added": [_tuple_json(t) for t in sorted(d.added)],
                        "tuples": [_tuple_json(t) for t in r]})
        out.record({"kind": "summary", "semantics": sem.kind, "repairs": len(rs), "distance": rs.distance})
    elif cfg.fmt == "csv":
        out.row(["repair", "tuple"])
        for i, r in enumerate(rs, 1):
            for t in r:
                out.row([i, str(t)])
    else:
        dist = "" if rs.distance is None else f", distance {rs.distance}"
        out.line(f"{len(rs)} {sem.kind}-repair(s){dist}")
        for i, (r, d) in enumerate(zip(rs, diffs), 1):
            change = [f"-{t}" for t in sorted(d.removed)] + [f"+{t}" for t in sorted(d.added)]
            out.line(f"repair {i}: " + (" ".join(change) or "(unchanged)"))
            for t in r:
                out.line(f"  {t}")
    return EXIT_OK if len(rs) else EXIT_NO


def _fast_answer(q, cfg: RunConfig, sem: Semantics, mode: str):
    """The enumeration-free verdict when one applies, else None."""
    if mode != "certain" or not q.is_boolean or not q.is_ground:
        return None
    if sem.kind == "C":
        return cqa.certain_c_fast(q, cfg.instance, cfg.constraints, cfg.limits)
    if sem.kind == "S" and len(q.literals) == 1 and q.literals[0].positive and not q.comparisons:
        return cqa.certain_s_atomic_fast(q, cfg.instance, cfg.constraints)
    return None


def cmd_cqa(args) -> int:
    cfg = _config(args)
    q = _query(args, cfg.schema)
    if q is None:
        raise UsageError("cqa needs --query FILE or -e TEXT")
    sem = _semantics(args, cfg)
    out = Out(cfg.fmt)
    fast = _fast_answer(q, cfg, sem, args.mode) if (args.fast or args.verify) else None
    if args.fast and fast is None:
        print("note: no fast path for this query and semantics; enumerating repairs", file=sys.stderr)
    if fast is None or args.verify:
        fn = cqa.certain_answers if args.mode == "certain" else cqa.possible_answers
        res = fn(q, cfg.instance, cfg.constraints, sem, cfg.limits)
        if fast is not None and fast != res.yes:
            raise InternalConsistencyError(
                f"fast path says {'yes' if fast else 'no'}, enumeration says {'yes' if res.yes else 'no'}")
        answers = res.rows()
        verdict = res.yes
    else:
        answers = [()] if fast else []
        verdict = fast
    if q.is_boolean:
        word = "yes" if verdict else "no"
        if cfg.fmt == "jsonl":
            out.record({"kind": "verdict", "mode": args.mode, "semantics": sem.kind, "value": word})
        else:
            out.line(word)
        return EXIT_OK if verdict else EXIT_NO
    if cfg.fmt == "jsonl":
        for row in answers:
            out.record({"kind": "answer", "mode": args.mode, "semantics": sem.kind,
                        "values": dict(zip(q.head, row))})
    elif cfg.fmt == "csv":
        out.row(q.head)
        for row in answers:
            out.row(row)
    else:
        out.line(f"{len(answers)} {args.mode} answer(s) under {sem.kind}")
        for row in answers:
            out.line(", ".join(str(v) for v in row))
    return EXIT_OK


def cmd_update(args) -> int:
    cfg = _config(args)
    u = parse_updates(_read(args.updates), cfg.schema, args.updates)
    q = _query(args, cfg.schema)
    out = Out(cfg.fmt)
    report = {}
    if args.algorithm in ("fpt", "both"):
        size, witness = incremental.fpt_min_deletions(cfg.instance, u, cfg.constraints)
        report["distance"] = size
        report["witness"] = sorted(witness)
    if args.algorithm in ("naive", "both"):
        rs = incremental.incremental_c_repairs_naive(cfg.instance, u, cfg.constraints, cfg.limits)
        if "distance" in report and report["distance"] != rs.distance:
            raise InternalConsistencyError(
                f"fpt distance {report['distance']} differs from naive distance {rs.distance}")
        report["distance"] = rs.distance
        report["repairs"] = len(rs)
    answer = None
    if q is not None:
        answer = incremental.incremental_certain(q, cfg.instance, u, cfg.constraints)
    if cfg.fmt == "jsonl":
        rec = {"kind": "update", "algorithm": args.algorithm, "distance": report["distance"]}
        if "witness" in report:
            rec["witness"] = [_tuple_json(t) for t in report["witness"]]
        if "repairs" in report:
            rec["repairs"] = report["repairs"]
        out.record(rec)
        if answer is not None:
            out.record({"kind": "verdict", "mode": "certain", "semantics": "C",
                        "value": "yes" if answer else "no"})
    else:
        out.line(f"distance: {report['distance']}")
        if "witness" in report:
            out.line("witness: {" + ", ".join(map(str, report["witness"])) + "}")
        if "repairs" in report:
            out.line(f"repairs: {report['repairs']}")
        if answer is not None:
            out.line("yes" if answer else "no")
    return EXIT_OK if answer is None or answer else EXIT_NO


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_problem(directory: str, schema, constraints, instance, query=None, updates=None, aspec=None):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "schema.txt").write_text(format_schema(schema), encoding="utf-8")
    (d / "constraints.txt").write_text(format_constraints(constraints), encoding="utf-8")
    write_csv_dir(instance, d / "instance")
    if query is not None:
        (d / "query.txt").write_text(format_query(query), encoding="utf-8")
    if updates is not None:
        (d / "updates.txt").write_text(format_updates(updates), encoding="utf-8")
    if aspec is not None:
        (d / "aspec.txt").write_text(format_aspec(aspec), encoding="utf-8")
    print(f"wrote {d}", file=sys.stderr)


def _graph(args):
    if not args.graph:
        raise UsageError(f"gadget {args.kind} needs --graph FILE")
    return graphlab.parse_graph(_read(args.graph), args.graph)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"gadget {args.kind} needs --{n.replace('_', '-')}")


def cmd_gadget(args) -> int:
    kind = args.kind
    if kind in ("twin", "rhombus"):
        _need(args, "vertex")
        g = _graph(args)
        if args.vertex not in g.vertices:
            raise UsageError(f"unknown vertex {args.vertex!r}")
        fn = graphlab.twin_extension if kind == "twin" else graphlab.rhombus_extension
        _write(args.out, graphlab.format_graph(fn(g, args.vertex)))
    elif kind in ("block", "modk"):
        _need(args, "k")
        g = _graph(args)
        if kind == "block":
            if args.k < 1:
                raise UsageError("--k must be positive")
            b = graphlab.block_graph(g, args.k)
            _write(args.out, graphlab.format_graph(b.graph))
            print(f"distinguished vertex: {b.t}", file=sys.stderr)
        else:
            if not 1 <= args.k <= len(g.vertices):
                raise UsageError("--k must lie between 1 and the number of vertices")
            mg, tg = graphlab.modk_graph(g, args.k)
            _write(args.out, graphlab.format_graph(mg))
            print(f"distinguished vertex: {tg}", file=sys.stderr)
    elif kind == "encode-graph":
        _need(args, "out")
        g = _graph(args)
        if not g.vertices:
            raise UsageError("cannot encode the empty graph")
        enc = gadgets.encode_graph(g)
        _write_problem(args.out, enc.instance.schema, enc.constraints, enc.instance)
    elif kind in ("c-to-a", "control-wrap"):
        _need(args, "schema", "instance", "constraints", "out")
        cfg = _config(args)
        q = _query(args, cfg.schema)
        if q is None:
            raise UsageError(f"gadget {kind} needs --query FILE or -e TEXT")
        if kind == "c-to-a":
            im = gadgets.c_to_a_reduction(cfg.schema, cfg.constraints, q, cfg.instance)
            _write_problem(args.out, im.schema, im.constraints, im.instance, im.query, aspec=im.aspec)
        else:
            w = incremental.control_wrap(cfg.instance, cfg.constraints, q)
            _write_problem(args.out, w.schema, w.constraints, w.instance, w.query, w.update)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cqarepair", description="Repairs and consistent query answering.")
    sub = p.add_subparsers(dest="command", required=True)

    def data(sp, required=True):
        sp.add_argument("--schema", required=required, help="schema file")
        sp.add_argument("--instance", required=required, help="facts file or directory of <Relation>.csv")
        sp.add_argument("--constraints", required=required, help="constraints file")
        sp.add_argument("--format", choices=("table", "csv", "jsonl"), default="table")
        sp.add_argument("--max-vertices", type=int, help="cap on conflict vertices for exact search")
        sp.add_argument("--time-budget", type=float, help="seconds allowed per exact search")

    def query(sp):
        sp.add_argument("--query", help="query file")
        sp.add_argument("-e", dest="query_text", help="query text")

    def sem(sp):
        sp.add_argument("--semantics", choices=tuple(SEMANTICS), default="c")
        sp.add_argument("--weights", help="weight file for --semantics wc (unlisted tuples weigh 1)")
        sp.add_argument("--aspec", help="attribute-repair settings for --semantics a")
        sp.add_argument("--max-repairs", type=int, help="cap on enumerated repairs")

    sp = sub.add_parser("check", help="report violations")
    data(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("repairs", help="enumerate repairs")
    data(sp)
    sem(sp)
    sp.add_argument("--distance", action="store_true", help="print only the optimal distance")
    sp.set_defaults(func=cmd_repairs)

    sp = sub.add_parser("cqa", help="certain or possible answers")
    data(sp)
    sem(sp)
    query(sp)
    sp.add_argument("--mode", choices=("certain", "possible"), default="certain")
    sp.add_argument("--fast", action="store_true", help="use the enumeration-free path when it applies")
    sp.add_argument("--verify", action="store_true", help="run both paths and fail on disagreement")
    sp.set_defaults(func=cmd_cqa)

    sp = sub.add_parser("update", help="apply an update script to a consistent instance")
    data(sp)
    query(sp)
    sp.add_argument("--updates", required=True, help="update script")
    sp.add_argument("--algorithm", choices=("naive", "fpt", "both"), default="fpt")
    sp.add_argument("--max-repairs", type=int, help="cap on enumerated repairs")
    sp.set_defaults(func=cmd_update)

    sp = sub.add_parser("gadget", help="emit a reduction gadget")
    sp.add_argument("kind", choices=("twin", "rhombus", "block", "modk", "encode-graph", "c-to-a", "control-wrap"))
    sp.add_argument("--graph", help="graph file")
    sp.add_argument("--vertex", help="vertex label for twin and rhombus")
    sp.add_argument("--k", type=int, help="size parameter for block and modk")
    sp.add_argument("--out", help="output file (graphs) or directory (database problems)")
    data(sp, required=False)
    query(sp)
    sp.set_defaults(func=cmd_gadget)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverLimitError as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, SchemaError, QueryError, PreconditionError, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
