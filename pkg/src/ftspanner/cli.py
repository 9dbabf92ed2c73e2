"""Command-line surface: build, verify, generate, analyze, bench.

Reports are key-value documents (text by default, JSON with --format json)
embedding the fully resolved configuration; aside from bench timings, the
same configuration and seed produce byte-identical JSON output. Exit codes:
0 success or verified pass, 1 verification or criticality failure, 2 usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from typing import Optional

from . import analysis, engine, lowerbound, spanner, verify
from .graphs import Graph, GraphError, InvalidQueryError, random_gnp, read_graph, write_graph
from .protection import ProtectionQuery, is_protected

SCHEMA = "ftspanner/1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _sanitize(obj):
    """JSON-safe copy: infinities become the string 'unreachable'."""
    if isinstance(obj, float):
        if math.isinf(obj):
            return "unreachable"
        return obj
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    return obj


def _render_text(obj, indent=0, out=None):
    pad = "  " * indent
    for key in obj if isinstance(obj, dict) else ():
        value = obj[key]
        if isinstance(value, dict):
            out.append(f"{pad}{key}:")
            _render_text(value, indent + 1, out)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.append(f"{pad}{key}: [{len(value)} records]")
        else:
            out.append(f"{pad}{key}: {value}")
    return out


def emit_report(report: dict, args) -> None:
    report = _sanitize(report)
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(_render_text(report, out=[])) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_dict(args, fields) -> dict:
    cfg = {"schema": SCHEMA, "command": args.command}
    for name in fields:
        cfg[name.replace("_", "-")] = getattr(args, name)
    return cfg


# -- subcommands ---------------------------------------------------------------


def cmd_build(args) -> int:
    g = read_graph(args.input)
    params = spanner.SpannerParams(args.f, args.k, args.mode)
    started = time.perf_counter()
    result = spanner.greedy_ft_spanner(g, params)
    elapsed = time.perf_counter() - started
    density = analysis.density_report(g, result.h, args.f, args.k)
    report = {
        "config": _config_dict(args, ["input", "f", "k", "mode", "spanner_out",
                                      "trace_out", "format"]),
        "density": density.to_json(),
        "edges_added": result.h.m,
        "edges_skipped": g.m - result.h.m,
        "spanner_edges": [[u, v, w] for u, v, w in result.h.edges()],
        "trace": [r.to_json() for r in result.trace],
    }
    if args.format == "text":
        report["build_seconds"] = round(elapsed, 3)
    if args.spanner_out:
        write_graph(result.h, args.spanner_out)
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8") as fh:
            json.dump(_sanitize({"schema": SCHEMA, "trace": report["trace"]}),
                      fh, sort_keys=True, indent=2)
    emit_report(report, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_graph(args.input)
    h = read_graph(args.spanner)
    t = 2 * args.k - 1
    if args.method == "exhaustive":
        rep = verify.verify_exhaustive(g, h, args.f, t, args.mode,
                                       work_cap=args.work_cap,
                                       workers=args.threads)
    else:
        rep = verify.verify_per_edge(g, h, args.f, t, args.mode)
    report = {
        "config": _config_dict(args, ["input", "spanner", "f", "k", "mode",
                                      "method", "work_cap", "threads", "format"]),
        "stretch": t,
        "result": rep.to_json(),
    }
    emit_report(report, args)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_generate(args) -> int:
    if args.base:
        base = lowerbound.named_base(args.base)
        base_name = args.base
    else:
        if args.target_n is None:
            raise InvalidQueryError("generate needs --base or --target-n")
        base = lowerbound.base_girth_graph(args.k, args.target_n, seed=args.seed)
        base_name = f"girth-{2 * args.k + 2}(target_n={args.target_n})"
    if args.mode == "vertex":
        inst = lowerbound.vft_blowup(base, args.f, args.k, base_name=base_name)
    else:
        inst = lowerbound.eft_blowup(base, args.f, args.k, base_name=base_name,
                                     variant=args.eft_variant)
    crit = lowerbound.check_criticality(inst)
    report = {
        "config": _config_dict(args, ["k", "f", "mode", "eft_variant", "base",
                                      "target_n", "seed", "instance_out", "format"]),
        "instance": lowerbound.instance_metadata(inst, seed=args.seed),
        "nodes": inst.blown.n,
        "edges": inst.blown.m,
        "criticality": crit.to_json(),
    }
    if args.instance_out:
        with open(args.instance_out, "w", encoding="utf-8") as fh:
            lowerbound.save_instance(inst, fh, seed=args.seed)
    emit_report(report, args)
    return EXIT_OK if crit.ok else EXIT_FAIL


def cmd_analyze(args) -> int:
    g = read_graph(args.input)
    report = {
        "config": _config_dict(args, ["input", "walks", "closed_lengths",
                                      "blockades", "phi", "k", "f", "c",
                                      "regularize", "density", "spanner", "format"]),
    }
    ran_anything = False
    if args.closed_lengths:
        lengths = [int(x) for x in args.closed_lengths.split(",")]
        report["closed_walks"] = {str(L): analysis.count_closed_walks(g, L)
                                  for L in lengths}
        ran_anything = True
    blockades = None
    if args.blockades:
        if args.k is None:
            raise InvalidQueryError("--blockades needs --k")
        phi = args.phi if args.phi is not None else analysis.default_phi(g, args.k)
        blockades = analysis.build_blockades(g, args.k, args.f or 0, phi)
        report["blockades"] = {
            "phi": phi,
            "level_sizes": {str(k): v for k, v in blockades.level_sizes().items()},
            "selections": blockades.log,
        }
        ran_anything = True
    if args.walks is not None:
        stats = analysis.walk_stats(g, args.walks, blockades)
        section = {
            "i": stats.i,
            "total_walks": stats.total_walks,
            "unblocked_walks": stats.unblocked_total(),
            "meets": stats.meets,
            "closed_walks": {str(k): v for k, v in stats.closed_walks.items()},
            "max_pair_count": stats.max_pair()[0],
        }
        if args.f and g.m:
            # measured ratio against m * (f * mean degree)^(i-1); reported only
            mean_deg = 2 * g.m / g.n
            reference = g.m * (args.f * mean_deg) ** (stats.i - 1)
            section["meets_vs_reference"] = stats.meets / reference
        report["walk_stats"] = section
        ran_anything = True
    if args.regularize:
        cutoff = args.c if args.c is not None else analysis.default_cutoff(args.k or 2)
        reg = analysis.regularize(g, cutoff)
        report["regularize"] = {
            "cutoff": cutoff,
            "cases": reg.cases,
            "edges_in": reg.edges_in,
            "edges_out": reg.edges_out,
            "retention": reg.retention,
            "degrees": reg.stats.to_json(),
        }
        ran_anything = True
    if args.density:
        if not args.spanner or args.f is None or args.k is None:
            raise InvalidQueryError("--density needs --spanner, --f and --k")
        h = read_graph(args.spanner)
        report["density"] = analysis.density_report(g, h, args.f, args.k).to_json()
        ran_anything = True
    if not ran_anything:
        raise InvalidQueryError(
            "analyze needs at least one of --walks/--closed-lengths/"
            "--blockades/--regularize/--density")
    emit_report(report, args)
    return EXIT_OK


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    g = random_gnp(args.n, args.p, rng, 1.0, 2.0)
    f_values = [int(x) for x in args.f_list.split(",")]
    backends = list(engine.available_backends()) if args.backends == "both" \
        else [args.backends if args.backends != "auto" else engine.BACKEND]
    rows = []
    for f in f_values:
        params = spanner.SpannerParams(f, args.k, args.mode)
        for backend in backends:
            with engine.use_backend(backend):
                best = math.inf
                edges = None
                for _ in range(args.repeat):
                    started = time.perf_counter()
                    result = spanner.greedy_ft_spanner(g, params)
                    best = min(best, time.perf_counter() - started)
                    edges = result.h.m
            rows.append({"f": f, "k": args.k, "backend": backend,
                         "build_seconds": round(best, 4), "spanner_edges": edges})
    report = {
        "config": _config_dict(args, ["n", "p", "seed", "k", "f_list", "mode",
                                      "backends", "repeat", "format"]),
        "graph": {"n": g.n, "m": g.m},
        "timings": rows,
    }
    emit_report(report, args)
    if args.format == "text":
        header = f"{'f':>4} {'backend':>9} {'seconds':>9} {'edges':>7}"
        lines = [header] + [
            f"{r['f']:>4} {r['backend']:>9} {r['build_seconds']:>9.4f} {r['spanner_edges']:>7}"
            for r in rows]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="report destination (default stdout)")
    p.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ftspanner",
        description="Fault-tolerant spanners: greedy builds, verification, "
                    "extremal instances, and walk analysis.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="run the greedy spanner construction")
    p.add_argument("--input", required=True, help="edge-list graph file")
    p.add_argument("--f", type=int, required=True, help="fault budget")
    p.add_argument("--k", type=int, required=True, help="stretch parameter (stretch 2k-1)")
    p.add_argument("--mode", choices=["vertex", "edge"], default="vertex")
    p.add_argument("--spanner-out", help="write the spanner edge list here")
    p.add_argument("--trace-out", help="write the decision trace JSON here")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check the fault-tolerant spanner property")
    p.add_argument("--input", required=True, help="original graph file")
    p.add_argument("--spanner", required=True, help="candidate spanner file")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["vertex", "edge"], default="vertex")
    p.add_argument("--method", choices=["exhaustive", "per-edge"], default="per-edge")
    p.add_argument("--work-cap", type=int, default=10 ** 8,
                   help="refuse exhaustive runs above this many set/pair combinations")
    p.add_argument("--threads", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="build a blow-up lower-bound instance")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--mode", choices=["vertex", "edge"], default="vertex")
    p.add_argument("--eft-variant", choices=["k2", "general"], default=None)
    p.add_argument("--base", help="base graph: registry name, plane:q, random:seed:n[:k]")
    p.add_argument("--target-n", type=int, help="pick a base near this node count")
    p.add_argument("--seed", type=int, help="seed for the randomized base fallback")
    p.add_argument("--instance-out", help="write the blown graph plus metadata here")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="walk statistics, blockades, regularization")
    p.add_argument("--input", required=True)
    p.add_argument("--walks", type=int, help="per-pair walk counts of this length")
    p.add_argument("--closed-lengths", help="comma list of closed-walk lengths")
    p.add_argument("--blockades", action="store_true",
                   help="build blockades first (needs --k; --phi defaults to "
                        "the measured (4*band)^-k)")
    p.add_argument("--phi", type=float, help="blockade fraction budget in (0,1)")
    p.add_argument("--k", type=int)
    p.add_argument("--f", type=int)
    p.add_argument("--c", type=float, default=None,
                   help="regularization degree cutoff multiplier "
                        "(default 12 * 9^k)")
    p.add_argument("--regularize", action="store_true")
    p.add_argument("--density", action="store_true",
                   help="density report (needs --spanner, --f, --k)")
    p.add_argument("--spanner")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="time greedy builds across budgets and backends")
    p.add_argument("--n", type=int, default=120)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--f-list", default="1,4", help="comma list of fault budgets")
    p.add_argument("--mode", choices=["vertex", "edge"], default="vertex")
    p.add_argument("--backends", choices=["auto", "compiled", "python", "both"],
                   default="both")
    p.add_argument("--repeat", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (GraphError, InvalidQueryError, verify.WorkCapExceeded,
            analysis.RegularizeError, spanner.TraceError,
            FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
