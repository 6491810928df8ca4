"""Command-line frontend.

Exit codes: 0 on success, 1 on usage errors, 2 on data/validation errors.
Every subcommand is deterministic for a fixed --seed, which is always echoed
in the output artifacts.
"""

import argparse
import json
import sys

import numpy as np

from . import bench as bench_mod
from .errors import BisbmError
from .generate import PlantedInstance, interpolate_noise, sample_network
from .graph import (
    Partition,
    edge_list_text,
    parse_edge_list,
    parse_partition,
    parse_types,
    partition_text,
    types_by_convention,
    types_text,
)
from .metrics import nmi
from .objective import ModelSpec
from .search import kl_fit

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _entropy_seed():
    return int(np.random.SeedSequence().generate_state(1)[0])


def build_parser():
    parser = _Parser(prog="bisbm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a network from an instance JSON")
    p.add_argument("instance", help="instance JSON file")
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.0,
                   help="mixing parameter in [0,1] (default 1.0)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="edge-list output path")
    p.add_argument("--types-out", default=None, help="optional types file output")

    p = sub.add_parser("fit", help="maximum-likelihood partition search")
    p.add_argument("edges", help="edge-list file")
    _add_types_args(p)
    p.add_argument("--ka", type=int, required=True, help="type-a group count")
    p.add_argument("--kb", type=int, required=True,
                   help="type-b group count (unipartite fits use K = ka + kb)")
    p.add_argument("--dc", action=argparse.BooleanOptionalAction, default=True,
                   help="degree-corrected objective (default on)")
    p.add_argument("--unipartite", action="store_true",
                   help="fit the unipartite model (baseline)")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--engine", choices=("cython", "python"), default=None)
    p.add_argument("--out", required=True, help="partition file output")
    p.add_argument("--result", default=None, help="fit-result JSON output")

    p = sub.add_parser("project", help="one-mode projection of a bipartite graph")
    p.add_argument("edges")
    _add_types_args(p)
    p.add_argument("--side", choices=("a", "b"), required=True)
    p.add_argument("--weighted", action="store_true",
                   help="weight edges by shared-neighbor counts")
    p.add_argument("--out", required=True)

    p = sub.add_parser("nmi", help="normalized mutual information of two partitions")
    p.add_argument("partition_a")
    p.add_argument("partition_b")

    p = sub.add_parser("sweep", help="run a lambda-sweep experiment from a config JSON")
    p.add_argument("config")
    p.add_argument("--raw", required=True, help="raw per-replicate CSV output")
    p.add_argument("--agg", required=True, help="aggregate quantile CSV output")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("compare", help="speed/quality comparison of the two models")
    p.add_argument("edges")
    _add_types_args(p)
    p.add_argument("--ka", type=int, required=True)
    p.add_argument("--kb", type=int, required=True)
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--dc", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", dest="json_out", default=None)
    p.add_argument("--csv", dest="csv_out", default=None)

    p = sub.add_parser("clumpring", help="bipartite/unipartite parity on clump rings")
    p.add_argument("--k", required=True,
                   help="comma-separated group counts, e.g. 4,5,6,7,8")
    p.add_argument("--clump-a", type=int, default=2)
    p.add_argument("--clump-b", type=int, default=2)
    p.add_argument("--dc", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--restarts", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="record JSON output")
    return parser


def _add_types_args(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--types", default=None, help="types file (id<TAB>a|b)")
    group.add_argument("--na", type=int, default=None,
                       help="convention: vertices 0..NA-1 are type a")
    parser.add_argument("--n", type=int, default=None,
                        help="total vertex count (required with --na)")


def _load_bipartite(args):
    if args.types is not None:
        with open(args.types, encoding="utf-8") as fh:
            types = parse_types(fh)
    else:
        if args.n is None:
            raise BisbmError("--na requires --n (total vertex count)")
        types = types_by_convention(args.na, args.n)
    with open(args.edges, encoding="utf-8") as fh:
        return parse_edge_list(fh, types), types


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else USAGE_EXIT
    try:
        return _dispatch(args)
    except (BisbmError, OSError, json.JSONDecodeError) as exc:
        print(f"bisbm {args.command}: error: {exc}", file=sys.stderr)
        return DATA_EXIT


def _dispatch(args):
    return {
        "generate": _cmd_generate,
        "fit": _cmd_fit,
        "project": _cmd_project,
        "nmi": _cmd_nmi,
        "sweep": _cmd_sweep,
        "compare": _cmd_compare,
        "clumpring": _cmd_clumpring,
    }[args.command](args)


def _cmd_generate(args):
    with open(args.instance, encoding="utf-8") as fh:
        inst = PlantedInstance.from_json(fh.read())
    seed = args.seed if args.seed is not None else _entropy_seed()
    omega = interpolate_noise(inst, args.lam)
    net = sample_network(inst, seed, omega=omega)
    header = f"instance={inst.label or 'unnamed'} lambda={args.lam} seed={seed}"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(edge_list_text(net, header=header))
    if args.types_out:
        with open(args.types_out, "w", encoding="utf-8") as fh:
            fh.write(types_text(net.vertex_type))
    print(f"wrote {args.out} (N={net.num_vertices}, m={net.total_edges}, seed={seed})")
    return 0


def _cmd_fit(args):
    graph, types = _load_bipartite(args)
    model = ModelSpec("unipartite" if args.unipartite else "bipartite", args.dc)
    seed = args.seed if args.seed is not None else _entropy_seed()
    target = graph if model.bipartite else _as_unipartite(graph)
    fit = kl_fit(target, model, args.ka, args.kb, restarts=args.restarts,
                 seed=seed, engine=args.engine)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(partition_text(fit.best_partition))
    doc = fit.to_dict(partition_file=args.out)
    doc["seed"] = seed
    if args.result:
        with open(args.result, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    print(f"best score {fit.best_score!r} over {fit.restarts} restarts (seed={seed})")
    return 0


def _as_unipartite(graph):
    from .graph import UnipartiteGraph

    return UnipartiteGraph(
        graph.num_vertices, graph.edges_u, graph.edges_v, graph.edges_w
    )


def _cmd_project(args):
    graph, _ = _load_bipartite(args)
    proj = graph.projection(args.side, weighted=args.weighted)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(edge_list_text(proj))
    print(f"wrote {args.out} (n={proj.num_vertices}, m={proj.total_edges})")
    return 0


def _cmd_nmi(args):
    with open(args.partition_a, encoding="utf-8") as fh:
        pa = parse_partition(fh)
    with open(args.partition_b, encoding="utf-8") as fh:
        pb = parse_partition(fh)
    print(float(nmi(pa, pb)))
    return 0


def _cmd_sweep(args):
    with open(args.config, encoding="utf-8") as fh:
        config = bench_mod.SweepConfig.from_json(fh.read())
    result = bench_mod.run_sweep(config, workers=args.workers)
    with open(args.raw, "w", encoding="utf-8") as fh:
        fh.write(result.raw_csv())
    with open(args.agg, "w", encoding="utf-8") as fh:
        fh.write(result.aggregate_csv())
    print(f"wrote {args.raw} ({len(result.records)} records) and {args.agg}")
    return 0


def _cmd_compare(args):
    graph, _ = _load_bipartite(args)
    seed = args.seed if args.seed is not None else _entropy_seed()
    result = bench_mod.run_perf_comparison(
        graph, args.ka, args.kb, replicates=args.replicates, seed=seed,
        corrected=args.dc,
    )
    doc = result.to_dict()
    doc["seed"] = seed
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8") as fh:
            fh.write(result.csv())
    summary = result.summary()
    print(json.dumps({"seed": seed, "summary": summary}, indent=2))
    return 0


def _cmd_clumpring(args):
    try:
        ks = [int(x) for x in args.k.split(",") if x.strip()]
    except ValueError:
        raise BisbmError(f"bad --k list {args.k!r}") from None
    rows = bench_mod.run_clump_parity(
        ks, clump_a=args.clump_a, clump_b=args.clump_b, corrected=args.dc,
        restarts=args.restarts, seed=args.seed,
    )
    doc = [
        {k: v for k, v in row.items() if not isinstance(v, Partition)}
        for row in rows
    ]
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.out} ({len(doc)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
