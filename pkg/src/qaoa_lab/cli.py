"""Command line entry point: ``qaoa-lab <command> ...``.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .classical import gw_local_search_cut, random_lo_cut, read_cut, write_cut
from .errors import QaoaLabError
from .graph import bits_to_str, generate_regular, max_cut_brute_force, read_graph, write_graph
from .harness import ExperimentConfig
from .optimize import OBJECTIVES, STRATEGIES, Objective, OptimizerConfig, optimize
from .sim import MIXERS, WarmStart


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qaoa-lab", description="Warm-start QAOA experiments on 3-regular Max-Cut.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("gen", help="write random regular graphs to files")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", default=".")

    s = sub.add_parser("cuts", help="classical warm-start cuts for a graph file")
    s.add_argument("graph")
    s.add_argument("--source", choices=harness.CUT_SOURCES, default="random_lo")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", help="write cut_<i>.txt files here instead of printing")

    s = sub.add_parser("sweep", help="run a full experiment from a JSON config")
    s.add_argument("config")
    s.add_argument("--seed", type=int, help="override master_seed")
    s.add_argument("--workers", type=int)
    s.add_argument("--out", help="records CSV (default: config records_path)")
    s.add_argument("--summary", help="per-theta summary CSV")
    s.add_argument("--allow-large", action="store_true", help="permit n >= 22")

    s = sub.add_parser("optimize", help="optimise circuit parameters for one instance")
    s.add_argument("graph")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--cut", help="cut file")
    src.add_argument("--bits", help="warm-start bitstring")
    s.add_argument("--theta", type=float, required=True, help="tilt angle in degrees")
    s.add_argument("--mixer", choices=MIXERS, default="aligned")
    s.add_argument("--objective", choices=OBJECTIVES, default="expectation")
    s.add_argument("--strategy", choices=STRATEGIES, default="grid_then_refine")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--iterations", type=int)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("report", help="aggregate a records CSV")
    s.add_argument("records")
    s.add_argument("--group-by", choices=("theta", "n"), default="theta")
    s.add_argument("--split", action="store_true", help="also key rows by the other coordinate")
    s.add_argument("--thetas", help="comma-separated tilt angles to keep, e.g. 0,45,60,90")
    s.add_argument("--out", help="write CSV here instead of stdout")

    s = sub.add_parser("oracle", help="brute-force Max-Cut of a graph file")
    s.add_argument("graph")
    return p


def _gen(a) -> None:
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(a.count):
        g = generate_regular(a.n, a.d, harness.child_seed(a.seed, a.n, i))
        path = out / f"graph_n{a.n}_{i}.txt"
        write_graph(g, path)
        print(path)


def _cuts(a) -> None:
    g = read_graph(a.graph)
    make = gw_local_search_cut if a.source == "gw_lo" else random_lo_cut
    out = Path(a.out_dir) if a.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for i in range(a.count):
        cut = make(g, harness.child_seed(a.seed, g.n, 0, i))
        if out:
            write_cut(cut, out / f"cut_{i}.txt")
        print(cut.bitstring, _num(cut.value))


def _sweep(a) -> None:
    cfg = ExperimentConfig.from_json(a.config)
    if a.seed is not None:
        cfg.master_seed = a.seed
    if a.allow_large:
        cfg.allow_large = True
    if a.summary:
        cfg.summary_path = a.summary
    out = a.out or cfg.records_path
    if not out:
        raise UsageError("no output path: pass --out or set records_path in the config")
    cfg.validate_sizes()
    for n in cfg.n_list:
        if n >= harness.LARGE_N:
            print(f"n={n}: about {harness.memory_estimate_bytes(n) / 2**20:.0f} MiB per worker", file=sys.stderr)
    records = harness.run_sweep(cfg, workers=a.workers, out_path=out)
    failed = sum(1 for r in records if r.error)
    print(f"{len(records)} records written to {out} ({failed} failed)")


def _optimize(a) -> None:
    g = read_graph(a.graph)
    cut = read_cut(a.cut, g) if a.cut else None
    bits = cut.bits if cut else a.bits
    obj = Objective(a.objective, g, WarmStart(bits, a.theta), a.mixer, a.depth)
    cfg = OptimizerConfig(strategy=a.strategy, iterations=a.iterations, seed=a.seed)
    res = optimize(obj, config=cfg)
    print(json.dumps({"gammas": list(res.params.gammas), "betas": list(res.params.betas),
                      "value": res.value, "evals": res.evals, "objective": a.objective,
                      "strategy": a.strategy, "theta": a.theta, "cut_b": obj.reference.value}, indent=2))


def _report(a) -> None:
    records = harness.read_records(a.records)
    thetas = [float(t) for t in a.thetas.split(",")] if a.thetas else None
    rows = harness.aggregate(records, a.group_by, split_n=a.split, thetas=thetas)
    if a.out:
        harness.write_summary(rows, a.out)
        print(f"{len(rows)} rows written to {a.out}")
    else:
        import csv

        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: harness._fmt(v) for k, v in row.items()})


def _oracle(a) -> None:
    res = max_cut_brute_force(read_graph(a.graph))
    print(_num(res.value))
    print(f"{len(res.optima)} optima")
    for bits in sorted(bits_to_str(b) for b in res.optima):
        print(bits)


def _num(x: float) -> str:
    return repr(float(x))


COMMANDS = {"gen": _gen, "cuts": _cuts, "sweep": _sweep, "optimize": _optimize, "report": _report,
            "oracle": _oracle}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qaoa-lab {args.command}: {exc}", file=sys.stderr)
        return 1
    except (QaoaLabError, OSError, ValueError) as exc:
        print(f"qaoa-lab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
