"""Command-line entry point.

Subcommands: gen-dataset, plan, bench, render, graph-dump. Every run is
deterministic under --seed; timing is reported on stderr and in
timings.csv, never inside result.json or results.csv.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import BenchSpec, run_bench
from .dataset import DatasetConfig, export_dataset, generate_dataset
from .graph import build_graph
from .grid import load_scenario
from .planner import PlanResult, plan_tour
from .priors import PROVIDER_KINDS, UnreachableError, make_provider
from .render import render_svg
from .rrt import RrtParams
from .sampling import SamplerParams

EXIT_OK = 0
EXIT_PLANNER_FAILURE = 1
EXIT_USAGE = 2


def _add_provider_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--provider", choices=PROVIDER_KINDS, default="oracle")
    p.add_argument("--masks", help="mask directory for the files provider")
    p.add_argument("--region-radius", type=int, default=10)
    p.add_argument("--guide-radius", type=int, default=1)


def _add_planner_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k1", type=float, default=0.7)
    p.add_argument("--k2", type=float, default=0.4)
    p.add_argument("--step", type=float, default=8.0)
    p.add_argument("--goal-radius", type=float, default=8.0)
    p.add_argument("--goal-bias", type=float, default=0.05)
    p.add_argument("--budget", type=int, default=2000, help="max samples per leg")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multigoal",
        description="Multi-goal path finding on occupancy grids",
    )
    parser.add_argument("--version", action="version", version=f"multigoal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="generate labeled map/pair samples")
    p.add_argument("--config", required=True, help="DatasetConfig JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--maps", type=int, default=10, help="number of maps to generate")

    p = sub.add_parser("plan", help="plan one closed multi-goal path")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True, help="result JSON path")
    _add_provider_args(p)
    _add_planner_args(p)

    p = sub.add_parser("bench", help="run a benchmark spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("render", help="render a result into an SVG")
    p.add_argument("--scenario", required=True)
    p.add_argument("--result", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("graph-dump", help="dump the weighted graph as JSON")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    _add_provider_args(p)
    return parser


def _cmd_gen_dataset(args) -> int:
    config = DatasetConfig.from_dict(json.loads(Path(args.config).read_text()))
    records = generate_dataset(config, n_maps=args.maps)
    manifest = export_dataset(records, args.out, config=config)
    print(f"wrote {manifest['count']} samples to {args.out}", file=sys.stderr)
    return EXIT_OK


def _make_provider(args):
    return make_provider(
        args.provider,
        masks_dir=args.masks,
        region_radius=args.region_radius,
        guide_radius=args.guide_radius,
    )


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    provider = _make_provider(args)
    sampler_params = SamplerParams(k1=args.k1, k2=args.k2, seed=args.seed)
    rrt_params = RrtParams(
        step=args.step,
        goal_radius=args.goal_radius,
        max_samples=args.budget,
        goal_bias=args.goal_bias,
        seed=args.seed,
    )
    try:
        result = plan_tour(scenario, provider, sampler_params, rrt_params)
    except UnreachableError as exc:
        print(f"planning failed: {exc}", file=sys.stderr)
        return EXIT_PLANNER_FAILURE
    result.provider_meta.update(
        {
            "kind": args.provider,
            "masks": args.masks,
            "region_radius": args.region_radius,
            "guide_radius": args.guide_radius,
        }
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    result.save_json(out)
    print(
        f"success={result.success} length={result.total_length:.2f} "
        f"samples={result.samples_total} wall={result.wall_time:.3f}s "
        f"prior={result.prior_time:.3f}s",
        file=sys.stderr,
    )
    return EXIT_OK if result.success else EXIT_PLANNER_FAILURE


def _cmd_bench(args) -> int:
    spec = BenchSpec.from_json(args.spec)
    rows, _ = run_bench(spec, out_dir=args.out)
    if not rows:
        print("no benchmark rows produced", file=sys.stderr)
        return EXIT_PLANNER_FAILURE
    print(f"wrote {len(rows)} rows to {args.out}/results.csv", file=sys.stderr)
    return EXIT_OK


def _cmd_render(args) -> int:
    scenario = load_scenario(args.scenario)
    result = PlanResult.from_json(args.result)
    priors = None
    meta = result.provider_meta or {}
    kind = meta.get("kind")
    if kind in ("oracle", "files"):
        provider = make_provider(
            kind,
            masks_dir=meta.get("masks"),
            region_radius=meta.get("region_radius", 10),
            guide_radius=meta.get("guide_radius", 1),
        )
        priors = [provider.prior(scenario, u, v) for u, v in result.order.pairs()]
    render_svg(scenario, result, args.out, priors=priors)
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def _cmd_graph_dump(args) -> int:
    scenario = load_scenario(args.scenario)
    provider = _make_provider(args)
    try:
        graph = build_graph(scenario, provider)
    except UnreachableError as exc:
        print(f"graph construction failed: {exc}", file=sys.stderr)
        return EXIT_PLANNER_FAILURE
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    graph.dump_json(out)
    print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "gen-dataset": _cmd_gen_dataset,
    "plan": _cmd_plan,
    "bench": _cmd_bench,
    "render": _cmd_render,
    "graph-dump": _cmd_graph_dump,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, FileNotFoundError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PLANNER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
