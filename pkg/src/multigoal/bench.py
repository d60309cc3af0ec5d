"""Benchmark harness: repeated seeded trials per planner and scenario.

Outputs are split so the deterministic artifacts stay byte-reproducible:
results.csv carries success/length/sample statistics, timings.csv the wall
clocks, and raw.jsonl one record per trial for distribution plots.
"""
from __future__ import annotations

import dataclasses
import json
import statistics
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import WeightedGraph, build_graph, solve_tsp_exact
from .grid import Scenario, load_scenario
from .planner import PlanResult, derive_seed, path_cost, plan_tour, validate_solution
from .priors import make_provider
from .render import scatter_svg
from .rrt import RrtParams, rrt_star_plan
from .sampling import SamplerParams

REFERENCE_NAME = "reference"


@dataclass(frozen=True)
class PlannerSpec:
    name: str
    provider: str  # oracle | euclidean | files
    k1: float = 0.7
    k2: float = 0.4
    region_radius: int = 10
    guide_radius: int = 1
    masks_dir: str | None = None

    def make_provider(self):
        return make_provider(
            self.provider,
            masks_dir=self.masks_dir,
            region_radius=self.region_radius,
            guide_radius=self.guide_radius,
        )

    def sampler_params(self) -> SamplerParams:
        return SamplerParams(k1=self.k1, k2=self.k2)


@dataclass
class BenchSpec:
    scenarios: list
    planners: list[PlannerSpec]
    trials: int = 100
    budget: int = 2000
    seed: int = 0
    step: float = 8.0
    goal_radius: float = 8.0
    goal_bias: float = 0.05
    include_reference: bool = True
    reference_budget: int = 20000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        names = [p.name for p in self.planners]
        if len(set(names)) != len(names):
            raise ValueError("planner names must be unique")

    @classmethod
    def from_json(cls, path: str | Path) -> "BenchSpec":
        doc = json.loads(Path(path).read_text())
        planners = [PlannerSpec(**entry) for entry in doc.pop("planners")]
        scenarios = doc.pop("scenarios")
        base = Path(path).parent
        scenarios = [str((base / s)) if not Path(s).is_absolute() else s for s in scenarios]
        return cls(scenarios=scenarios, planners=planners, **doc)

    def rrt_params(self, seed: int) -> RrtParams:
        return RrtParams(
            step=self.step,
            goal_radius=self.goal_radius,
            max_samples=self.budget,
            goal_bias=self.goal_bias,
            seed=seed,
        )


@dataclass
class TrialRecord:
    planner: str
    scenario: str
    trial: int
    seed: int
    success: bool
    valid: bool
    length: float
    samples: int
    calc_time: float


@dataclass
class MetricsRow:
    """Aggregates per (planner, scenario); length/time stats cover successful trials only."""

    planner: str
    scenario: str
    trials: int
    successes: int
    success_rate: float  # percent
    mean_length: float
    median_length: float
    mean_samples: float  # mean over all trials of the per-trial sample total
    mean_time: float
    median_time: float
    prior_time: float


def _aggregate(planner: str, scenario: str, records: list[TrialRecord], prior_time: float) -> MetricsRow:
    ok = [r for r in records if r.success]
    lengths = [r.length for r in ok]
    times = [r.calc_time for r in ok]
    return MetricsRow(
        planner=planner,
        scenario=scenario,
        trials=len(records),
        successes=len(ok),
        success_rate=100.0 * len(ok) / len(records) if records else 0.0,
        mean_length=statistics.fmean(lengths) if lengths else float("nan"),
        median_length=statistics.median(lengths) if lengths else float("nan"),
        mean_samples=statistics.fmean([r.samples for r in records]) if records else float("nan"),
        mean_time=statistics.fmean(times) if times else float("nan"),
        median_time=statistics.median(times) if times else float("nan"),
        prior_time=prior_time,
    )


def _load_scenarios(spec: BenchSpec) -> list[Scenario]:
    out = []
    for entry in spec.scenarios:
        out.append(entry if isinstance(entry, Scenario) else load_scenario(entry))
    return out


def run_bench(spec: BenchSpec, out_dir: str | Path | None = None):
    """Run every (planner, scenario) row; returns (rows, records).

    Each trial t uses seed spec.seed + t so planners face identical seed
    streams. A trial only counts as a success if its solution passes
    validation. Rows whose scenario or provider fails to construct are
    skipped with a stderr note rather than aborting the whole run.
    """
    scenarios = _load_scenarios(spec)
    rows: list[MetricsRow] = []
    records: list[TrialRecord] = []
    for scenario in scenarios:
        for planner in spec.planners:
            try:
                provider = planner.make_provider()
                t0 = time.perf_counter()
                graph = build_graph(scenario, provider)
                prior_time = time.perf_counter() - t0
            except Exception as exc:  # noqa: BLE001 - row-level isolation
                print(f"skipping {planner.name}/{scenario.name}: {exc}", file=sys.stderr)
                continue
            row_records = []
            for t in range(spec.trials):
                seed = spec.seed + t
                result = plan_tour(
                    scenario,
                    provider,
                    sampler_params=planner.sampler_params(),
                    rrt_params=spec.rrt_params(seed),
                    graph=graph,
                )
                valid = bool(result.success and validate_solution(scenario, result).ok)
                row_records.append(
                    TrialRecord(
                        planner=planner.name,
                        scenario=scenario.name,
                        trial=t,
                        seed=seed,
                        success=valid,
                        valid=valid,
                        length=result.total_length if valid else float("nan"),
                        samples=result.samples_total,
                        calc_time=result.wall_time,
                    )
                )
            records.extend(row_records)
            rows.append(_aggregate(planner.name, scenario.name, row_records, prior_time))
        if spec.include_reference:
            reference = optimal_reference(
                scenario,
                rrt_params=spec.rrt_params(spec.seed),
                budget=spec.reference_budget,
            )
            rows.append(
                MetricsRow(
                    planner=REFERENCE_NAME,
                    scenario=scenario.name,
                    trials=1,
                    successes=1,
                    success_rate=100.0,
                    mean_length=reference.total_length,
                    median_length=reference.total_length,
                    mean_samples=float(reference.samples_total),
                    mean_time=reference.wall_time,
                    median_time=reference.wall_time,
                    prior_time=reference.prior_time,
                )
            )
    if out_dir is not None:
        write_outputs(rows, records, Path(out_dir))
    return rows, records


def optimal_reference(
    scenario: Scenario,
    rrt_params: RrtParams | None = None,
    budget: int | None = None,
    seed: int | None = None,
) -> PlanResult:
    """High-budget asymptotically-optimal reference: RRT* on all pairs, exact order.

    Runs RRT* between every vertex pair (default budget 10x the planner
    budget), solves the tour exactly on the measured lengths, and stitches
    the stored paths along the tour.
    """
    params = rrt_params or RrtParams()
    if budget is None:
        budget = 10 * params.max_samples
    base_seed = params.seed if seed is None else seed
    vertices = scenario.vertices
    n = len(vertices)
    weights = np.zeros((n, n))
    paths: dict[tuple[int, int], list] = {}
    t0 = time.perf_counter()
    pair_index = 0
    for i in range(n):
        for j in range(i + 1, n):
            pair_index += 1
            pair_params = dataclasses.replace(
                params, max_samples=budget, seed=derive_seed(base_seed, 7000 + pair_index)
            )
            leg = rrt_star_plan(scenario.map, vertices[i], vertices[j], pair_params)
            if not leg.success:
                raise RuntimeError(f"reference planner failed on pair ({i}, {j})")
            weights[i, j] = weights[j, i] = path_cost(leg.path)
            paths[(i, j)] = leg.path
    prior_time = time.perf_counter() - t0
    graph = WeightedGraph(vertices, weights)
    t1 = time.perf_counter()
    order = solve_tsp_exact(graph)
    legs = []
    for u, v in order.pairs():
        key = (min(u, v), max(u, v))
        leg_path = paths[key]
        legs.append(leg_path if u <= v else list(reversed(leg_path)))
    wall = time.perf_counter() - t1
    total = sum(path_cost(leg) for leg in legs)
    return PlanResult(
        order=order,
        legs=legs,
        total_length=total,
        samples_per_leg=[budget] * len(legs),
        success=True,
        wall_time=wall,
        prior_time=prior_time,
        seed=base_seed,
        provider_meta={"kind": REFERENCE_NAME, "budget": budget},
    )


RESULTS_COLUMNS = (
    "planner",
    "scenario",
    "trials",
    "successes",
    "success_rate_pct",
    "mean_length",
    "median_length",
    "mean_samples_total_per_trial",
)
TIMINGS_COLUMNS = ("planner", "scenario", "mean_calc_time_s", "median_calc_time_s", "prior_time_s")


def _fmt(value: float) -> str:
    if value != value:  # NaN
        return "nan"
    return f"{value:.6f}"


def write_outputs(rows: list[MetricsRow], records: list[TrialRecord], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [",".join(RESULTS_COLUMNS)]
    for r in rows:
        lines.append(
            ",".join(
                [
                    r.planner,
                    r.scenario,
                    str(r.trials),
                    str(r.successes),
                    f"{r.success_rate:.2f}",
                    _fmt(r.mean_length),
                    _fmt(r.median_length),
                    _fmt(r.mean_samples),
                ]
            )
        )
    (out_dir / "results.csv").write_text("\n".join(lines) + "\n")

    tlines = [",".join(TIMINGS_COLUMNS)]
    for r in rows:
        tlines.append(
            ",".join(
                [r.planner, r.scenario, _fmt(r.mean_time), _fmt(r.median_time), _fmt(r.prior_time)]
            )
        )
    (out_dir / "timings.csv").write_text("\n".join(tlines) + "\n")

    with (out_dir / "raw.jsonl").open("w") as fh:
        for rec in records:
            fh.write(json.dumps(dataclasses.asdict(rec), sort_keys=True) + "\n")

    by_scenario: dict[str, dict[str, list]] = {}
    for rec in records:
        if rec.success:
            by_scenario.setdefault(rec.scenario, {}).setdefault(rec.planner, []).append(
                (rec.calc_time, rec.length)
            )
    for scenario_name, series in by_scenario.items():
        scatter_svg(
            series,
            x_label="calculation time [s]",
            y_label="path length [map units]",
            out_path=out_dir / f"scatter_{scenario_name}.svg",
        )
