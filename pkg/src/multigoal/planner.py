"""End-to-end multi-goal planning: visiting order, guided legs, validation."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .geometry import segment_collision_free
from .graph import (
    EXACT_SOLVER_LIMIT,
    VisitingOrder,
    WeightedGraph,
    build_graph,
    solve_tsp_2opt,
    solve_tsp_exact,
)
from .grid import Scenario, State
from .rrt import RrtParams, rrt_plan
from .sampling import SamplerParams, make_sampler

ENDPOINT_TOL = 1e-9
_TSP_STREAM = 0  # substream tags; legs use 1 + leg index


def path_cost(path) -> float:
    """Sum of L2 distances between consecutive states."""
    if len(path) < 1:
        raise ValueError("path needs at least one state")
    total = 0.0
    for (x0, y0), (x1, y1) in zip(path[:-1], path[1:]):
        total += math.hypot(x1 - x0, y1 - y0)
    return total


def derive_seed(seed: int, stream: int) -> int:
    """Stable 64-bit substream seed for (base seed, stream index)."""
    words = np.random.SeedSequence([seed, stream]).generate_state(2)
    return int(words[0]) << 32 | int(words[1])


@dataclass
class PlanResult:
    """A (possibly partial) closed-path solution plus its per-leg metrics."""

    order: VisitingOrder
    legs: list[list[State]]
    total_length: float
    samples_per_leg: list[int]
    success: bool
    wall_time: float = 0.0
    prior_time: float = 0.0
    seed: int = 0
    provider_meta: dict = field(default_factory=dict)

    @property
    def samples_total(self) -> int:
        return int(sum(self.samples_per_leg))

    def to_json_dict(self, include_timings: bool = False) -> dict:
        doc = {
            "success": self.success,
            "order": list(self.order.sequence),
            "legs": [[[s.x, s.y] for s in leg] for leg in self.legs],
            "total_length": self.total_length,
            "samples_per_leg": list(self.samples_per_leg),
            "samples_total": self.samples_total,
            "seed": self.seed,
            "provider": self.provider_meta,
        }
        if include_timings:
            doc["wall_time"] = self.wall_time
            doc["prior_time"] = self.prior_time
        return doc

    def save_json(self, path: str | Path, include_timings: bool = False) -> None:
        doc = self.to_json_dict(include_timings=include_timings)
        Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")

    @classmethod
    def from_json(cls, path: str | Path) -> "PlanResult":
        doc = json.loads(Path(path).read_text())
        return cls(
            order=VisitingOrder(tuple(doc["order"])),
            legs=[[State(x, y) for x, y in leg] for leg in doc["legs"]],
            total_length=float(doc["total_length"]),
            samples_per_leg=[int(v) for v in doc["samples_per_leg"]],
            success=bool(doc["success"]),
            seed=int(doc.get("seed", 0)),
            provider_meta=doc.get("provider", {}),
        )


def solve_order(graph: WeightedGraph, seed: int = 0, restarts: int = 8) -> VisitingOrder:
    """Exact solver when small enough, 2-opt with randomized restarts otherwise."""
    if graph.n_vertices <= EXACT_SOLVER_LIMIT:
        return solve_tsp_exact(graph)
    rng = np.random.default_rng(derive_seed(seed, _TSP_STREAM))
    return solve_tsp_2opt(graph, restarts=restarts, rng=rng)


def plan_tour(
    scenario: Scenario,
    provider,
    sampler_params: SamplerParams | None = None,
    rrt_params: RrtParams | None = None,
    tsp_restarts: int = 8,
    graph: WeightedGraph | None = None,
) -> PlanResult:
    """Plan a closed path visiting all goals, guided by per-pair priors.

    Builds the complete weighted graph (unless one is passed in), computes
    the visiting order, then plans each leg with a tree planner whose
    sampler is biased by that pair's region and guideline masks. Each leg
    gets an independent RNG substream derived from the base seed, so leg i
    reproduces bit-for-bit when run standalone with the same derived seed.
    """
    sampler_params = sampler_params or SamplerParams()
    rrt_params = rrt_params or RrtParams()
    t_prior = time.perf_counter()
    if graph is None:
        graph = build_graph(scenario, provider)
    prior_time = time.perf_counter() - t_prior

    t0 = time.perf_counter()
    order = solve_order(graph, seed=rrt_params.seed, restarts=tsp_restarts)
    vertices = scenario.vertices
    legs: list[list[State]] = []
    samples: list[int] = []
    success = True
    for leg_idx, (u, v) in enumerate(order.pairs()):
        pk = graph.prior(u, v)
        region = pk.region if pk is not None else None
        guideline = pk.guideline if pk is not None else None
        sample_fn = make_sampler(scenario.map, region, guideline, sampler_params)
        leg_params = replace(rrt_params, seed=derive_seed(rrt_params.seed, 1 + leg_idx))
        leg = rrt_plan(scenario.map, vertices[u], vertices[v], sample_fn, leg_params)
        samples.append(leg.samples)
        if not leg.success:
            success = False
            break
        legs.append(leg.path)
    wall_time = time.perf_counter() - t0
    total_length = sum(path_cost(leg) for leg in legs) if success else 0.0
    return PlanResult(
        order=order,
        legs=legs,
        total_length=total_length,
        samples_per_leg=samples,
        success=success,
        wall_time=wall_time,
        prior_time=prior_time,
        seed=rrt_params.seed,
        provider_meta={"kind": getattr(provider, "kind", "unknown")},
    )


@dataclass
class Check:
    name: str
    ok: bool
    note: str = ""


@dataclass
class ValidationReport:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]


def _match_vertex(state: State, vertices: list[State]) -> int:
    for i, v in enumerate(vertices):
        if abs(state.x - v.x) <= ENDPOINT_TOL and abs(state.y - v.y) <= ENDPOINT_TOL:
            return i
    return -1


def validate_solution(scenario: Scenario, result: PlanResult) -> ValidationReport:
    """Check the closed-tour constraints on a successful plan.

    Verifies closure at the origin, one incoming and one outgoing leg per
    goal, a single connected cycle over all vertices, and collision-free
    leg segments. The report carries one entry per constraint.
    """
    checks: list[Check] = []
    vertices = scenario.vertices
    n = len(vertices)
    legs = result.legs

    count_ok = len(legs) == n
    checks.append(Check("leg_count", count_ok, f"{len(legs)} legs for {n} vertices"))
    if not legs:
        return ValidationReport(checks)

    closure_ok = (
        _match_vertex(legs[0][0], [scenario.origin]) == 0
        and _match_vertex(legs[-1][-1], [scenario.origin]) == 0
    )
    checks.append(Check("closure_at_origin", closure_ok))

    chain_ok = all(
        abs(a[-1].x - b[0].x) <= ENDPOINT_TOL and abs(a[-1].y - b[0].y) <= ENDPOINT_TOL
        for a, b in zip(legs[:-1], legs[1:])
    )
    checks.append(Check("legs_chain", chain_ok))

    # degree condition: every vertex starts exactly one leg and ends exactly one
    out_deg = [0] * n
    in_deg = [0] * n
    matched = True
    successor: dict[int, int] = {}
    for leg in legs:
        u = _match_vertex(leg[0], vertices)
        v = _match_vertex(leg[-1], vertices)
        if u < 0 or v < 0:
            matched = False
            continue
        out_deg[u] += 1
        in_deg[v] += 1
        if u not in successor:
            successor[u] = v
    degree_ok = matched and all(d == 1 for d in out_deg) and all(d == 1 for d in in_deg)
    checks.append(
        Check(
            "vertex_degrees",
            degree_ok,
            "each vertex needs exactly one incoming and one outgoing leg",
        )
    )

    # single cycle: walking successor links from the origin must visit every vertex
    single_cycle = False
    if degree_ok:
        seen = set()
        node = 0
        while node not in seen:
            seen.add(node)
            node = successor.get(node, -1)
            if node < 0:
                break
        single_cycle = node == 0 and len(seen) == n
    checks.append(Check("single_cycle", single_cycle))

    collision_ok = all(
        segment_collision_free(scenario.map, a, b)
        for leg in legs
        for a, b in zip(leg[:-1], leg[1:])
    )
    checks.append(Check("legs_collision_free", collision_ok))

    length_ok = (
        abs(result.total_length - sum(path_cost(leg) for leg in legs)) <= 1e-6
        if result.success
        else True
    )
    checks.append(Check("length_consistent", length_ok))
    return ValidationReport(checks)
