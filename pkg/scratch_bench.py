"""Scratch: size the desk-scale directional benchmark before freezing acceptance."""
import time

import numpy as np

from multigoal import (
    DatasetConfig,
    EuclideanProvider,
    OracleProvider,
    RrtParams,
    SamplerParams,
    build_graph,
    generate_scenario,
    optimal_reference,
    plan_tour,
    validate_solution,
)

PLAIN = DatasetConfig(map_size=256, rect_count=(5, 9), rect_size=(25, 70), seed=0)
DENSE = DatasetConfig(map_size=256, rect_count=(45, 70), rect_size=(5, 14), seed=0)

rng = np.random.default_rng(424242)
scenarios = [
    generate_scenario(PLAIN, n_goals=6, rng=rng, min_separation=48.0, name="plain-1"),
    generate_scenario(PLAIN, n_goals=5, rng=rng, min_separation=48.0, name="plain-2"),
    generate_scenario(DENSE, n_goals=7, rng=rng, min_separation=44.0, name="dense-1"),
    generate_scenario(DENSE, n_goals=6, rng=rng, min_separation=44.0, name="dense-2"),
]

TRIALS = 20  # scaled down for the probe; acceptance uses 100
BUDGET = 2000
rrt_base = dict(step=8.0, goal_radius=8.0, max_samples=BUDGET, goal_bias=0.05)

for sc in scenarios:
    print(f"=== {sc.name}: {sc.n_goals} goals, free={sc.map.free_fraction():.2f}")
    t0 = time.perf_counter()
    oracle = OracleProvider(region_radius=10, guide_radius=1)
    graph_o = build_graph(sc, oracle)
    t_prior = time.perf_counter() - t0
    graph_e = build_graph(sc, EuclideanProvider())
    print(f"  prior build: {t_prior:.1f}s for {len(graph_o.priors)} pairs")

    stats = {}
    for name, provider, graph in (("guided", oracle, graph_o), ("euclid", EuclideanProvider(), graph_e)):
        t0 = time.perf_counter()
        samples, lengths, succ = [], [], 0
        for t in range(TRIALS):
            res = plan_tour(sc, provider, SamplerParams(), RrtParams(seed=1000 + t, **rrt_base), graph=graph)
            ok = res.success and validate_solution(sc, res).ok
            succ += ok
            samples.append(res.samples_total)
            if ok:
                lengths.append(res.total_length)
        dt = time.perf_counter() - t0
        stats[name] = (np.mean(samples), np.mean(lengths) if lengths else float("nan"), succ)
        print(
            f"  {name:7s}: success {succ}/{TRIALS}, mean samples {np.mean(samples):7.1f}, "
            f"mean length {np.mean(lengths) if lengths else float('nan'):7.1f}, {dt:.1f}s ({dt/TRIALS*1000:.0f} ms/trial)"
        )

    t0 = time.perf_counter()
    ref = optimal_reference(sc, rrt_params=RrtParams(seed=99, **rrt_base), budget=5000)
    t_ref = time.perf_counter() - t0
    print(f"  reference: length {ref.total_length:.1f} in {t_ref:.1f}s (budget 5000/pair)")
    g_samples, g_len, _ = stats["guided"]
    e_samples, e_len, _ = stats["euclid"]
    print(
        f"  ratios: samples {g_samples / e_samples:.3f} (<=0.6?), "
        f"len/ref {g_len / ref.total_length:.3f} (<=1.15?), len/euclid {g_len / e_len:.3f} (<=1?)"
    )
