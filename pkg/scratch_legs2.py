"""Scratch round 2: longer legs + vertex clearance."""
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
)

rrt_base = dict(step=8.0, goal_radius=8.0, max_samples=2000, goal_bias=0.05)


def probe(sc, trials=30, ref_budget=6000):
    oracle = OracleProvider()
    graph_o = build_graph(sc, oracle)
    graph_e = build_graph(sc, EuclideanProvider())
    g_samples, g_len, e_samples, e_len = [], [], [], []
    g_fail = e_fail = 0
    t_trials = time.perf_counter()
    for t in range(trials):
        r1 = plan_tour(sc, oracle, SamplerParams(), RrtParams(seed=3000 + t, **rrt_base), graph=graph_o)
        r2 = plan_tour(sc, EuclideanProvider(), SamplerParams(), RrtParams(seed=3000 + t, **rrt_base), graph=graph_e)
        g_fail += not r1.success
        e_fail += not r2.success
        g_samples.append(r1.samples_total)
        e_samples.append(r2.samples_total)
        if r1.success:
            g_len.append(r1.total_length)
        if r2.success:
            e_len.append(r2.total_length)
    t_trials = time.perf_counter() - t_trials
    t0 = time.perf_counter()
    try:
        ref = optimal_reference(sc, rrt_params=RrtParams(seed=99, **rrt_base), budget=ref_budget)
        ref_len = ref.total_length
    except RuntimeError as exc:
        print(f"  REFERENCE FAILED: {exc}")
        return
    t_ref = time.perf_counter() - t0
    gs, es = np.mean(g_samples), np.mean(e_samples)
    gl, el = np.mean(g_len), np.mean(e_len)
    print(
        f"  fails g/e: {g_fail}/{e_fail} | samples {gs:6.0f}/{es:6.0f} = {gs/es:.3f} | "
        f"len {gl:6.1f} ref {ref_len:6.1f} ratio {gl/ref_len:.3f} | len/euclid {gl/el:.3f} | "
        f"trials {t_trials:.0f}s ref {t_ref:.0f}s"
    )


CONFIGS = [
    ("plain-A", DatasetConfig(map_size=256, rect_count=(5, 9), rect_size=(25, 70), seed=0), 6, 72.0),
    ("plain-B", DatasetConfig(map_size=256, rect_count=(6, 10), rect_size=(20, 60), seed=0), 5, 80.0),
    ("dense-A", DatasetConfig(map_size=256, rect_count=(50, 75), rect_size=(4, 10), seed=0), 6, 72.0),
    ("dense-B", DatasetConfig(map_size=256, rect_count=(40, 60), rect_size=(5, 12), seed=0), 5, 80.0),
]

rng = np.random.default_rng(20240817)
for name, cfg, n_goals, sep in CONFIGS:
    sc = generate_scenario(cfg, n_goals=n_goals, rng=rng, min_separation=sep, vertex_clearance=8, name=name)
    print(f"{name}: free={sc.map.free_fraction():.2f}, goals={sc.n_goals}")
    probe(sc)
