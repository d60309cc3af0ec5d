"""Scratch round 3: corridor-structured maps to tame region-sample wiggle."""
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


def probe(sc, trials=40, ref_budget=5000):
    oracle = OracleProvider()
    graph_o = build_graph(sc, oracle)
    graph_e = build_graph(sc, EuclideanProvider())
    g_samples, g_len, e_samples, e_len = [], [], [], []
    g_fail = e_fail = 0
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
    try:
        ref = optimal_reference(sc, rrt_params=RrtParams(seed=99, **rrt_base), budget=ref_budget)
    except RuntimeError as exc:
        print(f"  REFERENCE FAILED: {exc}")
        return
    gs, es = np.mean(g_samples), np.mean(e_samples)
    gl, el = np.mean(g_len), np.mean(e_len)
    print(
        f"  fails g/e {g_fail}/{e_fail} | samples {gs:5.0f}/{es:5.0f} = {gs/es:.3f} | "
        f"len {gl:6.1f} ref {ref.total_length:6.1f} ratio {gl/ref.total_length:.3f} | len/euc {gl/el:.3f}"
    )


CONFIGS = [
    ("walls", DatasetConfig(map_size=256, rect_count=(12, 18), rect_size=(20, 48), seed=0, min_free_fraction=0.45), 6, 64.0),
    ("walls2", DatasetConfig(map_size=256, rect_count=(10, 15), rect_size=(24, 56), seed=0, min_free_fraction=0.45), 5, 72.0),
    ("denser", DatasetConfig(map_size=256, rect_count=(120, 160), rect_size=(5, 10), seed=0, min_free_fraction=0.45), 6, 64.0),
    ("denser2", DatasetConfig(map_size=256, rect_count=(90, 130), rect_size=(6, 12), seed=0, min_free_fraction=0.45), 5, 72.0),
]

rng = np.random.default_rng(8675309)
for name, cfg, n_goals, sep in CONFIGS:
    for k in range(2):
        sc = generate_scenario(cfg, n_goals=n_goals, rng=rng, min_separation=sep, vertex_clearance=8, name=f"{name}-{k}")
        print(f"{name}-{k}: free={sc.map.free_fraction():.2f}")
        probe(sc)
