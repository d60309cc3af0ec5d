"""Scratch: per-leg overhead decomposition and scenario-config sweep."""
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
    path_cost,
    plan_tour,
    tour_cost,
)

rrt_base = dict(step=8.0, goal_radius=8.0, max_samples=2000, goal_bias=0.05)


def probe(sc, trials=30, ref_budget=5000, verbose_legs=False):
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
        if verbose_legs and t == 0 and r1.success:
            octile_cost = tour_cost(graph_o, r1.order)
            print(f"    trial0 guided vs octile tour: {r1.total_length:.1f} / {octile_cost:.1f} = {r1.total_length/octile_cost:.3f}")
            for (u, v), leg in zip(r1.order.pairs(), r1.legs):
                w = graph_o.weights[u, v]
                print(f"      leg {u}->{v}: len {path_cost(leg):7.2f}  octile {w:7.2f}  ratio {path_cost(leg)/w:.3f}")
    t0 = time.perf_counter()
    ref = optimal_reference(sc, rrt_params=RrtParams(seed=99, **rrt_base), budget=ref_budget)
    t_ref = time.perf_counter() - t0
    gs, es = np.mean(g_samples), np.mean(e_samples)
    gl, el = np.mean(g_len), np.mean(e_len)
    print(
        f"  fails g/e: {g_fail}/{e_fail} | samples {gs:6.0f}/{es:6.0f} = {gs/es:.3f} | "
        f"len {gl:6.1f} ref {ref.total_length:6.1f} ratio {gl/ref.total_length:.3f} | "
        f"len/euclid {gl/el:.3f} | ref took {t_ref:.0f}s"
    )
    return gs / es, gl / ref.total_length


CONFIGS = {
    "plain-big": DatasetConfig(map_size=256, rect_count=(4, 7), rect_size=(30, 80), seed=0),
    "plain-med": DatasetConfig(map_size=256, rect_count=(5, 9), rect_size=(25, 70), seed=0),
    "dense-tiny": DatasetConfig(map_size=256, rect_count=(60, 90), rect_size=(4, 9), seed=0),
    "dense-small": DatasetConfig(map_size=256, rect_count=(45, 70), rect_size=(5, 14), seed=0),
}

rng = np.random.default_rng(7)
for name, cfg in CONFIGS.items():
    for k in range(2):
        sc = generate_scenario(cfg, n_goals=6, rng=rng, min_separation=56.0, name=f"{name}-{k}")
        print(f"{name}-{k}: free={sc.map.free_fraction():.2f}")
        probe(sc, trials=30, verbose_legs=(k == 0))
