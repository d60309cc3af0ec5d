"""Scratch: decompose guided-path overhead by sampler mixture."""
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

cfg = DatasetConfig(map_size=256, rect_count=(6, 10), rect_size=(20, 60), seed=0)
rng = np.random.default_rng(20240817)
sc = generate_scenario(cfg, n_goals=5, rng=rng, min_separation=80.0, vertex_clearance=8, name="probe")
oracle = OracleProvider()
graph = build_graph(sc, oracle)
ref = optimal_reference(sc, rrt_params=RrtParams(seed=99, **rrt_base), budget=6000)
print(f"free={sc.map.free_fraction():.2f} ref={ref.total_length:.1f}")

MIXES = {
    "defaults (gui .3/reg .4/uni .3)": SamplerParams(0.7, 0.4),
    "pure guideline": SamplerParams(0.0, 0.0),
    "gui .3 / uni .7": SamplerParams(0.7, 0.0),
    "gui .6 / reg .2 / uni .2": SamplerParams(0.4, 0.2),
    "gui .5 / reg .3 / uni .2": SamplerParams(0.5, 0.3),
}
for name, sp in MIXES.items():
    lens, samp, fails = [], [], 0
    for t in range(30):
        r = plan_tour(sc, oracle, sp, RrtParams(seed=4000 + t, **rrt_base), graph=graph)
        fails += not r.success
        samp.append(r.samples_total)
        if r.success:
            lens.append(r.total_length)
    print(
        f"  {name:32s}: fails {fails}, samples {np.mean(samp):6.0f}, "
        f"len {np.mean(lens):6.1f} ratio {np.mean(lens)/ref.total_length:.3f}"
    )
