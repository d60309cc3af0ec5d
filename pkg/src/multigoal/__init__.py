"""Multi-goal path finding on 2-D occupancy grids.

Builds a complete weighted graph over an origin and N goals, picks a
closed visiting order (physical TSP), and plans each leg with an RRT whose
sampling is biased toward a per-pair promising region and guideline.
"""

__version__ = "0.1.0"

from .bench import BenchSpec, MetricsRow, PlannerSpec, optimal_reference, run_bench
from .dataset import DatasetConfig, export_dataset, generate_dataset, generate_map, generate_scenario
from .geometry import segment_collision_free, steer, supercover_cells
from .graph import (
    VisitingOrder,
    WeightedGraph,
    build_graph,
    solve_tsp_2opt,
    solve_tsp_exact,
    tour_cost,
)
from .grid import GridMap, Scenario, State, load_map, load_map_file, load_scenario, save_scenario
from .planner import PlanResult, path_cost, plan_tour, validate_solution
from .priors import (
    EuclideanProvider,
    FilesProvider,
    OracleProvider,
    PriorKnowledge,
    UnreachableError,
    astar_shortest_path,
    dilate_mask,
    oracle_prior,
)
from .render import render_svg
from .rrt import LegResult, RrtParams, Tree, extract_path, rrt_plan, rrt_star_plan
from .sampling import (
    Mask,
    Sampler,
    SamplerParams,
    hybrid_sample,
    load_mask,
    mask_sample,
    save_mask,
    uniform_sample,
)
