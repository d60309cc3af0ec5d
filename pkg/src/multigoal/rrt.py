"""Single-query tree planners: RRT for legs and baselines, RRT* for references."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import segment_collision_free, steer
from .grid import GridMap, State
from .sampling import uniform_sample


@dataclass(frozen=True)
class RrtParams:
    step: float = 8.0
    goal_radius: float = 8.0
    max_samples: int = 2000
    goal_bias: float = 0.05
    rewire_radius: float = 16.0  # RRT* only; also caps the shrinking ball
    seed: int = 0

    def __post_init__(self):
        if self.step <= 0 or self.goal_radius <= 0:
            raise ValueError("step and goal_radius must be positive")
        if self.max_samples < 1:
            raise ValueError("max_samples must be >= 1")
        if not (0.0 <= self.goal_bias < 1.0):
            raise ValueError("goal_bias must be in [0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


class Tree:
    """Growable tree over states; nodes live in flat arrays for fast nearest queries."""

    def __init__(self, root: State, capacity: int = 256):
        self._x = np.empty(capacity)
        self._y = np.empty(capacity)
        self._parent = np.empty(capacity, dtype=np.int64)
        self._x[0] = root[0]
        self._y[0] = root[1]
        self._parent[0] = -1
        self.n = 1
        self.root = 0

    def __len__(self) -> int:
        return self.n

    def _grow(self):
        cap = self._x.size * 2
        self._x = np.resize(self._x, cap)
        self._y = np.resize(self._y, cap)
        self._parent = np.resize(self._parent, cap)

    def add(self, s, parent: int) -> int:
        if self.n == self._x.size:
            self._grow()
        i = self.n
        self._x[i] = s[0]
        self._y[i] = s[1]
        self._parent[i] = parent
        self.n += 1
        return i

    def state(self, i: int) -> State:
        return State(float(self._x[i]), float(self._y[i]))

    def parent(self, i: int) -> int:
        return int(self._parent[i])

    def set_parent(self, i: int, parent: int) -> None:
        self._parent[i] = parent

    def nearest(self, s) -> int:
        """Index of the closest node by L2; ties resolve to the lowest index."""
        d2 = (self._x[: self.n] - s[0]) ** 2 + (self._y[: self.n] - s[1]) ** 2
        return int(np.argmin(d2))

    def near(self, s, radius: float) -> np.ndarray:
        d2 = (self._x[: self.n] - s[0]) ** 2 + (self._y[: self.n] - s[1]) ** 2
        return np.flatnonzero(d2 <= radius * radius)


def extract_path(tree: Tree, leaf: int) -> list[State]:
    """Root-to-leaf state sequence."""
    if not 0 <= leaf < len(tree):
        raise IndexError(f"leaf {leaf} out of range")
    path = []
    i = leaf
    while i >= 0:
        path.append(tree.state(i))
        i = tree.parent(i)
    path.reverse()
    return path


@dataclass
class LegResult:
    """Outcome of one tree query; `path` is None when the budget ran out."""

    path: list[State] | None
    samples: int
    nodes: int
    cost_trace: list[float] | None = None

    @property
    def success(self) -> bool:
        return self.path is not None


def _check_endpoints(grid: GridMap, start, goal):
    if not grid.is_free(start):
        raise ValueError(f"infeasible start {tuple(start)}")
    if not grid.is_free(goal):
        raise ValueError(f"infeasible goal {tuple(goal)}")


def rrt_plan(
    grid: GridMap,
    start,
    goal,
    sample_fn,
    params: RrtParams,
    rng: np.random.Generator | None = None,
) -> LegResult:
    """Grow a tree from start until a node connects into the goal region.

    A node succeeds when it lies within goal_radius of the goal and the
    direct segment to the goal is collision-free; the goal is then appended
    so the returned path terminates exactly at it. Every drawn sample
    counts against max_samples whether or not the extension is added.
    """
    _check_endpoints(grid, start, goal)
    start = State(float(start[0]), float(start[1]))
    goal = State(float(goal[0]), float(goal[1]))
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    tree = Tree(start)
    if math.hypot(goal.x - start.x, goal.y - start.y) <= params.goal_radius:
        if segment_collision_free(grid, start, goal):
            tree.add(goal, parent=0)
            return LegResult(path=[start, goal], samples=0, nodes=len(tree))
    for i in range(1, params.max_samples + 1):
        if params.goal_bias > 0.0 and rng.random() < params.goal_bias:
            s_rand = goal
        else:
            s_rand = sample_fn(rng)
        j = tree.nearest(s_rand)
        s_near = tree.state(j)
        s_new = steer(s_near, s_rand, params.step)
        if not segment_collision_free(grid, s_near, s_new):
            continue
        k = tree.add(s_new, parent=j)
        if math.hypot(goal.x - s_new.x, goal.y - s_new.y) <= params.goal_radius:
            if segment_collision_free(grid, s_new, goal):
                leaf = tree.add(goal, parent=k)
                return LegResult(path=extract_path(tree, leaf), samples=i, nodes=len(tree))
    return LegResult(path=None, samples=params.max_samples, nodes=len(tree))


def rrt_star_plan(
    grid: GridMap,
    start,
    goal,
    params: RrtParams,
    sample_fn=None,
    rng: np.random.Generator | None = None,
) -> LegResult:
    """RRT* with choose-parent and rewiring; runs the full sample budget.

    The neighbor ball shrinks with tree size (standard gamma rule scaled by
    the free-space area) and is capped at params.rewire_radius. Returns the
    best goal-reaching path found, plus the per-iteration best-cost trace.
    """
    _check_endpoints(grid, start, goal)
    start = State(float(start[0]), float(start[1]))
    goal = State(float(goal[0]), float(goal[1]))
    rng = rng if rng is not None else np.random.default_rng(params.seed)
    if sample_fn is None:
        sample_fn = _uniform_fn(grid)
    free_area = grid.free_fraction() * grid.width * grid.height
    gamma = 2.0 * math.sqrt(1.5 * free_area / math.pi)

    tree = Tree(start)
    cost = np.zeros(256)
    children: list[list[int]] = [[]]
    goal_candidates: list[int] = []
    trace: list[float] = []

    def ensure_capacity():
        nonlocal cost
        if len(tree) > cost.size:
            cost = np.resize(cost, cost.size * 2)

    def goal_gap(idx: int) -> float:
        s = tree.state(idx)
        return math.hypot(goal.x - s.x, goal.y - s.y)

    def best_candidate() -> tuple[int, float]:
        best_idx, best_cost = -1, math.inf
        for idx in goal_candidates:
            c = cost[idx] + goal_gap(idx)
            if c < best_cost:
                best_idx, best_cost = idx, c
        return best_idx, best_cost

    def update_subtree(root_idx: int):
        stack = [root_idx]
        while stack:
            u = stack.pop()
            su = tree.state(u)
            for v in children[u]:
                sv = tree.state(v)
                cost[v] = cost[u] + math.hypot(sv.x - su.x, sv.y - su.y)
                stack.append(v)

    if goal_gap(0) <= params.goal_radius and segment_collision_free(grid, start, goal):
        goal_candidates.append(0)

    for i in range(1, params.max_samples + 1):
        if params.goal_bias > 0.0 and rng.random() < params.goal_bias:
            s_rand = goal
        else:
            s_rand = sample_fn(rng)
        j = tree.nearest(s_rand)
        s_new = steer(tree.state(j), s_rand, params.step)
        if not segment_collision_free(grid, tree.state(j), s_new):
            trace.append(best_candidate()[1])
            continue
        n = len(tree)
        radius = min(params.rewire_radius, gamma * math.sqrt(math.log(n + 1) / (n + 1)))
        radius = max(radius, params.step)
        near_ids = tree.near(s_new, radius)
        if j not in near_ids:
            near_ids = np.append(near_ids, j)
        # choose parent: cheapest collision-free connection
        dists = np.hypot(tree._x[near_ids] - s_new.x, tree._y[near_ids] - s_new.y)
        totals = cost[near_ids] + dists
        order = np.argsort(totals, kind="stable")
        parent_idx = -1
        new_cost = math.inf
        for o in order:
            q = int(near_ids[o])
            if segment_collision_free(grid, tree.state(q), s_new):
                parent_idx = q
                new_cost = float(totals[o])
                break
        if parent_idx < 0:
            trace.append(best_candidate()[1])
            continue
        k = tree.add(s_new, parent=parent_idx)
        ensure_capacity()
        cost[k] = new_cost
        children.append([])
        children[parent_idx].append(k)
        # rewire neighbors through the new node where it is cheaper
        for o in range(near_ids.size):
            q = int(near_ids[o])
            if q == parent_idx:
                continue
            via = new_cost + float(dists[o])
            if via < cost[q] - 1e-12 and segment_collision_free(grid, s_new, tree.state(q)):
                old_parent = tree.parent(q)
                children[old_parent].remove(q)
                tree.set_parent(q, k)
                children[k].append(q)
                cost[q] = via
                update_subtree(q)
        if goal_gap(k) <= params.goal_radius and segment_collision_free(grid, s_new, goal):
            goal_candidates.append(k)
        trace.append(best_candidate()[1])

    best_idx, best_cost = best_candidate()
    if best_idx < 0:
        return LegResult(path=None, samples=params.max_samples, nodes=len(tree), cost_trace=trace)
    leaf = tree.add(goal, parent=best_idx)
    path = extract_path(tree, leaf)
    return LegResult(path=path, samples=params.max_samples, nodes=len(tree), cost_trace=trace)


def _uniform_fn(grid: GridMap):
    def sample_fn(rng: np.random.Generator) -> State:
        return uniform_sample(grid, rng)

    return sample_fn
