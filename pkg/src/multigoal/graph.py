"""Complete weighted graph over origin+goals and visiting-order solvers."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import Scenario, State
from .priors import PriorKnowledge, UnreachableError

EXACT_SOLVER_LIMIT = 13


@dataclass(frozen=True)
class VisitingOrder:
    """Closed vertex sequence: starts and ends at 0, visits each goal once."""

    sequence: tuple[int, ...]

    def __post_init__(self):
        seq = tuple(int(v) for v in self.sequence)
        object.__setattr__(self, "sequence", seq)
        if len(seq) < 3 or seq[0] != 0 or seq[-1] != 0:
            raise ValueError("order must start and end at vertex 0")
        interior = seq[1:-1]
        if sorted(interior) != list(range(1, len(interior) + 1)):
            raise ValueError("interior of order must be a permutation of the goals")

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.sequence[:-1], self.sequence[1:]))

    def __len__(self) -> int:
        return len(self.sequence)


class WeightedGraph:
    """Symmetric weight matrix over vertex 0 (origin) and vertices 1..N (goals)."""

    def __init__(self, vertices, weights, priors=None):
        self.vertices = [State(*v) for v in vertices]
        w = np.array(weights, dtype=float)
        n = len(self.vertices)
        if w.shape != (n, n):
            raise ValueError(f"weight matrix must be {n}x{n}")
        if not np.allclose(w, w.T):
            raise ValueError("weight matrix must be symmetric")
        if (w < 0).any() or not np.allclose(np.diag(w), 0.0):
            raise ValueError("weights must be non-negative with a zero diagonal")
        w.flags.writeable = False
        self.weights = w
        self.priors = priors or {}

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def prior(self, i: int, j: int) -> PriorKnowledge | None:
        return self.priors.get((min(i, j), max(i, j)))

    def dump_json(self, path: str | Path) -> None:
        doc = {
            "vertices": [[v.x, v.y] for v in self.vertices],
            "weights": self.weights.tolist(),
        }
        Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def symmetrize(matrix) -> np.ndarray:
    """Average a matrix with its transpose; no-op on symmetric input."""
    m = np.asarray(matrix, dtype=float)
    return (m + m.T) / 2.0


def build_graph(scenario: Scenario, provider) -> WeightedGraph:
    """Query the provider once per unordered pair and assemble the graph."""
    vertices = scenario.vertices
    n = len(vertices)
    weights = np.zeros((n, n))
    priors = {}
    for i in range(n):
        for j in range(i + 1, n):
            try:
                pk = provider.prior(scenario, i, j)
            except UnreachableError as exc:
                raise UnreachableError(f"unreachable pair ({i}, {j}): {exc}") from exc
            weights[i, j] = weights[j, i] = pk.weight
            priors[(i, j)] = pk
    return WeightedGraph(vertices, symmetrize(weights), priors)


def tour_cost(graph: WeightedGraph, order: VisitingOrder) -> float:
    w = graph.weights
    return float(sum(w[u, v] for u, v in order.pairs()))


def solve_tsp_exact(graph: WeightedGraph) -> VisitingOrder:
    """Minimum-cost closed tour from vertex 0 by dynamic programming over subsets.

    Subsets cannot encode revisits, so the one-incoming/one-outgoing and
    single-cycle constraints hold structurally. Limited to 13 vertices.
    """
    n = graph.n_vertices
    if n > EXACT_SOLVER_LIMIT:
        raise ValueError(
            f"{n} vertices exceeds the exact-solver limit of {EXACT_SOLVER_LIMIT}; "
            "use solve_tsp_2opt"
        )
    if n == 2:
        return VisitingOrder((0, 1, 0))
    w = graph.weights.tolist()
    m = n - 1
    full = (1 << m) - 1
    inf = math.inf
    dp = [[inf] * m for _ in range(full + 1)]
    parent = [[-1] * m for _ in range(full + 1)]
    for j in range(m):
        dp[1 << j][j] = w[0][j + 1]
    for subset in range(1, full + 1):
        if subset & (subset - 1) == 0:
            continue
        row = dp[subset]
        for j in range(m):
            if not subset & (1 << j):
                continue
            prev = subset ^ (1 << j)
            prev_row = dp[prev]
            wj = w[j + 1]
            best = inf
            arg = -1
            for k in range(m):
                if not prev & (1 << k):
                    continue
                cand = prev_row[k] + wj[k + 1]
                if cand < best:
                    best = cand
                    arg = k
            row[j] = best
            parent[subset][j] = arg
    best = inf
    last = -1
    for j in range(m):
        cand = dp[full][j] + w[j + 1][0]
        if cand < best:
            best = cand
            last = j
    sequence = [0]
    subset = full
    chain = []
    j = last
    while j >= 0:
        chain.append(j + 1)
        nxt = parent[subset][j]
        subset ^= 1 << j
        j = nxt
    sequence.extend(reversed(chain))
    sequence.append(0)
    return VisitingOrder(tuple(sequence))


def _nearest_neighbor_order(w: np.ndarray) -> list[int]:
    n = w.shape[0]
    unvisited = set(range(1, n))
    tour = [0]
    current = 0
    while unvisited:
        nxt = min(unvisited, key=lambda v: (w[current, v], v))
        tour.append(nxt)
        unvisited.remove(nxt)
        current = nxt
    return tour


def _two_opt(tour: list[int], w: np.ndarray) -> list[int]:
    """Reverse interior segments until no swap shortens the closed tour."""
    n = len(tour)
    improved = True
    while improved:
        improved = False
        for i in range(1, n - 1):
            a, b = tour[i - 1], tour[i]
            for j in range(i + 1, n):
                c = tour[j]
                d = tour[(j + 1) % n]
                delta = w[a, c] + w[b, d] - w[a, b] - w[c, d]
                if delta < -1e-12:
                    tour[i : j + 1] = tour[i : j + 1][::-1]
                    improved = True
                    break
            if improved:
                break
    return tour


def solve_tsp_2opt(
    graph: WeightedGraph, restarts: int = 4, rng: np.random.Generator | None = None
) -> VisitingOrder:
    """Nearest-neighbor construction plus 2-opt; best tour over randomized restarts."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(0)
    w = graph.weights
    n = graph.n_vertices
    if n == 2:
        return VisitingOrder((0, 1, 0))
    best_order = None
    best_cost = math.inf
    for restart in range(restarts):
        if restart == 0:
            tour = _nearest_neighbor_order(w)
        else:
            interior = list(rng.permutation(np.arange(1, n)))
            tour = [0] + [int(v) for v in interior]
        tour = _two_opt(tour, w)
        order = VisitingOrder(tuple(tour + [0]))
        cost = tour_cost(graph, order)
        if cost < best_cost - 1e-12:
            best_cost = cost
            best_order = order
    return best_order
