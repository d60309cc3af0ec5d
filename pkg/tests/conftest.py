"""Shared fixtures and independent oracles used across the test suite."""
from __future__ import annotations

import math

import numpy as np
import pytest

from multigoal import GridMap


def random_grid(rng: np.random.Generator, height: int, width: int, fill: float = 0.2) -> GridMap:
    """Random occupancy grid with a guaranteed free border corridor."""
    occ = rng.random((height, width)) < fill
    occ[0, :] = False
    occ[:, 0] = False
    return GridMap(occ)


def sampled_collision_free(grid: GridMap, a, b, resolution: float = 0.01) -> bool:
    """Brute-force oracle: walk the segment at sub-cell resolution, floor-rule cells."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if not (grid.in_bounds(ax, ay) and grid.in_bounds(bx, by)):
        return False
    length = math.hypot(bx - ax, by - ay)
    n = max(int(math.ceil(length / resolution)) + 1, 2)
    t = np.linspace(0.0, 1.0, n)
    cols = (ax + t * (bx - ax)).astype(np.int64)
    rows = (ay + t * (by - ay)).astype(np.int64)
    return not grid.occupancy[rows, cols].any()


def dijkstra_grid_distance(grid: GridMap, start_cell, goal_cell) -> float:
    """Independent exhaustive Dijkstra over all cells (octile costs, no corner cuts)."""
    import heapq

    occ = grid.occupancy
    h, w = occ.shape
    sqrt2 = math.sqrt(2.0)
    dist = np.full((h, w), np.inf)
    dist[start_cell] = 0.0
    heap = [(0.0, start_cell)]
    while heap:
        d, (r, c) = heapq.heappop(heap)
        if d > dist[r, c]:
            continue
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if dr == 0 and dc == 0:
                    continue
                nr, nc = r + dr, c + dc
                if not (0 <= nr < h and 0 <= nc < w) or occ[nr, nc]:
                    continue
                if dr != 0 and dc != 0 and (occ[r, nc] or occ[nr, c]):
                    continue
                nd = d + (sqrt2 if dr != 0 and dc != 0 else 1.0)
                if nd < dist[nr, nc]:
                    dist[nr, nc] = nd
                    heapq.heappush(heap, (nd, (nr, nc)))
    return float(dist[goal_cell])


def octile_distance(dr: float, dc: float) -> float:
    lo, hi = sorted((abs(dr), abs(dc)))
    return hi + (math.sqrt(2.0) - 1.0) * lo


@pytest.fixture
def empty_grid_16():
    return GridMap(np.zeros((16, 16), dtype=bool))


@pytest.fixture
def empty_grid_64():
    return GridMap(np.zeros((64, 64), dtype=bool))
