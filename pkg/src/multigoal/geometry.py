"""Exact grid collision predicates and the steering primitive for tree growth."""
from __future__ import annotations

import math

from .grid import GridMap, State


def supercover_cells(a, b) -> list[tuple[int, int]]:
    """Every cell whose closed unit square the closed segment [a, b] touches.

    Conservative by construction: corner crossings contribute all four
    adjacent cells, and a segment running exactly along a grid line
    contributes the cells on both sides. Sweeps column slabs left to right;
    within the slab the segment's y-extent picks the rows touched.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if ax > bx:
        ax, ay, bx, by = bx, by, ax, ay
    dx = bx - ax
    dy = by - ay
    cells = []
    c_first = math.ceil(ax) - 1
    c_last = math.floor(bx)
    for c in range(c_first, c_last + 1):
        if dx == 0.0:
            y_lo, y_hi = (ay, by) if ay <= by else (by, ay)
        else:
            t_lo = max(0.0, (c - ax) / dx)
            t_hi = min(1.0, (c + 1 - ax) / dx)
            if t_lo > t_hi:
                continue
            ya = ay + t_lo * dy
            yb = ay + t_hi * dy
            y_lo, y_hi = (ya, yb) if ya <= yb else (yb, ya)
        for r in range(math.ceil(y_lo) - 1, math.floor(y_hi) + 1):
            cells.append((r, c))
    return cells


def segment_collision_free(grid: GridMap, a, b) -> bool:
    """True iff both endpoints are in bounds and no touched grid cell is an obstacle.

    Touching the boundary of an obstacle cell counts as a collision; cells
    beyond the map edge are ignored (bounds are enforced via the endpoints,
    which confine the segment to the map rectangle).
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if not (grid.in_bounds(ax, ay) and grid.in_bounds(bx, by)):
        return False
    occ = grid.occupancy
    height, width = occ.shape
    if ax > bx:
        ax, ay, bx, by = bx, by, ax, ay
    dx = bx - ax
    dy = by - ay
    for c in range(max(math.ceil(ax) - 1, 0), min(math.floor(bx), width - 1) + 1):
        if dx == 0.0:
            y_lo, y_hi = (ay, by) if ay <= by else (by, ay)
        else:
            t_lo = max(0.0, (c - ax) / dx)
            t_hi = min(1.0, (c + 1 - ax) / dx)
            if t_lo > t_hi:
                continue
            ya = ay + t_lo * dy
            yb = ay + t_hi * dy
            y_lo, y_hi = (ya, yb) if ya <= yb else (yb, ya)
        for r in range(max(math.ceil(y_lo) - 1, 0), min(math.floor(y_hi), height - 1) + 1):
            if occ[r, c]:
                return False
    return True


def steer(frm, to, step: float) -> State:
    """Move from `frm` toward `to` by at most `step` map units."""
    if step <= 0:
        raise ValueError("step must be positive")
    dx = to[0] - frm[0]
    dy = to[1] - frm[1]
    dist = math.hypot(dx, dy)
    if dist <= step:
        return State(float(to[0]), float(to[1]))
    scale = step / dist
    return State(frm[0] + dx * scale, frm[1] + dy * scale)
