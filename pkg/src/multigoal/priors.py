"""Per-pair prior knowledge: a promising region, a guideline, and a weight estimate.

Three interchangeable providers feed the graph builder: a classical oracle
(grid shortest path, dilated), a file-backed provider consuming exported
masks and weights, and a Euclidean provider for the unguided baseline.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from heapq import heappop, heappush
from pathlib import Path

import numpy as np
from scipy import ndimage

from .grid import GridMap, State
from .sampling import Mask, load_mask

SQRT2 = math.sqrt(2.0)

# (dr, dc, step cost); axis moves first so ties resolve toward axis steps
NEIGHBORS_8 = (
    (-1, 0, 1.0),
    (0, -1, 1.0),
    (0, 1, 1.0),
    (1, 0, 1.0),
    (-1, -1, SQRT2),
    (-1, 1, SQRT2),
    (1, -1, SQRT2),
    (1, 1, SQRT2),
)


class UnreachableError(RuntimeError):
    """No obstacle-free grid path exists between the endpoints."""


def octile(dr: float, dc: float) -> float:
    """8-connected grid metric: unit axis steps, sqrt(2) diagonal steps."""
    lo, hi = sorted((abs(dr), abs(dc)))
    return hi + (SQRT2 - 1.0) * lo


def _octile_line(c0: tuple[int, int], c1: tuple[int, int]) -> list[tuple[int, int]]:
    """Straightest 8-connected digital line between two cells.

    Exactly max(|dr|,|dc|) steps of which min(|dr|,|dc|) are diagonal, so
    its cost equals the octile distance.
    """
    r0, c0_, = c0
    r1, c1_ = c1
    dr, dc = r1 - r0, c1_ - c0_
    n = max(abs(dr), abs(dc))
    if n == 0:
        return [c0]
    cells = [c0]
    for k in range(1, n + 1):
        r = r0 + math.floor(k * dr / n + 0.5)
        c = c0_ + math.floor(k * dc / n + 0.5)
        cells.append((r, c))
    return cells


def _cell_path_valid(occ, cells) -> bool:
    for (r0, c0), (r1, c1) in zip(cells[:-1], cells[1:]):
        if occ[r1, c1]:
            return False
        dr, dc = r1 - r0, c1 - c0
        if dr != 0 and dc != 0 and (occ[r0, c1] or occ[r1, c0]):
            return False
    return not occ[cells[0]]


def straighten_cell_path(grid: GridMap, cells: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Replace staircase stretches of a shortest path with line-of-sight digital lines.

    Cost-preserving: a subpath of a shortest path is itself shortest, so
    whenever the straight digital line between two of its cells is free,
    that line has the same octile cost. The result is a shortest path that
    hugs the geometric straight line wherever space allows.
    """
    occ = grid.occupancy
    out = [cells[0]]
    i = 0
    last = len(cells) - 1
    while i < last:
        advanced = False
        for j in range(last, i, -1):
            line = _octile_line(cells[i], cells[j])
            if _cell_path_valid(occ, line):
                out.extend(line[1:])
                i = j
                advanced = True
                break
        if not advanced:
            out.append(cells[i + 1])
            i += 1
    return out


def astar_shortest_path(grid: GridMap, a, b) -> tuple[list[tuple[int, int]], float]:
    """Shortest 8-connected cell path from a's cell to b's cell.

    Diagonal moves are blocked when either adjacent axis cell is an
    obstacle (no corner cutting), which keeps every returned path
    traversable under the conservative segment collision rule. Among
    equal-cost paths the straightest one is returned (see
    straighten_cell_path). Raises UnreachableError when no path exists.
    """
    if not grid.is_free(a) or not grid.is_free(b):
        raise ValueError("shortest-path endpoints must be free")
    occ = grid.occupancy
    height, width = occ.shape
    start = grid.cell_of(a)
    goal = grid.cell_of(b)
    gr, gc = goal
    dist = np.full((height, width), np.inf)
    dist[start] = 0.0
    parent = {}
    heap = [(octile(start[0] - gr, start[1] - gc), 0.0, start[0], start[1])]
    while heap:
        f, negg, r, c = heappop(heap)
        g = -negg
        if g > dist[r, c]:
            continue
        if (r, c) == goal:
            path = [(r, c)]
            while (r, c) != start:
                r, c = parent[(r, c)]
                path.append((r, c))
            path.reverse()
            return straighten_cell_path(grid, path), g
        for dr, dc, cost in NEIGHBORS_8:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < height and 0 <= nc < width) or occ[nr, nc]:
                continue
            if dr != 0 and dc != 0 and (occ[r, nc] or occ[nr, c]):
                continue
            ng = g + cost
            if ng < dist[nr, nc]:
                dist[nr, nc] = ng
                parent[(nr, nc)] = (r, c)
                heappush(heap, (ng + octile(nr - gr, nc - gc), -ng, nr, nc))
    raise UnreachableError(f"no grid path from cell {start} to cell {goal}")


def dilate_mask(mask: Mask, radius: int) -> Mask:
    """Chebyshev-disk dilation: set iff an original set bit lies within L-inf radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if radius == 0:
        return Mask(mask.bits)
    size = 2 * radius + 1
    dilated = ndimage.maximum_filter(mask.bits, size=size, mode="constant", cval=False)
    return Mask(dilated)


@dataclass(frozen=True)
class PriorKnowledge:
    """Region mask, guideline mask, and weight estimate for one vertex pair."""

    region: Mask
    guideline: Mask
    weight: float

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("weight must be non-negative")
        if not self.region.is_empty() or not self.guideline.is_empty():
            if (self.guideline.bits & ~self.region.bits).any():
                raise ValueError("guideline must be contained in region")


def oracle_prior(
    grid: GridMap, a, b, region_radius: int = 10, guide_radius: int = 1
) -> PriorKnowledge:
    """Label one pair from the grid-optimal path: dilated masks plus its length.

    The weight is never allowed below the straight-line distance so it
    stays a valid length estimate even for pairs landing in the same or
    adjacent cells. Masks are clipped to free space: obstacle cells are
    never promising, and sampling them would only waste tree extensions.
    """
    if region_radius < guide_radius:
        raise ValueError("region_radius must be >= guide_radius")
    cells, length = astar_shortest_path(grid, a, b)
    path_mask = Mask.from_cells(grid.height, grid.width, cells)
    free = ~grid.occupancy
    euclid = math.hypot(b[0] - a[0], b[1] - a[1])
    return PriorKnowledge(
        region=Mask(dilate_mask(path_mask, region_radius).bits & free),
        guideline=Mask(dilate_mask(path_mask, guide_radius).bits & free),
        weight=max(length, euclid),
    )


class OracleProvider:
    """Priors from deterministic grid search on the scenario map."""

    kind = "oracle"

    def __init__(self, region_radius: int = 10, guide_radius: int = 1):
        if guide_radius < 0 or region_radius < guide_radius:
            raise ValueError("need region_radius >= guide_radius >= 0")
        self.region_radius = region_radius
        self.guide_radius = guide_radius

    def prior(self, scenario, i: int, j: int) -> PriorKnowledge:
        vertices = scenario.vertices
        return oracle_prior(
            scenario.map, vertices[i], vertices[j], self.region_radius, self.guide_radius
        )


class EuclideanProvider:
    """Straight-line weights and empty masks: the unguided baseline."""

    kind = "euclidean"

    def prior(self, scenario, i: int, j: int) -> PriorKnowledge:
        a = scenario.vertices[i]
        b = scenario.vertices[j]
        h, w = scenario.map.height, scenario.map.width
        return PriorKnowledge(
            region=Mask.empty(h, w),
            guideline=Mask.empty(h, w),
            weight=math.hypot(b.x - a.x, b.y - a.y),
        )


class FilesProvider:
    """Priors exported by an external model: per-pair mask PNGs plus weights.json.

    Expects region_<i>_<j>.png, guide_<i>_<j>.png and a weights.json entry
    "<i>_<j>" with i < j. The guideline is intersected with the region on
    load so the containment invariant holds regardless of the exporter.
    """

    kind = "files"

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        weights_path = self.directory / "weights.json"
        if not weights_path.exists():
            raise FileNotFoundError(f"missing weights: {weights_path}")
        self.weights = json.loads(weights_path.read_text())

    def prior(self, scenario, i: int, j: int) -> PriorKnowledge:
        i, j = sorted((i, j))
        key = f"{i}_{j}"
        if key not in self.weights:
            raise KeyError(f"missing weights entry {key!r}")
        weight = float(self.weights[key])
        if weight < 0:
            raise ValueError(f"negative weight for pair {key!r}")
        region = self._load(f"region_{i}_{j}.png", scenario.map)
        guideline = self._load(f"guide_{i}_{j}.png", scenario.map)
        return PriorKnowledge(region=region, guideline=guideline.intersect(region), weight=weight)

    def _load(self, name: str, grid: GridMap) -> Mask:
        path = self.directory / name
        if not path.exists():
            raise FileNotFoundError(f"missing mask file {path}")
        mask = load_mask(path)
        if (mask.height, mask.width) != (grid.height, grid.width):
            raise ValueError(
                f"dimension mismatch: mask {name} is {mask.width}x{mask.height}, "
                f"map is {grid.width}x{grid.height}"
            )
        return mask


PROVIDER_KINDS = ("oracle", "files", "euclidean")


def make_provider(kind: str, masks_dir=None, region_radius: int = 10, guide_radius: int = 1):
    if kind == "oracle":
        return OracleProvider(region_radius=region_radius, guide_radius=guide_radius)
    if kind == "euclidean":
        return EuclideanProvider()
    if kind == "files":
        if masks_dir is None:
            raise ValueError("files provider needs a masks directory")
        return FilesProvider(masks_dir)
    raise ValueError(f"unknown provider kind {kind!r}")
