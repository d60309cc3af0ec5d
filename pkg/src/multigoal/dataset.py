"""Synthetic data generation: random rectangle maps, labeled vertex pairs, export.

The exported layout ( maps/ regions/ guides/ labels.json manifest.json ) is
the training-data contract consumed by the external model trainer; the dots
burned into each map image mark the pair being labeled.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .grid import GridMap, Scenario, State
from .priors import UnreachableError, astar_shortest_path, oracle_prior
from .sampling import Mask, save_mask

ORIGIN_COLOR = (255, 0, 0)  # red dot marks the pair's first vertex
GOAL_COLOR = (0, 0, 255)  # blue dot marks the second
DOT_SIZE = 5


@dataclass(frozen=True)
class DatasetConfig:
    map_size: int = 256
    rect_count: tuple[int, int] = (4, 10)
    rect_size: tuple[int, int] = (10, 60)
    pair_count: int = 4
    region_radius: int = 10
    guide_radius: int = 1
    min_free_fraction: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.map_size < 2:
            raise ValueError("map_size must be >= 2")
        if self.rect_size[1] >= self.map_size:
            raise ValueError("rectangles must be smaller than the map")
        if self.rect_count[0] > self.rect_count[1] or self.rect_size[0] > self.rect_size[1]:
            raise ValueError("ranges must be (low, high) with low <= high")
        if not 0.0 < self.min_free_fraction < 1.0:
            raise ValueError("min_free_fraction must be in (0, 1)")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "DatasetConfig":
        kwargs = dict(doc)
        for key in ("rect_count", "rect_size"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)


def generate_map(config: DatasetConfig, rng: np.random.Generator) -> GridMap:
    """Stamp random filled rectangles; retry until enough free space remains."""
    size = config.map_size
    lo_n, hi_n = config.rect_count
    lo_s, hi_s = config.rect_size
    for _ in range(100):
        occ = np.zeros((size, size), dtype=bool)
        count = int(rng.integers(lo_n, hi_n + 1))
        for _ in range(count):
            w = int(rng.integers(lo_s, hi_s + 1))
            h = int(rng.integers(lo_s, hi_s + 1))
            r0 = int(rng.integers(0, size - h + 1))
            c0 = int(rng.integers(0, size - w + 1))
            occ[r0 : r0 + h, c0 : c0 + w] = True
        grid = GridMap(occ)
        if grid.free_fraction() >= config.min_free_fraction:
            return grid
    raise ValueError("could not reach the free-space floor in 100 attempts; loosen the config")


def _random_free_cell_center(grid: GridMap, rng: np.random.Generator) -> State:
    free = np.flatnonzero(~grid.occupancy)
    flat = int(free[rng.integers(free.size)])
    r, c = divmod(flat, grid.width)
    return State(c + 0.5, r + 0.5)


@dataclass
class SampleRecord:
    """One labeled pair: endpoints, masks, weight, and the map it lives on."""

    grid: GridMap
    a: State
    b: State
    region: Mask
    guideline: Mask
    weight: float


def generate_labeled_pair(
    grid: GridMap, rng: np.random.Generator, config: DatasetConfig
) -> SampleRecord:
    """Draw a mutually reachable free pair (at cell centers) and label it."""
    for _ in range(1000):
        a = _random_free_cell_center(grid, rng)
        b = _random_free_cell_center(grid, rng)
        if a == b:
            continue
        try:
            pk = oracle_prior(grid, a, b, config.region_radius, config.guide_radius)
        except UnreachableError:
            continue
        return SampleRecord(grid=grid, a=a, b=b, region=pk.region, guideline=pk.guideline, weight=pk.weight)
    raise ValueError("no reachable pair found in 1000 draws")


def generate_dataset(config: DatasetConfig, n_maps: int) -> list[SampleRecord]:
    rng = np.random.default_rng(config.seed)
    records = []
    for _ in range(n_maps):
        grid = generate_map(config, rng)
        for _ in range(config.pair_count):
            records.append(generate_labeled_pair(grid, rng, config))
    return records


def burn_vertices(grid: GridMap, a: State, b: State, dot_size: int = DOT_SIZE) -> np.ndarray:
    """RGB image of the map with the pair marked: red square at a, blue at b."""
    rgb = np.where(grid.occupancy[..., None], 0, 255).astype(np.uint8)
    rgb = np.repeat(rgb, 3, axis=2)
    half = dot_size // 2
    for state, color in ((a, ORIGIN_COLOR), (b, GOAL_COLOR)):
        r, c = grid.cell_of(state)
        r0, r1 = max(r - half, 0), min(r + half + 1, grid.height)
        c0, c1 = max(c - half, 0), min(c + half + 1, grid.width)
        rgb[r0:r1, c0:c1] = color
    return rgb


def export_dataset(records: list[SampleRecord], out_dir: str | Path, config: DatasetConfig | None = None) -> dict:
    """Write per-sample PNGs plus labels.json and manifest.json; returns the manifest."""
    out = Path(out_dir)
    for sub in ("maps", "regions", "guides"):
        (out / sub).mkdir(parents=True, exist_ok=True)
    samples = []
    for idx, rec in enumerate(records):
        name = f"sample_{idx:04d}"
        rgb = burn_vertices(rec.grid, rec.a, rec.b)
        Image.fromarray(rgb, mode="RGB").save(out / "maps" / f"{name}.png", format="PNG")
        save_mask(rec.region, out / "regions" / f"{name}.png")
        save_mask(rec.guideline, out / "guides" / f"{name}.png")
        samples.append(
            {
                "id": name,
                "map": f"maps/{name}.png",
                "region": f"regions/{name}.png",
                "guide": f"guides/{name}.png",
                "origin": [rec.a.x, rec.a.y],
                "goal": [rec.b.x, rec.b.y],
                "weight": rec.weight,
            }
        )
    (out / "labels.json").write_text(json.dumps({"samples": samples}, sort_keys=True) + "\n")
    manifest = {
        "count": len(records),
        "config": config.to_dict() if config is not None else None,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True) + "\n")
    return manifest


def generate_scenario(
    config: DatasetConfig,
    n_goals: int,
    rng: np.random.Generator,
    min_separation: float = 20.0,
    vertex_clearance: int = 0,
    name: str = "generated",
) -> Scenario:
    """Random map plus mutually reachable, well-separated vertices at cell centers.

    `vertex_clearance` keeps every vertex at least that many cells (Chebyshev)
    away from obstacles and the map border, so planners can maneuver around
    the vertices themselves.
    """
    from scipy import ndimage

    for _ in range(50):
        grid = generate_map(config, rng)
        if vertex_clearance > 0:
            size = 2 * vertex_clearance + 1
            inflated = ndimage.maximum_filter(grid.occupancy, size=size, mode="constant", cval=True)
            placeable = GridMap(inflated) if not inflated.all() else None
            if placeable is None:
                continue
        else:
            placeable = grid
        vertices: list[State] = []
        attempts = 0
        while len(vertices) < n_goals + 1 and attempts < 2000:
            attempts += 1
            cand = _random_free_cell_center(placeable, rng)
            if any(math.hypot(cand.x - v.x, cand.y - v.y) < min_separation for v in vertices):
                continue
            try:
                if vertices:
                    # reachability from the origin is transitive on the cell graph
                    astar_shortest_path(grid, vertices[0], cand)
            except (UnreachableError, ValueError):
                continue
            vertices.append(cand)
        if len(vertices) == n_goals + 1:
            return Scenario(map=grid, origin=vertices[0], goals=tuple(vertices[1:]), name=name)
    raise ValueError("could not place mutually reachable vertices; loosen the config")
