"""Occupancy-grid world model, scenarios, and map/scenario file I/O."""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from PIL import Image, UnidentifiedImageError

OBSTACLE_CHAR = "#"
FREE_CHAR = "."
LUMINANCE_THRESHOLD = 128


class State(NamedTuple):
    """Continuous position in map units. x grows rightward, y grows downward."""

    x: float
    y: float


class GridMap:
    """Binary occupancy grid embedded in continuous coordinates.

    Cell (r, c) occupies the half-open square [c, c+1) x [r, r+1), so a
    continuous point (x, y) belongs to cell (floor(y), floor(x)).
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, occupancy) -> None:
        occ = np.array(occupancy, dtype=bool)
        if occ.ndim != 2:
            raise ValueError("occupancy must be a 2-D array")
        if occ.shape[0] < 2 or occ.shape[1] < 2:
            raise ValueError(f"grid must be at least 2x2, got {occ.shape[1]}x{occ.shape[0]}")
        occ.flags.writeable = False
        self.occupancy = occ

    @property
    def height(self) -> int:
        return self.occupancy.shape[0]

    @property
    def width(self) -> int:
        return self.occupancy.shape[1]

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width and 0.0 <= y < self.height

    def cell_of(self, s) -> tuple[int, int]:
        """(row, col) of the cell containing continuous point s."""
        return int(math.floor(s[1])), int(math.floor(s[0]))

    def cell_free(self, r: int, c: int) -> bool:
        return 0 <= r < self.height and 0 <= c < self.width and not self.occupancy[r, c]

    def is_free(self, s) -> bool:
        """True iff s is in bounds and its cell is not an obstacle."""
        x, y = float(s[0]), float(s[1])
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
        if not self.in_bounds(x, y):
            return False
        return not self.occupancy[int(y), int(x)]

    def free_fraction(self) -> float:
        return 1.0 - float(np.count_nonzero(self.occupancy)) / self.occupancy.size

    def __eq__(self, other) -> bool:
        return isinstance(other, GridMap) and np.array_equal(self.occupancy, other.occupancy)

    def __repr__(self) -> str:
        return f"GridMap({self.width}x{self.height}, {self.free_fraction():.0%} free)"


def load_map(source: bytes | str) -> GridMap:
    """Parse a map from raster image bytes or an ASCII grid string.

    Raster pixels with luminance < 128 become obstacles. ASCII uses '#' for
    obstacles and '.' for free cells and must be rectangular.
    """
    if isinstance(source, bytes):
        try:
            image = Image.open(io.BytesIO(source))
            image.load()
        except UnidentifiedImageError as exc:
            raise ValueError("unsupported raster format") from exc
        luminance = np.asarray(image.convert("L"))
        return GridMap(luminance < LUMINANCE_THRESHOLD)
    return _parse_ascii(source)


def _parse_ascii(text: str) -> GridMap:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError("empty map")
    widths = {len(line) for line in lines}
    if len(widths) != 1:
        raise ValueError("non-rectangular ASCII map")
    rows = []
    for line in lines:
        row = []
        for ch in line:
            if ch == OBSTACLE_CHAR:
                row.append(True)
            elif ch == FREE_CHAR:
                row.append(False)
            else:
                raise ValueError(f"unsupported map character {ch!r}")
        rows.append(row)
    return GridMap(rows)


def load_map_file(path: str | Path) -> GridMap:
    data = Path(path).read_bytes()
    try:
        return load_map(data)
    except ValueError:
        return load_map(data.decode("utf-8"))


def map_to_ascii(grid: GridMap) -> str:
    lines = ["".join(OBSTACLE_CHAR if v else FREE_CHAR for v in row) for row in grid.occupancy]
    return "\n".join(lines) + "\n"


def save_map_png(grid: GridMap, path: str | Path) -> None:
    pixels = np.where(grid.occupancy, 0, 255).astype(np.uint8)
    Image.fromarray(pixels, mode="L").save(Path(path), format="PNG")


@dataclass(frozen=True)
class Scenario:
    """A map plus the origin and goal vertices of one multi-goal query."""

    map: GridMap
    origin: State
    goals: tuple[State, ...]
    name: str = ""

    def __post_init__(self):
        if len(self.goals) < 1:
            raise ValueError("scenario needs at least one goal")
        vertices = [self.origin, *self.goals]
        for v in vertices:
            if not self.map.is_free(v):
                raise ValueError(f"infeasible vertex {tuple(v)}: inside an obstacle or out of bounds")
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertices")
        object.__setattr__(self, "goals", tuple(State(*g) for g in self.goals))
        object.__setattr__(self, "origin", State(*self.origin))

    @property
    def vertices(self) -> list[State]:
        """Vertex 0 is the origin, vertices 1..N the goals."""
        return [self.origin, *self.goals]

    @property
    def n_goals(self) -> int:
        return len(self.goals)


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario JSON file; the map path is resolved relative to it."""
    path = Path(path)
    doc = json.loads(path.read_text())
    map_path = path.parent / doc["map"]
    if not map_path.exists():
        raise FileNotFoundError(f"missing map file {map_path}")
    grid = load_map_file(map_path)
    origin = State(*(float(v) for v in doc["origin"]))
    goals = tuple(State(*(float(v) for v in g)) for g in doc["goals"])
    return Scenario(map=grid, origin=origin, goals=goals, name=doc.get("name", path.stem))


def save_scenario(scenario: Scenario, path: str | Path, map_format: str = "png") -> None:
    """Write scenario JSON plus its map file next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if map_format == "png":
        map_name = path.stem + "_map.png"
        save_map_png(scenario.map, path.parent / map_name)
    elif map_format == "ascii":
        map_name = path.stem + "_map.txt"
        (path.parent / map_name).write_text(map_to_ascii(scenario.map))
    else:
        raise ValueError(f"unknown map format {map_format!r}")
    doc = {
        "map": map_name,
        "name": scenario.name,
        "origin": [scenario.origin.x, scenario.origin.y],
        "goals": [[g.x, g.y] for g in scenario.goals],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
