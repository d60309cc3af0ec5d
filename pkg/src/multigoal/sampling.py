"""Uniform and mask-guided sample generation, including the hybrid strategy.

Samplers are single-threaded: each `Sampler` owns its RNG, and the module
functions take an explicit `numpy.random.Generator`. Create one instance
per worker when running trials in parallel.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .grid import LUMINANCE_THRESHOLD, GridMap, State

BRANCH_UNIFORM = "uniform"
BRANCH_REGION = "region"
BRANCH_GUIDELINE = "guideline"


class Mask:
    """Binary cell mask with the same geometry as a GridMap (true = promising)."""

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=bool)
        if arr.ndim != 2:
            raise ValueError("mask bits must be 2-D")
        arr.flags.writeable = False
        self.bits = arr
        self._set_indices = None

    @classmethod
    def empty(cls, height: int, width: int) -> "Mask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def full(cls, height: int, width: int) -> "Mask":
        return cls(np.ones((height, width), dtype=bool))

    @classmethod
    def from_cells(cls, height: int, width: int, cells) -> "Mask":
        bits = np.zeros((height, width), dtype=bool)
        for r, c in cells:
            bits[r, c] = True
        return cls(bits)

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def is_empty(self) -> bool:
        return not self.bits.any()

    def cell_set(self, r: int, c: int) -> bool:
        return 0 <= r < self.height and 0 <= c < self.width and bool(self.bits[r, c])

    def set_indices(self) -> np.ndarray:
        """Flat indices of set cells, cached (masks are immutable)."""
        if self._set_indices is None:
            self._set_indices = np.flatnonzero(self.bits)
        return self._set_indices

    def intersect(self, other: "Mask") -> "Mask":
        return Mask(self.bits & other.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mask) and np.array_equal(self.bits, other.bits)


def load_mask(source: bytes | str | Path) -> Mask:
    """Read a mask PNG: luminance >= 128 means the bit is set."""
    data = Path(source).read_bytes() if not isinstance(source, bytes) else source
    image = Image.open(io.BytesIO(data))
    luminance = np.asarray(image.convert("L"))
    return Mask(luminance >= LUMINANCE_THRESHOLD)


def save_mask(mask: Mask, path: str | Path) -> None:
    pixels = np.where(mask.bits, 255, 0).astype(np.uint8)
    Image.fromarray(pixels, mode="L").save(Path(path), format="PNG")


@dataclass(frozen=True)
class SamplerParams:
    """Hybrid-branch probabilities: guideline 1-k1, region k2, uniform k1-k2."""

    k1: float = 0.7
    k2: float = 0.4
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.k2 <= self.k1 <= 1.0):
            raise ValueError(f"need 0 <= k2 <= k1 <= 1, got k1={self.k1}, k2={self.k2}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def uniform_sample(grid: GridMap, rng: np.random.Generator) -> State:
    """Uniform draw over continuous free space by rejection on the bounding box."""
    while True:
        x = rng.random() * grid.width
        y = rng.random() * grid.height
        if not grid.occupancy[int(y), int(x)]:
            return State(x, y)


def mask_sample(mask: Mask, rng: np.random.Generator) -> State:
    """Pick a set cell uniformly, then jitter uniformly inside it."""
    indices = mask.set_indices()
    if indices.size == 0:
        raise ValueError("empty mask")
    flat = int(indices[rng.integers(indices.size)])
    r, c = divmod(flat, mask.width)
    return State(c + rng.random(), r + rng.random())


def hybrid_sample(grid, region, guideline, params: SamplerParams, rng) -> State:
    return hybrid_sample_with_branch(grid, region, guideline, params, rng)[0]


def hybrid_sample_with_branch(
    grid: GridMap,
    region: Mask | None,
    guideline: Mask | None,
    params: SamplerParams,
    rng: np.random.Generator,
) -> tuple[State, str]:
    """One draw of the three-way hybrid strategy, labelled with the branch taken.

    A single u ~ U[0,1) partitions the branches; empty masks fall back to
    uniform sampling. When k1 >= 1 and k2 <= 0 the heuristic branches have
    zero probability and no branch draw is consumed, so the sampler is
    stream-identical to plain uniform sampling.
    """
    if params.k1 >= 1.0 and params.k2 <= 0.0:
        return uniform_sample(grid, rng), BRANCH_UNIFORM
    u = rng.random()
    if u > params.k1:
        if guideline is not None and not guideline.is_empty():
            return mask_sample(guideline, rng), BRANCH_GUIDELINE
    elif u < params.k2:
        if region is not None and not region.is_empty():
            return mask_sample(region, rng), BRANCH_REGION
    return uniform_sample(grid, rng), BRANCH_UNIFORM


def make_sampler(grid, region, guideline, params: SamplerParams):
    """Bind masks and params into a sample_fn(rng) for the tree planners."""

    def sample_fn(rng: np.random.Generator) -> State:
        return hybrid_sample_with_branch(grid, region, guideline, params, rng)[0]

    return sample_fn


class Sampler:
    """Hybrid sampler owning its RNG, seeded from params.seed."""

    def __init__(self, grid, params: SamplerParams, region=None, guideline=None):
        self.grid = grid
        self.params = params
        self.region = region
        self.guideline = guideline
        self._rng = np.random.default_rng(params.seed)

    def draw(self) -> State:
        return hybrid_sample_with_branch(
            self.grid, self.region, self.guideline, self.params, self._rng
        )[0]
