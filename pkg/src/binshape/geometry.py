"""Boundaries, the city-block distance field, i-boundaries and their cycles."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import BinaryImage, EdgeId, H, V

INSIDE = "inside"
OUTSIDE = "outside"


class MalformedEdgeSet(ValueError):
    """Edge set that is not the boundary of the claimed foreground."""


@dataclass(frozen=True, eq=False)
class DistanceField:
    """City-block distance to the boundary for every one (-1 on zeroes)."""

    values: np.ndarray

    def at(self, row: int, col: int) -> int | None:
        h, w = self.values.shape
        if not (0 <= row < h and 0 <= col < w) or self.values[row, col] < 0:
            return None
        return int(self.values[row, col])

    @property
    def max(self) -> int | None:
        top = int(self.values.max(initial=-1))
        return None if top < 0 else top

    def __eq__(self, other) -> bool:
        if not isinstance(other, DistanceField):
            return NotImplemented
        return self.values.shape == other.values.shape and np.array_equal(self.values, other.values)

    __hash__ = None


@dataclass(frozen=True)
class BoundaryPath:
    edges: tuple[EdgeId, ...]
    ones_side: str
    straight: int
    type_i: int
    type_ii: int

    @property
    def length(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class BoundaryPathSet:
    paths: tuple[BoundaryPath, ...]
    level: int = 0

    @property
    def total_length(self) -> int:
        return sum(p.length for p in self.paths)

    def edge_set(self) -> frozenset[EdgeId]:
        return frozenset(e for p in self.paths for e in p.edges)

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)


def _mask_edges(mask: np.ndarray) -> frozenset[EdgeId]:
    h, w = mask.shape
    p = np.pad(mask.astype(bool), 1)
    vert = p[1:-1, :-1] != p[1:-1, 1:]  # (h, w+1): V(r, c)
    horz = p[:-1, 1:-1] != p[1:, 1:-1]  # (h+1, w): H(r, c)
    out = [V(int(r), int(c)) for r, c in zip(*np.nonzero(vert))]
    out += [H(int(r), int(c)) for r, c in zip(*np.nonzero(horz))]
    return frozenset(out)


def boundary_edges(image: BinaryImage) -> frozenset[EdgeId]:
    return _mask_edges(image.array)


def boundary_length(image: BinaryImage) -> int:
    return int(kernels.level_stats(kernels.distance(image.array))[1][0])


def distance_field(image: BinaryImage) -> DistanceField:
    values = kernels.distance(image.array)
    values.setflags(write=False)
    return DistanceField(values)


def i_boundary_edges(image: BinaryImage, field: DistanceField, i: int) -> frozenset[EdgeId]:
    """Edges between a one at distance ``i-1`` and a one at distance ``i``."""
    if i < 1:
        raise ValueError("i-boundaries are defined for i >= 1")
    if field.values.shape != image.shape:
        raise ValueError("distance field does not match the image")
    # no cell of distance >= 1 touches a zero or the border, so this is the
    # boundary of the set {d >= i}
    return _mask_edges(field.values >= i)


def level_counts(field: DistanceField) -> tuple[int, ...]:
    """``A_i``: number of ones at distance exactly ``i``, for ``i = 0..max``."""
    counts, _ = kernels.level_stats(field.values)
    return tuple(int(v) for v in counts)


def boundary_lengths(field: DistanceField) -> tuple[int, ...]:
    """``(l_0, l_1, ..., l_max)``; ``l_0`` is the boundary length."""
    _, lengths = kernels.level_stats(field.values)
    return tuple(int(v) for v in lengths[:-1]) if len(lengths) > 1 else (0,)


def _directed_to_edge(k: int, y: int, x: int) -> EdgeId:
    if k == 0:
        return H(y, x)
    if k == 1:
        return V(y, x)
    if k == 2:
        return H(y, x - 1)
    return V(y - 1, x)


def _foreground(image: BinaryImage, level: int) -> np.ndarray:
    if level == 0:
        return image.array
    return (kernels.distance(image.array) >= level).astype(np.uint8)


def decompose_paths(edges, image: BinaryImage, level: int = 0) -> BoundaryPathSet:
    """Split a boundary (``level=0``) or ``level``-boundary into simple cycles.

    Each cycle is oriented with the foreground (ones, or cells at distance
    ``>= level``) on its right.  Where two foreground cells touch only at a
    corner the cycle turns around the cell it is following, so both cells
    keep separate cycles.
    """
    edges = frozenset(edges)
    degree = Counter(v for e in edges for v in e.vertices())
    odd = sorted(v for v, n in degree.items() if n % 2)
    if odd:
        raise MalformedEdgeSet(f"vertices with odd degree: {odd[:5]}")
    mask = _foreground(image, level)
    offsets, dirs, ys, xs, stats = kernels.trace_paths(mask)
    dirs, ys, xs = dirs.tolist(), ys.tolist(), xs.tolist()
    paths = []
    for p in range(len(stats)):
        lo, hi = int(offsets[p]), int(offsets[p + 1])
        cyc = tuple(_directed_to_edge(dirs[j], ys[j], xs[j]) for j in range(lo, hi))
        _, a, b, b2, inside = (int(v) for v in stats[p])
        paths.append(BoundaryPath(cyc, INSIDE if inside else OUTSIDE, a, b, b2))
    result = BoundaryPathSet(tuple(paths), level)
    if result.edge_set() != edges or result.total_length != len(edges):
        raise MalformedEdgeSet(f"edge set is not the level-{level} boundary of the image")
    return result


def boundary_paths(image: BinaryImage, level: int = 0) -> BoundaryPathSet:
    if level == 0:
        return decompose_paths(boundary_edges(image), image)
    return decompose_paths(i_boundary_edges(image, distance_field(image), level), image, level)


def _cells_of(edge: EdgeId) -> set[tuple[int, int]]:
    return {tuple(c) for c in edge.cells()}


def classify_corners(path: BoundaryPath, image: BinaryImage, level: int = 0) -> tuple[int, int, int]:
    """Count (straight connections, type I corners, type II corners).

    Consecutive edges that are collinear form a straight connection;
    otherwise they are two sides of one cell, which is either background
    (type I) or foreground (type II).
    """
    mask = _foreground(image, level)
    h, w = mask.shape

    def fg(cell):
        r, c = cell
        return 0 <= r < h and 0 <= c < w and mask[r, c] != 0

    straight = type_i = type_ii = 0
    edges = path.edges
    for j, e1 in enumerate(edges):
        e2 = edges[(j + 1) % len(edges)]
        if e1.orientation == e2.orientation:
            straight += 1
            continue
        (shared,) = _cells_of(e1) & _cells_of(e2)
        if fg(shared):
            type_ii += 1
        else:
            type_i += 1
    return straight, type_i, type_ii


def max_ball_radius(field: DistanceField) -> int | None:
    """Largest ``k`` with a one at distance >= k; ``None`` without ones."""
    return field.max


def ball_cell_count(k: int) -> int:
    if k < 0:
        raise ValueError("radius must be non-negative")
    return 2 * k * k + 2 * k + 1
