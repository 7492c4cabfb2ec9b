"""Connected components (4-adjacency) and holes (8-adjacent background)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import BinaryImage, CellIndex


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Per-cell component ids (-1 on zeroes) and component sizes.

    Ids are dense and follow first encounter in row-major order.
    """

    labels: np.ndarray
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)

    def label_at(self, row: int, col: int) -> int | None:
        h, w = self.labels.shape
        if not (0 <= row < h and 0 <= col < w):
            return None
        v = int(self.labels[row, col])
        return None if v < 0 else v

    def cells_of(self, component: int) -> frozenset[CellIndex]:
        rows, cols = np.nonzero(self.labels == component)
        return frozenset(CellIndex(int(r), int(c)) for r, c in zip(rows, cols))


@dataclass(frozen=True)
class Hole:
    cells: frozenset[CellIndex]
    component: int


@dataclass(frozen=True, eq=False)
class HoleReport:
    holes: tuple[Hole, ...]
    holes_per_component: tuple[int, ...]
    hole_labels: np.ndarray

    @property
    def count(self) -> int:
        return len(self.holes)

    @property
    def hole_free(self) -> bool:
        return not self.holes


def label_components(image: BinaryImage) -> ComponentLabeling:
    labels, sizes = kernels.label4(image.array)
    labels.setflags(write=False)
    return ComponentLabeling(labels, tuple(int(s) for s in sizes))


def largest_component_size(labeling: ComponentLabeling) -> int:
    return max(labeling.sizes, default=0)


def component_count(image: BinaryImage) -> int:
    return label_components(image).count


def detect_holes(image: BinaryImage, labeling: ComponentLabeling | None = None) -> HoleReport:
    """Find background regions that do not reach the rectangle's border.

    Zero cells are grouped under 8-adjacency.  A region is attributed to the
    component owning the one directly above its first row-major cell; that
    cell always lies on the region's outer rim.  The remaining one-cells
    4-adjacent to the region are that component's or, when the region
    encloses islands, those islands'.
    """
    if labeling is None:
        labeling = label_components(image)
    hole_labels, sizes, owners = kernels.holes8(image.array, labeling.labels)
    hole_labels.setflags(write=False)
    holes = []
    for hid, owner in enumerate(owners.tolist()):
        rows, cols = np.nonzero(hole_labels == hid)
        cells = frozenset(CellIndex(int(r), int(c)) for r, c in zip(rows, cols))
        assert len(cells) == sizes[hid]
        holes.append(Hole(cells, int(owner)))
    per = [0] * labeling.count
    for hole in holes:
        per[hole.component] += 1
    return HoleReport(tuple(holes), tuple(per), hole_labels)


def is_hole_free(image: BinaryImage) -> bool:
    lab = label_components(image)
    _, sizes, _ = kernels.holes8(image.array, lab.labels)
    return len(sizes) == 0
