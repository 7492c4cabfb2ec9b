"""Area, boundary and shape metrics for binary images on a square grid."""

from .bounds import BoundEntry, BoundReport, Metrics, full_report, measure
from .geometry import (
    BoundaryPath,
    BoundaryPathSet,
    DistanceField,
    ball_cell_count,
    boundary_edges,
    boundary_length,
    boundary_paths,
    classify_corners,
    decompose_paths,
    distance_field,
    i_boundary_edges,
    level_counts,
    max_ball_radius,
)
from .grid import BinaryImage, CellIndex, EdgeId, ParseError, area, emit_image, parse_image
from .kernels import BACKEND
from .topology import ComponentLabeling, HoleReport, detect_holes, label_components, largest_component_size

__version__ = "0.1.0"
