"""MST-ratio toolbox for bi-colored point sets on planar lattices and tori."""

from .constructions import (
    Coloring,
    RatioReport,
    asymptotic_sublattice_ratio,
    build_construction,
    mst_ratio,
    multiway_ratio,
    packing_coloring,
    sublattice_coloring,
    supmax_check,
)
from .lattice import (
    Basis,
    Metric,
    PointCloud,
    Topology,
    TriCoord,
    distance,
    generate_rhombus,
    generate_square,
    hex_distance,
    hexagonal_basis,
    make_basis,
    square_basis,
    tri_coords,
)
from .spanning import Edge, Forest, SpanningTree, filtered_forest, hex_mst, mst

__all__ = [
    "Basis",
    "Coloring",
    "Edge",
    "Forest",
    "Metric",
    "PointCloud",
    "RatioReport",
    "SpanningTree",
    "Topology",
    "TriCoord",
    "asymptotic_sublattice_ratio",
    "build_construction",
    "distance",
    "filtered_forest",
    "generate_rhombus",
    "generate_square",
    "hex_distance",
    "hex_mst",
    "hexagonal_basis",
    "make_basis",
    "mst",
    "mst_ratio",
    "multiway_ratio",
    "packing_coloring",
    "square_basis",
    "sublattice_coloring",
    "supmax_check",
    "tri_coords",
]

__version__ = "0.1.0"
