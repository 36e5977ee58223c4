"""Geometry of regular spherical polyhedral surfaces on planar graphs."""

from .catalog import builtin_catalog, get_solid, load_catalog, parse_catalog
from .errors import (
    CatalogError,
    DomainError,
    MarginTooLarge,
    MaxIterations,
    NoSignChange,
    NotAdmissible,
    RobustnessError,
    SpherAreaError,
)
from .extremal import (
    area_min_search,
    area_min_upper_witness,
    gap_search,
    gap_upper_witness,
    neighborhood_probe,
)
from .patterns import (
    Z_PAIRS,
    a_c,
    critical_side_length,
    emb_leq,
    enumerate_admissible,
    membership_M,
    phi,
    sqsubseteq,
)
from .spherical_core import (
    angle_defect,
    combinatorial_curvature,
    interior_angle,
    monotone_bisect,
    polygon_area,
    total_angle,
)
from .tessellation import (
    PlanarTessellation,
    SolidRecord,
    antiprism_coordinates,
    area_at,
    critical_area,
    graph_a_c,
    is_spherical_tiling,
    validate,
)

__version__ = "0.1.0"
