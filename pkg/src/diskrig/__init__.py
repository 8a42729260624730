"""diskrig: numerical machinery for disk-configuration rigidity experiments.

Overlap-angle geometry, fixed-point index of faithful boundary maps, torus
parametrization index formulas, subsumptive-subset combinatorics, inequality
lemma suites, and a Thurston-style relaxation solver for realizing incidence
data on finite triangulations.
"""

from .geom import Disk, DiskRelation, circle_intersections, disk_relation, overlap_angle
from .config import DiskConfiguration, IncidenceData, contact_graph, eyes, is_general_position, is_thin
from .boundary import build_faithful_map, fixed_point_index, winding_number
from .moebius import MoebiusMap, align, apply_disk, apply_point, from_three_points, normalize_pair
from .subsumption import index_lower_bound, subsumptive_subsets
from .torus import build_parametrization, find_zero_index_eye_map, index_via_torus
from .solver import Triangulation, edge_length, layout, solve_radii

__version__ = "0.1.0"

__all__ = [
    "Disk",
    "DiskRelation",
    "DiskConfiguration",
    "IncidenceData",
    "MoebiusMap",
    "Triangulation",
    "align",
    "apply_disk",
    "apply_point",
    "build_faithful_map",
    "build_parametrization",
    "circle_intersections",
    "contact_graph",
    "disk_relation",
    "edge_length",
    "eyes",
    "find_zero_index_eye_map",
    "fixed_point_index",
    "from_three_points",
    "index_lower_bound",
    "index_via_torus",
    "is_general_position",
    "is_thin",
    "layout",
    "normalize_pair",
    "overlap_angle",
    "solve_radii",
    "subsumptive_subsets",
    "winding_number",
    "__version__",
]
