"""Convex pentagonal monotiles: shapes, Type families, intersections and tilings."""
from .pentagon import (
    ALL_LABELINGS,
    BadAngleSum,
    CanonicalPentagon,
    DegenerateEdge,
    Labeling,
    NonConvex,
    NotClosed,
    PentagonShape,
    canonical_form,
    pentagon_from_angles_edges,
    pentagon_from_json,
    pentagon_from_vertices,
    regular_pentagon,
    relabel,
    render_vertices,
    similar,
)
from .catalog import (
    AngleRelation,
    EdgeRelation,
    NoSolution,
    TypeConditions,
    UnknownType,
    conditions_of,
    equilateral_member,
    membership,
    sample,
    sample_with,
)
from .system import ConstraintSystem, ConvergenceFailure
from .solver import IntersectionReport, intersection_report, venn_table
from .geometry import Isometry
from .nodes import InvalidNodeSet, NodeRelationSet, numeric_node_set, type_node_set
from .tiling import (
    NoRecipeFound,
    Patch,
    TilingRecipe,
    WrongFamily,
    assemble_recipe,
    belt_tiling,
    edge_to_edge_recipe,
    generate_patch,
    patch_svg,
    representative_recipe,
    validate_patch,
)
from .analysis import (
    IncompleteCorona,
    InvalidNode,
    analyze,
    corona_classes,
    first_corona,
    is_edge_to_edge,
    periodicity_check,
    reflection_audit,
    theorem1_audit,
    uses_reflections,
    vertex_spectrum,
)

__version__ = "0.1.0"
