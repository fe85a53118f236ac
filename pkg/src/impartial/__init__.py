"""Deterministic impartial selection and assignment from weighted votes.

Mechanisms whose output never depends on an agent's own votes as far as that
agent's membership is concerned, together with exact worst-case guarantees,
brute-force optimality oracles, an impartiality checker, and instance
generators.
"""

from .assignment import (
    AssignmentResult,
    assign,
    assign_general,
    assignment_guarantee,
    best_partial_assignment,
    resolve_double_assignments,
)
from .errors import (
    ApplicabilityError,
    BudgetExceededError,
    ImpartialError,
    InstanceFormatError,
    ParameterError,
)
from .grid import GridCell, GuaranteeGrid, alpha_grid
from .instances import (
    generate,
    instance_to_json_dict,
    load_instance,
    parse_csv,
    parse_instance,
    parse_json_document,
    serialize_csv,
)
from .matrices import InstanceTuple, WeightMatrix
from .oracle import (
    ExhaustiveSpace,
    ImpartialityReport,
    RandomSpace,
    RatioReport,
    Violation,
    check_impartial,
    default_space,
    opt_assignment,
    opt_selection,
    ratio_report,
    tightness_instance,
    top_score_selection,
)
from .partitions import (
    BipartiteGraph,
    EdgeColoring,
    Hypergraph,
    PartitionSystem,
    build_partition_system,
    build_regular_bipartite_graph,
    color_classes,
    coloring_is_feasible,
    dual,
    edge_color,
    load_partition_file,
    system_from_candidate_sets,
    system_from_json_dict,
)
from .selection import (
    ReductionParams,
    ScoreTable,
    SelectionResult,
    modified_scores,
    reduction_params,
    select,
    select_general,
    selection_guarantee,
    total_score,
)

__version__ = "0.1.0"

__all__ = [
    "ApplicabilityError",
    "AssignmentResult",
    "BipartiteGraph",
    "BudgetExceededError",
    "EdgeColoring",
    "ExhaustiveSpace",
    "GridCell",
    "GuaranteeGrid",
    "Hypergraph",
    "ImpartialError",
    "ImpartialityReport",
    "InstanceFormatError",
    "InstanceTuple",
    "ParameterError",
    "PartitionSystem",
    "RandomSpace",
    "RatioReport",
    "ReductionParams",
    "ScoreTable",
    "SelectionResult",
    "Violation",
    "WeightMatrix",
    "alpha_grid",
    "assign",
    "assign_general",
    "assignment_guarantee",
    "best_partial_assignment",
    "build_partition_system",
    "build_regular_bipartite_graph",
    "check_impartial",
    "color_classes",
    "coloring_is_feasible",
    "default_space",
    "dual",
    "edge_color",
    "generate",
    "instance_to_json_dict",
    "load_instance",
    "load_partition_file",
    "modified_scores",
    "opt_assignment",
    "opt_selection",
    "parse_csv",
    "parse_instance",
    "parse_json_document",
    "ratio_report",
    "reduction_params",
    "resolve_double_assignments",
    "select",
    "select_general",
    "selection_guarantee",
    "serialize_csv",
    "system_from_candidate_sets",
    "system_from_json_dict",
    "tightness_instance",
    "top_score_selection",
    "total_score",
]
