"""Exact decision toolkit for realizing edge-weighted graphs in
low-dimensional max-norm space."""

from .errors import CapExceeded, InputError, NotAPotential, PerturbationFailed
from .graph_core import (
    DistanceFunction,
    GenericityReport,
    Graph,
    SuppressionLog,
    SuppressionStep,
    ValidationReport,
    Violation,
    blocks,
    is_generic,
    perturb_to_generic,
    shortest_path_table,
    suppress_degree_2,
    validate_distance_function,
)
from .potentials import (
    ArcLengths,
    NegativeCycle,
    Orientation,
    Potential,
    apply_forcing,
    build_bidirected,
    extend_to_maximal,
    find_potential,
    is_feasible_orientation,
    is_feasible_set,
    tight_edges,
)
from .realizability import (
    Cover,
    FinfBounds,
    Realization,
    SearchOutcome,
    VerifyResult,
    arboricity,
    build_realization,
    decide_realizable,
    finf_bounds,
    min_dimension,
    verify_realization,
    vertex_cover_number,
)
from .minors import (
    Classification,
    MinorEmbedding,
    WeakenedCertificateWarning,
    certificate_exceeds_2,
    classify_dim2,
    contains_minor,
    pullback_distance,
)
from .instances import (
    Tree,
    k4ek4_witness,
    k7_generic,
    linf2_to_l1_2,
    named_graph,
    random_distance_function,
    tk4_instance,
    w4_witness,
)
from .serialize import (
    cover_from_obj,
    cover_to_obj,
    embedding_from_obj,
    embedding_to_obj,
    instance_from_obj,
    instance_to_obj,
    load_certificate,
    load_instance,
    realization_from_obj,
    realization_to_obj,
    render_dot,
    save_certificate,
    save_instance,
)

__version__ = "0.1.0"

__all__ = [
    "ArcLengths",
    "CapExceeded",
    "Classification",
    "Cover",
    "DistanceFunction",
    "FinfBounds",
    "GenericityReport",
    "Graph",
    "InputError",
    "MinorEmbedding",
    "NegativeCycle",
    "NotAPotential",
    "Orientation",
    "PerturbationFailed",
    "Potential",
    "Realization",
    "SearchOutcome",
    "SuppressionLog",
    "SuppressionStep",
    "Tree",
    "ValidationReport",
    "VerifyResult",
    "Violation",
    "WeakenedCertificateWarning",
    "apply_forcing",
    "arboricity",
    "blocks",
    "build_bidirected",
    "build_realization",
    "certificate_exceeds_2",
    "classify_dim2",
    "contains_minor",
    "cover_from_obj",
    "cover_to_obj",
    "decide_realizable",
    "embedding_from_obj",
    "embedding_to_obj",
    "extend_to_maximal",
    "finf_bounds",
    "find_potential",
    "instance_from_obj",
    "instance_to_obj",
    "is_feasible_orientation",
    "is_feasible_set",
    "is_generic",
    "k4ek4_witness",
    "k7_generic",
    "linf2_to_l1_2",
    "load_certificate",
    "load_instance",
    "min_dimension",
    "named_graph",
    "perturb_to_generic",
    "pullback_distance",
    "random_distance_function",
    "realization_from_obj",
    "realization_to_obj",
    "render_dot",
    "save_certificate",
    "save_instance",
    "shortest_path_table",
    "suppress_degree_2",
    "tight_edges",
    "tk4_instance",
    "validate_distance_function",
    "verify_realization",
    "vertex_cover_number",
    "w4_witness",
]
