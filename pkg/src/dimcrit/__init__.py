"""Unit-distance graph dimension toolkit.

Exact dimension and criticality for complete multipartite graphs, explicit
embeddings for clique-cycle joins, an exact rational-angle obstruction for
cycles on circles, and a certified numerical search for everything else.
"""

from .errors import (
    ApexSolveError,
    DimcritError,
    DomainError,
    GeometryError,
    UnresolvedDimensionError,
)
from .geometry import (
    CircleCycleFeasibility,
    Embedding,
    SphereSpec,
    VerificationReport,
    apex_point,
    cycle_on_circle_feasible,
    embed_cycle_on_sphere,
    embed_join_clique_cycle,
    embed_join_minus_edge,
    join_minus_edge_graph,
    join_sphere_radius,
    rational_arcsin_sqrt,
    regular_simplex,
    verify_embedding,
)
from .graphs import (
    Graph,
    JoinSpec,
    PartitionSpec,
    are_isomorphic,
    build_join_clique_cycle,
    build_multipartite,
    canonical_form,
    clique_number,
    delete_edge,
    delete_vertex,
    dimension_lower_bound,
    dimension_upper_bound_trivial,
    enumerate_graphs,
    is_connected,
    is_cycle_graph,
    is_path_forest,
    join_structure,
    multipartite_parts,
)
from .multipartite import (
    CriticalityVerdict,
    DeletionOrbit,
    MultipartiteFormulaWarning,
    classify_multipartite_criticality,
    multipartite_deletion_table,
    multipartite_dimension,
)
from .search import (
    CriticalityReport,
    DimensionEstimate,
    DropRecord,
    HuntReport,
    PruneResult,
    SearchConfig,
    estimate_dimension,
    find_embedding,
    hunt_edge_drop,
    hunt_vertex_drop,
    prune_to_critical,
    test_criticality,
)

__version__ = "0.1.0"
