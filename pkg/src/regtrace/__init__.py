"""Exact and numerical checks of the trace formula for finite regular graphs."""

__version__ = "0.1.0"

from .census import (
    CONTRACTIBLE,
    CensusTable,
    GeodesicClass,
    OracleBudget,
    count_closed_paths,
    count_geodesic_paths,
    cyclic_reduce,
    enumerate_closed_paths,
    enumerate_geodesics,
    homotopy_census,
    master_identity_terms,
    primitive_root_length,
)
from .graph import (
    DirectedEdge,
    Graph,
    GraphDocument,
    build_graph,
    directed_edges,
    generate,
    is_bipartite,
    load_graph,
)
from .series import (
    IntSeries,
    TreeWalkTable,
    catalan,
    first_return_counts,
    homotopy_class_coefficients,
    prohibited_direction_counts,
    trajectory_class_coefficients,
    tree_walk_counts,
)
from .spectral import (
    DensityTable,
    Spectrum,
    TestSequence,
    TraceReport,
    bessel_i,
    chebyshev_t,
    contractible_term,
    density_table,
    geodesic_term,
    gp_from_spectrum,
    spectrum,
    verify_ahumada,
    verify_polygon_identity,
    verify_trace_formula,
    z_t_spectral,
)
