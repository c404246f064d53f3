from symred.semialg.mesh import mesh_document, reduce_to_chart, sample_surface
from symred.semialg.models import (
    CasimirIndexError,
    Chart,
    ChartError,
    MaximalRankUnavailableError,
    MembershipReport,
    Mesh,
    MissingMomentumError,
    MomentumConstraint,
    NotInSetError,
    PointClass,
    PointClassification,
    ReducedSpace,
    SemiAlgebraicSet,
    Window,
)
from symred.semialg.service import (
    classify_point,
    estimate_maximal_rank,
    membership,
    orbit_space,
    project_onto_relations,
    reduced_space,
    relation_rank,
    to_fraction,
)

__all__ = [
    "CasimirIndexError",
    "Chart",
    "ChartError",
    "MaximalRankUnavailableError",
    "MembershipReport",
    "Mesh",
    "MissingMomentumError",
    "MomentumConstraint",
    "NotInSetError",
    "PointClass",
    "PointClassification",
    "ReducedSpace",
    "SemiAlgebraicSet",
    "Window",
    "classify_point",
    "estimate_maximal_rank",
    "membership",
    "mesh_document",
    "orbit_space",
    "project_onto_relations",
    "reduce_to_chart",
    "reduced_space",
    "relation_rank",
    "sample_surface",
    "to_fraction",
]
