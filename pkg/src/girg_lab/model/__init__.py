"""Model definition: torus geometry and the GIRG connection kernel."""

from .geometry import (
    Geometry,
    TorusPoint,
    distance,
    inverse_volume,
    linf_distance,
    mcd_distance,
    torus_abs,
    volume,
    volume_linf,
    volume_min,
)
from .kernel import (
    ModelParams,
    VertexData,
    VertexTable,
    connection_probability,
    critical_gamma,
    is_strong_tie,
    sample_weight,
)

__all__ = [
    "Geometry",
    "ModelParams",
    "TorusPoint",
    "VertexData",
    "VertexTable",
    "connection_probability",
    "critical_gamma",
    "distance",
    "inverse_volume",
    "is_strong_tie",
    "linf_distance",
    "mcd_distance",
    "sample_weight",
    "torus_abs",
    "volume",
    "volume_linf",
    "volume_min",
]
