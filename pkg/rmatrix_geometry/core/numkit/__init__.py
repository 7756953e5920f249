from rmatrix_geometry.core.numkit.newton import NewtonResult, newton_batch, newton_system
from rmatrix_geometry.core.numkit.poly import (
    PolyMV,
    ScalarMatch,
    mv_equal_up_to_scalar,
    mv_multiply,
)
from rmatrix_geometry.core.numkit.precision import (
    SUPPORTED_PRECISIONS,
    PrecComplex,
    context_for,
    default_tolerance,
    precision_of,
    promote,
)
from rmatrix_geometry.core.numkit.residual import (
    ResidualReport,
    normalized_residual,
    relative_difference,
    residual_from_terms,
)
from rmatrix_geometry.core.numkit.roots import uv_roots

__all__ = [
    "NewtonResult",
    "PolyMV",
    "PrecComplex",
    "ResidualReport",
    "SUPPORTED_PRECISIONS",
    "ScalarMatch",
    "context_for",
    "default_tolerance",
    "mv_equal_up_to_scalar",
    "mv_multiply",
    "newton_batch",
    "newton_system",
    "normalized_residual",
    "precision_of",
    "promote",
    "relative_difference",
    "residual_from_terms",
    "uv_roots",
]
