"""homlie: twisted matrix brackets, their cochain cohomology, twisted
matrix groups, and a deformed Toda lattice flow, with numerical
verification suites behind the ``homlie`` command line tool."""

from .backend import BACKEND
from .linalg import (
    Involution,
    InvolutionError,
    LinearAlgebraError,
    MatrixOverflowError,
    NotSymmetricError,
    SingularMatrixError,
    conjugated_involution,
    diagonal_signs,
    identity_involution,
    involution_from_spec,
    transposition,
)
from .homalg import (
    HomLieContext,
    MorphismData,
    ad_beta,
    bracket_beta,
    check_morphism,
    conjugation_transport,
    hom_jacobi_residual,
    untwisted_jacobi_residual,
)
from .cochain import (
    Cochain,
    cohomology,
    coboundary_hom,
    coboundary_lie,
    evaluate,
    intertwining_residuals,
    pullback_left,
    pullback_right,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "Involution",
    "InvolutionError",
    "LinearAlgebraError",
    "MatrixOverflowError",
    "NotSymmetricError",
    "SingularMatrixError",
    "conjugated_involution",
    "diagonal_signs",
    "identity_involution",
    "involution_from_spec",
    "transposition",
    "HomLieContext",
    "MorphismData",
    "ad_beta",
    "bracket_beta",
    "check_morphism",
    "conjugation_transport",
    "hom_jacobi_residual",
    "untwisted_jacobi_residual",
    "Cochain",
    "cohomology",
    "coboundary_hom",
    "coboundary_lie",
    "evaluate",
    "intertwining_residuals",
    "pullback_left",
    "pullback_right",
]
