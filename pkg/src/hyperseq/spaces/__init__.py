"""Space presentation kinds."""
from .base import BasicOpen, SpacePresentation, Subspace
from .checks import isolated_dense_check
from .duplicate import DuplicateSpace, duplicate_space
from .filterlike import PsiSpace, XiSpace, psi_space, xi_space
from .metriclike import CantorSpace, DyadicSpace, cantor_space, dyadic_space
from .ordinal_seg import OrdinalSegment, ordinal_segment
from .sigma import SigmaSpace, sigma_space
from .sums import SumSpace, sum_space

__all__ = [
    "BasicOpen", "SpacePresentation", "Subspace",
    "isolated_dense_check",
    "DuplicateSpace", "duplicate_space",
    "PsiSpace", "XiSpace", "psi_space", "xi_space",
    "CantorSpace", "DyadicSpace", "cantor_space", "dyadic_space",
    "OrdinalSegment", "ordinal_segment",
    "SigmaSpace", "sigma_space",
    "SumSpace", "sum_space",
]
