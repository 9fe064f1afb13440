"""Spectral analysis of non-negative and locally non-negative J-self-adjoint matrices."""

from ._backend import NAME as KERNEL_BACKEND
from .core import (
    FundamentalSymmetry,
    KreinOperator,
    gram_restriction,
    inner,
    is_selfadjoint,
    krein_adjoint,
    selfadjoint_from_hermitian,
)
from .errors import (
    BoundaryCollisionError,
    DimensionError,
    KreinError,
    PreconditionError,
    QuadratureError,
    SampleRangeError,
    SpectralSeparationError,
    StructureError,
)
from .spectral import (
    INFINITY,
    RealSet,
    SignType,
    SpectralDecomposition,
    classify_real_point,
    decompose,
    growth_order_at,
    projection_norm_profile,
    resolvent_norm,
    root_subspaces,
    spectral_function,
)
from .tolerances import DEFAULT as DEFAULT_TOLERANCES, Tolerances

__version__ = "0.1.0"
