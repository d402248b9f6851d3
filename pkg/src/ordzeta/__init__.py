"""Exact-arithmetic zeta matrices of orders over complete discrete valuation
rings, rejective chains and quasi-hereditary endomorphism algebras, and Hall
algebras of cyclic quivers with their T = 1 Lie specialization."""

from . import chainring, errors, fields, finmod, orders, qha, series, zeta
from .errors import (
    BudgetExceeded,
    CatalogIncomplete,
    CheckFailed,
    ConfigInvalid,
    CutoffReached,
    DecompositionUncertified,
    EmptyChainStep,
    HeredityFailed,
    InterpolationUnstable,
    NoMaximalReduction,
    NonIntegralScale,
    NoStabilization,
    NotAnOverring,
    NotGorenstein,
    NotNilpotent,
    NotRightRejective,
    PrecisionExhausted,
    ShiftNonIntegral,
    Undecided,
    UnsupportedModule,
)

__version__ = "0.1.0"

__all__ = [
    "chainring",
    "errors",
    "fields",
    "finmod",
    "orders",
    "qha",
    "series",
    "zeta",
    "__version__",
    "BudgetExceeded",
    "CatalogIncomplete",
    "CheckFailed",
    "ConfigInvalid",
    "CutoffReached",
    "DecompositionUncertified",
    "EmptyChainStep",
    "HeredityFailed",
    "InterpolationUnstable",
    "NoMaximalReduction",
    "NonIntegralScale",
    "NoStabilization",
    "NotAnOverring",
    "NotGorenstein",
    "NotNilpotent",
    "NotRightRejective",
    "PrecisionExhausted",
    "ShiftNonIntegral",
    "Undecided",
    "UnsupportedModule",
]
