"""Rank 2 Hitchin fibres: spectral data, parabolic modules and strata."""
from .divisor import Divisor
from .exc import HitchinFibreError, InvariantFailure, ValidationError
from .spectral import BaseData, FibreReport, SectionData, fibre_report

__version__ = "0.1.0.dev0"

__all__ = [
    "__version__",
    "BaseData",
    "Divisor",
    "FibreReport",
    "HitchinFibreError",
    "InvariantFailure",
    "SectionData",
    "ValidationError",
    "fibre_report",
]
