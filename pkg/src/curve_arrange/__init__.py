"""Certified arrangements of two implicit curves."""

from .arrange import Arrangement, Pslg, build_arrangement
from .errors import (ArrangementError, AspectRatioError, BoundaryRoot, InternalError,
                     ResolutionLimit)
from .funcmodel import BACKEND, CurveSystem, DomainError

__version__ = "0.1.0"

__all__ = ["Arrangement", "ArrangementError", "AspectRatioError", "BACKEND", "BoundaryRoot",
           "CurveSystem", "DomainError", "InternalError", "Pslg", "ResolutionLimit",
           "build_arrangement", "__version__"]
