"""
Pydantic models for the triple-well toolkit.
"""

from .data_models import *
from .report_models import *

__all__ = [
    "PotentialParams",
    "WellGeometry",
    "InstantonSolution",
    "BlockPrediction",
    "GridSpec",
    "SpectrumResult",
    "ThreeStateModel",
    "ComparisonReport",
    "RunConfig",
    "AnalysisReport",
    "SweepRow",
    "VerificationSummary",
    "ErrorReport",
]
