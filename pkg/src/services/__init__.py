"""
Services for the triple-well toolkit.
"""

from .analysis_service import AnalysisService
from .output_service import OutputService
from .verification_service import VerificationService

__all__ = [
    "AnalysisService",
    "OutputService",
    "VerificationService",
]
