"""Calibration-free confidence radii for indoor location estimates."""

from .baselines import CandidateSet, gp_tailored_radius
from .core import (
    ConeTracker,
    ConfidenceEstimate,
    ErrorModel,
    Location2D,
    LocationWindow,
    center_of_mass,
    confidence_radius,
    distance_errors,
    estimate,
    fit_error_model,
    push_location,
)
from .estimators import ConeRadius, GPTailoredRadius
from .metrics import EvalRecord, SummaryRow, aed, empirical_cdf, sed, summarize
from .special import erf, erf_inv, std_normal_quantile

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "gp_tailored_radius",
    "ConeTracker",
    "ConfidenceEstimate",
    "ErrorModel",
    "Location2D",
    "LocationWindow",
    "center_of_mass",
    "confidence_radius",
    "distance_errors",
    "estimate",
    "fit_error_model",
    "push_location",
    "ConeRadius",
    "GPTailoredRadius",
    "EvalRecord",
    "SummaryRow",
    "aed",
    "empirical_cdf",
    "sed",
    "summarize",
    "erf",
    "erf_inv",
    "std_normal_quantile",
]
