"""Evaluation metrics for confidence estimators.

SED is signed: positive when the true location falls outside the circle
(the estimator was too optimistic), negative when it falls inside. A zero
SED counts as inside, i.e. the circle is closed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import InsufficientDataError

__all__ = [
    "EvalRecord",
    "SummaryRow",
    "sed",
    "aed",
    "sed_values",
    "empirical_cdf",
    "cdf_at",
    "median",
    "summarize",
    "summarize_sed",
    "normality_diagnostic",
]


@dataclass(frozen=True)
class EvalRecord:
    actual_error: float
    estimated_radius: float

    def __post_init__(self):
        for name in ("actual_error", "estimated_radius"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")


@dataclass(frozen=True)
class SummaryRow:
    median_aed: float
    inside_fraction: float
    median_positive_sed: float | None
    median_negative_sed: float | None
    count: int


def sed(record: EvalRecord) -> float:
    return record.actual_error - record.estimated_radius


def aed(record: EvalRecord) -> float:
    return abs(sed(record))


def sed_values(actual_errors, radii) -> np.ndarray:
    return np.asarray(actual_errors, dtype=float) - np.asarray(radii, dtype=float)


def empirical_cdf(values) -> np.ndarray:
    """Right-continuous empirical CDF as an ``(m, 2)`` array of (value, fraction).

    One row per distinct value, carrying the fraction of samples <= value.
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    n = v.size
    if n == 0:
        raise InsufficientDataError("empirical_cdf needs at least one value")
    last = np.r_[v[1:] != v[:-1], True]
    idx = np.nonzero(last)[0]
    return np.column_stack([v[idx], (idx + 1) / n])


def cdf_at(cdf: np.ndarray, x: float) -> float:
    """Evaluate a step CDF from :func:`empirical_cdf` at ``x``."""
    i = np.searchsorted(cdf[:, 0], x, side="right")
    return 0.0 if i == 0 else float(cdf[i - 1, 1])


def median(values) -> float:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InsufficientDataError("median of an empty sample")
    return float(np.median(v))


def summarize_sed(seds) -> SummaryRow:
    s = np.asarray(seds, dtype=float).ravel()
    if s.size == 0:
        raise InsufficientDataError("summarize needs at least one record")
    pos = s[s > 0]
    neg = s[s < 0]
    return SummaryRow(
        median_aed=median(np.abs(s)),
        inside_fraction=float(np.count_nonzero(s <= 0) / s.size),
        median_positive_sed=median(pos) if pos.size else None,
        median_negative_sed=median(neg) if neg.size else None,
        count=int(s.size),
    )


def summarize(records: Sequence[EvalRecord]) -> SummaryRow:
    return summarize_sed([sed(r) for r in records])


def normality_diagnostic(distances) -> float:
    """Kolmogorov-Smirnov distance to a normal with the sample's own mean/sd.

    Advisory only; no p-value is attached since the parameters are fitted.
    """
    d = np.sort(np.asarray(distances, dtype=float).ravel())
    n = d.size
    if n < 8:
        raise InsufficientDataError(f"normality diagnostic needs >= 8 samples, got {n}")
    sd = d.std(ddof=1)
    if not sd > 0:
        raise ValueError("normality diagnostic is undefined for a constant sample")
    z = (d - d.mean()) / sd
    cdf = 0.5 * np.array([math.erfc(-zi / math.sqrt(2.0)) for zi in z])
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))
