"""Sliding-window confidence radius estimation.

The tracker keeps the last ``w`` location fixes, measures how far each fix
lies from their center of mass, fits a normal model to those distances and
reads the radius off the model's quantile at the requested confidence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .special import std_normal_quantile

DEFAULT_WINDOW = 8

__all__ = [
    "DEFAULT_WINDOW",
    "Location2D",
    "LocationWindow",
    "ErrorModel",
    "ConfidenceEstimate",
    "InsufficientDataError",
    "push_location",
    "center_of_mass",
    "distance_errors",
    "fit_error_model",
    "confidence_radius",
    "estimate",
    "rolling_error_models",
    "ConeTracker",
]


class InsufficientDataError(ValueError):
    """Too few samples to fit the distance-error model."""


class Location2D(NamedTuple):
    x: float
    y: float


def _as_points(locations) -> np.ndarray:
    pts = np.asarray(locations, dtype=float)
    if pts.size == 0:
        raise InsufficientDataError("at least one location is required")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected a sequence of (x, y) points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("locations must be finite")
    return pts


class LocationWindow:
    """Ring buffer holding the most recent ``capacity`` fixes, oldest first."""

    def __init__(self, capacity: int = DEFAULT_WINDOW, entries: Iterable = ()):
        if int(capacity) != capacity or capacity < 2:
            raise ValueError(f"window capacity must be an integer >= 2, got {capacity!r}")
        self.capacity = int(capacity)
        self._buf: deque[Location2D] = deque(maxlen=self.capacity)
        for loc in entries:
            self.push(loc)

    def push(self, loc) -> "LocationWindow":
        x, y = float(loc[0]), float(loc[1])
        if not (np.isfinite(x) and np.isfinite(y)):
            raise ValueError(f"location must be finite, got {loc!r}")
        self._buf.append(Location2D(x, y))
        return self

    @property
    def entries(self) -> list[Location2D]:
        return list(self._buf)

    @property
    def primed(self) -> bool:
        return len(self._buf) == self.capacity

    def clear(self) -> None:
        self._buf.clear()

    def __len__(self) -> int:
        return len(self._buf)

    def __iter__(self):
        return iter(self._buf)

    def __repr__(self) -> str:
        return f"LocationWindow(capacity={self.capacity}, entries={self.entries!r})"


def push_location(window: LocationWindow, loc) -> LocationWindow:
    return window.push(loc)


@dataclass(frozen=True)
class ErrorModel:
    """Normal model of the distance error: mean ``mu_e``, std ``sigma_e``."""

    mu_e: float
    sigma_e: float
    sample_count: int

    def __post_init__(self):
        if self.sample_count < 2:
            raise InsufficientDataError("an error model needs at least 2 samples")
        if not (self.mu_e >= 0 and self.sigma_e >= 0):
            raise ValueError(f"invalid error model ({self.mu_e!r}, {self.sigma_e!r})")


@dataclass(frozen=True)
class ConfidenceEstimate:
    center: Location2D
    radius: float
    alpha: float
    primed: bool = True


def center_of_mass(locations: Sequence) -> Location2D:
    pts = _as_points(locations)
    cx, cy = pts.mean(axis=0)
    return Location2D(float(cx), float(cy))


def distance_errors(locations: Sequence, center) -> np.ndarray:
    pts = _as_points(locations)
    c = np.asarray(center, dtype=float)
    return np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1])


def fit_error_model(distances: Sequence[float]) -> ErrorModel:
    d = np.asarray(distances, dtype=float).ravel()
    n = d.size
    if n < 2:
        raise InsufficientDataError(f"need at least 2 distances, got {n}")
    mu = float(d.mean())
    var = float(np.sum((d - mu) ** 2) / (n - 1))
    return ErrorModel(mu_e=mu, sigma_e=float(np.sqrt(var)), sample_count=n)


def confidence_radius(model: ErrorModel, alpha: float) -> float:
    """Radius at confidence ``alpha``; negative quantiles clamp to 0."""
    z = std_normal_quantile(alpha)
    return max(0.0, model.mu_e + model.sigma_e * z)


def estimate(window, alpha: float) -> ConfidenceEstimate:
    """Confidence circle for the fixes currently in ``window``.

    ``window`` may be a :class:`LocationWindow` or any sequence of points;
    at least two fixes are required.
    """
    entries = window.entries if isinstance(window, LocationWindow) else window
    pts = _as_points(entries)
    if pts.shape[0] < 2:
        raise InsufficientDataError("estimate needs at least 2 fixes in the window")
    center = center_of_mass(pts)
    model = fit_error_model(distance_errors(pts, center))
    primed = window.primed if isinstance(window, LocationWindow) else True
    return ConfidenceEstimate(center, confidence_radius(model, alpha), alpha, primed)


def rolling_error_models(estimates, w: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised error-model fit for every full window of a fix stream.

    Returns ``(centers, mu_e, sigma_e)`` with one row per window; row ``j``
    covers fixes ``j .. j + w - 1``.
    """
    pts = np.asarray(estimates, dtype=float)
    if w < 2:
        raise ValueError("window size must be >= 2")
    if pts.shape[0] < w:
        return np.empty((0, 2)), np.empty(0), np.empty(0)
    windows = sliding_window_view(pts, w, axis=0)  # (m, 2, w)
    centers = windows.mean(axis=2)
    d = np.hypot(windows[:, 0, :] - centers[:, :1], windows[:, 1, :] - centers[:, 1:])
    mu = d.mean(axis=1)
    sigma = np.sqrt(np.sum((d - mu[:, None]) ** 2, axis=1) / (w - 1))
    return centers, mu, sigma


class ConeTracker:
    """Streaming estimator for one or more devices.

    Each device id owns an independent window. ``update`` returns ``None``
    until the device has two fixes; afterwards every call yields an
    estimate, flagged ``primed`` once the window is full.
    """

    def __init__(self, w: int = DEFAULT_WINDOW, alpha: float = 0.95):
        std_normal_quantile(alpha)
        self.w = w
        self.alpha = alpha
        self._windows: dict = {}

    def window(self, device=None) -> LocationWindow:
        if device not in self._windows:
            self._windows[device] = LocationWindow(self.w)
        return self._windows[device]

    def update(self, loc, device=None) -> ConfidenceEstimate | None:
        win = self.window(device).push(loc)
        if len(win) < 2:
            return None
        return estimate(win, self.alpha)

    def reset(self, device=None) -> None:
        self._windows.pop(device, None)
