"""scikit-learn compatible wrappers.

Both estimators are calibration-free, so ``fit`` only validates input and
records its width. ``X`` is a stream of fixes in time order, one row per
fix: ``[x, y]`` for :class:`ConeRadius`, ``[x, y, c1x, c1y, ...]`` for
:class:`GPTailoredRadius` (the trace CSV column layout minus time and truth).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .baselines import DEFAULT_GP_FACTOR, gp_tailored_radii
from .core import DEFAULT_WINDOW, estimate, rolling_error_models
from .metrics import summarize_sed
from .special import std_normal_quantile

__all__ = ["ConeRadius", "GPTailoredRadius", "check_locations"]


def check_locations(X, allow_nan: bool = False) -> np.ndarray:
    X = check_array(X, dtype=float, ensure_all_finite="allow-nan" if allow_nan else True,
                    ensure_min_samples=1)
    if X.shape[1] < 2:
        raise ValueError(f"expected at least 2 columns (x, y), got {X.shape[1]}")
    if not np.all(np.isfinite(X[:, :2])):
        raise ValueError("location columns must be finite")
    return X


class ConeRadius(BaseEstimator):
    """Sliding-window confidence radius over a stream of location fixes.

    Parameters
    ----------
    window : int
        Number of most recent fixes used per estimate.
    alpha : float
        Required confidence level in (0, 1).
    include_priming : bool
        Emit estimates for fixes that have at least two but fewer than
        ``window`` predecessors. Otherwise those rows are NaN.
    """

    def __init__(self, window: int = DEFAULT_WINDOW, alpha: float = 0.95,
                 include_priming: bool = True):
        self.window = window
        self.alpha = alpha
        self.include_priming = include_priming

    def _validate_params(self):
        if int(self.window) != self.window or self.window < 2:
            raise ValueError(f"window must be an integer >= 2, got {self.window!r}")
        std_normal_quantile(self.alpha)

    def fit(self, X, y=None):
        self._validate_params()
        X = check_locations(X)
        if X.shape[1] != 2:
            raise ValueError(f"expected 2 columns (x, y), got {X.shape[1]}")
        self.n_features_in_ = 2
        self.z_ = std_normal_quantile(self.alpha)
        return self

    def transform(self, X):
        """Per-fix ``[center_x, center_y, radius]``; NaN where undefined."""
        check_is_fitted(self, "z_")
        X = check_locations(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        w = int(self.window)
        out = np.full((X.shape[0], 3), np.nan)
        centers, mu, sigma = rolling_error_models(X, w)
        out[w - 1 :, :2] = centers
        out[w - 1 :, 2] = np.maximum(0.0, mu + sigma * self.z_)
        if self.include_priming:
            for i in range(1, min(w - 1, X.shape[0])):
                est = estimate(X[: i + 1], self.alpha)
                out[i] = (*est.center, est.radius)
        return out

    def predict(self, X):
        return self.transform(X)[:, 2]

    def fit_predict(self, X, y=None):
        return self.fit(X).predict(X)

    def score(self, X, y):
        """Fraction of defined rows whose truth ``y`` lies inside the circle.

        The circle is centered on each fix, matching how the evaluation
        harness pairs radii with localization errors.
        """
        X = check_locations(X)
        y = check_array(y, dtype=float)
        r = self.predict(X)
        ok = ~np.isnan(r)
        err = np.hypot(*(X[ok, :2] - y[ok]).T)
        return summarize_sed(err - r[ok]).inside_fraction


class GPTailoredRadius(BaseEstimator):
    """Radius = ``factor`` x distance to the furthest top-k grid candidate."""

    def __init__(self, factor: float = DEFAULT_GP_FACTOR):
        self.factor = factor

    def fit(self, X, y=None):
        if not self.factor > 0:
            raise ValueError(f"factor must be positive, got {self.factor!r}")
        X = check_locations(X, allow_nan=True)
        if X.shape[1] < 4 or X.shape[1] % 2:
            raise ValueError("expected columns x, y followed by at least one candidate x, y pair")
        self.n_features_in_ = X.shape[1]
        self.k_ = (X.shape[1] - 2) // 2
        return self

    def predict(self, X):
        check_is_fitted(self, "k_")
        X = check_locations(X, allow_nan=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        cands = X[:, 2:].reshape(X.shape[0], self.k_, 2)
        return gp_tailored_radii(X[:, :2], cands, self.factor)
