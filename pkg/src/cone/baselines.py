"""Grid-candidate ("GP-Tailored") confidence radius.

A localizer that ranks grid points can report its top-k candidates; this
baseline sets the radius to a fixed fraction of the distance from the
reported estimate to the furthest candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Location2D

DEFAULT_GP_FACTOR = 0.5

__all__ = [
    "DEFAULT_GP_FACTOR",
    "CandidateSet",
    "BaselineUnavailableError",
    "gp_tailored_radius",
    "gp_tailored_radii",
]


class BaselineUnavailableError(ValueError):
    """The grid-candidate baseline was requested without candidates."""


@dataclass(frozen=True)
class CandidateSet:
    estimate: Location2D
    candidates: np.ndarray  # (k, 2), best first

    def __post_init__(self):
        cands = np.asarray(self.candidates, dtype=float).reshape(-1, 2)
        if cands.shape[0] == 0:
            raise BaselineUnavailableError("candidate set is empty")
        object.__setattr__(self, "candidates", cands)
        object.__setattr__(self, "estimate", Location2D(*map(float, self.estimate)))

    @property
    def k(self) -> int:
        return self.candidates.shape[0]


def gp_tailored_radius(cands: CandidateSet, factor: float = DEFAULT_GP_FACTOR) -> float:
    if not factor > 0:
        raise ValueError(f"factor must be positive, got {factor!r}")
    c = cands.candidates
    ex, ey = cands.estimate
    return factor * float(np.max(np.hypot(c[:, 0] - ex, c[:, 1] - ey)))


def gp_tailored_radii(estimates, candidates, factor: float = DEFAULT_GP_FACTOR) -> np.ndarray:
    """Batch form: ``estimates`` (n, 2), ``candidates`` (n, k, 2).

    NaN candidate rows are treated as absent; a fix with no candidates at
    all raises :class:`BaselineUnavailableError`.
    """
    if not factor > 0:
        raise ValueError(f"factor must be positive, got {factor!r}")
    if candidates is None:
        raise BaselineUnavailableError("baseline unavailable: trace has no candidate columns")
    est = np.asarray(estimates, dtype=float)
    cands = np.asarray(candidates, dtype=float)
    if cands.ndim != 3 or cands.shape[1] == 0:
        raise BaselineUnavailableError("baseline unavailable: trace has no candidate columns")
    d = np.hypot(cands[..., 0] - est[:, None, 0], cands[..., 1] - est[:, None, 1])
    missing = np.all(np.isnan(d), axis=1)
    if np.any(missing):
        raise BaselineUnavailableError(
            f"baseline unavailable: fix {int(np.argmax(missing))} has no candidates"
        )
    return factor * np.nanmax(d, axis=1)
