"""Synthetic BLE testbed: floorplan, log-distance channel, grid localizer.

The localizer is a nearest-fingerprint search over a model-predicted RSS
map sampled on the floorplan grid. It reports the top-k grid points so the
grid-candidate baseline has something to work with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baselines import CandidateSet
from .core import Location2D

TX_POWER = -59.0
PATH_LOSS_EXP = 2.5
NOISE_SD = 4.0
MIN_DISTANCE = 0.1
DEFAULT_K = 4

__all__ = [
    "TX_POWER",
    "PATH_LOSS_EXP",
    "NOISE_SD",
    "DEFAULT_K",
    "Channel",
    "Floorplan",
    "RssSample",
    "Trace",
    "default_floorplan",
    "path_loss_rss",
    "rss_sample",
    "grid_localize",
    "synth_error_trace",
    "simulate_session",
    "random_test_points",
    "waypoint_trajectory",
]


@dataclass(frozen=True)
class Channel:
    tx_power: float = TX_POWER
    path_loss_exp: float = PATH_LOSS_EXP
    noise_sd: float = NOISE_SD

    def __post_init__(self):
        if not self.path_loss_exp > 0:
            raise ValueError("path-loss exponent must be positive")
        if not self.noise_sd >= 0:
            raise ValueError("noise_sd must be >= 0")


@dataclass(frozen=True, eq=False)
class Floorplan:
    width: float
    height: float
    beacons: np.ndarray
    grid_spacing: float = 1.0

    def __post_init__(self):
        b = np.asarray(self.beacons, dtype=float).reshape(-1, 2)
        if not (self.width > 0 and self.height > 0 and self.grid_spacing > 0):
            raise ValueError("floorplan dimensions and grid spacing must be positive")
        if not self.contains(b).all():
            raise ValueError("all beacons must lie inside the floorplan")
        object.__setattr__(self, "beacons", b)

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        return (p[:, 0] >= 0) & (p[:, 0] <= self.width) & (p[:, 1] >= 0) & (p[:, 1] <= self.height)

    @property
    def grid_points(self) -> np.ndarray:
        """Inclusive lattice in row-major order (y outer, x inner)."""
        xs = np.arange(0.0, self.width + 1e-9, self.grid_spacing)
        ys = np.arange(0.0, self.height + 1e-9, self.grid_spacing)
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])


def default_floorplan() -> Floorplan:
    """26 m x 17 m floor with 10 beacons in a 2 x 5 layout, 1 m grid."""
    width, height = 26.0, 17.0
    xs = width * (np.arange(5) + 0.5) / 5
    ys = height * (np.arange(2) + 0.5) / 2
    beacons = np.array([(x, y) for y in ys for x in xs])
    return Floorplan(width, height, beacons, 1.0)


def path_loss_rss(beacons, at, tx_power: float = TX_POWER, path_loss_exp: float = PATH_LOSS_EXP):
    """Noise-free RSS (dBm); broadcasts ``at`` (..., 2) against ``beacons`` (m, 2)."""
    b = np.asarray(beacons, dtype=float)
    p = np.asarray(at, dtype=float)
    d = np.hypot(p[..., None, 0] - b[:, 0], p[..., None, 1] - b[:, 1])
    d = np.maximum(d, MIN_DISTANCE)
    return tx_power - 10.0 * path_loss_exp * np.log10(d)


def rss_sample(beacon, at, tx_power: float = TX_POWER, path_loss_exp: float = PATH_LOSS_EXP,
               noise_sd: float = NOISE_SD, rng: np.random.Generator | None = None) -> float:
    if not path_loss_exp > 0:
        raise ValueError("path-loss exponent must be positive")
    clean = float(path_loss_rss(np.reshape(beacon, (1, 2)), at, tx_power, path_loss_exp)[0])
    if noise_sd == 0:
        return clean
    if rng is None:
        raise ValueError("a seeded Generator is required when noise_sd > 0")
    return clean + float(rng.normal(0.0, noise_sd))


@dataclass
class RssSample:
    """One scan: an RSS per beacon (NaN for a missed beacon)."""

    rss: np.ndarray
    truth: Location2D
    timestamp: float = 0.0

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(np.asarray(self.rss, dtype=float))


@dataclass
class Trace:
    """Ground truth paired with localizer output, one row per fix.

    ``candidates`` is ``(n, k, 2)`` or ``None`` when the source had none.
    """

    t: np.ndarray
    truth: np.ndarray
    estimate: np.ndarray
    candidates: np.ndarray | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float).reshape(-1)
        self.truth = np.asarray(self.truth, dtype=float).reshape(-1, 2)
        self.estimate = np.asarray(self.estimate, dtype=float).reshape(-1, 2)
        n = self.t.size
        if self.truth.shape[0] != n or self.estimate.shape[0] != n:
            raise ValueError("trace columns have mismatched lengths")
        if self.candidates is not None:
            c = np.asarray(self.candidates, dtype=float)
            self.candidates = c.reshape(n, -1, 2) if c.size or n == 0 else None
            if self.candidates is not None and self.candidates.shape[1] == 0:
                self.candidates = None

    def __len__(self) -> int:
        return self.t.size

    @property
    def actual_errors(self) -> np.ndarray:
        d = self.estimate - self.truth
        return np.hypot(d[:, 0], d[:, 1])

    def candidate_set(self, i: int) -> CandidateSet:
        if self.candidates is None:
            raise ValueError("trace has no candidates")
        c = self.candidates[i]
        return CandidateSet(Location2D(*self.estimate[i]), c[~np.isnan(c).any(axis=1)])

    @classmethod
    def empty(cls) -> "Trace":
        return cls(np.empty(0), np.empty((0, 2)), np.empty((0, 2)))


def _rank(obs: np.ndarray, fingerprints: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k best grid points for each row of ``obs``, best first.

    Missed beacons (NaN) are left out of the sum. The stable sort keeps
    row-major order among equal scores.
    """
    valid = ~np.isnan(obs)
    diff = np.where(valid[:, None, :], obs[:, None, :] - fingerprints[None], 0.0)
    sq = np.sum(diff * diff, axis=2)
    return np.argsort(sq, axis=1, kind="stable")[:, :k]


def grid_localize(sample: RssSample, plan: Floorplan, k: int = DEFAULT_K,
                  tx_power: float = TX_POWER, path_loss_exp: float = PATH_LOSS_EXP):
    """Top-k grid points by RSS fit and their centroid.

    Scores each grid point by the negative sum of squared differences
    between the observed and noise-free predicted RSS; ties keep row-major
    order.
    """
    grid = plan.grid_points
    if not 1 <= k <= grid.shape[0]:
        raise ValueError(f"k must lie in [1, {grid.shape[0]}], got {k}")
    fp = path_loss_rss(plan.beacons, grid, tx_power, path_loss_exp)
    obs = np.asarray(sample.rss, dtype=float)
    top = grid[_rank(obs[None, :], fp, k)[0]]
    est = Location2D(*map(float, top.mean(axis=0)))
    return est, CandidateSet(est, top)


def synth_error_trace(truth, mu: float, sigma: float, n: int,
                      rng: np.random.Generator) -> Trace:
    """Fixes scattered around a fixed ``truth`` with normal distance errors.

    Each fix sits at distance ``max(0, N(mu, sigma))`` in a uniform random
    direction.
    """
    if n < 1 or sigma < 0:
        raise ValueError("need n >= 1 and sigma >= 0")
    dist = np.maximum(0.0, rng.normal(mu, sigma, n)) if sigma > 0 else np.full(n, max(0.0, mu))
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    tx, ty = float(truth[0]), float(truth[1])
    est = np.column_stack([tx + dist * np.cos(theta), ty + dist * np.sin(theta)])
    truths = np.tile([tx, ty], (n, 1))
    return Trace(np.arange(n, dtype=float), truths, est)


_CHUNK = 256


def simulate_session(plan: Floorplan, trajectory, channel: Channel = Channel(), k: int = DEFAULT_K,
                     rng: np.random.Generator | None = None, samples_per_point: int = 1,
                     dt: float = 1.0) -> Trace:
    """Scan and localize at every trajectory point, ``samples_per_point`` times."""
    traj = np.asarray(trajectory, dtype=float).reshape(-1, 2)
    if traj.shape[0] == 0:
        return Trace.empty()
    if not plan.contains(traj).all():
        bad = int(np.argmin(plan.contains(traj)))
        raise ValueError(f"trajectory point {bad} {tuple(traj[bad])} lies outside the floorplan")
    grid = plan.grid_points
    if not 1 <= k <= grid.shape[0]:
        raise ValueError(f"k must lie in [1, {grid.shape[0]}], got {k}")
    if rng is None:
        if channel.noise_sd > 0:
            raise ValueError("a seeded Generator is required when noise_sd > 0")
        rng = np.random.default_rng(0)

    truths = np.repeat(traj, samples_per_point, axis=0)
    n = truths.shape[0]
    clean = path_loss_rss(plan.beacons, truths, channel.tx_power, channel.path_loss_exp)
    noise = rng.normal(0.0, channel.noise_sd, clean.shape) if channel.noise_sd > 0 else 0.0
    obs = clean + noise
    fp = path_loss_rss(plan.beacons, grid, channel.tx_power, channel.path_loss_exp)

    cands = np.empty((n, k, 2))
    for start in range(0, n, _CHUNK):
        sl = slice(start, start + _CHUNK)
        cands[sl] = grid[_rank(obs[sl], fp, k)]
    est = cands.mean(axis=1)
    return Trace(np.arange(n) * dt, truths, est, cands)


def random_test_points(plan: Floorplan, count: int, rng: np.random.Generator) -> np.ndarray:
    grid = plan.grid_points
    return grid[rng.integers(0, grid.shape[0], size=count)]


def waypoint_trajectory(waypoints, speed: float, dt: float = 1.0) -> np.ndarray:
    """Constant-speed walk along straight segments, sampled every ``dt``."""
    wp = np.asarray(waypoints, dtype=float).reshape(-1, 2)
    if wp.shape[0] == 0:
        return np.empty((0, 2))
    if not speed > 0:
        raise ValueError("speed must be positive")
    seg = np.diff(wp, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.r_[0.0, np.cumsum(seg_len)]
    s = np.arange(0.0, cum[-1] + 1e-12, speed * dt)
    x = np.interp(s, cum, wp[:, 0])
    y = np.interp(s, cum, wp[:, 1])
    return np.column_stack([x, y])
