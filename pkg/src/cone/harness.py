"""Experiment harness: traces in, metric tables and CDF files out."""

from __future__ import annotations

import csv
import logging
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .baselines import DEFAULT_GP_FACTOR, BaselineUnavailableError, gp_tailored_radii
from .core import DEFAULT_WINDOW, estimate, rolling_error_models
from .metrics import SummaryRow, empirical_cdf, summarize_sed
from .special import std_normal_quantile
from .testbed import (
    DEFAULT_K,
    NOISE_SD,
    PATH_LOSS_EXP,
    TX_POWER,
    Channel,
    Trace,
    default_floorplan,
    random_test_points,
    simulate_session,
    waypoint_trajectory,
)

log = logging.getLogger(__name__)

DEFAULT_ALPHAS = (0.68, 0.8413, 0.95, 0.9772)
METHODS = ("cone", "gp")
TRACE_HEADER = ["t", "true_x", "true_y", "est_x", "est_y"]
SUMMARY_HEADER = [
    "method", "alpha", "w", "count", "median_aed", "inside_fraction",
    "median_positive_sed", "median_negative_sed",
]

__all__ = [
    "DEFAULT_ALPHAS",
    "ExperimentConfig",
    "TraceFormatError",
    "EvalResult",
    "read_config_file",
    "ingest_trace",
    "write_trace",
    "build_trace",
    "evaluate_trace",
    "run_eval",
    "sweep_w",
]


class TraceFormatError(ValueError):
    """A trace file row does not match the expected schema."""


@dataclass(frozen=True)
class ExperimentConfig:
    w: int = DEFAULT_WINDOW
    alpha_list: tuple[float, ...] = DEFAULT_ALPHAS
    gp_factor: float = DEFAULT_GP_FACTOR
    k: int = DEFAULT_K
    seed: int = 0
    trace: str | None = None  # None -> simulate
    methods: tuple[str, ...] = METHODS
    include_priming: bool = False
    # simulation only
    n_fixes: int = 20_000
    # 4 headings x 60 s at one scan per second
    samples_per_point: int = 240
    trajectory: str = "grid"
    walk_speed: float = 1.0
    tx_power: float = TX_POWER
    path_loss_exp: float = PATH_LOSS_EXP
    noise_sd: float = NOISE_SD

    def __post_init__(self):
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        self.validate()

    def validate(self) -> None:
        if int(self.w) != self.w or self.w < 2:
            raise ValueError(f"w must be an integer >= 2, got {self.w!r}")
        if not self.alpha_list:
            raise ValueError("alpha_list is empty")
        for a in self.alpha_list:
            std_normal_quantile(a)
        if not self.gp_factor > 0:
            raise ValueError("gp_factor must be positive")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown or not self.methods:
            raise ValueError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")
        if self.trajectory not in ("grid", "walk"):
            raise ValueError(f"trajectory must be 'grid' or 'walk', got {self.trajectory!r}")
        if self.n_fixes < 0 or self.samples_per_point < 1:
            raise ValueError("n_fixes must be >= 0 and samples_per_point >= 1")

    @property
    def channel(self) -> Channel:
        return Channel(self.tx_power, self.path_loss_exp, self.noise_sd)


def _parse_value(name: str, raw: str, current):
    raw = raw.strip()
    if name in ("alpha_list", "methods"):
        parts = [p.strip() for p in raw.split(",") if p.strip()]
        return tuple(float(p) for p in parts) if name == "alpha_list" else tuple(parts)
    if name == "trace":
        return raw or None
    if isinstance(current, bool):
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"{name}: expected a boolean, got {raw!r}")
    if isinstance(current, int):
        return int(raw)
    if isinstance(current, float):
        return float(raw)
    return raw


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    defaults = ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "alpha":
                key = "alpha_list"
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _parse_value(key, raw, getattr(defaults, key))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return out


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_trace(trace: Trace, path) -> None:
    header = list(TRACE_HEADER)
    k = 0 if trace.candidates is None else trace.candidates.shape[1]
    for j in range(1, k + 1):
        header += [f"cand{j}_x", f"cand{j}_y"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for i in range(len(trace)):
            row = [trace.t[i], *trace.truth[i], *trace.estimate[i]]
            if k:
                row += ["" if math.isnan(v) else v for v in trace.candidates[i].ravel()]
            wr.writerow([_fmt(v) for v in row])


def ingest_trace(path) -> Trace:
    """Read a trace CSV; candidate columns are optional and may be ragged."""
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace file {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise TraceFormatError(f"{path}:1: missing header")
        header = [h.strip() for h in header]
        if header[:5] != TRACE_HEADER:
            raise TraceFormatError(f"{path}:1: header must start with {','.join(TRACE_HEADER)}")
        extra = header[5:]
        if len(extra) % 2:
            raise TraceFormatError(f"{path}:1: candidate columns must come in x,y pairs")
        for j in range(len(extra) // 2):
            if extra[2 * j : 2 * j + 2] != [f"cand{j + 1}_x", f"cand{j + 1}_y"]:
                raise TraceFormatError(f"{path}:1: unexpected candidate column names {extra[2*j:2*j+2]}")
        ncols = len(header)
        k = len(extra) // 2
        rows, cands = [], []
        for lineno, row in enumerate(reader, 2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != ncols:
                raise TraceFormatError(f"{path}:{lineno}: expected {ncols} fields, got {len(row)}")
            try:
                base = [float(c) for c in row[:5]]
            except ValueError:
                raise TraceFormatError(f"{path}:{lineno}: non-numeric value in {row[:5]}") from None
            if not all(math.isfinite(v) for v in base):
                raise TraceFormatError(f"{path}:{lineno}: non-finite value in {row[:5]}")
            rows.append(base)
            if k:
                try:
                    c = [float(v) if v.strip() else math.nan for v in row[5:]]
                except ValueError:
                    raise TraceFormatError(f"{path}:{lineno}: non-numeric candidate value") from None
                for j in range(k):
                    if math.isnan(c[2 * j]) != math.isnan(c[2 * j + 1]):
                        raise TraceFormatError(f"{path}:{lineno}: candidate {j + 1} is half empty")
                cands.append(c)
    if not rows:
        return Trace.empty() if not k else Trace(np.empty(0), np.empty((0, 2)), np.empty((0, 2)),
                                                 np.empty((0, k, 2)))
    arr = np.array(rows)
    c = np.array(cands).reshape(len(rows), k, 2) if k else None
    return Trace(arr[:, 0], arr[:, 1:3], arr[:, 3:5], c)


def build_trace(config: ExperimentConfig) -> Trace:
    if config.trace is not None:
        return ingest_trace(config.trace)
    rng = np.random.default_rng(config.seed)
    plan = default_floorplan()
    if config.trajectory == "walk":
        # exploratory mobile run: random waypoints, one scan per step
        wp = rng.uniform([0, 0], [plan.width, plan.height], size=(2, 2))
        traj = waypoint_trajectory(wp, config.walk_speed)
        while len(traj) < config.n_fixes:
            wp = np.vstack([wp, rng.uniform([0, 0], [plan.width, plan.height], size=(8, 2))])
            traj = waypoint_trajectory(wp, config.walk_speed)
        traj = traj[: config.n_fixes]
        spp = 1
    else:
        spp = config.samples_per_point
        traj = random_test_points(plan, -(-config.n_fixes // spp), rng)
    trace = simulate_session(plan, traj, config.channel, config.k, rng, spp)
    n = min(len(trace), config.n_fixes)
    cands = None if trace.candidates is None else trace.candidates[:n]
    return Trace(trace.t[:n], trace.truth[:n], trace.estimate[:n], cands)


@dataclass
class EvalResult:
    """Per-(method, alpha) SED samples; GP rows use ``alpha=None``."""

    w: int
    indices: np.ndarray
    seds: dict = field(default_factory=dict)

    def summaries(self) -> dict:
        return {key: summarize_sed(s) for key, s in self.seds.items() if len(s)}


def cone_radii(estimates, w: int, alpha: float, include_priming: bool = False):
    """Radius for every fix that has enough history, plus the fix indices."""
    est = np.asarray(estimates, dtype=float)
    z = std_normal_quantile(alpha)
    _, mu, sigma = rolling_error_models(est, w)
    radii = np.maximum(0.0, mu + sigma * z)
    idx = np.arange(w - 1, w - 1 + radii.size)
    if include_priming:
        first = min(w - 1, est.shape[0])
        early = [estimate(est[: i + 1], alpha).radius for i in range(1, first)]
        radii = np.r_[early, radii]
        idx = np.r_[np.arange(1, first), idx]
    return radii, idx.astype(int)


def evaluate_trace(trace: Trace, w: int, alphas, methods=METHODS, gp_factor: float = DEFAULT_GP_FACTOR,
                   include_priming: bool = False) -> EvalResult:
    actual = trace.actual_errors
    idx = None
    result = EvalResult(w, np.empty(0, dtype=int))
    for a in alphas:
        radii, idx = cone_radii(trace.estimate, w, a, include_priming)
        if "cone" in methods:
            result.seds[("cone", a)] = actual[idx] - radii
    result.indices = idx
    if "gp" in methods:
        if trace.candidates is None:
            raise BaselineUnavailableError("baseline unavailable: trace has no candidate columns")
        gp = gp_tailored_radii(trace.estimate[idx], trace.candidates[idx], gp_factor)
        result.seds[("gp", None)] = actual[idx] - gp
    return result


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            wr.writerow([_fmt(v) for v in row])


def _alpha_tag(alpha) -> str:
    return "" if alpha is None else f"_a{alpha!r}"


def _summary_row(method, alpha, w, s: SummaryRow):
    return [method, "" if alpha is None else alpha, w, s.count, s.median_aed, s.inside_fraction,
            s.median_positive_sed, s.median_negative_sed]


def run_eval(config: ExperimentConfig, out_dir=None, trace: Trace | None = None) -> dict:
    """Evaluate every method and alpha; optionally write summary and CDF files.

    Returns ``{(method, alpha): SummaryRow}``.
    """
    if trace is None:
        trace = build_trace(config)
    result = evaluate_trace(trace, config.w, config.alpha_list, config.methods,
                            config.gp_factor, config.include_priming)
    summaries = result.summaries()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows = [_summary_row(m, a, config.w, s) for (m, a), s in summaries.items()]
        _write_rows(out / "summary.csv", SUMMARY_HEADER, rows)
        for (method, alpha), s in result.seds.items():
            if not len(s):
                continue
            tag = _alpha_tag(alpha)
            _write_rows(out / f"cdf_{method}_sed{tag}.csv", ["value", "fraction"], empirical_cdf(s))
            _write_rows(out / f"cdf_{method}_aed{tag}.csv", ["value", "fraction"],
                        empirical_cdf(np.abs(s)))
        log.info("wrote %d summaries to %s", len(rows), out)
    return summaries


def sweep_w(config: ExperimentConfig, w_values, out_path=None, trace: Trace | None = None) -> list:
    """CONE metrics per (w, alpha) on one shared trace.

    Rows are ``(w, alpha, median_aed, inside_fraction)``.
    """
    w_values = list(w_values)
    for w in w_values:
        if int(w) != w or w < 2:
            raise ValueError(f"window sizes must be integers >= 2, got {w!r}")
    if trace is None and w_values:
        trace = build_trace(config)
    rows = []
    for w in w_values:
        cfg = replace(config, w=int(w), methods=("cone",))
        for (method, alpha), s in run_eval(cfg, trace=trace).items():
            rows.append((int(w), alpha, s.median_aed, s.inside_fraction))
    if out_path is not None:
        os.makedirs(Path(out_path).parent, exist_ok=True)
        _write_rows(Path(out_path), ["w", "alpha", "median_aed", "inside_fraction"], rows)
    return rows
