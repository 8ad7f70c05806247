import numpy as np
import pytest

from cone.metrics import normality_diagnostic
from cone.testbed import (
    Channel,
    Floorplan,
    RssSample,
    default_floorplan,
    grid_localize,
    path_loss_rss,
    random_test_points,
    rss_sample,
    simulate_session,
    synth_error_trace,
    waypoint_trajectory,
)

PLAN = default_floorplan()


def test_default_floorplan():
    assert (PLAN.width, PLAN.height, PLAN.grid_spacing) == (26, 17, 1)
    assert len(PLAN.beacons) == 10
    assert PLAN.width * PLAN.height / len(PLAN.beacons) == pytest.approx(44, abs=0.5)
    assert PLAN.grid_points.shape == (27 * 18, 2)
    assert PLAN.contains(PLAN.beacons).all()


def test_grid_is_row_major():
    g = PLAN.grid_points
    assert tuple(g[0]) == (0, 0) and tuple(g[1]) == (1, 0) and tuple(g[27]) == (0, 1)


def test_floorplan_validation():
    with pytest.raises(ValueError):
        Floorplan(10, 10, [(11, 1)])
    with pytest.raises(ValueError):
        Floorplan(0, 10, [])


def test_rss_sample_examples():
    assert rss_sample((0, 0), (1, 0), -59, 2.5, 0.0) == -59
    assert rss_sample((0, 0), (10, 0), -59, 2.0, 0.0) == pytest.approx(-79, abs=1e-12)
    a = rss_sample((0, 0), (3, 4), noise_sd=4, rng=np.random.default_rng(5))
    b = rss_sample((0, 0), (3, 4), noise_sd=4, rng=np.random.default_rng(5))
    assert a == b
    # floor at 0.1 m
    assert rss_sample((0, 0), (0, 0), -59, 2.0, 0.0) == pytest.approx(-39)
    with pytest.raises(ValueError):
        rss_sample((0, 0), (1, 1), path_loss_exp=0)


def _noise_free_sample(at):
    return RssSample(path_loss_rss(PLAN.beacons, at), at)


def test_localize_exact_on_grid():
    for at in [(0, 0), (13, 8), (25, 16), (7, 3)]:
        est, cands = grid_localize(_noise_free_sample(at), PLAN, k=1)
        assert est == at and cands.k == 1


def test_localize_brute_force_ranking(rng):
    at = (9.4, 5.2)
    sample = RssSample(path_loss_rss(PLAN.beacons, at) + rng.normal(0, 4, 10), at)
    _, cands = grid_localize(sample, PLAN, k=6)
    grid = PLAN.grid_points
    scores = [-np.sum((sample.rss - path_loss_rss(PLAN.beacons, g)) ** 2) for g in grid]
    order = sorted(range(len(grid)), key=lambda i: (-scores[i], i))
    np.testing.assert_array_equal(cands.candidates, grid[order[:6]])


def test_localize_full_grid_centroid():
    est, _ = grid_localize(_noise_free_sample((3, 3)), PLAN, k=486)
    assert est == pytest.approx((13.0, 8.5))


def test_localize_tie_break_row_major():
    # two beacons mirrored about x = 5: (4, y) and (6, y) score identically
    plan = Floorplan(10, 2, [(5, 0), (5, 2)], 1.0)
    sample = RssSample(path_loss_rss(plan.beacons, (5, 1)), (5, 1))
    _, cands = grid_localize(sample, plan, k=3)
    assert tuple(cands.candidates[0]) == (5, 1)
    assert tuple(cands.candidates[1]) == (4, 1) and tuple(cands.candidates[2]) == (6, 1)


def test_localize_ignores_missing_beacons():
    rss = path_loss_rss(PLAN.beacons, (20, 4))
    rss[[0, 3, 7]] = np.nan
    sample = RssSample(rss, (20, 4))
    assert sample.missing.sum() == 3
    est, _ = grid_localize(sample, PLAN, k=1)
    assert est == (20, 4)


def test_localize_bad_k():
    with pytest.raises(ValueError):
        grid_localize(_noise_free_sample((1, 1)), PLAN, k=0)


def test_synth_trace_examples(rng):
    tr = synth_error_trace((3, 4), 0, 0, 20, rng)
    np.testing.assert_array_equal(tr.estimate, tr.truth)
    tr = synth_error_trace((3, 4), 3, 0, 50, rng)
    np.testing.assert_allclose(tr.actual_errors, 3, rtol=1e-12)
    tr = synth_error_trace((0, 0), 2, 0.5, 10_000, rng)
    assert abs(tr.actual_errors.mean() - 2) < 0.05
    assert tr.candidates is None


def test_synth_distances_look_normal():
    # Lilliefors 5 % critical value ~ 0.886 / sqrt(n)
    n = 2000
    passed = sum(
        normality_diagnostic(synth_error_trace((0, 0), 4, 1, n, np.random.default_rng(s)).actual_errors)
        < 0.886 / np.sqrt(n)
        for s in range(20)
    )
    assert passed >= 17


def test_simulate_session_basics():
    assert len(simulate_session(PLAN, [], rng=np.random.default_rng(0))) == 0
    tr = simulate_session(PLAN, [(4.3, 7.7)], Channel(noise_sd=0), samples_per_point=5)
    assert len(tr) == 5
    assert np.all(tr.estimate == tr.estimate[0])
    with pytest.raises(ValueError, match="outside"):
        simulate_session(PLAN, [(30, 3)], rng=np.random.default_rng(0))


def test_simulate_session_deterministic():
    pts = random_test_points(PLAN, 30, np.random.default_rng(1))
    a = simulate_session(PLAN, pts, rng=np.random.default_rng(9), samples_per_point=3)
    b = simulate_session(PLAN, pts, rng=np.random.default_rng(9), samples_per_point=3)
    for f in ("t", "truth", "estimate", "candidates"):
        assert np.array_equal(getattr(a, f), getattr(b, f))


def test_simulate_agrees_with_grid_localize():
    rng = np.random.default_rng(2)
    pts = random_test_points(PLAN, 5, rng)
    tr = simulate_session(PLAN, pts, rng=np.random.default_rng(3), samples_per_point=4)
    # replay the same noise through the single-sample path
    noise = np.random.default_rng(3).normal(0, 4, (20, 10))
    truths = np.repeat(pts, 4, axis=0)
    for i in range(20):
        rss = path_loss_rss(PLAN.beacons, truths[i]) + noise[i]
        est, cands = grid_localize(RssSample(rss, truths[i]), PLAN, k=4)
        np.testing.assert_array_equal(cands.candidates, tr.candidates[i])
        assert est == tuple(tr.estimate[i])


def test_estimates_inside_floorplan():
    pts = random_test_points(PLAN, 100, np.random.default_rng(4))
    tr = simulate_session(PLAN, pts, Channel(noise_sd=10), rng=np.random.default_rng(4))
    assert PLAN.contains(tr.estimate).all()


def test_zero_noise_zero_error_on_grid():
    pts = PLAN.grid_points[::7]
    tr = simulate_session(PLAN, pts, Channel(noise_sd=0), k=1)
    assert np.all(tr.actual_errors == 0)


def test_more_noise_more_error():
    wins = 0
    for s in range(100):
        pts = random_test_points(PLAN, 40, np.random.default_rng(1000 + s))
        quiet = simulate_session(PLAN, pts, Channel(noise_sd=0), rng=np.random.default_rng(s))
        loud = simulate_session(PLAN, pts, Channel(noise_sd=6), rng=np.random.default_rng(s))
        wins += np.median(loud.actual_errors) >= np.median(quiet.actual_errors)
    assert wins >= 90


def test_waypoint_trajectory():
    traj = waypoint_trajectory([(0, 0), (4, 0), (4, 3)], speed=1.0)
    assert len(traj) == 8
    steps = np.hypot(*np.diff(traj, axis=0).T)
    assert np.all(steps <= 1.0 + 1e-12)
    assert tuple(traj[-1]) == (4, 3)
    assert len(waypoint_trajectory([], 1.0)) == 0
