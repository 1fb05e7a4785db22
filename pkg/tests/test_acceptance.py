"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line that the conftest hook prints in the
terminal summary, then asserts. Criteria are exercised end to end against
the public API and CLI.
"""

import random
import time

import numpy as np

from conftest import record_criterion

from magbot.cli import main
from magbot.core import Pose6D, TileGrid, default_geometry
from magbot.docking import (DockPhase, DockSequenceError, DockState,
                            DockTolerance, run_dropoff, run_pickup,
                            step_dropoff, step_pickup)
from magbot.estimation import (calibrate_gear_ratio, calibration_sweep,
                               fit_payload_model, leave_one_out_accuracy,
                               propagate_accuracy, synthetic_payload_datasets,
                               WRENCH_COMPONENTS)
from magbot.kinematics import (check_workspace, forward_kinematics,
                               inverse_kinematics, mover_distance,
                               reachable_z_interval, turns_for_gamma)
from magbot.simctrl import (GRAVITY, LoadCase, PID_PRESETS, PlantParams,
                            oscillation_metric, simulate_levitation,
                            static_wrenches)
from magbot.trajectory import (MotionLimits, Trajectory, TrajectorySample,
                               circle_sine, experiment_limits,
                               extending_helix, trapezoid_profile,
                               validate_trajectory)

GEOM = default_geometry()

# frozen reference: 50-digit evaluation of 2*(91 + sqrt(156^2 - 76.2^2))
D_AT_205 = 454.24665287198666


def test_criterion_1_distance_law_values():
    d280 = mover_distance(280.0, GEOM)
    d2848 = mover_distance(284.8, GEOM)
    d205 = mover_distance(205.0, GEOM)
    t0 = time.perf_counter()
    for _ in range(100):
        mover_distance(242.5, GEOM)
    per_call = (time.perf_counter() - t0) / 100.0
    passed = (abs(d280 - 258.8) < 1e-9 and abs(d2848 - 182.0) < 1e-9
              and abs(d205 - D_AT_205) < 1e-6 and per_call < 1e-3)
    record_criterion(1, "distance law reference values, runtime < 1 ms", passed)
    assert abs(d280 - 258.8) < 1e-9
    assert abs(d2848 - 182.0) < 1e-9
    assert abs(d205 - D_AT_205) < 1e-6
    assert per_call < 1e-3


def test_criterion_2_round_trip_accuracy_and_speed():
    rnd = random.Random(20240901)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(10_000):
        pose = Pose6D(rnd.uniform(250, 710), rnd.uniform(230, 490),
                      rnd.uniform(205.0, 280.0), rnd.uniform(-14, 14),
                      rnd.uniform(-14, 14), rnd.uniform(-360, 360))
        pair = inverse_kinematics(pose, GEOM)
        back = forward_kinematics(pair, GEOM,
                                  turns=turns_for_gamma(pair, pose.gamma))
        err = max(abs(a - b) for a, b in zip(pose.astuple(), back.astuple()))
        worst = max(worst, err)
    elapsed = time.perf_counter() - t0
    passed = worst < 1e-9 and elapsed < 1.0
    record_criterion(2, "IK/FK round trip < 1e-9 over 1e4 poses, < 1 s", passed)
    assert worst < 1e-9
    assert elapsed < 1.0


def test_criterion_3_workspace_reproduction():
    z_lo, z_hi = reachable_z_interval(GEOM)
    band_ok = abs(z_lo - 205.0) < 1e-9 and abs(z_hi - 280.0) < 1e-9

    grid = _anchored_grid(Pose6D(480, 360, 242.5))
    at_limit = check_workspace(Pose6D(480, 360, 242.5, alpha=14.0), grid=grid)
    over = check_workspace(Pose6D(480, 360, 242.5, alpha=14.01), grid=grid)
    beta_over = check_workspace(Pose6D(480, 360, 242.5, beta=14.01), grid=grid)
    tilt_ok = (at_limit.valid
               and any(v.axis == "alpha" for v in over.violations)
               and any(v.axis == "beta" for v in beta_over.violations))

    high = check_workspace(Pose6D(480, 360, 300.0))
    reach = [v for v in high.violations if v.axis == "z_reach"]
    ceiling_ok = bool(reach) and abs(reach[0].bound[1] - 284.8) < 1e-9
    ceiling_ok = ceiling_ok and abs(GEOM.max_height - 284.8) < 1e-9

    passed = band_ok and tilt_ok and ceiling_ok
    record_criterion(3, "workspace band [205,280], tilt gate at 14.00/14.01, "
                        "ceiling 284.8 reported", passed)
    assert band_ok
    assert tilt_ok
    assert ceiling_ok


def _anchored_grid(pose):
    pair = inverse_kinematics(pose, GEOM)
    return TileGrid(full_rotation_anchors=((pair.mover1.x, pair.mover1.y),
                                           (pair.mover2.x, pair.mover2.y)))


def test_criterion_4_calibration_monte_carlo():
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    hits = 0
    runs = 1000
    for _ in range(runs):
        fit = calibrate_gear_ratio(calibration_sweep(0.119, 0.2, rng))
        if abs(fit.slope - 0.119) <= 0.005:
            hits += 1
    elapsed = time.perf_counter() - t0
    rate = hits / runs
    passed = rate >= 0.95 and elapsed < 5.0
    record_criterion(4, f"calibration slope recovery {rate:.1%} (>=95%), "
                        f"{elapsed:.2f} s (< 5 s)", passed)
    assert rate >= 0.95
    assert elapsed < 5.0


def test_criterion_5_controller_ordering():
    load = LoadCase(payload_mass=1.0)
    plant = PlantParams()
    traces = {i: simulate_levitation(PID_PRESETS[i], plant, load, 4.0)
              for i in (0, 2)}
    p2p = {i: oscillation_metric(t, 1.0).peak_to_peak
           for i, t in traces.items()}
    head2 = traces[2].angle[:int(round(1.0 / traces[2].dt))]
    transient2 = float(head2.max() - head2.min())
    ratio_ok = p2p[0] >= 5.0 * p2p[2]
    settle_ok = p2p[2] < 0.10 * transient2
    passed = ratio_ok and settle_ok and not traces[0].diverged
    record_criterion(5, f"set0/set2 oscillation ratio {p2p[0] / p2p[2]:.0f}x "
                        f"(>=5x), set2 trailing {p2p[2] / transient2:.2e} of "
                        "transient (<10%)", passed)
    assert ratio_ok
    assert settle_ok


def test_criterion_6_statics():
    rng = np.random.default_rng(8)
    balance_ok = True
    for _ in range(100):
        load = LoadCase(magbot_mass=float(rng.uniform(0.2, 2.0)),
                        payload_mass=float(rng.uniform(0.0, 2.0)),
                        payload_x=float(rng.uniform(-110, 110)),
                        payload_y=float(rng.uniform(-110, 110)))
        z = float(rng.uniform(205.0, 280.0))
        w1, w2 = static_wrenches(Pose6D(480, 360, z), load, GEOM)
        total = GRAVITY * (load.magbot_mass + load.payload_mass)
        if abs((w1.fz + w2.fz) - total) > 1e-12 * max(total, 1.0):
            balance_ok = False

    load = LoadCase(payload_mass=0.5, payload_x=60.0)
    w1, w2 = static_wrenches(Pose6D(480, 360, 205.0), load, GEOM)
    # closed-form beam split at the analysis height
    expected = 0.5 * GRAVITY * (2.0 * 60.0 / mover_distance(205.0, GEOM))
    delta_ok = (abs((w2.fz - w1.fz) - expected) < 1e-12
                and abs((w2.fz - w1.fz) - 1.296) < 1e-3)
    passed = balance_ok and delta_ok
    record_criterion(6, "force balance 1e-12 over 100 loads, offset split "
                        "1.296 N +/- 1e-3", passed)
    assert balance_ok
    assert delta_ok


def test_criterion_7_pca_payload_pattern():
    t0 = time.perf_counter()
    datasets = synthetic_payload_datasets()
    model, centroids = fit_payload_model(datasets)
    pts = list(centroids.values())
    spacing = min(float(np.linalg.norm(np.subtract(a, b)))
                  for i, a in enumerate(pts) for b in pts[i + 1:])
    distinct_ok = spacing > 1e-6
    top2 = {WRENCH_COMPONENTS[i]
            for i in np.argsort(model.loadings_importance)[::-1][:2]}
    importance_ok = top2 == {"fz", "fx"}
    rng = np.random.default_rng(9)
    noisy = synthetic_payload_datasets(samples_per_cell=20,
                                       noise_sigma=0.05 * spacing, rng=rng)
    accuracy = leave_one_out_accuracy(noisy)
    elapsed = time.perf_counter() - t0
    passed = (distinct_ok and importance_ok and accuracy == 1.0
              and elapsed < 2.0)
    record_criterion(7, f"9 distinct cells, top importance {sorted(top2)}, "
                        f"LOO {accuracy:.0%} at 5% noise, {elapsed:.2f} s",
                     passed)
    assert distinct_ok
    assert importance_ok
    assert accuracy == 1.0
    assert elapsed < 2.0


def test_criterion_8_accuracy_ordering():
    # Equal mover noise on every mover axis, as stated. Under the
    # platform-per-mover coupling (|g| < 1, fixed by the calibration sweep
    # and by the anchor-gated tilt experiments), mover yaw noise enters the
    # platform tilt attenuated by g while the platform yaw error is
    # sqrt(2) * sigma / d with d <= 454 mm, so the stated ordering would
    # require d > 676 mm, beyond the mechanism's reach. The criterion is
    # asserted as written; see the propagation tests for the verified
    # analytic error model.
    mae = propagate_accuracy(Pose6D(480, 360, 205.0), (0.05, 0.05), 10_000,
                             GEOM, np.random.default_rng(10))
    gamma_below_alpha = mae[5] < mae[3]
    gamma_below_beta = mae[5] < mae[4]
    passed = gamma_below_alpha and gamma_below_beta
    record_criterion(8, f"gamma MAE {mae[5]:.4g} below alpha {mae[3]:.4g} "
                        f"and beta {mae[4]:.4g} (unattainable under the "
                        "attenuating coupling; see notes)", passed)
    assert gamma_below_alpha
    assert gamma_below_beta


def test_criterion_9_trajectory_limits():
    limits = experiment_limits()
    center = Pose6D(480, 360, 242.5)
    helix = extending_helix(center, 40.0, 25.0, 220.0, 265.0, 3, limits)
    circle = circle_sine(center, 100.0, 20.0, 1, limits)
    helix_ok = validate_trajectory(helix, limits).valid
    circle_ok = validate_trajectory(circle, limits).valid

    p0, p1 = Pose6D(480, 360, 242.5), Pose6D(580, 360, 242.5)
    bad = Trajectory(1e-3, (
        TrajectorySample(0.0, p0, inverse_kinematics(p0, GEOM)),
        TrajectorySample(1e-3, p1, inverse_kinematics(p1, GEOM))))
    flagged = not validate_trajectory(bad, limits).valid

    t200 = trapezoid_profile(200.0, MotionLimits(v_max=500, a_max=10000)).duration
    t20 = trapezoid_profile(20.0, MotionLimits(v_max=500, a_max=10000)).duration
    trapezoid_ok = abs(t200 - 0.45) < 1e-9 and abs(t20 - 0.0894) < 1e-4

    passed = helix_ok and circle_ok and flagged and trapezoid_ok
    record_criterion(9, "helix/circle validate clean, violator flagged, "
                        "trapezoid 0.45 s and 0.0894 s", passed)
    assert helix_ok
    assert circle_ok
    assert flagged
    assert trapezoid_ok


def test_criterion_10_docking():
    successes = 0
    for _ in range(10):
        state, _ = run_pickup()
        state, _ = run_dropoff(state)
        if state.phase is DockPhase.FREE and not state.carried:
            successes += 1
    clean_ok = successes == 10

    tol = DockTolerance()
    state = DockState(DockPhase.APPROACH)
    state, event = step_pickup(state, (1.2, 0.0), tol)
    retry_ok = (state.phase is DockPhase.APPROACH
                and event.diagnostic is not None and not state.carried)

    rnd = random.Random(101)
    state = DockState()
    safety_ok = True
    for _ in range(100_000):
        err = (rnd.uniform(0.0, 1.2), rnd.uniform(0.0, 1.2))
        try:
            if rnd.random() < 0.5:
                state, _ = step_pickup(state, err, tol)
            else:
                state, _ = step_dropoff(state, err, tol)
        except DockSequenceError:
            pass
        if state.carried != state.pin_engaged:
            safety_ok = False
            break
        if state.carried and state.phase not in (
                DockPhase.LOCKED, DockPhase.AT_STATION, DockPhase.INSERTING):
            safety_ok = False
            break

    passed = clean_ok and retry_ok and safety_ok
    record_criterion(10, f"{successes}/10 docking cycles, retry diagnostics, "
                         "safety invariant over 1e5 fuzzed steps", passed)
    assert clean_ok
    assert retry_ok
    assert safety_ok


def test_criterion_11_throughput(capsys):
    rc = main(["demo"])
    out = capsys.readouterr().out
    cycle_line = [l for l in out.splitlines() if "cycle_time" in l][0]
    thr_line = [l for l in out.splitlines() if "throughput" in l][0]
    passed = (rc == 0 and "4.298" in cycle_line and "13.96" in thr_line)
    record_criterion(11, "demo cycle 4.298 s reported as 13.96 products/min",
                     passed)
    assert rc == 0
    assert "4.298" in cycle_line
    assert "13.96" in thr_line
