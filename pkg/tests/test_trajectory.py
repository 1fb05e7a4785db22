import math

import pytest

from magbot.core import Pose6D, TileGrid, default_geometry
from magbot.kinematics import forward_kinematics, inverse_kinematics, turns_for_gamma
from magbot.trajectory import (InfeasibleMotionError, MotionLimits, Trajectory,
                               TrajectorySample, circle_sine,
                               cos_alpha_sin_beta, experiment_limits,
                               extending_helix, sweep_axis, trapezoid_profile,
                               validate_trajectory)

GEOM = default_geometry()
LIMITS = experiment_limits()
CENTER = Pose6D(480.0, 360.0, 242.5)


def anchored_grid(pose=CENTER):
    pair = inverse_kinematics(pose, GEOM)
    return TileGrid(full_rotation_anchors=((pair.mover1.x, pair.mover1.y),
                                           (pair.mover2.x, pair.mover2.y)))


def test_trapezoid_null_move():
    p = trapezoid_profile(0.0, LIMITS)
    assert p.duration == 0.0
    assert p.position(0.0) == 0.0


def test_trapezoid_cruise_case():
    p = trapezoid_profile(200.0, MotionLimits(v_max=500.0, a_max=10000.0))
    assert p.duration == pytest.approx(0.45, abs=1e-12)
    assert p.t_acc == pytest.approx(0.05, abs=1e-12)
    assert p.t_cruise == pytest.approx(0.35, abs=1e-12)
    assert p.position(p.duration) == pytest.approx(200.0, abs=1e-12)
    assert p.position(0.0) == 0.0


def test_trapezoid_triangular_case():
    p = trapezoid_profile(20.0, MotionLimits(v_max=500.0, a_max=10000.0))
    assert p.duration == pytest.approx(2.0 * math.sqrt(20.0 / 10000.0), abs=1e-12)
    assert p.v_peak == pytest.approx(math.sqrt(20.0 * 10000.0), abs=1e-9)
    assert p.t_cruise == 0.0


def test_trapezoid_respects_limits_pointwise():
    p = trapezoid_profile(137.0, MotionLimits(v_max=400.0, a_max=9000.0))
    dt = 1e-4
    xs = [p.position(i * dt) for i in range(int(p.duration / dt) + 2)]
    vmax = max(abs(b - a) / dt for a, b in zip(xs, xs[1:]))
    amax = max(abs(c - 2 * b + a) / dt / dt
               for a, b, c in zip(xs, xs[1:], xs[2:]))
    assert vmax <= 400.0 + 1e-6
    assert amax <= 9000.0 + 1e-3


def test_sweep_z_covers_height_band():
    traj = sweep_axis("z", 1, LIMITS)
    zs = [s.pose.z for s in traj.samples]
    assert min(zs) == pytest.approx(205.0, abs=1e-9)
    assert max(zs) == pytest.approx(280.0, abs=1e-9)
    assert zs[0] == pytest.approx(205.0, abs=1e-9)
    assert zs[-1] == pytest.approx(205.0, abs=1e-9)
    assert validate_trajectory(traj, LIMITS).valid


def test_sweep_zero_reps_is_stationary():
    traj = sweep_axis("z", 0, LIMITS)
    assert len(traj) == 1
    assert traj.samples[0].pose == Pose6D(480.0, 360.0, 242.5)


def test_sweep_alpha_at_non_anchor_errors():
    with pytest.raises(InfeasibleMotionError):
        sweep_axis("alpha", 1, LIMITS)


def test_sweep_alpha_at_anchor_spans_range():
    traj = sweep_axis("alpha", 1, LIMITS, grid=anchored_grid(),
                      base_pose=CENTER)
    alphas = [s.pose.alpha for s in traj.samples]
    assert min(alphas) == pytest.approx(-14.0, abs=1e-9)
    assert max(alphas) == pytest.approx(14.0, abs=1e-9)
    assert validate_trajectory(traj, LIMITS, grid=anchored_grid()).valid


def test_sweep_generated_is_ik_consistent():
    traj = sweep_axis("x", 1, LIMITS)
    for s in traj.samples[:: max(1, len(traj) // 50)]:
        back = forward_kinematics(s.movers, GEOM,
                                  turns=turns_for_gamma(s.movers, s.pose.gamma))
        assert max(abs(a - b) for a, b in
                   zip(back.astuple(), s.pose.astuple())) < 1e-9


def test_circle_sine_stationary_cases():
    traj = circle_sine(CENTER, 0.0, 0.0, 1, LIMITS)
    assert len(traj) == 1


def test_circle_sine_periodic_and_valid():
    traj = circle_sine(CENTER, 100.0, 20.0, 1, LIMITS)
    first, last = traj.samples[0].pose, traj.samples[-1].pose
    assert max(abs(a - b) for a, b in zip(first.astuple(), last.astuple())) < 1e-9
    assert validate_trajectory(traj, LIMITS).valid


def test_circle_sine_z_band():
    traj = circle_sine(Pose6D(480, 360, 242.5), 50.0, 37.5, 1, LIMITS)
    zs = [s.pose.z for s in traj.samples]
    assert min(zs) >= 205.0 - 1e-9
    assert max(zs) <= 280.0 + 1e-9


def test_helix_degenerate_growth_keeps_radius():
    traj = extending_helix(CENTER, 60.0, 0.0, 230.0, 250.0, 2, LIMITS)
    for s in traj.samples:
        r = math.hypot(s.pose.x - CENTER.x, s.pose.y - CENTER.y)
        assert r == pytest.approx(60.0, abs=1e-9)
    assert validate_trajectory(traj, LIMITS).valid


def test_helix_zero_turns_is_pure_z_move():
    traj = extending_helix(CENTER, 60.0, 0.0, 230.0, 250.0, 0, LIMITS)
    assert all(s.pose.x == pytest.approx(CENTER.x + 60.0, abs=1e-9)
               for s in traj.samples)
    zs = [s.pose.z for s in traj.samples]
    assert zs[0] == pytest.approx(230.0) and zs[-1] == pytest.approx(250.0)


def test_helix_speed_oracle():
    traj = extending_helix(CENTER, 40.0, 25.0, 220.0, 265.0, 3, LIMITS)
    # independent finite-difference speed check of both movers
    worst = 0.0
    for a, b in zip(traj.samples, traj.samples[1:]):
        for m0, m1 in ((a.movers.mover1, b.movers.mover1),
                       (a.movers.mover2, b.movers.mover2)):
            worst = max(worst, math.hypot(m1.x - m0.x, m1.y - m0.y) / traj.dt)
    assert worst <= LIMITS.v_max + 1e-9


def test_helix_leaving_grid_errors():
    with pytest.raises(InfeasibleMotionError):
        extending_helix(CENTER, 40.0, 200.0, 220.0, 265.0, 3, LIMITS)


def test_tilt_wave_requires_anchor():
    with pytest.raises(InfeasibleMotionError):
        cos_alpha_sin_beta(10.0, 10.0, 1, LIMITS, center=CENTER)


def test_tilt_wave_amplitude_check():
    with pytest.raises(InfeasibleMotionError):
        cos_alpha_sin_beta(15.0, 10.0, 1, LIMITS, grid=anchored_grid(),
                           center=CENTER)


def test_tilt_wave_traces_ellipse_and_mover_span():
    traj = cos_alpha_sin_beta(10.0, 10.0, 1, LIMITS, grid=anchored_grid(),
                              center=CENTER)
    alphas = [s.pose.alpha for s in traj.samples]
    betas = [s.pose.beta for s in traj.samples]
    assert max(abs(a) for a in alphas) == pytest.approx(10.0, abs=1e-9)
    assert max(abs(b) for b in betas) == pytest.approx(10.0, abs=1e-6)
    for a, b in zip(alphas, betas):
        assert (a / 10.0) ** 2 + (b / 10.0) ** 2 == pytest.approx(1.0, abs=1e-9)
    g1 = [s.movers.mover1.gamma for s in traj.samples]
    assert max(abs(g) for g in g1) == pytest.approx(10.0 / 0.119, abs=1e-6)


def test_tilt_wave_zero_amplitude_stationary():
    traj = cos_alpha_sin_beta(0.0, 0.0, 3, LIMITS, center=CENTER)
    assert len(traj) == 1


def test_validate_flags_velocity_jump():
    p0, p1 = Pose6D(480, 360, 242.5), Pose6D(580, 360, 242.5)
    traj = Trajectory(1e-3, (
        TrajectorySample(0.0, p0, inverse_kinematics(p0, GEOM)),
        TrajectorySample(1e-3, p1, inverse_kinematics(p1, GEOM))))
    report = validate_trajectory(traj, LIMITS)
    speeds = [v for v in report.violations if v.axis.endswith("_velocity")]
    assert speeds and speeds[0].value == pytest.approx(1e5, rel=1e-9)


def test_validate_flags_low_dip():
    p0, p1 = Pose6D(480, 360, 205.0), Pose6D(480, 360, 200.0)
    traj = Trajectory(1.0, (
        TrajectorySample(0.0, p0, inverse_kinematics(p0, GEOM)),
        TrajectorySample(1.0, p1, inverse_kinematics(p1, GEOM))))
    axes = {v.axis.split(":")[1] for v in
            validate_trajectory(traj, LIMITS).violations}
    assert "z" in axes and "mover_distance" in axes


def test_validate_needs_two_samples():
    traj = sweep_axis("z", 0, LIMITS)
    with pytest.raises(ValueError):
        validate_trajectory(traj, LIMITS)


def test_time_scaling_soundness():
    traj = circle_sine(CENTER, 80.0, 10.0, 1, LIMITS)
    scaled = traj.time_scaled(2.0)
    assert scaled.dt == pytest.approx(2.0 * traj.dt)

    def fd_extrema(t):
        vs, accs = [], []
        pts = [(s.movers.mover1.x, s.movers.mover1.y) for s in t.samples]
        for a, b in zip(pts, pts[1:]):
            vs.append(math.hypot(b[0] - a[0], b[1] - a[1]) / t.dt)
        for a, b, c in zip(pts, pts[1:], pts[2:]):
            accs.append(math.hypot(c[0] - 2 * b[0] + a[0],
                                   c[1] - 2 * b[1] + a[1]) / t.dt / t.dt)
        return max(vs), max(accs)

    v0, a0 = fd_extrema(traj)
    v1, a1 = fd_extrema(scaled)
    assert v1 == pytest.approx(v0 / 2.0, rel=1e-12)
    assert a1 == pytest.approx(a0 / 4.0, rel=1e-12)


def test_generated_trajectories_timestamps_uniform():
    traj = circle_sine(CENTER, 50.0, 5.0, 1, LIMITS)
    for i, s in enumerate(traj.samples):
        assert s.t == pytest.approx(i * traj.dt, abs=1e-12)
