"""Trajectory generation and validation under the maglev dynamic envelope.

Paths are generated geometrically as a function of a scalar phase, the phase
is time-parameterized with a trapezoidal velocity profile, and the sampled
result is checked against the mover velocity/acceleration limits. When a
sampled trajectory exceeds the limits it is uniformly time-scaled (slower
profile, same geometry) until it passes; per-axis asynchronous profiling is
deliberately not attempted.

The rotational rate limit w_max applies to mover yaw, not to platform tilt,
because the mover is the physical actuator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (PlatformGeometry, Pose6D, TileGrid, WorkspaceLimits,
                   default_geometry, default_grid, default_limits)
from .kinematics import (MoverPair, Violation, WorkspaceReport,
                         check_workspace, inverse_kinematics, mover_distance)

DEFAULT_DT = 1e-3  # s, typical industrial motion-bus cycle

_AXES = ("x", "y", "z", "alpha", "beta", "gamma")


class InfeasibleMotionError(ValueError):
    """The requested motion cannot be realized inside the workspace."""


@dataclass(frozen=True)
class MotionLimits:
    """Dynamic envelope: mover velocity mm/s, acceleration mm/s^2, yaw deg/s.

    w_accel is the yaw ramp used when profiling rotational moves; the
    validator only enforces the rate limit itself.
    """

    v_max: float = 2000.0
    a_max: float = 10000.0
    w_max: float = 20.0
    w_accel: float = 200.0

    def __post_init__(self):
        if min(self.v_max, self.a_max, self.w_max, self.w_accel) <= 0.0:
            raise ValueError("motion limits must be positive")


def experiment_limits() -> MotionLimits:
    """The profile used for the accuracy measurements: 0.5 m/s, 20 deg/s."""
    return MotionLimits(v_max=500.0, a_max=10000.0, w_max=20.0)


@dataclass(frozen=True)
class TrapezoidProfile:
    """Closed-form trapezoidal (or triangular) rest-to-rest profile."""

    distance: float
    v_peak: float
    accel: float
    t_acc: float
    t_cruise: float

    @property
    def duration(self) -> float:
        return 2.0 * self.t_acc + self.t_cruise

    def position(self, t: float) -> float:
        if t <= 0.0 or self.distance == 0.0:
            return 0.0
        if t >= self.duration:
            return self.distance
        if t < self.t_acc:
            return 0.5 * self.accel * t * t
        d_acc = 0.5 * self.accel * self.t_acc * self.t_acc
        if t < self.t_acc + self.t_cruise:
            return d_acc + self.v_peak * (t - self.t_acc)
        td = self.duration - t
        return self.distance - 0.5 * self.accel * td * td

    def velocity(self, t: float) -> float:
        if t <= 0.0 or t >= self.duration or self.distance == 0.0:
            return 0.0
        if t < self.t_acc:
            return self.accel * t
        if t < self.t_acc + self.t_cruise:
            return self.v_peak
        return self.accel * (self.duration - t)


def trapezoid_profile(distance: float,
                      limits: MotionLimits | None = None,
                      v_max: float | None = None,
                      a_max: float | None = None) -> TrapezoidProfile:
    """Profile a nonnegative travel distance at the given limits.

    Falls back to a triangular profile when the cruise speed is unreachable.
    v_max/a_max override the translational limits, which lets the same
    machinery profile rotational axes in deg/s.
    """
    if distance < 0.0:
        raise ValueError(f"distance must be >= 0, got {distance}")
    limits = limits or MotionLimits()
    v = v_max if v_max is not None else limits.v_max
    a = a_max if a_max is not None else limits.a_max
    if distance == 0.0:
        return TrapezoidProfile(0.0, 0.0, a, 0.0, 0.0)
    t_acc = v / a
    d_acc = 0.5 * a * t_acc * t_acc
    if 2.0 * d_acc <= distance:
        t_cruise = (distance - 2.0 * d_acc) / v
        return TrapezoidProfile(distance, v, a, t_acc, t_cruise)
    t_acc = math.sqrt(distance / a)
    return TrapezoidProfile(distance, a * t_acc, a, t_acc, 0.0)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    pose: Pose6D
    movers: MoverPair


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled platform trajectory with the realizing mover pairs."""

    dt: float
    samples: tuple[TrajectorySample, ...]

    def __len__(self):
        return len(self.samples)

    @property
    def duration(self) -> float:
        return self.samples[-1].t if self.samples else 0.0

    def time_scaled(self, c: float) -> "Trajectory":
        """Same geometry replayed c times slower (sample spacing c * dt)."""
        if c <= 0.0:
            raise ValueError("time scale must be positive")
        return Trajectory(self.dt * c, tuple(
            TrajectorySample(s.t * c, s.pose, s.movers) for s in self.samples))


def _sample_path(pose_of, profile: TrapezoidProfile, dt: float,
                 geom: PlatformGeometry) -> Trajectory:
    n = max(1, math.ceil(profile.duration / dt - 1e-12))
    samples = []
    for i in range(n + 1):
        t = i * dt
        pose = pose_of(profile.position(min(t, profile.duration)))
        samples.append(TrajectorySample(t, pose, inverse_kinematics(pose, geom)))
    return Trajectory(dt, tuple(samples))


def _mover_derivative_bounds(pose_of, total: float, geom, probes: int = 512):
    """Worst-case first/second derivatives of mover xy and yaw wrt phase."""
    h = total / probes
    pts = []
    for i in range(probes + 1):
        pair = inverse_kinematics(pose_of(i * h), geom)
        pts.append((pair.mover1.x, pair.mover1.y, pair.mover1.gamma,
                    pair.mover2.x, pair.mover2.y, pair.mover2.gamma))
    d1 = w1 = d2 = w2 = 0.0
    for i in range(1, probes + 1):
        a, b = pts[i - 1], pts[i]
        d1 = max(d1, math.hypot(b[0] - a[0], b[1] - a[1]) / h,
                 math.hypot(b[3] - a[3], b[4] - a[4]) / h)
        w1 = max(w1, abs(b[2] - a[2]) / h, abs(b[5] - a[5]) / h)
    for i in range(1, probes):
        a, b, c = pts[i - 1], pts[i], pts[i + 1]
        d2 = max(d2,
                 math.hypot(c[0] - 2 * b[0] + a[0], c[1] - 2 * b[1] + a[1]) / (h * h),
                 math.hypot(c[3] - 2 * b[3] + a[3], c[4] - 2 * b[4] + a[4]) / (h * h))
        w2 = max(w2, abs(c[2] - 2 * b[2] + a[2]) / (h * h),
                 abs(c[5] - 2 * b[5] + a[5]) / (h * h))
    return d1, w1, d2, w2


def _dynamic_axes(report: WorkspaceReport):
    dyn = [v for v in report.violations
           if v.axis.endswith(("_velocity", "_accel", "_yaw_rate"))]
    return dyn, [v for v in report.violations if v not in dyn]


def _profile_and_scale(pose_of, total_phase, limits, workspace, grid, geom, dt):
    """Time-parameterize a monotone phase path and scale until feasible."""
    d1, w1, d2, w2 = _mover_derivative_bounds(pose_of, total_phase, geom)
    # chord-based bounds match straight/linear paths exactly but
    # underestimate at curvature peaks, hence the margins there
    curved = d2 > 1e-9 * max(d1, 1.0)
    if curved:
        d1, d2 = 1.01 * d1, 1.02 * d2
    if w2 > 1e-9 * max(w1, 1.0):
        w1 = 1.01 * w1
    v_phi = math.inf
    if d1 > 0.0:
        v_phi = min(v_phi, limits.v_max / d1)
    if w1 > 0.0:
        v_phi = min(v_phi, limits.w_max / w1)
    if curved:
        v_phi = min(v_phi, math.sqrt(0.5 * limits.a_max / d2))
    if d1 > 0.0:
        a_phi = (0.5 if curved else 1.0) * limits.a_max / d1
    else:
        a_phi = limits.w_accel / max(w1, 1e-12)
    if not math.isfinite(v_phi):  # stationary path
        v_phi, a_phi = 1.0, 1.0

    for _ in range(30):
        profile = trapezoid_profile(total_phase, v_max=v_phi, a_max=a_phi)
        traj = _sample_path(pose_of, profile, dt, geom)
        if len(traj) < 2:
            return traj
        report = validate_trajectory(traj, limits, workspace, grid, geom)
        if report.valid:
            return traj
        dyn, kin = _dynamic_axes(report)
        if kin:
            raise InfeasibleMotionError(
                "motion leaves the workspace: " + "; ".join(map(str, kin[:4])))
        v_phi /= 1.2
        a_phi /= 1.44
    raise InfeasibleMotionError("motion still violates limits after maximal "
                                "time-scaling")


def _held_pose(base: Pose6D, axis: str, value: float) -> Pose6D:
    fields = dict(zip(_AXES, base.astuple()))
    fields[axis] = value
    return Pose6D(**fields)


def _axis_interval(axis, base, limits, grid, geom):
    """Feasible min/max of one axis with the others held at the base pose."""
    x_lo, x_hi, y_lo, y_hi = grid.xy_bounds()
    if axis in ("x", "y"):
        d = mover_distance(base.z, geom)
        g = math.radians(base.gamma)
        rx, ry = abs(0.5 * d * math.cos(g)), abs(0.5 * d * math.sin(g))
        if axis == "x":
            return (x_lo + rx, x_hi - rx)
        return (y_lo + ry, y_hi - ry)
    if axis == "z":
        return limits.z_range
    if axis == "alpha":
        return limits.alpha_range
    if axis == "beta":
        return limits.beta_range
    return limits.gamma_range


def sweep_axis(axis: str, reps: int,
               limits: MotionLimits | None = None,
               workspace: WorkspaceLimits | None = None,
               grid: TileGrid | None = None,
               geom: PlatformGeometry | None = None,
               base_pose: Pose6D | None = None,
               dt: float = DEFAULT_DT) -> Trajectory:
    """Cycle one platform axis min -> max -> min, all other axes held.

    reps counts full min-max-min cycles; reps=0 yields a single stationary
    sample at the base pose. The base pose defaults to the grid center at
    the middle of the height band.
    """
    if axis not in _AXES:
        raise ValueError(f"unknown axis {axis!r}, expected one of {_AXES}")
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    if base_pose is None:
        x_lo, x_hi, y_lo, y_hi = grid.xy_bounds()
        base_pose = Pose6D(0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi),
                           0.5 * sum(workspace.z_range))
    if reps == 0:
        pair = inverse_kinematics(base_pose, geom)
        return Trajectory(dt, (TrajectorySample(0.0, base_pose, pair),))

    lo, hi = _axis_interval(axis, base_pose, workspace, grid, geom)
    if hi - lo <= 0.0:
        raise InfeasibleMotionError(
            f"{axis} range is empty at the held position: [{lo}, {hi}]")

    span = hi - lo
    total = 2.0 * reps * span

    def pose_of(phase):
        # triangle wave lo -> hi -> lo per cycle
        local = math.fmod(phase, 2.0 * span)
        value = lo + (local if local <= span else 2.0 * span - local)
        return _held_pose(base_pose, axis, min(max(value, lo), hi))

    # Profile leg by leg so the turnarounds are genuine rest points.
    leg_limits = _leg_rates(axis, base_pose, limits, geom, lo, hi)
    for _ in range(30):
        v_leg, a_leg = leg_limits
        profile = trapezoid_profile(span, v_max=v_leg, a_max=a_leg)
        traj = _concat_legs(pose_of, profile, span, 2 * reps, dt, geom)
        report = validate_trajectory(traj, limits, workspace, grid, geom)
        if report.valid:
            return traj
        dyn, kin = _dynamic_axes(report)
        if kin:
            raise InfeasibleMotionError(
                f"{axis} sweep infeasible at the held position: "
                + "; ".join(map(str, kin[:4])))
        leg_limits = (v_leg / 1.2, a_leg / 1.44)
    raise InfeasibleMotionError(f"{axis} sweep still violates limits after "
                                "maximal time-scaling")


def _leg_rates(axis, base, limits, geom, lo, hi):
    """Conservative per-leg rate/accel bounds in the axis's own unit."""
    if axis in ("x", "y"):
        return limits.v_max, limits.a_max
    if axis == "z":
        # mover speed is half the distance-law slope times the z rate
        slope = max(abs(_d_slope(z, geom)) for z in _linspace(lo, hi, 64)) * 0.5
        slope = max(slope, 1e-9)
        return limits.v_max / slope, limits.a_max / (2.0 * slope)
    if axis == "alpha":
        return limits.w_max * abs(geom.g_a), limits.w_accel * abs(geom.g_a)
    if axis == "beta":
        return limits.w_max * abs(geom.g_b), limits.w_accel * abs(geom.g_b)
    # gamma: both mover yaw rate and tangential mover speed bind
    d = mover_distance(base.z, geom)
    tang = math.degrees(limits.v_max / (0.5 * d))
    tang_a = math.degrees(limits.a_max / (0.5 * d))
    return min(limits.w_max, tang), min(limits.w_accel, tang_a, 0.5 * tang_a)


def _d_slope(z, geom, h=1e-4):
    return (mover_distance(z + h, geom) - mover_distance(z - h, geom)) / (2 * h)


def _linspace(lo, hi, n):
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _concat_legs(pose_of, profile, span, n_legs, dt, geom):
    samples = []
    n_per = max(1, math.ceil(profile.duration / dt - 1e-12))
    for leg in range(n_legs):
        offset = leg * span
        start = 0 if leg == 0 else 1  # junction sample already emitted
        for i in range(start, n_per + 1):
            t = (leg * n_per + i) * dt
            phase = offset + profile.position(min(i * dt, profile.duration))
            pose = pose_of(phase)
            samples.append(TrajectorySample(t, pose, inverse_kinematics(pose, geom)))
    return Trajectory(dt, tuple(samples))


def circle_sine(center: Pose6D, radius: float, z_amp: float, cycles: int,
                limits: MotionLimits | None = None,
                workspace: WorkspaceLimits | None = None,
                grid: TileGrid | None = None,
                geom: PlatformGeometry | None = None,
                dt: float = DEFAULT_DT) -> Trajectory:
    """Circle in x/y around the center pose with a synchronized sine in z.

    Tilt stays zero and yaw stays at the center pose's value. One z period
    per revolution; the z band center is the center pose's z.
    """
    if radius < 0.0:
        raise ValueError("radius must be >= 0")
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    if center.alpha != 0.0 or center.beta != 0.0:
        raise InfeasibleMotionError("circle motion holds zero tilt; "
                                    "center pose must have alpha = beta = 0")

    def pose_of(phase):
        return Pose6D(center.x + radius * math.cos(phase),
                      center.y + radius * math.sin(phase),
                      center.z + z_amp * math.sin(phase),
                      0.0, 0.0, center.gamma)

    total = 2.0 * math.pi * cycles
    if total == 0.0 or (radius == 0.0 and z_amp == 0.0):
        pose = pose_of(0.0)
        return Trajectory(dt, (TrajectorySample(0.0, pose,
                                                inverse_kinematics(pose, geom)),))
    return _profile_and_scale(pose_of, total, limits, workspace, grid, geom, dt)


def extending_helix(center: Pose6D, r0: float, r_growth: float,
                    z0: float, z1: float, turns: float,
                    limits: MotionLimits | None = None,
                    workspace: WorkspaceLimits | None = None,
                    grid: TileGrid | None = None,
                    geom: PlatformGeometry | None = None,
                    dt: float = DEFAULT_DT) -> Trajectory:
    """Helix around the center: radius grows linearly per turn, z sweeps z0->z1."""
    if r0 < 0.0 or turns < 0.0:
        raise ValueError("r0 and turns must be >= 0")
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    total = 2.0 * math.pi * turns

    def pose_of(phase):
        frac = phase / total if total > 0.0 else 1.0
        r = r0 + r_growth * (phase / (2.0 * math.pi))
        return Pose6D(center.x + r * math.cos(phase),
                      center.y + r * math.sin(phase),
                      z0 + (z1 - z0) * frac,
                      0.0, 0.0, center.gamma)

    if total == 0.0:
        # pure z move from z0 to z1
        def pose_of_z(z):
            return Pose6D(center.x + r0, center.y, z, 0.0, 0.0, center.gamma)
        if z1 == z0:
            pose = pose_of_z(z0)
            return Trajectory(dt, (TrajectorySample(0.0, pose,
                                                    inverse_kinematics(pose, geom)),))
        return _profile_and_scale(lambda p: pose_of_z(z0 + math.copysign(p, z1 - z0)),
                                  abs(z1 - z0), limits, workspace, grid, geom, dt)
    return _profile_and_scale(pose_of, total, limits, workspace, grid, geom, dt)


def cos_alpha_sin_beta(amp_a: float, amp_b: float, cycles: int,
                       limits: MotionLimits | None = None,
                       workspace: WorkspaceLimits | None = None,
                       grid: TileGrid | None = None,
                       geom: PlatformGeometry | None = None,
                       center: Pose6D | None = None,
                       dt: float = DEFAULT_DT) -> Trajectory:
    """Cosine on alpha plus sine on beta at a fixed position.

    The movers do not translate during this motion, but their yaw swings by
    amp/g (about 84 degrees for a 10 degree amplitude), so both movers must
    sit at full-rotation anchors.
    """
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    if abs(amp_a) > workspace.alpha_range[1] or abs(amp_b) > workspace.beta_range[1]:
        raise InfeasibleMotionError(
            f"tilt amplitude exceeds workspace: amp_a={amp_a}, amp_b={amp_b}")
    if center is None:
        x_lo, x_hi, y_lo, y_hi = grid.xy_bounds()
        center = Pose6D(0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi),
                        0.5 * sum(workspace.z_range))
    pair = inverse_kinematics(center, geom)
    if (amp_a != 0.0 or amp_b != 0.0) and not all(
            grid.near_anchor(m.x, m.y, geom.anchor_radius)
            for m in (pair.mover1, pair.mover2)):
        raise InfeasibleMotionError(
            "tilt motion needs both movers at full-rotation anchors; "
            f"movers sit at ({pair.mover1.x:.1f}, {pair.mover1.y:.1f}) and "
            f"({pair.mover2.x:.1f}, {pair.mover2.y:.1f})")

    def pose_of(phase):
        return Pose6D(center.x, center.y, center.z,
                      amp_a * math.cos(phase), amp_b * math.sin(phase),
                      center.gamma)

    total = 2.0 * math.pi * cycles
    if total == 0.0 or (amp_a == 0.0 and amp_b == 0.0):
        pose = pose_of(0.0)
        return Trajectory(dt, (TrajectorySample(0.0, pose,
                                                inverse_kinematics(pose, geom)),))
    return _profile_and_scale(pose_of, total, limits, workspace, grid, geom, dt)


def validate_trajectory(traj: Trajectory,
                        limits: MotionLimits | None = None,
                        workspace: WorkspaceLimits | None = None,
                        grid: TileGrid | None = None,
                        geom: PlatformGeometry | None = None,
                        pos_slack: float = 0.0,
                        ang_slack: float = 0.0) -> WorkspaceReport:
    """Check every sample's workspace plus finite-difference mover dynamics.

    pos_slack/ang_slack absorb known quantization of the sample data (for
    example CSV round-tripping); they widen the velocity and acceleration
    checks by the corresponding finite-difference worst case.
    """
    if len(traj.samples) < 2:
        raise ValueError("trajectory validation needs at least 2 samples")
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    dt = traj.dt

    out: list[Violation] = []
    for i, s in enumerate(traj.samples):
        expected_t = i * dt
        if abs(s.t - expected_t) > max(1e-9, 1e-6 * dt * len(traj.samples)):
            out.append(Violation(f"{i}:timestamp", s.t, (expected_t, expected_t)))
        rep = check_workspace(s.pose, workspace, grid, geom)
        out.extend(Violation(f"{i}:{v.axis}", v.value, v.bound)
                   for v in rep.violations)

    v_lim = limits.v_max + 2.0 * pos_slack / dt
    a_lim = limits.a_max + 4.0 * pos_slack / (dt * dt)
    w_lim = limits.w_max + 2.0 * ang_slack / dt
    ms = [(s.movers.mover1.x, s.movers.mover1.y, s.movers.mover1.gamma,
           s.movers.mover2.x, s.movers.mover2.y, s.movers.mover2.gamma)
          for s in traj.samples]
    for i in range(1, len(ms)):
        a, b = ms[i - 1], ms[i]
        for name, (dx, dy, dg) in (("mover1", (b[0] - a[0], b[1] - a[1], b[2] - a[2])),
                                   ("mover2", (b[3] - a[3], b[4] - a[4], b[5] - a[5]))):
            v = math.hypot(dx, dy) / dt
            if v > v_lim + 1e-9:
                out.append(Violation(f"{i}:{name}_velocity", v, (0.0, v_lim)))
            w = abs(dg) / dt
            if w > w_lim + 1e-9:
                out.append(Violation(f"{i}:{name}_yaw_rate", w, (0.0, w_lim)))
    for i in range(1, len(ms) - 1):
        a, b, c = ms[i - 1], ms[i], ms[i + 1]
        for name, (ax_, ay_) in (("mover1", (c[0] - 2 * b[0] + a[0],
                                             c[1] - 2 * b[1] + a[1])),
                                 ("mover2", (c[3] - 2 * b[3] + a[3],
                                             c[4] - 2 * b[4] + a[4]))):
            acc = math.hypot(ax_, ay_) / (dt * dt)
            if acc > a_lim + 1e-6:
                out.append(Violation(f"{i}:{name}_accel", acc, (0.0, a_lim)))
    return WorkspaceReport(tuple(out))
