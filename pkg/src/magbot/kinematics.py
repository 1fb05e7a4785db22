"""Closed-form inverse and forward kinematics of the two-mover platform.

The platform's height is set purely by the planar distance between the two
movers: each mover carries one end of a leg pair of length k, so

    d = 2 * (x_b + x_t + sqrt(k^2 - (z - z_m - z_b - z_t)^2))

Platform tilt is driven by mover yaw through the rack transmissions. Mover 1
drives alpha, mover 2 drives beta, and a platform yaw gamma_p is compensated
by adding gamma_p to both mover yaw commands:

    gamma_m1 = -alpha / g_a + gamma_p
    gamma_m2 = -beta  / g_b + gamma_p

where g_a, g_b are platform-rotation-per-mover-rotation ratios (about 0.12,
so a 14 degree tilt needs roughly 118 degrees of mover yaw).

All operations are pure functions and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (MechanicalRangeError, MoverState, PlatformGeometry, Pose6D,
                   TileGrid, UnreachableHeightError, WorkspaceLimits,
                   default_geometry, default_grid, default_limits,
                   normalize_angle)

_EPS = 1e-9


@dataclass(frozen=True)
class MoverPair:
    """The two mover states realizing one platform pose.

    mover1 drives the platform's alpha rotation, mover2 its beta rotation.
    """

    mover1: MoverState
    mover2: MoverState

    def distance(self) -> float:
        """Planar euclidean distance between the movers."""
        return math.hypot(self.mover2.x - self.mover1.x,
                          self.mover2.y - self.mover1.y)


@dataclass(frozen=True)
class Violation:
    """One workspace check failure: which axis, observed value, allowed bound."""

    axis: str
    value: float
    bound: tuple[float, float]

    def __str__(self):
        lo, hi = self.bound
        return f"{self.axis}={self.value:.4f} outside [{lo:.4f}, {hi:.4f}]"


@dataclass(frozen=True)
class WorkspaceReport:
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.valid:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


def mover_distance(z_p: float, geom: PlatformGeometry | None = None) -> float:
    """Planar mover distance that realizes platform height z_p.

    Raises UnreachableHeightError when z_p lies outside the legs' reach,
    naming the admissible height interval.
    """
    geom = geom or default_geometry()
    dz = z_p - geom.shoulder_z
    radicand = geom.k * geom.k - dz * dz
    if radicand < 0.0:
        lo = max(0.0, geom.shoulder_z - geom.k)
        raise UnreachableHeightError(
            f"unreachable height z={z_p}; admissible z interval is "
            f"[{lo:.4f}, {geom.max_height:.4f}] mm")
    return 2.0 * (geom.half_width + math.sqrt(radicand))


def platform_height(d_m: float, geom: PlatformGeometry | None = None) -> float:
    """Platform height realized by mover distance d_m (upper leg branch).

    Only the elbow-up solution is physical; the mirrored branch below the
    shoulder line is rejected.
    """
    geom = geom or default_geometry()
    lo, hi = geom.mechanical_d_range
    if not (lo - _EPS <= d_m <= hi + _EPS):
        raise MechanicalRangeError(
            f"mover distance {d_m} outside mechanical range [{lo}, {hi}] mm")
    half = min(max(d_m / 2.0 - geom.half_width, -geom.k), geom.k)
    return geom.shoulder_z + math.sqrt(geom.k * geom.k - half * half)


def reachable_z_interval(geom: PlatformGeometry | None = None) -> tuple[float, float]:
    """Platform height interval reachable under the planner distance limits."""
    geom = geom or default_geometry()
    return (platform_height(geom.d_max, geom), platform_height(geom.d_min, geom))


def inverse_kinematics(pose: Pose6D,
                       geom: PlatformGeometry | None = None) -> MoverPair:
    """Mover commands realizing a platform pose.

    The movers sit symmetrically about (x, y) at half the distance law's
    spacing, rotated by the platform yaw; their yaw commands carry the tilt
    demands divided by the coupling ratios plus the yaw compensation term.
    """
    geom = geom or default_geometry()
    d = mover_distance(pose.z, geom)
    g = math.radians(pose.gamma)
    rx = 0.5 * d * math.cos(g)
    ry = 0.5 * d * math.sin(g)
    gamma_m1 = -pose.alpha / geom.g_a + pose.gamma
    gamma_m2 = -pose.beta / geom.g_b + pose.gamma
    return MoverPair(
        mover1=MoverState(x=pose.x - rx, y=pose.y - ry, z=geom.z_m, gamma=gamma_m1),
        mover2=MoverState(x=pose.x + rx, y=pose.y + ry, z=geom.z_m, gamma=gamma_m2),
    )


def forward_kinematics(pair: MoverPair,
                       geom: PlatformGeometry | None = None,
                       turns: int = 0) -> Pose6D:
    """Platform pose realized by a mover pair.

    The platform yaw is the heading of the mover1-to-mover2 vector, which is
    only known modulo full turns; ``turns`` supplies the caller's reference
    turn count so multi-turn trajectories stay continuous.
    """
    geom = geom or default_geometry()
    d = pair.distance()
    z = platform_height(d, geom)
    gamma_p = math.degrees(math.atan2(pair.mover2.y - pair.mover1.y,
                                      pair.mover2.x - pair.mover1.x))
    gamma_p += 360.0 * turns
    alpha = geom.g_a * (gamma_p - pair.mover1.gamma)
    beta = geom.g_b * (gamma_p - pair.mover2.gamma)
    return Pose6D(x=0.5 * (pair.mover1.x + pair.mover2.x),
                  y=0.5 * (pair.mover1.y + pair.mover2.y),
                  z=z, alpha=alpha, beta=beta, gamma=gamma_p)


def turns_for_gamma(pair: MoverPair, gamma_ref: float) -> int:
    """Turn count that unwraps the pair's heading closest to gamma_ref."""
    base = math.degrees(math.atan2(pair.mover2.y - pair.mover1.y,
                                   pair.mover2.x - pair.mover1.x))
    return round((gamma_ref - base) / 360.0)


def _range_violation(axis, value, lo, hi, out):
    if not (lo - _EPS <= value <= hi + _EPS):
        out.append(Violation(axis, value, (lo, hi)))


def check_workspace(pose: Pose6D,
                    limits: WorkspaceLimits | None = None,
                    grid: TileGrid | None = None,
                    geom: PlatformGeometry | None = None) -> WorkspaceReport:
    """Validate a platform pose against the workspace.

    Checks the per-axis ranges, both mover footprints against the tile grid,
    the mover distance against the planner limits, and each required mover
    yaw against the local limit unless that mover sits near a full-rotation
    anchor. Violations are returned as data, never raised.
    """
    limits = limits or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()

    out: list[Violation] = []
    _range_violation("z", pose.z, *limits.z_range, out)
    _range_violation("alpha", pose.alpha, *limits.alpha_range, out)
    _range_violation("beta", pose.beta, *limits.beta_range, out)
    _range_violation("gamma", pose.gamma, *limits.gamma_range, out)

    try:
        pair = inverse_kinematics(pose, geom)
    except UnreachableHeightError:
        lo = max(0.0, geom.shoulder_z - geom.k)
        out.append(Violation("z_reach", pose.z, (lo, geom.max_height)))
        return WorkspaceReport(tuple(out))

    x_lo, x_hi, y_lo, y_hi = grid.xy_bounds()
    for name, mover in (("mover1", pair.mover1), ("mover2", pair.mover2)):
        _range_violation(f"{name}_x", mover.x, x_lo, x_hi, out)
        _range_violation(f"{name}_y", mover.y, y_lo, y_hi, out)
        if not grid.near_anchor(mover.x, mover.y, geom.anchor_radius):
            wrapped = normalize_angle(mover.gamma)
            _range_violation(f"{name}_gamma", wrapped,
                             -limits.mover_gamma_local,
                             limits.mover_gamma_local, out)
    _range_violation("mover_distance", pair.distance(),
                     geom.d_min, geom.d_max, out)
    return WorkspaceReport(tuple(out))
