"""Shared value types, units, and geometry constants.

External units are millimeters and degrees everywhere; radians only appear
transiently inside trigonometric evaluation. Platform yaw (gamma) is stored
unwrapped so multi-turn rotations stay continuous. Wrapping an angle back
into (-180, 180] is always an explicit call to :func:`normalize_angle`,
never an implicit side effect.

All types in this module are immutable values and safe to share across
threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

GRAVITY = 9.81  # N per kg of supported mass

# Desk-scale rig defaults: reachable platform height band and angle limits.
DEFAULT_Z_RANGE = (205.0, 280.0)
DEFAULT_TILT_LIMIT = 14.0
DEFAULT_GAMMA_LIMIT = 360.0
DEFAULT_MOVER_GAMMA_LOCAL = 10.0
DEFAULT_TILE_EDGE = 240.0
DEFAULT_ANCHOR_RADIUS = 5.0


class UnreachableHeightError(ValueError):
    """Requested platform height lies outside the leg geometry's reach."""


class MechanicalRangeError(ValueError):
    """Mover distance lies outside the mechanism's physical travel."""


class DegenerateDataError(ValueError):
    """Input data carries no usable variation for the requested fit."""


def normalize_angle(a: float) -> float:
    """Wrap an angle in degrees into the half-open interval (-180, 180]."""
    if not math.isfinite(a):
        raise ValueError(f"angle must be finite, got {a!r}")
    r = math.fmod(a, 360.0)
    if r <= -180.0:
        r += 360.0
    elif r > 180.0:
        r -= 360.0
    return r


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


def _distance_for_height(z_p, k, x_b, x_t, z_b, z_t, z_m):
    """Planar mover distance that realizes platform height z_p (raw form).

    Callers are responsible for checking that the radicand is nonnegative.
    """
    dz = z_p - z_m - z_b - z_t
    return 2.0 * (x_b + x_t + math.sqrt(k * k - dz * dz))


@dataclass(frozen=True)
class Pose6D:
    """Platform pose: x, y, z in mm; alpha, beta, gamma in degrees.

    gamma is kept unwrapped (continuous) so multi-turn yaw is representable.
    """

    x: float
    y: float
    z: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        _require_finite("pose field", self.x, self.y, self.z,
                        self.alpha, self.beta, self.gamma)
        if self.z < 0.0:
            raise ValueError(f"pose z must be >= 0, got {self.z}")

    def astuple(self):
        return (self.x, self.y, self.z, self.alpha, self.beta, self.gamma)


@dataclass(frozen=True)
class MoverState:
    """Commanded planar pose of one mover: x, y at flight altitude z, yaw gamma.

    Mover tilt is never commanded; alpha and beta are identically zero.
    """

    x: float
    y: float
    z: float
    gamma: float
    alpha: float = field(default=0.0, init=False)
    beta: float = field(default=0.0, init=False)

    def __post_init__(self):
        _require_finite("mover field", self.x, self.y, self.z, self.gamma)
        if self.z <= 0.0:
            raise ValueError(f"mover flight altitude must be > 0, got {self.z}")


@dataclass(frozen=True)
class PlatformGeometry:
    """Mechanism constants of the two-mover platform.

    k is the leg length; x_b/x_t and z_b/z_t are the fixed horizontal and
    vertical offsets between mover surface, leg joints, and platform top;
    z_m is the mover flight altitude. g_a and g_b are the coupling ratios of
    the tilt transmissions, expressed as platform rotation per unit of mover
    yaw (the calibration sweep in which 130 degrees of mover yaw produce
    about 15 degrees of platform tilt fixes this orientation of the ratio).
    d_min/d_max bound the planar mover distance for trajectory planning.
    """

    k: float = 156.0
    x_b: float = 20.0
    x_t: float = 71.0
    z_b: float = 69.3
    z_t: float = 58.5
    z_m: float = 1.0
    g_a: float = 0.119
    g_b: float = 0.131
    d_min: float = 258.8
    d_max: float = 454.2466
    anchor_radius: float = DEFAULT_ANCHOR_RADIUS

    def __post_init__(self):
        _require_finite("geometry field", self.k, self.x_b, self.x_t, self.z_b,
                        self.z_t, self.z_m, self.g_a, self.g_b,
                        self.d_min, self.d_max)
        if self.k <= 0.0:
            raise ValueError(f"leg length k must be > 0, got {self.k}")
        if self.z_m <= 0.0:
            raise ValueError(f"flight altitude z_m must be > 0, got {self.z_m}")
        if self.g_a == 0.0 or self.g_b == 0.0:
            raise ValueError("coupling ratios g_a, g_b must be nonzero")
        upper = 2.0 * (self.x_b + self.x_t + self.k)
        if not (0.0 < self.d_min < self.d_max <= upper + 1e-9):
            raise ValueError(
                f"need 0 < d_min < d_max <= {upper}, got "
                f"d_min={self.d_min}, d_max={self.d_max}")

    @property
    def half_width(self) -> float:
        """Horizontal offset from a mover center to its lower leg joint."""
        return self.x_b + self.x_t

    @property
    def shoulder_z(self) -> float:
        """Platform height when the legs lie flat (zero radical)."""
        return self.z_m + self.z_b + self.z_t

    @property
    def max_height(self) -> float:
        """Theoretical platform height ceiling (legs vertical)."""
        return self.shoulder_z + self.k

    @property
    def mechanical_d_range(self) -> tuple[float, float]:
        """Physically possible mover distance interval."""
        return (2.0 * self.half_width, 2.0 * (self.half_width + self.k))


def default_geometry() -> PlatformGeometry:
    """Geometry of the desk-scale rig with distance limits derived from the
    reachable height band rather than hard mechanical stops."""
    k, x_b, x_t, z_b, z_t, z_m = 156.0, 20.0, 71.0, 69.3, 58.5, 1.0
    d_min = _distance_for_height(DEFAULT_Z_RANGE[1], k, x_b, x_t, z_b, z_t, z_m)
    d_max = _distance_for_height(DEFAULT_Z_RANGE[0], k, x_b, x_t, z_b, z_t, z_m)
    return PlatformGeometry(k=k, x_b=x_b, x_t=x_t, z_b=z_b, z_t=z_t, z_m=z_m,
                            g_a=0.119, g_b=0.131, d_min=d_min, d_max=d_max)


@dataclass(frozen=True)
class WorkspaceLimits:
    """Per-axis workspace of the platform plus the local mover yaw limit.

    mover_gamma_local is the yaw a mover may assume at a generic tile
    position; full rotation is only available near the grid's
    full-rotation anchors.
    """

    z_range: tuple[float, float] = DEFAULT_Z_RANGE
    alpha_range: tuple[float, float] = (-DEFAULT_TILT_LIMIT, DEFAULT_TILT_LIMIT)
    beta_range: tuple[float, float] = (-DEFAULT_TILT_LIMIT, DEFAULT_TILT_LIMIT)
    gamma_range: tuple[float, float] = (-DEFAULT_GAMMA_LIMIT, DEFAULT_GAMMA_LIMIT)
    mover_gamma_local: float = DEFAULT_MOVER_GAMMA_LOCAL

    def __post_init__(self):
        for name, (lo, hi) in (("z", self.z_range), ("alpha", self.alpha_range),
                               ("beta", self.beta_range), ("gamma", self.gamma_range)):
            _require_finite(f"{name} range", lo, hi)
            if lo > hi:
                raise ValueError(f"{name} range is empty: [{lo}, {hi}]")


def default_limits() -> WorkspaceLimits:
    return WorkspaceLimits()


@dataclass(frozen=True)
class TileGrid:
    """Stator tile layout: nx by ny square tiles of edge tile_edge.

    full_rotation_anchors are the xy points where a mover may rotate freely;
    they default to the tile centers. origin shifts the whole grid, which
    keeps workspace verdicts invariant under rigid translation of pose and
    grid together.
    """

    nx: int = 4
    ny: int = 3
    tile_edge: float = DEFAULT_TILE_EDGE
    origin: tuple[float, float] = (0.0, 0.0)
    full_rotation_anchors: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one tile per direction")
        if self.tile_edge <= 0.0:
            raise ValueError(f"tile edge must be > 0, got {self.tile_edge}")
        if not self.full_rotation_anchors:
            centers = tuple(
                (self.origin[0] + (i + 0.5) * self.tile_edge,
                 self.origin[1] + (j + 0.5) * self.tile_edge)
                for i in range(self.nx) for j in range(self.ny))
            object.__setattr__(self, "full_rotation_anchors", centers)
        else:
            object.__setattr__(self, "full_rotation_anchors",
                               tuple(tuple(p) for p in self.full_rotation_anchors))

    def xy_bounds(self) -> tuple[float, float, float, float]:
        """(x_lo, x_hi, y_lo, y_hi) of the usable tile surface."""
        ox, oy = self.origin
        return (ox, ox + self.nx * self.tile_edge,
                oy, oy + self.ny * self.tile_edge)

    def near_anchor(self, x: float, y: float, radius: float) -> bool:
        return any((x - ax) ** 2 + (y - ay) ** 2 <= radius * radius
                   for ax, ay in self.full_rotation_anchors)

    def translated(self, dx: float, dy: float) -> "TileGrid":
        return TileGrid(
            nx=self.nx, ny=self.ny, tile_edge=self.tile_edge,
            origin=(self.origin[0] + dx, self.origin[1] + dy),
            full_rotation_anchors=tuple((ax + dx, ay + dy)
                                        for ax, ay in self.full_rotation_anchors))


def default_grid() -> TileGrid:
    return TileGrid()


@dataclass(frozen=True)
class Wrench:
    """Force/torque 6-vector applied by the levitation controller to a mover.

    Forces in N, torques in N.mm.
    """

    fx: float = 0.0
    fy: float = 0.0
    fz: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    tz: float = 0.0

    def __post_init__(self):
        _require_finite("wrench component", self.fx, self.fy, self.fz,
                        self.tx, self.ty, self.tz)

    def astuple(self):
        return (self.fx, self.fy, self.fz, self.tx, self.ty, self.tz)
