"""Scenario configuration: line-based ``key = value`` files with ``#``
comments and optional ``[section]`` headers, one section per subsystem.

Unknown keys and malformed or invariant-violating values are rejected with
their line number. Absent keys fall back to the desk-rig defaults. Unless
set explicitly, the mover-distance limits are re-derived from the
(possibly overridden) height band and geometry constants.

The default motion profile is the measurement profile (0.5 m/s, 20 deg/s),
not the system's full envelope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (DEFAULT_Z_RANGE, PlatformGeometry, TileGrid,
                   WorkspaceLimits, _distance_for_height)
from .docking import DockTolerance
from .simctrl import LoadCase, PidParams, PlantParams
from .trajectory import MotionLimits


class ScenarioError(ValueError):
    """Scenario text is malformed; the message carries the line number."""


def _float(text):
    return float(text)


def _positive(text):
    v = float(text)
    if v <= 0.0:
        raise ValueError(f"must be > 0, got {v}")
    return v


def _nonneg(text):
    v = float(text)
    if v < 0.0:
        raise ValueError(f"must be >= 0, got {v}")
    return v


def _int(text):
    return int(text, 10)


def _positive_int(text):
    v = int(text, 10)
    if v < 1:
        raise ValueError(f"must be >= 1, got {v}")
    return v


def _str(text):
    return text


def _triple(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected 'x,y,z'")
    return tuple(parts)


def _point_list(text):
    pts = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [float(p) for p in chunk.split(",")]
        if len(parts) != 2:
            raise ValueError("expected 'x,y; x,y; ...'")
        pts.append(tuple(parts))
    return tuple(pts)


# section -> key -> caster
_SCHEMA = {
    "scenario": {"name": _str},
    "geometry": {"k": _positive, "x_b": _nonneg, "x_t": _nonneg,
                 "z_b": _nonneg, "z_t": _nonneg, "z_m": _positive,
                 "g_a": _float, "g_b": _float,
                 "d_min": _positive, "d_max": _positive,
                 "anchor_radius": _positive},
    "grid": {"nx": _positive_int, "ny": _positive_int, "tile_edge": _positive,
             "origin_x": _float, "origin_y": _float, "anchors": _point_list},
    "workspace": {"z_min": _float, "z_max": _float, "alpha_limit": _positive,
                  "beta_limit": _positive, "gamma_limit": _positive,
                  "mover_gamma_local": _positive},
    "motion": {"v_max": _positive, "a_max": _positive, "w_max": _positive,
               "w_accel": _positive, "dt": _positive},
    "plant": {"inertia": _positive, "damping": _nonneg,
              "disturbance_torque": _float},
    "control": {"pid_set": _int, "kp": _positive, "tn": _positive,
                "tv": _positive, "t1": _positive,
                "duration": _positive, "window": _positive},
    "load": {"magbot_mass": _nonneg, "payload_mass": _nonneg,
             "payload_x": _float, "payload_y": _float,
             "half_length": _positive},
    "noise": {"sigma_xy": _nonneg, "sigma_gamma": _nonneg},
    "docking": {"pos_tol": _positive, "ang_tol": _positive,
                "cycles": _positive_int, "approach_offset": _nonneg},
    "demo": {"start": _triple, "pick": _triple, "place": _triple,
             "dwell_pick": _nonneg, "dwell_place": _nonneg},
    "run": {"seed": _int, "trials": _positive_int},
}

_KEY_SECTION = {}
for _sec, _keys in _SCHEMA.items():
    for _k in _keys:
        if _k in _KEY_SECTION:
            raise AssertionError(f"duplicate scenario key {_k}")
        _KEY_SECTION[_k] = _sec


_DEMO_LEG = 480.0 / 500.0 + 500.0 / 10000.0  # straight 480 mm leg at 0.5 m/s
_DEMO_DWELL = (4.298 - 2.0 * _DEMO_LEG) / 2.0  # pinned so the stock demo cycle is 4.298 s

_DEFAULTS = {
    "name": "default",
    "pid_set": 1,  # no-payload tuning; payload runs select set 2
    "duration": 4.0,
    "window": 1.0,
    "sigma_xy": 0.05,
    "sigma_gamma": 0.05,
    "seed": 0,
    "trials": 1000,
    "cycles": 10,
    "approach_offset": 50.0,
    "start": (240.0, 360.0, 242.5),
    "pick": (720.0, 360.0, 242.5),
    "place": (240.0, 360.0, 242.5),
    "dwell_pick": _DEMO_DWELL,
    "dwell_place": _DEMO_DWELL,
    "v_max": 500.0,
    "a_max": 10000.0,
    "w_max": 20.0,
    "w_accel": 200.0,
    "dt": 1e-3,
}


@dataclass(frozen=True)
class Scenario:
    """Resolved configuration for one run of any command."""

    name: str
    geometry: PlatformGeometry
    grid: TileGrid
    workspace: WorkspaceLimits
    motion: MotionLimits
    plant: PlantParams
    pid_set: int
    pid_custom: PidParams | None
    load: LoadCase
    duration: float
    window: float
    sigma_xy: float
    sigma_gamma: float
    trials: int
    seed: int
    dock_tol: DockTolerance
    dock_cycles: int
    approach_offset: float
    demo_start: tuple[float, float, float]
    demo_pick: tuple[float, float, float]
    demo_place: tuple[float, float, float]
    dwell_pick: float
    dwell_place: float
    overrides: tuple[tuple[str, str], ...] = field(default=(), compare=False)


def _build(values: dict, overrides) -> Scenario:
    def get(key, default=None):
        if key in values:
            return values[key]
        if key in _DEFAULTS:
            return _DEFAULTS[key]
        return default

    z_min = get("z_min", DEFAULT_Z_RANGE[0])
    z_max = get("z_max", DEFAULT_Z_RANGE[1])
    geo_kw = {k: values[k] for k in _SCHEMA["geometry"] if k in values}
    base = PlatformGeometry()
    k = geo_kw.get("k", base.k)
    x_b, x_t = geo_kw.get("x_b", base.x_b), geo_kw.get("x_t", base.x_t)
    z_b, z_t = geo_kw.get("z_b", base.z_b), geo_kw.get("z_t", base.z_t)
    z_m = geo_kw.get("z_m", base.z_m)
    shoulder = z_m + z_b + z_t
    for z in (z_min, z_max):
        if abs(z - shoulder) > k:
            raise ScenarioError(
                f"height band [{z_min}, {z_max}] unreachable for leg length {k}")
    if "d_min" not in geo_kw:
        geo_kw["d_min"] = _distance_for_height(z_max, k, x_b, x_t, z_b, z_t, z_m)
    if "d_max" not in geo_kw:
        geo_kw["d_max"] = _distance_for_height(z_min, k, x_b, x_t, z_b, z_t, z_m)
    geometry = PlatformGeometry(**geo_kw)

    grid_kw = {}
    for key, target in (("nx", "nx"), ("ny", "ny"), ("tile_edge", "tile_edge")):
        if key in values:
            grid_kw[target] = values[key]
    if "origin_x" in values or "origin_y" in values:
        grid_kw["origin"] = (values.get("origin_x", 0.0),
                             values.get("origin_y", 0.0))
    if "anchors" in values:
        grid_kw["full_rotation_anchors"] = values["anchors"]
    grid = TileGrid(**grid_kw)

    lim = WorkspaceLimits()
    tilt_a = get("alpha_limit", lim.alpha_range[1])
    tilt_b = get("beta_limit", lim.beta_range[1])
    yaw = get("gamma_limit", lim.gamma_range[1])
    workspace = WorkspaceLimits(
        z_range=(z_min, z_max), alpha_range=(-tilt_a, tilt_a),
        beta_range=(-tilt_b, tilt_b), gamma_range=(-yaw, yaw),
        mover_gamma_local=get("mover_gamma_local", lim.mover_gamma_local))

    motion = MotionLimits(v_max=get("v_max"), a_max=get("a_max"),
                          w_max=get("w_max"), w_accel=get("w_accel"))
    plant_base = PlantParams()
    plant = PlantParams(
        inertia=get("inertia", plant_base.inertia),
        damping=get("damping", plant_base.damping),
        disturbance_torque=get("disturbance_torque",
                               plant_base.disturbance_torque),
        dt=get("dt"))

    pid_custom = None
    if any(key in values for key in ("kp", "tn", "tv", "t1")):
        missing = [key for key in ("kp", "tn", "tv", "t1") if key not in values]
        if missing:
            raise ScenarioError(
                f"custom controller needs all of kp/tn/tv/t1; missing {missing}")
        pid_custom = PidParams(values["kp"], values["tn"], values["tv"],
                               values["t1"])
    pid_set = get("pid_set")
    if pid_set not in (0, 1, 2):
        raise ScenarioError(f"pid_set must be 0, 1 or 2, got {pid_set}")

    load_base = LoadCase()
    load = LoadCase(magbot_mass=get("magbot_mass", load_base.magbot_mass),
                    payload_mass=get("payload_mass", 0.0),
                    payload_x=get("payload_x", 0.0),
                    payload_y=get("payload_y", 0.0),
                    half_length=get("half_length", load_base.half_length))

    tol_base = DockTolerance()
    dock_tol = DockTolerance(pos_tol=get("pos_tol", tol_base.pos_tol),
                             ang_tol=get("ang_tol", tol_base.ang_tol))

    return Scenario(
        name=get("name"), geometry=geometry, grid=grid, workspace=workspace,
        motion=motion, plant=plant, pid_set=pid_set, pid_custom=pid_custom,
        load=load, duration=get("duration"), window=get("window"),
        sigma_xy=get("sigma_xy"), sigma_gamma=get("sigma_gamma"),
        trials=get("trials"), seed=get("seed"), dock_tol=dock_tol,
        dock_cycles=get("cycles"), approach_offset=get("approach_offset"),
        demo_start=get("start"), demo_pick=get("pick"),
        demo_place=get("place"), dwell_pick=get("dwell_pick"),
        dwell_place=get("dwell_place"), overrides=tuple(overrides))


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; an empty document yields all defaults."""
    values: dict = {}
    overrides: list[tuple[str, str]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ScenarioError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if section is not None and key in _SCHEMA[section]:
            owner = section
        elif key in _KEY_SECTION:
            owner = _KEY_SECTION[key]
        else:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _SCHEMA[owner][key](value)
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: bad value for {key!r}: {exc}")
        overrides.append((key, value))
    try:
        return _build(values, overrides)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"invalid scenario: {exc}")


def load_scenario(path: str | None) -> Scenario:
    if path is None:
        return parse_scenario("")
    with open(path, "r", encoding="utf-8") as fp:
        return parse_scenario(fp.read())


def _emit_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        if v and isinstance(v[0], tuple):
            return "; ".join(f"{repr(a)},{repr(b)}" for a, b in v)
        return ",".join(repr(p) for p in v)
    if isinstance(v, bool):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def scenario_text(s: Scenario) -> str:
    """Serialize a scenario so parse(scenario_text(s)) resolves identically."""
    geo, grid, ws, mo, pl, ld = (s.geometry, s.grid, s.workspace, s.motion,
                                 s.plant, s.load)
    sections = {
        "scenario": {"name": s.name},
        "geometry": {"k": geo.k, "x_b": geo.x_b, "x_t": geo.x_t,
                     "z_b": geo.z_b, "z_t": geo.z_t, "z_m": geo.z_m,
                     "g_a": geo.g_a, "g_b": geo.g_b,
                     "d_min": geo.d_min, "d_max": geo.d_max,
                     "anchor_radius": geo.anchor_radius},
        "grid": {"nx": grid.nx, "ny": grid.ny, "tile_edge": grid.tile_edge,
                 "origin_x": grid.origin[0], "origin_y": grid.origin[1],
                 "anchors": grid.full_rotation_anchors},
        "workspace": {"z_min": ws.z_range[0], "z_max": ws.z_range[1],
                      "alpha_limit": ws.alpha_range[1],
                      "beta_limit": ws.beta_range[1],
                      "gamma_limit": ws.gamma_range[1],
                      "mover_gamma_local": ws.mover_gamma_local},
        "motion": {"v_max": mo.v_max, "a_max": mo.a_max, "w_max": mo.w_max,
                   "w_accel": mo.w_accel, "dt": pl.dt},
        "plant": {"inertia": pl.inertia, "damping": pl.damping,
                  "disturbance_torque": pl.disturbance_torque},
        "control": {"pid_set": s.pid_set, "duration": s.duration,
                    "window": s.window},
        "load": {"magbot_mass": ld.magbot_mass,
                 "payload_mass": ld.payload_mass,
                 "payload_x": ld.payload_x, "payload_y": ld.payload_y,
                 "half_length": ld.half_length},
        "noise": {"sigma_xy": s.sigma_xy, "sigma_gamma": s.sigma_gamma},
        "docking": {"pos_tol": s.dock_tol.pos_tol,
                    "ang_tol": s.dock_tol.ang_tol,
                    "cycles": s.dock_cycles,
                    "approach_offset": s.approach_offset},
        "demo": {"start": s.demo_start, "pick": s.demo_pick,
                 "place": s.demo_place, "dwell_pick": s.dwell_pick,
                 "dwell_place": s.dwell_place},
        "run": {"seed": s.seed, "trials": s.trials},
    }
    lines = []
    for sec, keys in sections.items():
        lines.append(f"[{sec}]")
        for key, value in keys.items():
            lines.append(f"{key} = {_emit_value(value)}")
        lines.append("")
    if s.pid_custom is not None:
        lines.append("[control]")
        for key in ("kp", "tn", "tv", "t1"):
            lines.append(f"{key} = {repr(getattr(s.pid_custom, key))}")
        lines.append("")
    return "\n".join(lines)
