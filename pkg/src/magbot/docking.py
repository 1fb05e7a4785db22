"""Deterministic state machine for autonomous platform pick-up and drop-off.

The dovetail/spring-pin mechanics are abstracted to tolerance-gated phase
transitions; there is no contact simulation. Pickup walks
FREE -> APPROACH -> ALIGNED -> ENGAGING -> LOCKED and drop-off walks
LOCKED -> AT_STATION -> INSERTING -> UNLOCKED -> RETRACTING -> FREE.
An alignment error beyond tolerance during the contact phases falls back to
the approach phase with a lag-error diagnostic instead of failing. The pin
state and the carried flag are locked together by construction, so no
transition sequence can yield a carried platform without an engaged pin.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import (Pose6D, default_geometry, default_grid, default_limits)
from .kinematics import inverse_kinematics
from .trajectory import (DEFAULT_DT, MotionLimits, Trajectory,
                         TrajectorySample, _profile_and_scale)


class DockPhase(enum.Enum):
    FREE = "FREE"
    APPROACH = "APPROACH"
    ALIGNED = "ALIGNED"
    ENGAGING = "ENGAGING"
    LOCKED = "LOCKED"
    AT_STATION = "AT_STATION"
    INSERTING = "INSERTING"
    UNLOCKED = "UNLOCKED"
    RETRACTING = "RETRACTING"


_PIN_PHASES = {DockPhase.LOCKED, DockPhase.AT_STATION, DockPhase.INSERTING}
_PICKUP_NEXT = {
    DockPhase.FREE: DockPhase.APPROACH,
    DockPhase.APPROACH: DockPhase.ALIGNED,
    DockPhase.ALIGNED: DockPhase.ENGAGING,
    DockPhase.ENGAGING: DockPhase.LOCKED,
}
_DROPOFF_NEXT = {
    DockPhase.LOCKED: DockPhase.AT_STATION,
    DockPhase.AT_STATION: DockPhase.INSERTING,
    DockPhase.INSERTING: DockPhase.UNLOCKED,
    DockPhase.UNLOCKED: DockPhase.RETRACTING,
    DockPhase.RETRACTING: DockPhase.FREE,
}


class DockSequenceError(ValueError):
    """A transition was requested from a phase it cannot start from."""


@dataclass(frozen=True)
class DockState:
    phase: DockPhase = DockPhase.FREE
    pin_engaged: bool = False
    carried: bool = False

    def __post_init__(self):
        if self.pin_engaged and self.phase not in _PIN_PHASES:
            raise ValueError(f"pin cannot be engaged in phase {self.phase.value}")
        if self.carried != self.pin_engaged:
            raise ValueError("carried flag must track pin engagement")


@dataclass(frozen=True)
class DockTolerance:
    """Alignment gate for the contact phases. The defaults are placeholders
    for 'attached relatively precisely'; tune them to the actual station."""

    pos_tol: float = 0.5
    ang_tol: float = 0.5

    def __post_init__(self):
        if self.pos_tol <= 0.0 or self.ang_tol <= 0.0:
            raise ValueError("tolerances must be positive")

    def within(self, error: tuple[float, float]) -> bool:
        pos, ang = error
        return abs(pos) <= self.pos_tol and abs(ang) <= self.ang_tol


@dataclass(frozen=True)
class DockEvent:
    phase_from: DockPhase
    phase_to: DockPhase
    diagnostic: str | None = None

    def __str__(self):
        note = self.diagnostic or "-"
        return f"{self.phase_from.value} -> {self.phase_to.value} ({note})"


def _lag_diagnostic(error, tol):
    pos, ang = error
    return (f"lag error: position {abs(pos):.3f} mm / angle {abs(ang):.3f} deg "
            f"exceeds tolerance ({tol.pos_tol} mm, {tol.ang_tol} deg); retrying")


def step_pickup(state: DockState, mover_pose_error: tuple[float, float],
                tol: DockTolerance | None = None) -> tuple[DockState, DockEvent]:
    """Advance the pickup sequence by one phase.

    The ALIGNED and ENGAGING phases require the mover pose error to stay
    inside the tolerance; otherwise the sequence drops back to APPROACH
    with a lag-error diagnostic.
    """
    tol = tol or DockTolerance()
    if state.phase not in _PICKUP_NEXT:
        raise DockSequenceError(
            f"cannot run pickup from phase {state.phase.value}")
    target = _PICKUP_NEXT[state.phase]
    if target in (DockPhase.ALIGNED, DockPhase.ENGAGING, DockPhase.LOCKED) \
            and not tol.within(mover_pose_error):
        return (DockState(DockPhase.APPROACH),
                DockEvent(state.phase, DockPhase.APPROACH,
                          _lag_diagnostic(mover_pose_error, tol)))
    locked = target is DockPhase.LOCKED
    return (DockState(target, pin_engaged=locked, carried=locked),
            DockEvent(state.phase, target))


def step_dropoff(state: DockState, mover_pose_error: tuple[float, float],
                 tol: DockTolerance | None = None) -> tuple[DockState, DockEvent]:
    """Advance the drop-off sequence by one phase.

    Insertion into the station forks is tolerance-gated like pickup; a
    misaligned insert falls back to AT_STATION. Retraction while the pin is
    still engaged is a mechanism violation and raises.
    """
    tol = tol or DockTolerance()
    if state.phase not in _DROPOFF_NEXT:
        raise DockSequenceError(
            f"cannot run drop-off from phase {state.phase.value}")
    if state.phase in (DockPhase.LOCKED, DockPhase.AT_STATION,
                       DockPhase.INSERTING) and not state.carried:
        raise DockSequenceError("drop-off requires a carried platform")
    if state.phase is DockPhase.RETRACTING and state.pin_engaged:
        raise DockSequenceError("cannot retract with the pin engaged")
    target = _DROPOFF_NEXT[state.phase]
    if target in (DockPhase.INSERTING, DockPhase.UNLOCKED) \
            and not tol.within(mover_pose_error):
        return (DockState(DockPhase.AT_STATION, pin_engaged=True, carried=True),
                DockEvent(state.phase, DockPhase.AT_STATION,
                          _lag_diagnostic(mover_pose_error, tol)))
    pin = target in _PIN_PHASES
    return (DockState(target, pin_engaged=pin, carried=pin),
            DockEvent(state.phase, target))


def run_pickup(errors=None, tol: DockTolerance | None = None,
               max_steps: int = 64) -> tuple[DockState, list[DockEvent]]:
    """Drive a pickup from FREE to LOCKED, retrying on lag errors.

    errors is an optional iterable of per-step (mm, deg) alignment errors;
    missing entries count as perfect alignment.
    """
    errors = iter(errors or ())
    state, events = DockState(), []
    for _ in range(max_steps):
        err = next(errors, (0.0, 0.0))
        state, event = step_pickup(state, err, tol)
        events.append(event)
        if state.phase is DockPhase.LOCKED:
            return state, events
    raise DockSequenceError(f"pickup did not lock within {max_steps} steps")


def run_dropoff(state: DockState, errors=None,
                tol: DockTolerance | None = None,
                max_steps: int = 64) -> tuple[DockState, list[DockEvent]]:
    """Drive a drop-off from LOCKED back to FREE, retrying on lag errors."""
    errors = iter(errors or ())
    events = []
    for _ in range(max_steps):
        err = next(errors, (0.0, 0.0))
        state, event = step_dropoff(state, err, tol)
        events.append(event)
        if state.phase is DockPhase.FREE:
            return state, events
    raise DockSequenceError(f"drop-off did not release within {max_steps} steps")


def dock_trajectory(station_pose: Pose6D, approach_offset: float,
                    limits: MotionLimits | None = None,
                    workspace=None, grid=None, geom=None,
                    rail_axis_deg: float | None = None,
                    dt: float = DEFAULT_DT) -> Trajectory:
    """Straight-line approach along the station's rail axis.

    Starts approach_offset millimeters out along the rail (the station's
    local x by default) and ends at the engagement pose, profiled with the
    trapezoidal machinery. Raises when any sample leaves the workspace.
    """
    if approach_offset < 0.0:
        raise ValueError("approach offset must be >= 0")
    limits = limits or MotionLimits()
    workspace = workspace or default_limits()
    grid = grid or default_grid()
    geom = geom or default_geometry()
    heading = math.radians(station_pose.gamma if rail_axis_deg is None
                           else rail_axis_deg)
    ux, uy = math.cos(heading), math.sin(heading)

    def pose_of(travel):
        back = approach_offset - travel
        return Pose6D(station_pose.x - back * ux, station_pose.y - back * uy,
                      station_pose.z, station_pose.alpha, station_pose.beta,
                      station_pose.gamma)

    if approach_offset == 0.0:
        pose = pose_of(0.0)
        return Trajectory(dt, (TrajectorySample(0.0, pose,
                                                inverse_kinematics(pose, geom)),))
    return _profile_and_scale(pose_of, approach_offset, limits, workspace,
                              grid, geom, dt)
