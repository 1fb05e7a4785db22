"""Discrete-time simulation of one mover rotational axis under PIDT1 control.

The controller is an ideal-form PID with integral time Tn, derivative time
Tv, and a first-order low-pass (time constant T1) on the derivative term:

    u = Kp * (e + (1/Tn) * integral(e) + Tv * d/dt e_filtered)

The plant is a linear second-order rotational axis,

    inertia * angle'' = u - damping * angle' + disturbance,

integrated with semi-implicit Euler, which stays stable for stiff gains and
is bit-deterministic. The plant constants are not measurements; they are
pinned so that the three stock parameter sets reproduce the observed
stability ordering (the stock set oscillates, the payload-tuned set settles).
Absolute torque magnitudes are therefore not meaningful outputs.

The module also carries the static wrench split of the loaded platform used
by the payload-localization analytics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GRAVITY, PlatformGeometry, Pose6D, Wrench, default_geometry
from .kinematics import mover_distance


@dataclass(frozen=True)
class PidParams:
    """PIDT1 gains: proportional Kp, integral time Tn, derivative time Tv,
    derivative filter time T1 (all times in seconds)."""

    kp: float
    tn: float
    tv: float
    t1: float

    def __post_init__(self):
        if min(self.kp, self.tn, self.tv, self.t1) <= 0.0:
            raise ValueError("all PIDT1 parameters must be positive")


# Stock parameter sets for the mover tilt axes: 0 is the system default,
# 1 is tuned for the unloaded platform, 2 for the loaded platform.
PID_PRESETS = {
    0: PidParams(35.0, 0.03, 0.015, 0.001),
    1: PidParams(25.0, 0.12, 0.04, 0.015),
    2: PidParams(22.0, 0.12, 0.06, 0.01),
}


def pid_preset(index: int) -> PidParams:
    try:
        return PID_PRESETS[index]
    except KeyError:
        raise ValueError(f"unknown parameter set {index}, expected 0, 1 or 2")


@dataclass(frozen=True)
class PidState:
    integral: float = 0.0
    deriv: float = 0.0
    prev_error: float = 0.0


def pid_step(state: PidState, params: PidParams, error: float, dt: float,
             windup_limit: float = math.inf) -> tuple[float, PidState]:
    """One controller update; returns the torque command and the new state.

    The integral contribution Kp/Tn * integral is clamped to windup_limit
    (torque units) so a saturated axis cannot wind up without bound.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    integral = state.integral + error * dt
    i_cap = windup_limit * params.tn / params.kp
    integral = min(max(integral, -i_cap), i_cap)
    raw_d = (error - state.prev_error) / dt
    alpha = dt / (params.t1 + dt)
    deriv = state.deriv + alpha * (raw_d - state.deriv)
    u = params.kp * (error + integral / params.tn + params.tv * deriv)
    return u, PidState(integral=integral, deriv=deriv, prev_error=error)


@dataclass(frozen=True)
class PlantParams:
    """Second-order rotational plant constants.

    inertia and damping are effective values in torque units per deg/s^2 and
    deg/s; disturbance_torque is the static load torque per kg of mass the
    axis supports. Defaults are pinned by a stability scan, see module note.
    """

    inertia: float = 0.03
    damping: float = 0.5
    disturbance_torque: float = 100.0
    dt: float = 1e-3

    def __post_init__(self):
        if self.inertia <= 0.0 or self.dt <= 0.0:
            raise ValueError("inertia and dt must be positive")
        if self.damping < 0.0:
            raise ValueError("damping must be >= 0")


@dataclass(frozen=True)
class LoadCase:
    """Mass situation on the platform: the platform itself plus one payload
    at (payload_x, payload_y) relative to the platform center."""

    magbot_mass: float = 1.09
    payload_mass: float = 0.0
    payload_x: float = 0.0
    payload_y: float = 0.0
    half_length: float = 120.0

    def __post_init__(self):
        if self.magbot_mass < 0.0 or self.payload_mass < 0.0:
            raise ValueError("masses must be >= 0")
        if abs(self.payload_x) > self.half_length or abs(self.payload_y) > self.half_length:
            raise ValueError(
                f"payload offset outside the platform (half length "
                f"{self.half_length} mm)")


def mover1_supported_mass(load: LoadCase, d_m: float) -> float:
    """Mass share resting on mover 1 under the beam split at distance d_m."""
    return load.magbot_mass / 2.0 + load.payload_mass * (0.5 - load.payload_x / d_m)


@dataclass(frozen=True)
class SimTrace:
    """Uniformly sampled (t, angle, torque) record of one simulated axis."""

    dt: float
    time: np.ndarray
    angle: np.ndarray
    torque: np.ndarray
    diverged: bool = False

    def __len__(self):
        return len(self.time)


def simulate_levitation(pid: PidParams, plant: PlantParams, load: LoadCase,
                        duration: float,
                        geom: PlatformGeometry | None = None) -> SimTrace:
    """Simulate the tilt axis of mover 1 holding setpoint zero while the
    static load torque steps in at t=0.

    The disturbance is plant.disturbance_torque times the mass supported by
    mover 1 at the lowest platform height (where the analysis pose sits).
    A runaway beyond 1e6 deg stops the run and flags the trace as diverged
    instead of raising.
    """
    if duration <= 0.0:
        raise ValueError("duration must be positive")
    geom = geom or default_geometry()
    tau_d = plant.disturbance_torque * mover1_supported_mass(load, geom.d_max)
    windup = 10.0 * abs(tau_d) if tau_d != 0.0 else math.inf

    n = int(round(duration / plant.dt))
    time = np.empty(n + 1)
    angle = np.empty(n + 1)
    torque = np.empty(n + 1)
    theta = 0.0
    omega = 0.0
    state = PidState()
    diverged = False
    steps = 0
    for i in range(n + 1):
        u, state = pid_step(state, pid, -theta, plant.dt, windup)
        time[i] = i * plant.dt
        angle[i] = theta
        torque[i] = u
        steps = i + 1
        if abs(theta) > 1e6:
            diverged = True
            break
        acc = (u - plant.damping * omega + tau_d) / plant.inertia
        omega += acc * plant.dt
        theta += omega * plant.dt
    return SimTrace(plant.dt, time[:steps], angle[:steps], torque[:steps],
                    diverged)


@dataclass(frozen=True)
class OscillationMetrics:
    peak_to_peak: float
    decay_ratio: float
    dominant_period: float | None


def oscillation_metric(trace: SimTrace, window: float) -> OscillationMetrics:
    """Oscillation figures of a trace.

    peak_to_peak is max-min of the angle over the trailing window;
    decay_ratio is the mean ratio of successive local extremum magnitudes
    of the detrended angle; dominant_period is twice the mean spacing of
    zero crossings of the detrended angle, or None with fewer than two
    crossings.
    """
    if window <= 0.0:
        raise ValueError("window must be positive")
    n_win = int(round(window / trace.dt))
    if len(trace) < n_win:
        raise ValueError("trace shorter than the requested window")
    tail = trace.angle[len(trace) - n_win:]
    p2p = float(tail.max() - tail.min()) if len(tail) else 0.0

    centered = trace.angle - float(np.mean(trace.angle))
    ext_idx = [i for i in range(1, len(centered) - 1)
               if (centered[i] - centered[i - 1]) * (centered[i + 1] - centered[i]) < 0.0]
    mags = [abs(centered[i]) for i in ext_idx if abs(centered[i]) > 1e-15]
    if len(mags) >= 2:
        ratios = [mags[i + 1] / mags[i] for i in range(len(mags) - 1)]
        decay = float(np.mean(ratios))
    else:
        decay = 0.0

    signs = np.sign(centered)
    cross = np.nonzero(signs[1:] * signs[:-1] < 0)[0]
    if len(cross) >= 2:
        period = 2.0 * float(np.mean(np.diff(cross))) * trace.dt
    else:
        period = None
    return OscillationMetrics(p2p, decay, period)


def static_wrenches(pose: Pose6D, load: LoadCase,
                    geom: PlatformGeometry | None = None) -> tuple[Wrench, Wrench]:
    """Static wrench each mover's controller applies to hold the loaded
    platform at the given pose.

    Beam split of the weight along the mover axis, the leg-angle horizontal
    reaction, and an even split of the payload's roll torque; all other
    components are zero in statics.
    """
    geom = geom or default_geometry()
    d = mover_distance(pose.z, geom)
    fz1 = GRAVITY * (load.magbot_mass / 2.0
                     + load.payload_mass * (0.5 - load.payload_x / d))
    fz2 = GRAVITY * (load.magbot_mass / 2.0
                     + load.payload_mass * (0.5 + load.payload_x / d))
    u = d / 2.0 - geom.half_width
    h = math.sqrt(geom.k * geom.k - u * u)
    fx1 = -fz1 * u / h
    fx2 = +fz2 * u / h
    tx = GRAVITY * load.payload_mass * load.payload_y / 2.0
    return (Wrench(fx=fx1, fz=fz1, tx=tx), Wrench(fx=fx2, fz=fz2, tx=tx))
