"""CSV formats and report rendering for the command-line surface.

All CSVs use fixed headers, '.' decimal separator, newline termination, and
deterministic formatting at 6 significant digits so golden files diff
cleanly. Re-ingesting a 6-digit file loses up to half a unit in the last
place per value; :func:`quantization_slack` quantifies that for the
trajectory validator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import MoverState, Pose6D, Wrench
from .kinematics import MoverPair
from .simctrl import SimTrace
from .trajectory import Trajectory, TrajectorySample

TRAJECTORY_HEADER = ("t,x_p,y_p,z_p,alpha,beta,gamma,"
                     "x_m1,y_m1,gamma_m1,x_m2,y_m2,gamma_m2")
TRACE_HEADER = "t,angle_deg,torque"
WRENCH_HEADER = ("t,fx1,fy1,fz1,tx1,ty1,tz1,"
                 "fx2,fy2,fz2,tx2,ty2,tz2")
PROJECTION_HEADER = "label,pc1,pc2"
DOCKLOG_HEADER = "timestamp,phase_from,phase_to,diagnostic"


def fmt(x: float) -> str:
    """Fixed 6-significant-digit rendering with '.' decimal separator."""
    return f"{x:.6g}"


def write_trajectory(traj: Trajectory, fp) -> None:
    fp.write(TRAJECTORY_HEADER + "\n")
    for s in traj.samples:
        p, m1, m2 = s.pose, s.movers.mover1, s.movers.mover2
        fp.write(",".join(fmt(v) for v in (
            s.t, p.x, p.y, p.z, p.alpha, p.beta, p.gamma,
            m1.x, m1.y, m1.gamma, m2.x, m2.y, m2.gamma)) + "\n")


def read_trajectory(fp, geom=None) -> Trajectory:
    """Rebuild a trajectory from its CSV. The mover flight altitude is not
    stored in the file and comes from the geometry."""
    from .core import default_geometry
    geom = geom or default_geometry()
    header = fp.readline().strip()
    if header != TRAJECTORY_HEADER:
        raise ValueError(f"unexpected trajectory header: {header!r}")
    rows = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        vals = [float(v) for v in line.split(",")]
        if len(vals) != 13:
            raise ValueError(f"expected 13 columns, got {len(vals)}")
        rows.append(vals)
    if not rows:
        raise ValueError("trajectory file has no samples")
    dt = ((rows[-1][0] - rows[0][0]) / (len(rows) - 1)) if len(rows) > 1 else 1e-3
    samples = []
    for vals in rows:
        pose = Pose6D(*vals[1:7])
        pair = MoverPair(
            MoverState(vals[7], vals[8], geom.z_m, vals[9]),
            MoverState(vals[10], vals[11], geom.z_m, vals[12]))
        samples.append(TrajectorySample(vals[0], pose, pair))
    return Trajectory(dt, tuple(samples))


def quantization_slack(traj: Trajectory) -> tuple[float, float]:
    """(position, angle) half-quanta of the trajectory's 6-digit rendering."""
    pos = ang = 0.0
    for s in traj.samples:
        for v in (s.movers.mover1.x, s.movers.mover1.y,
                  s.movers.mover2.x, s.movers.mover2.y):
            pos = max(pos, abs(v))
        for v in (s.movers.mover1.gamma, s.movers.mover2.gamma):
            ang = max(ang, abs(v))

    def half_quantum(m):
        if m <= 0.0:
            return 0.0
        return 10.0 ** (math.floor(math.log10(m)) - 5) / 2.0

    return half_quantum(pos), half_quantum(ang)


def write_trace(trace: SimTrace, fp) -> None:
    fp.write(TRACE_HEADER + "\n")
    for t, a, u in zip(trace.time, trace.angle, trace.torque):
        fp.write(f"{fmt(t)},{fmt(a)},{fmt(u)}\n")


def read_wrench_samples(fp) -> list[tuple[Wrench, Wrench]]:
    header = fp.readline().strip()
    if header != WRENCH_HEADER:
        raise ValueError(f"unexpected wrench telemetry header: {header!r}")
    samples = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        vals = [float(v) for v in line.split(",")]
        if len(vals) != 13:
            raise ValueError(f"expected 13 columns, got {len(vals)}")
        samples.append((Wrench(*vals[1:7]), Wrench(*vals[7:13])))
    if not samples:
        raise ValueError("wrench telemetry file has no samples")
    return samples


def write_wrench_samples(samples, fp, dt: float = 1e-3) -> None:
    fp.write(WRENCH_HEADER + "\n")
    for i, (w1, w2) in enumerate(samples):
        vals = (i * dt,) + w1.astuple() + w2.astuple()
        fp.write(",".join(fmt(v) for v in vals) + "\n")


@dataclass
class Metric:
    name: str
    value: float | str
    unit: str
    ok: bool | None = None


@dataclass
class Report:
    """Named metric table with optional pass/fail flags; every metric
    carries a unit."""

    scenario: str
    metrics: list[Metric] = field(default_factory=list)

    def add(self, name: str, value, unit: str, ok: bool | None = None):
        if not unit:
            raise ValueError(f"metric {name!r} needs a unit")
        self.metrics.append(Metric(name, value, unit, ok))
        return self

    def render(self) -> str:
        lines = [f"report: {self.scenario}"]
        for m in self.metrics:
            value = fmt(m.value) if isinstance(m.value, float) else str(m.value)
            flag = "" if m.ok is None else ("  [PASS]" if m.ok else "  [FAIL]")
            lines.append(f"  {m.name:<28} {value:>14} {m.unit}{flag}")
        return "\n".join(lines) + "\n"
