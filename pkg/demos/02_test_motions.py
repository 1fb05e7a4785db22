#!/usr/bin/env python3
# Generate the standard test motions (axis sweeps, circle with z-sine,
# extending helix, tilt wave) and validate them against the dynamic limits.

import math
import os

from magbot import (Pose6D, TileGrid, default_geometry, experiment_limits,
                    inverse_kinematics, validate_trajectory)
from magbot.trajectory import (circle_sine, cos_alpha_sin_beta,
                               extending_helix, sweep_axis)
from magbot import csvio

geom = default_geometry()
limits = experiment_limits()  # 0.5 m/s, 10 m/s^2, 20 deg/s
center = Pose6D(480.0, 360.0, 242.5)
out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)


def describe(name, traj, **validate_kw):
    report = validate_trajectory(traj, limits, **validate_kw)
    speeds = []
    for a, b in zip(traj.samples, traj.samples[1:]):
        speeds.append(math.hypot(b.movers.mover1.x - a.movers.mover1.x,
                                 b.movers.mover1.y - a.movers.mover1.y) / traj.dt)
    peak = max(speeds) if speeds else 0.0
    print(f"{name:<12} {len(traj):>6} samples  {traj.duration:7.2f} s  "
          f"peak mover speed {peak:7.1f} mm/s  "
          f"{'valid' if report.valid else report}")
    path = os.path.join(out_dir, f"{name}.csv")
    with open(path, "w") as fp:
        csvio.write_trajectory(traj, fp)
    return path


print("Each motion is generated geometrically, time-parameterized with a")
print("trapezoidal phase profile, and uniformly slowed until the mover")
print("velocity/acceleration limits hold.\n")

describe("z_sweep", sweep_axis("z", 1, limits))
describe("x_sweep", sweep_axis("x", 1, limits))
describe("circle", circle_sine(center, 100.0, 20.0, 1, limits))
describe("helix", extending_helix(center, 40.0, 25.0, 220.0, 265.0, 3, limits))

# The tilt wave swings the mover yaw by amp/g (about 84 deg at 10 deg of
# tilt), so it only runs where the movers may rotate freely. Anchor the
# grid at the mover positions of the chosen center pose.
pair = inverse_kinematics(center, geom)
grid = TileGrid(full_rotation_anchors=((pair.mover1.x, pair.mover1.y),
                                       (pair.mover2.x, pair.mover2.y)))
traj = cos_alpha_sin_beta(10.0, 10.0, 1, limits, grid=grid, center=center)
describe("tilt_wave", traj, grid=grid)
g1 = [s.movers.mover1.gamma for s in traj.samples]
print(f"\ntilt wave mover-1 yaw span: [{min(g1):.1f}, {max(g1):.1f}] deg")
print(f"CSV files written to {out_dir}/")
