#!/usr/bin/env python3
# Tour of the platform kinematics: the mover-distance law, inverse and
# forward kinematics, and workspace checking.

import numpy as np

from magbot import (Pose6D, check_workspace, default_geometry,
                    forward_kinematics, inverse_kinematics, mover_distance,
                    reachable_z_interval)

geom = default_geometry()

print("=== mover distance law ===")
print("The platform height is set purely by how far apart the movers sit.")
for z in (284.8, 280.0, 242.5, 205.0):
    print(f"  z = {z:6.1f} mm  ->  d = {mover_distance(z, geom):9.4f} mm")
print(f"height band under the planner distance limits: "
      f"{reachable_z_interval(geom)}")
print(f"theoretical ceiling (legs vertical): {geom.max_height} mm")

print()
print("=== inverse kinematics ===")
pose = Pose6D(480.0, 360.0, 205.0, alpha=5.0, beta=-3.0, gamma=30.0)
pair = inverse_kinematics(pose, geom)
print(f"pose {pose.astuple()}")
print(f"  mover1: x={pair.mover1.x:9.4f} y={pair.mover1.y:9.4f} "
      f"gamma={pair.mover1.gamma:9.4f}")
print(f"  mover2: x={pair.mover2.x:9.4f} y={pair.mover2.y:9.4f} "
      f"gamma={pair.mover2.gamma:9.4f}")
print("Note the yaw compensation: both mover yaws carry the 30 deg platform")
print("yaw, plus the tilt demands divided by the coupling ratios "
      f"(5/{geom.g_a} = {5/geom.g_a:.1f} deg of mover yaw for 5 deg of tilt).")

print()
print("=== forward kinematics round trip ===")
back = forward_kinematics(pair, geom)
err = np.abs(np.subtract(back.astuple(), pose.astuple())).max()
print(f"FK(IK(pose)) max per-axis error: {err:.2e}")

print()
print("=== workspace checks ===")
for candidate in (Pose6D(480, 360, 205.0),
                  Pose6D(480, 360, 300.0),
                  Pose6D(480, 360, 242.5, alpha=20.0),
                  Pose6D(100, 360, 205.0)):
    report = check_workspace(candidate, geom=geom)
    print(f"  {str(candidate.astuple()):<42} -> {report}")
