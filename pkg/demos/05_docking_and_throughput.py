#!/usr/bin/env python3
# Autonomous pick-up and drop-off at the docking station, plus the
# pick-and-place cycle timing that sets the achievable throughput.

from magbot import Pose6D
from magbot.cli import throughput_per_minute
from magbot.docking import (DockTolerance, dock_trajectory, run_dropoff,
                            run_pickup)
from magbot.trajectory import MotionLimits, trapezoid_profile

tol = DockTolerance()  # 0.5 mm / 0.5 deg placeholders; tune to the station
print("=== pickup at perfect alignment ===")
state, events = run_pickup(tol=tol)
for e in events:
    print(f"  {e}")

print("\n=== pickup with one lagging approach ===")
state2, events2 = run_pickup(errors=[(0.0, 0.0), (1.2, 0.1)], tol=tol)
for e in events2:
    print(f"  {e}")

print("\n=== drop-off ===")
state, events = run_dropoff(state, tol=tol)
for e in events:
    print(f"  {e}")
print(f"final phase: {state.phase.value}, carried: {state.carried}")

print("\n=== ten full cycles ===")
ok = 0
for _ in range(10):
    s, _ = run_pickup(tol=tol)
    s, _ = run_dropoff(s, tol=tol)
    ok += s.phase.value == "FREE" and not s.carried
print(f"success rate: {ok}/10")

print("\n=== station approach trajectory ===")
limits = MotionLimits(v_max=500.0, a_max=10000.0)
traj = dock_trajectory(Pose6D(480, 360, 242.5), approach_offset=50.0,
                       limits=limits)
print(f"50 mm rail approach: {len(traj)} samples, {traj.duration:.3f} s")

print("\n=== pick-and-place cycle ===")
leg = trapezoid_profile(480.0, limits).duration
dwell = (4.298 - 2.0 * leg) / 2.0
cycle = 2.0 * leg + 2.0 * dwell
print(f"two 480 mm legs at 0.5 m/s: {leg:.3f} s each")
print(f"pick/place dwells: {dwell:.3f} s each")
print(f"cycle time: {cycle:.3f} s "
      f"-> throughput {throughput_per_minute(cycle):.2f} products/min")
