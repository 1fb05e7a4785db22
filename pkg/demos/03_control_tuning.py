#!/usr/bin/env python3
# Compare the three low-level control parameter sets on the simulated
# mover tilt axis with a 1 kg payload at the platform center.
#
# Set 0 is the system default and oscillates strongly once the loaded
# platform levitates; sets 1 and 2 are retuned (set 2 for the loaded
# platform) and settle. The same signature shows up in the commanded
# torques, which is what makes payload-aware retuning possible without
# any external measurement system.

import numpy as np

from magbot import (LoadCase, PID_PRESETS, PlantParams, oscillation_metric,
                    simulate_levitation)

plant = PlantParams()
load = LoadCase(payload_mass=1.0)
print(f"plant: inertia={plant.inertia}, damping={plant.damping}, "
      f"per-kg disturbance={plant.disturbance_torque} N.mm, dt={plant.dt} s")
print(f"load: platform {load.magbot_mass} kg + payload {load.payload_mass} kg "
      "at the center\n")

print(f"{'set':>3} {'Kp':>6} {'Tn':>6} {'Tv':>6} {'T1':>6} "
      f"{'p2p tail (deg)':>15} {'decay':>7} {'period (s)':>11} {'torque span':>12}")
traces = {}
for i, params in PID_PRESETS.items():
    trace = simulate_levitation(params, plant, load, duration=4.0)
    traces[i] = trace
    m = oscillation_metric(trace, window=1.0)
    period = f"{m.dominant_period:.3f}" if m.dominant_period else "none"
    span = trace.torque.max() - trace.torque.min()
    print(f"{i:>3} {params.kp:>6} {params.tn:>6} {params.tv:>6} {params.t1:>6} "
          f"{m.peak_to_peak:>15.6f} {m.decay_ratio:>7.3f} {period:>11} "
          f"{span:>12.1f}")

p0 = oscillation_metric(traces[0], 1.0).peak_to_peak
p2 = oscillation_metric(traces[2], 1.0).peak_to_peak
print(f"\nset 0 vs set 2 trailing peak-to-peak ratio: {p0 / p2:.0f}x")

# simple text sketch of the first second of each angle trace
print("\nangle over the first second (one char per 25 ms):")
for i, trace in traces.items():
    samples = trace.angle[:1000:25]
    lo, hi = -2.5, 2.5
    chars = []
    for v in samples:
        level = int(np.clip((v - lo) / (hi - lo), 0, 1) * 8)
        chars.append(" .:-=+*#%"[level])
    print(f"  set {i}: {''.join(chars)}")
