"""Command-line surface tying the library into reproducible desk experiments.

Subcommands: ik, fk, workspace, traj, validate, simulate, payload,
calibrate, dock, demo. A scenario file (see :mod:`magbot.scenario`) supplies
defaults; the MAGBOT_CONFIG environment variable names the default scenario
path. Exit codes: 0 for success or a completed diagnosis, 1 for usage
errors, 2 for infeasible input.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import csvio, estimation
from .core import (MechanicalRangeError, MoverState, Pose6D,
                   UnreachableHeightError)
from .docking import DockPhase, run_dropoff, run_pickup
from .estimation import (calibrate_gear_ratio, calibration_sweep,
                         fit_payload_model, leave_one_out_accuracy,
                         synthetic_payload_datasets, WrenchDataset)
from .kinematics import (MoverPair, check_workspace, forward_kinematics,
                         inverse_kinematics)
from .scenario import Scenario, ScenarioError, load_scenario, scenario_text
from .simctrl import oscillation_metric, pid_preset, simulate_levitation
from .trajectory import (InfeasibleMotionError, circle_sine,
                         cos_alpha_sin_beta, extending_helix, sweep_axis,
                         trapezoid_profile, validate_trajectory)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _scenario(args) -> Scenario:
    path = args.config or os.environ.get("MAGBOT_CONFIG") or None
    return load_scenario(path)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _print_movers(pair: MoverPair):
    for name, m in (("mover1", pair.mover1), ("mover2", pair.mover2)):
        print(f"{name}: x={m.x:.4f} y={m.y:.4f} z={m.z:.4f} gamma={m.gamma:.4f}")


def cmd_ik(args) -> int:
    sc = _scenario(args)
    pose = Pose6D(args.x, args.y, args.z, args.alpha, args.beta, args.gamma)
    try:
        pair = inverse_kinematics(pose, sc.geometry)
    except UnreachableHeightError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _print_movers(pair)
    return EXIT_OK


def cmd_fk(args) -> int:
    sc = _scenario(args)
    pair = MoverPair(
        MoverState(args.x1, args.y1, sc.geometry.z_m, args.g1),
        MoverState(args.x2, args.y2, sc.geometry.z_m, args.g2))
    try:
        pose = forward_kinematics(pair, sc.geometry, turns=args.turns)
    except MechanicalRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"pose: x={pose.x:.4f} y={pose.y:.4f} z={pose.z:.4f} "
          f"alpha={pose.alpha:.4f} beta={pose.beta:.4f} gamma={pose.gamma:.4f}")
    return EXIT_OK


def cmd_workspace(args) -> int:
    sc = _scenario(args)
    pose = Pose6D(args.x, args.y, args.z, args.alpha, args.beta, args.gamma)
    report = check_workspace(pose, sc.workspace, sc.grid, sc.geometry)
    if report.valid:
        print("valid")
    else:
        print("invalid:")
        for v in report.violations:
            print(f"  {v}")
    ceiling = sc.geometry.max_height
    print(f"theoretical z ceiling: {ceiling:.4f} mm")
    return EXIT_OK


def _center_pose(sc: Scenario, z=None, gamma=0.0) -> Pose6D:
    x_lo, x_hi, y_lo, y_hi = sc.grid.xy_bounds()
    if z is None:
        z = 0.5 * sum(sc.workspace.z_range)
    return Pose6D(0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi), z, 0.0, 0.0, gamma)


def cmd_traj(args) -> int:
    sc = _scenario(args)
    common = dict(limits=sc.motion, workspace=sc.workspace, grid=sc.grid,
                  geom=sc.geometry)
    try:
        if args.kind == "sweep":
            traj = sweep_axis(args.axis, args.reps, **common)
        elif args.kind == "circle":
            center = _center_pose(sc, z=args.z)
            traj = circle_sine(center, args.radius, args.z_amp, args.cycles,
                               **common)
        elif args.kind == "helix":
            center = _center_pose(sc, z=args.z0)
            traj = extending_helix(center, args.r0, args.r_growth,
                                   args.z0, args.z1, args.turns, **common)
        else:  # tilt
            traj = cos_alpha_sin_beta(args.amp_a, args.amp_b, args.cycles,
                                      **common)
    except InfeasibleMotionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    fp, close = _open_out(args.out)
    try:
        csvio.write_trajectory(traj, fp)
    finally:
        if close:
            fp.close()
    print(f"samples: {len(traj)}  duration: {traj.duration:.3f} s",
          file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = _scenario(args)
    with open(args.file, "r", encoding="utf-8") as fp:
        traj = csvio.read_trajectory(fp, sc.geometry)
    if len(traj) < 2:  # stationary emission: no dynamics to check
        report = check_workspace(traj.samples[0].pose, sc.workspace,
                                 sc.grid, sc.geometry)
    else:
        pos_slack, ang_slack = csvio.quantization_slack(traj)
        report = validate_trajectory(traj, sc.motion, sc.workspace, sc.grid,
                                     sc.geometry, pos_slack=pos_slack,
                                     ang_slack=ang_slack)
    out = csvio.Report(sc.name)
    out.add("samples", float(len(traj)), "count")
    out.add("violations", float(len(report.violations)), "count",
            ok=report.valid)
    print(out.render(), end="")
    for v in report.violations[:20]:
        print(f"  {v}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = _scenario(args)
    pid = sc.pid_custom if (args.set is None and sc.pid_custom is not None) \
        else pid_preset(sc.pid_set if args.set is None else args.set)
    load = sc.load
    if args.payload is not None:
        from .simctrl import LoadCase
        load = LoadCase(magbot_mass=load.magbot_mass,
                        payload_mass=args.payload,
                        payload_x=args.payload_x, payload_y=args.payload_y,
                        half_length=load.half_length)
    trace = simulate_levitation(pid, sc.plant, load, args.duration or sc.duration,
                                sc.geometry)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fp:
            csvio.write_trace(trace, fp)
    m = oscillation_metric(trace, min(sc.window, len(trace) * trace.dt))
    n_head = max(1, int(round(sc.window / trace.dt)))
    head = trace.angle[:n_head]
    transient = float(head.max() - head.min()) if len(head) else 0.0
    settled = (not trace.diverged) and (m.peak_to_peak <= 0.1 * transient
                                        or transient == 0.0)
    report = csvio.Report(sc.name)
    report.add("peak_to_peak", m.peak_to_peak, "deg")
    report.add("initial_transient", transient, "deg")
    report.add("decay_ratio", m.decay_ratio, "ratio")
    report.add("dominant_period",
               m.dominant_period if m.dominant_period is not None else "n/a",
               "s")
    report.add("diverged", str(trace.diverged), "flag", ok=not trace.diverged)
    report.add("stable", str(settled), "flag", ok=settled)
    print(report.render(), end="")
    return EXIT_OK


def _load_datasets(args) -> list[WrenchDataset]:
    if args.synthetic:
        rng = np.random.default_rng(args.seed)
        return synthetic_payload_datasets(
            payload_mass=args.payload, samples_per_cell=args.samples,
            noise_sigma=args.noise, rng=rng)
    if not args.files:
        raise ScenarioError("payload needs telemetry files or --synthetic")
    labels = args.labels.split(",") if args.labels else None
    if labels is not None and len(labels) != len(args.files):
        raise ValueError(f"{len(args.files)} files but {len(labels)} labels")
    datasets = []
    for i, path in enumerate(args.files):
        if labels:
            label = labels[i]
        else:
            stem = os.path.splitext(os.path.basename(path))[0]
            label = stem
        with open(path, "r", encoding="utf-8") as fp:
            samples = csvio.read_wrench_samples(fp)
        datasets.append(WrenchDataset(label=label, samples=tuple(samples)))
    return datasets


def cmd_payload(args) -> int:
    sc = _scenario(args)
    try:
        datasets = _load_datasets(args)
        model, centroids = fit_payload_model(datasets)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    fp, close = _open_out(args.out)
    try:
        fp.write(csvio.PROJECTION_HEADER + "\n")
        for label in sorted(centroids):
            p = centroids[label]
            fp.write(f"{label},{csvio.fmt(p[0])},{csvio.fmt(p[1])}\n")
    finally:
        if close:
            fp.close()
    accuracy = leave_one_out_accuracy(datasets)
    report = csvio.Report(sc.name)
    for comp, imp in zip(estimation.WRENCH_COMPONENTS,
                         model.loadings_importance):
        report.add(f"importance_{comp}", float(imp), "share")
    top2 = np.argsort(model.loadings_importance)[::-1][:2]
    report.add("top_components",
               "+".join(estimation.WRENCH_COMPONENTS[i] for i in sorted(top2)),
               "names")
    report.add("loo_accuracy", accuracy, "fraction", ok=accuracy >= 0.95)
    print(report.render(), end="")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    sc = _scenario(args)
    report = csvio.Report(sc.name)
    if args.samples_file:
        pts = []
        with open(args.samples_file, "r", encoding="utf-8") as fp:
            header = fp.readline().strip()
            if header != "mover_gamma,platform_angle":
                raise SystemExit("expected header 'mover_gamma,platform_angle'")
            for line in fp:
                if line.strip():
                    g, a = line.strip().split(",")
                    pts.append((float(g), float(a)))
        fit = calibrate_gear_ratio(pts)
        report.add("slope", fit.slope, "deg/deg")
        report.add("intercept", fit.intercept, "deg")
        report.add("r_squared", fit.r_squared, "ratio")
    else:
        rng = np.random.default_rng(args.seed)
        hits = 0
        slopes = []
        for _ in range(args.runs):
            fit = calibrate_gear_ratio(
                calibration_sweep(args.slope, args.noise, rng))
            slopes.append(fit.slope)
            if abs(fit.slope - args.slope) <= args.tolerance:
                hits += 1
        rate = hits / args.runs
        report.add("true_slope", args.slope, "deg/deg")
        report.add("mean_slope", float(np.mean(slopes)), "deg/deg")
        report.add("within_tolerance", rate, "fraction", ok=rate >= 0.95)
    print(report.render(), end="")
    return EXIT_OK


def cmd_dock(args) -> int:
    sc = _scenario(args)
    err = (args.pos_error, args.ang_error)
    log_lines = [csvio.DOCKLOG_HEADER]
    successes = 0
    step = 0
    for _ in range(args.cycles or sc.dock_cycles):
        state, events = run_pickup(errors=[err] * 8, tol=sc.dock_tol)
        locked = state.phase is DockPhase.LOCKED
        if locked:
            state, ev2 = run_dropoff(state, errors=[err] * 8, tol=sc.dock_tol)
            events += ev2
        for e in events:
            log_lines.append(f"{step},{e.phase_from.value},{e.phase_to.value},"
                             f"{e.diagnostic or '-'}")
            step += 1
        if locked and state.phase is DockPhase.FREE and not state.carried:
            successes += 1
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fp:
            fp.write("\n".join(log_lines) + "\n")
    cycles = args.cycles or sc.dock_cycles
    report = csvio.Report(sc.name)
    report.add("cycles", float(cycles), "count")
    report.add("successes", float(successes), "count", ok=successes == cycles)
    print(report.render(), end="")
    return EXIT_OK


def throughput_per_minute(cycle_time_s: float) -> float:
    if cycle_time_s <= 0.0:
        raise ValueError("cycle time must be positive")
    return 60.0 / cycle_time_s


def _leg_duration(a, b, sc: Scenario) -> float:
    dist = math.dist(a, b)
    return trapezoid_profile(dist, sc.motion).duration


def cmd_demo(args) -> int:
    sc = _scenario(args)
    for name, p in (("start", sc.demo_start), ("pick", sc.demo_pick),
                    ("place", sc.demo_place)):
        pose = Pose6D(*p)
        rep = check_workspace(pose, sc.workspace, sc.grid, sc.geometry)
        if not rep.valid:
            print(f"error: demo {name} pose out of workspace: {rep}",
                  file=sys.stderr)
            return EXIT_INFEASIBLE
    t_approach = _leg_duration(sc.demo_start, sc.demo_pick, sc)
    t_deliver = _leg_duration(sc.demo_pick, sc.demo_place, sc)
    state, events = run_pickup(tol=sc.dock_tol)
    state, ev2 = run_dropoff(state, tol=sc.dock_tol)
    events += ev2
    cycle = t_approach + sc.dwell_pick + t_deliver + sc.dwell_place
    report = csvio.Report(sc.name)
    report.add("approach_time", t_approach, "s")
    report.add("deliver_time", t_deliver, "s")
    report.add("dwell_time", sc.dwell_pick + sc.dwell_place, "s")
    report.add("cycle_time", cycle, "s")
    report.add("throughput", float(f"{throughput_per_minute(cycle):.2f}"),
               "products/min")
    report.add("dock_transitions", float(len(events)), "count",
               ok=state.phase is DockPhase.FREE)
    print(report.render(), end="")
    return EXIT_OK


def cmd_config(args) -> int:
    sc = _scenario(args)
    print(scenario_text(sc), end="")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="magbot",
                     description="Two-mover maglev platform toolkit")
    parser.add_argument("--config", "-c", default=None,
                        help="scenario file (default: $MAGBOT_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ik", help="inverse kinematics of a platform pose")
    for name in ("x", "y", "z", "alpha", "beta", "gamma"):
        p.add_argument(name, type=float)
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser("fk", help="forward kinematics of a mover pair")
    for name in ("x1", "y1", "g1", "x2", "y2", "g2"):
        p.add_argument(name, type=float)
    p.add_argument("--turns", type=int, default=0,
                   help="reference turn count for yaw unwrapping")
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("workspace", help="validate a pose against the workspace")
    for name in ("x", "y", "z", "alpha", "beta", "gamma"):
        p.add_argument(name, type=float)
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("traj", help="generate a test motion as CSV")
    p.add_argument("--kind", choices=("sweep", "circle", "helix", "tilt"),
                   required=True)
    p.add_argument("--axis", choices=("x", "y", "z", "alpha", "beta", "gamma"),
                   default="z")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--radius", type=float, default=100.0)
    p.add_argument("--z-amp", type=float, default=20.0)
    p.add_argument("--z", type=float, default=None)
    p.add_argument("--cycles", type=int, default=1)
    p.add_argument("--r0", type=float, default=40.0)
    p.add_argument("--r-growth", type=float, default=25.0)
    p.add_argument("--z0", type=float, default=220.0)
    p.add_argument("--z1", type=float, default=265.0)
    p.add_argument("--turns", type=float, default=3.0)
    p.add_argument("--amp-a", type=float, default=10.0)
    p.add_argument("--amp-b", type=float, default=10.0)
    p.add_argument("--out", "-o", default="-")
    p.set_defaults(func=cmd_traj)

    p = sub.add_parser("validate", help="validate a trajectory CSV")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="simulate one mover tilt axis")
    p.add_argument("--set", type=int, choices=(0, 1, 2), default=None)
    p.add_argument("--payload", type=float, default=None)
    p.add_argument("--payload-x", type=float, default=0.0)
    p.add_argument("--payload-y", type=float, default=0.0)
    p.add_argument("--duration", type=float, default=None)
    p.add_argument("--trace", default=None, help="trace CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("payload", help="payload localization from wrench data")
    p.add_argument("files", nargs="*")
    p.add_argument("--labels", default=None,
                   help="comma-separated cell labels, one per file")
    p.add_argument("--synthetic", action="store_true")
    p.add_argument("--payload", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", default="-")
    p.set_defaults(func=cmd_payload)

    p = sub.add_parser("calibrate", help="coupling-ratio regression")
    p.add_argument("--samples-file", default=None,
                   help="CSV with header mover_gamma,platform_angle")
    p.add_argument("--slope", type=float, default=0.119)
    p.add_argument("--noise", type=float, default=0.2)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--tolerance", type=float, default=0.005)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("dock", help="run pickup/drop-off cycles")
    p.add_argument("--cycles", type=int, default=None)
    p.add_argument("--pos-error", type=float, default=0.0)
    p.add_argument("--ang-error", type=float, default=0.0)
    p.add_argument("--log", default=None, help="event log output path")
    p.set_defaults(func=cmd_dock)

    p = sub.add_parser("demo", help="pick, move, place cycle with throughput")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("config", help="print the resolved scenario")
    p.set_defaults(func=cmd_config)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnreachableHeightError, MechanicalRangeError,
            InfeasibleMotionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
