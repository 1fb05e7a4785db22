"""Two-mover maglev platform toolkit: kinematics, trajectories, low-level
control simulation, wrench analytics, and docking."""

from .core import (GRAVITY, MoverState, PlatformGeometry, Pose6D, TileGrid,
                   Wrench, WorkspaceLimits, default_geometry, default_grid,
                   default_limits, normalize_angle)
from .kinematics import (MoverPair, WorkspaceReport, check_workspace,
                         forward_kinematics, inverse_kinematics,
                         mover_distance, platform_height,
                         reachable_z_interval)
from .trajectory import (MotionLimits, Trajectory, TrajectorySample,
                         circle_sine, cos_alpha_sin_beta, experiment_limits,
                         extending_helix, sweep_axis, trapezoid_profile,
                         validate_trajectory)
from .simctrl import (LoadCase, PID_PRESETS, PidParams, PlantParams, SimTrace,
                      oscillation_metric, pid_step, simulate_levitation,
                      static_wrenches)
from .estimation import (PcaModel, RegressionFit, WrenchDataset,
                         calibrate_gear_ratio, classify_payload, delta_wrench,
                         pca_fit, pca_project, propagate_accuracy,
                         synthetic_payload_datasets)
from .docking import (DockPhase, DockState, DockTolerance, dock_trajectory,
                      step_dropoff, step_pickup)

__version__ = "0.1.0"
