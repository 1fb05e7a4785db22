"""Wrench-difference analytics, PCA payload localization, calibration
regression, and Monte-Carlo accuracy propagation.

The payload-localization feature is the per-dataset mean difference between
the two movers' wrenches,

    delta_F = (1/n) * sum_j (F_j1 - F_j2)   in R^6,

projected to 2D with a PCA fitted from first principles (sample covariance
plus symmetric eigendecomposition), so results are bit-reproducible and
carry no statistics-library dependency. Monte-Carlo operations take an
explicit seeded generator so parallel sharding stays deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (DegenerateDataError, GRAVITY, PlatformGeometry, Pose6D,
                   Wrench, default_geometry)
from .kinematics import inverse_kinematics, mover_distance
from .simctrl import LoadCase, static_wrenches

WRENCH_COMPONENTS = ("fx", "fy", "fz", "tx", "ty", "tz")

# The nine payload cells on the platform, by sign of the x/y offset.
PAYLOAD_LABELS = ("x-y-", "x0y-", "x+y-",
                  "x-y0", "x0y0", "x+y0",
                  "x-y+", "x0y+", "x+y+")

_CELL_SIGNS = {"-": -1.0, "0": 0.0, "+": 1.0}


def cell_offsets(label: str, spacing: float) -> tuple[float, float]:
    """(payload_x, payload_y) of a 9-cell label at the given grid spacing."""
    if label not in PAYLOAD_LABELS:
        raise ValueError(f"unknown payload cell {label!r}")
    return _CELL_SIGNS[label[1]] * spacing, _CELL_SIGNS[label[3]] * spacing


@dataclass(frozen=True)
class WrenchDataset:
    """Labeled stream of simultaneous (mover1, mover2) wrench samples."""

    label: str
    samples: tuple[tuple[Wrench, Wrench], ...]

    def __post_init__(self):
        if self.label not in PAYLOAD_LABELS:
            raise ValueError(f"unknown payload cell {self.label!r}")
        if not self.samples:
            raise ValueError("dataset must contain at least one sample pair")


def delta_wrench(dataset: WrenchDataset) -> np.ndarray:
    """Componentwise mean of mover1-minus-mover2 wrenches."""
    diffs = np.array([np.subtract(w1.astuple(), w2.astuple())
                      for w1, w2 in dataset.samples])
    return diffs.mean(axis=0)


@dataclass(frozen=True)
class PcaModel:
    """Two-component PCA of wrench-difference rows.

    components has orthonormal rows; explained_variance is non-increasing;
    loadings_importance is the variance-weighted squared-loading share of
    each wrench component, normalized to sum 1.
    """

    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    loadings_importance: np.ndarray


def pca_fit(rows: np.ndarray) -> PcaModel:
    """Fit the 2-component PCA on (n, 6) wrench-difference rows.

    Raises DegenerateDataError when the rows carry no variance at all.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(WRENCH_COMPONENTS):
        raise ValueError(f"expected (n, 6) rows, got {rows.shape}")
    if rows.shape[0] < 2:
        raise ValueError("PCA needs at least 2 rows")
    mean = rows.mean(axis=0)
    centered = rows - mean
    cov = centered.T @ centered / (rows.shape[0] - 1)
    if not cov.any():
        raise DegenerateDataError("all rows identical; no variance to model")
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:2]
    variance = np.clip(evals[order], 0.0, None)
    comps = evecs[:, order].T.copy()
    for i in range(2):
        dominant = np.argmax(np.abs(comps[i]))
        if comps[i, dominant] < 0.0:
            comps[i] = -comps[i]
    importance = variance @ comps ** 2
    return PcaModel(mean=mean, components=comps,
                    explained_variance=variance,
                    loadings_importance=importance / importance.sum())


def pca_project(model: PcaModel, v: np.ndarray) -> np.ndarray:
    """Project one 6-vector (or a stack of them) into the 2D model space."""
    return (np.asarray(v, dtype=float) - model.mean) @ model.components.T


def classify_payload(model: PcaModel, centroids: dict[str, np.ndarray],
                     v: np.ndarray) -> str:
    """Label of the nearest centroid in projected space.

    Ties break toward the lexicographically smallest label.
    """
    if len(centroids) < 2:
        raise ValueError("need at least two distinct centroids")
    p = pca_project(model, v)
    best, best_d = None, math.inf
    for label in sorted(centroids):
        d = float(np.sum((p - np.asarray(centroids[label])) ** 2))
        if d < best_d:
            best, best_d = label, d
    return best


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float


def calibrate_gear_ratio(samples) -> RegressionFit:
    """Ordinary least squares of platform angle on mover yaw.

    The slope magnitude estimates the platform-per-mover coupling ratio.
    samples is an iterable of (mover_gamma, platform_angle) pairs in degrees.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two (mover_gamma, platform_angle) pairs")
    x, y = pts[:, 0], pts[:, 1]
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx == 0.0:
        raise DegenerateDataError("all mover angles identical; slope undefined")
    sxy = float(np.sum((x - x.mean()) * (y - y.mean())))
    syy = float(np.sum((y - y.mean()) ** 2))
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    r2 = (sxy * sxy) / (sxx * syy) if syy > 0.0 else 0.0
    return RegressionFit(slope=slope, intercept=intercept, r_squared=r2)


def calibration_sweep(true_ratio: float = 0.119,
                      noise_sigma: float = 0.0,
                      rng: np.random.Generator | None = None,
                      start: float = 0.0, stop: float = 130.0,
                      step: float = 10.0):
    """Synthetic calibration sweep: mover yaw in fixed increments, platform
    angle = ratio * yaw plus optional Gaussian measurement noise."""
    n = int(round((stop - start) / step)) + 1
    gammas = start + step * np.arange(n)
    angles = true_ratio * gammas
    if noise_sigma > 0.0:
        if rng is None:
            raise ValueError("noisy sweep needs an explicit rng")
        angles = angles + rng.normal(0.0, noise_sigma, size=n)
    return list(zip(gammas.tolist(), angles.tolist()))


def propagate_accuracy(pose: Pose6D, mover_noise: tuple[float, float],
                       trials: int,
                       geom: PlatformGeometry | None = None,
                       rng: np.random.Generator | None = None) -> np.ndarray:
    """Monte-Carlo pose accuracy under mover positioning noise.

    Perturbs the pose's mover commands with independent zero-mean Gaussian
    noise (sigma_xy on each mover's x and y, sigma_gamma on each mover's
    yaw), runs the forward kinematics, and returns the mean absolute
    deviation per platform axis as (x, y, z, alpha, beta, gamma).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    geom = geom or default_geometry()
    rng = rng or np.random.default_rng(0)
    sigma_xy, sigma_gamma = mover_noise
    pair = inverse_kinematics(pose, geom)

    x1 = pair.mover1.x + rng.normal(0.0, sigma_xy, trials) if sigma_xy > 0 else np.full(trials, pair.mover1.x)
    y1 = pair.mover1.y + rng.normal(0.0, sigma_xy, trials) if sigma_xy > 0 else np.full(trials, pair.mover1.y)
    x2 = pair.mover2.x + rng.normal(0.0, sigma_xy, trials) if sigma_xy > 0 else np.full(trials, pair.mover2.x)
    y2 = pair.mover2.y + rng.normal(0.0, sigma_xy, trials) if sigma_xy > 0 else np.full(trials, pair.mover2.y)
    g1 = pair.mover1.gamma + rng.normal(0.0, sigma_gamma, trials) if sigma_gamma > 0 else np.full(trials, pair.mover1.gamma)
    g2 = pair.mover2.gamma + rng.normal(0.0, sigma_gamma, trials) if sigma_gamma > 0 else np.full(trials, pair.mover2.gamma)

    # vectorized forward kinematics
    dx, dy = x2 - x1, y2 - y1
    d = np.hypot(dx, dy)
    half = d / 2.0 - geom.half_width
    radicand = geom.k * geom.k - half * half
    if np.any(radicand < 0.0):
        raise ValueError("mover noise pushed the pair outside mechanical range")
    z = geom.shoulder_z + np.sqrt(radicand)
    gamma = np.degrees(np.arctan2(dy, dx))
    gamma = gamma + 360.0 * np.round((pose.gamma - gamma) / 360.0)
    alpha = geom.g_a * (gamma - g1)
    beta = geom.g_b * (gamma - g2)
    cx, cy = (x1 + x2) / 2.0, (y1 + y2) / 2.0

    actual = np.column_stack([cx, cy, z, alpha, beta, gamma])
    target = np.array(pose.astuple())
    return np.abs(actual - target).mean(axis=0)


def synthetic_payload_datasets(payload_mass: float = 0.5,
                               spacing: float = 60.0,
                               samples_per_cell: int = 1,
                               noise_sigma: float = 0.0,
                               pose: Pose6D | None = None,
                               magbot_mass: float = 1.09,
                               geom: PlatformGeometry | None = None,
                               rng: np.random.Generator | None = None,
                               lateral_gain: float = 0.7,
                               roll_share: float = 0.501
                               ) -> list[WrenchDataset]:
    """Emulated wrench telemetry for the 9 payload cells.

    The base wrenches come from the ideal beam statics. Two small
    transmission effects are layered on top, without which the per-cell
    mean differences would collapse (the ideal horizontal reactions sum to
    a constant difference and the ideal roll split cancels exactly):

    * lateral_gain: the off-center weight shift leaks into the horizontal
      reactions, so the x difference tracks payload_x;
    * roll_share: the tilt rack on mover 1's side takes a slightly larger
      share of the payload's roll torque, so the tx difference tracks
      payload_y. The share is close to one half, which keeps the row
      spacing along this direction small.

    Optional iid Gaussian noise (noise_sigma, same units per component) is
    added to every sample of both movers.
    """
    geom = geom or default_geometry()
    pose = pose or Pose6D(480.0, 360.0, 205.0)
    if noise_sigma > 0.0 and rng is None:
        raise ValueError("noisy datasets need an explicit rng")
    d = mover_distance(pose.z, geom)

    datasets = []
    for label in PAYLOAD_LABELS:
        px, py = cell_offsets(label, spacing)
        load = LoadCase(magbot_mass=magbot_mass, payload_mass=payload_mass,
                        payload_x=px, payload_y=py)
        w1, w2 = static_wrenches(pose, load, geom)
        shift = lateral_gain * GRAVITY * payload_mass * px / d
        roll = GRAVITY * payload_mass * py
        base1 = np.array(Wrench(fx=w1.fx - shift, fz=w1.fz,
                                tx=roll * roll_share).astuple())
        base2 = np.array(Wrench(fx=w2.fx + shift, fz=w2.fz,
                                tx=roll * (1.0 - roll_share)).astuple())
        rows = []
        for _ in range(samples_per_cell):
            s1, s2 = base1, base2
            if noise_sigma > 0.0:
                s1 = s1 + rng.normal(0.0, noise_sigma, 6)
                s2 = s2 + rng.normal(0.0, noise_sigma, 6)
            rows.append((Wrench(*s1), Wrench(*s2)))
        datasets.append(WrenchDataset(label=label, samples=tuple(rows)))
    return datasets


def fit_payload_model(datasets) -> tuple[PcaModel, dict[str, np.ndarray]]:
    """PCA model plus projected centroids from labeled wrench datasets."""
    labels = [ds.label for ds in datasets]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate dataset labels")
    rows = np.array([delta_wrench(ds) for ds in datasets])
    model = pca_fit(rows)
    centroids = {ds.label: pca_project(model, row)
                 for ds, row in zip(datasets, rows)}
    return model, centroids


def leave_one_out_accuracy(datasets) -> float:
    """Leave-one-sample-out nearest-centroid accuracy over all samples.

    For every sample pair, the model and centroids are refitted with that
    pair removed from its dataset, and the held-out pair's wrench
    difference is classified.
    """
    total = correct = 0
    for i, ds in enumerate(datasets):
        for j, (w1, w2) in enumerate(ds.samples):
            if len(ds.samples) > 1:
                reduced = WrenchDataset(ds.label, ds.samples[:j] + ds.samples[j + 1:])
                train = [reduced if k == i else other
                         for k, other in enumerate(datasets)]
            else:
                train = list(datasets)
            model, centroids = fit_payload_model(train)
            held_out = np.subtract(w1.astuple(), w2.astuple())
            if classify_payload(model, centroids, held_out) == ds.label:
                correct += 1
            total += 1
    return correct / total
