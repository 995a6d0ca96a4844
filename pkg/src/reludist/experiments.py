"""Experiment sweeps and the synthetic class-separation study.

Every experiment is a pure function of its configuration and master seed.
Angle-grid pairs are unit vectors synthesized in the fixed 2-plane spanned
by the first two coordinate axes of the ambient space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend, rng
from .errors import DimensionMismatch, DomainError, InfeasibleGeometry
from .estimators import MomentEstimate, _reduce, mc_sq_dist
from .geometry import (
    Variant,
    _check_angle,
    expected_sq_dist,
    iterate_angle_map,
    pair_geometry_from_angle,
    shrinkage_bounds,
)

#: Total rejected center placements allowed before declaring infeasibility.
CENTER_REJECTION_CAP = 100_000

_BOUND_TOL = 1e-12


@dataclass(frozen=True)
class SweepRecord:
    """One row of an experiment sweep.

    ``kind`` selects the populated fields: "distance" and "concentration"
    records carry both analytic distance claims and the shrinkage envelope,
    "angle" records carry the predicted output cosine instead.
    """

    kind: str
    theta: float
    m: int
    trials: int
    layer_count: int
    mc_mean: float
    mc_stderr: float
    analytic_corrected: Optional[float] = None
    analytic_original: Optional[float] = None
    bound_lower: Optional[float] = None
    bound_upper: Optional[float] = None
    rms_dev: Optional[float] = None
    max_dev: Optional[float] = None
    predicted_cos: Optional[float] = None

    def __post_init__(self):
        if self.analytic_corrected is not None:
            if not (
                self.bound_lower - _BOUND_TOL
                <= self.analytic_corrected
                <= self.bound_upper + _BOUND_TOL
            ):
                raise DomainError(
                    f"corrected value {self.analytic_corrected} escapes the "
                    f"envelope [{self.bound_lower}, {self.bound_upper}]"
                )


def planar_pair(theta: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit pair at angle theta in the (e1, e2) plane of R^n."""
    t = _check_angle(theta)
    if n < 2:
        raise DimensionMismatch("ambient dimension must be >= 2")
    x = np.zeros(n)
    y = np.zeros(n)
    x[0] = 1.0
    y[0] = math.cos(t)
    y[1] = math.sin(t)
    return x, y


def _distance_record(theta: float, m: int, est: MomentEstimate, kind: str = "distance",
                     rms_dev: float | None = None, max_dev: float | None = None) -> SweepRecord:
    geom = pair_geometry_from_angle(theta)
    lo, hi = shrinkage_bounds(geom)
    return SweepRecord(
        kind=kind,
        theta=theta,
        m=m,
        trials=est.trials,
        layer_count=1,
        mc_mean=est.mean,
        mc_stderr=est.stderr,
        analytic_corrected=expected_sq_dist(geom, Variant.CORRECTED).value,
        analytic_original=expected_sq_dist(geom, Variant.ORIGINAL_CLAIM).value,
        bound_lower=lo,
        bound_upper=hi,
        rms_dev=rms_dev,
        max_dev=max_dev,
    )


def theta_sweep(theta_grid: list[float] | np.ndarray, m: int, trials: int,
                master_seed: int, n: int = 64) -> list[SweepRecord]:
    """Empirical vs analytic squared output distance over an angle grid."""
    records = []
    for k, theta in enumerate(theta_grid):
        x, y = planar_pair(float(theta), n)
        est = mc_sq_dist(x, y, m, trials, rng.derive_seed(master_seed, k))
        records.append(_distance_record(float(theta), m, est))
    return records


def _sq_dist_values(x: np.ndarray, y: np.ndarray, m: int, trials: int,
                    master_seed: int) -> np.ndarray:
    values = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        values[t] = backend.pair_trial(rng.derive_seed(master_seed, t), m, x, y)[0]
    return values


def concentration_sweep(m_list: list[int], theta: float, trials: int,
                        master_seed: int, n: int = 64) -> list[SweepRecord]:
    """Per-width deviation of realizations from the corrected expectation."""
    if any(b <= a for a, b in zip(m_list, m_list[1:])):
        raise DomainError("m_list must be strictly increasing")
    x, y = planar_pair(theta, n)
    corrected = expected_sq_dist(pair_geometry_from_angle(theta), Variant.CORRECTED).value
    records = []
    for k, m in enumerate(m_list):
        seed = rng.derive_seed(master_seed, k)
        values = _sq_dist_values(x, y, int(m), trials, seed)
        dev = values - corrected
        records.append(
            _distance_record(
                theta,
                int(m),
                _reduce(values, seed),
                kind="concentration",
                rms_dev=float(np.sqrt(np.mean(dev * dev))),
                max_dev=float(np.max(np.abs(dev))),
            )
        )
    return records


def fit_loglog_slope(records: list[SweepRecord]) -> Optional[float]:
    """Least-squares slope of log(rms_dev) against log(m); None below 2 points."""
    pts = [(r.m, r.rms_dev) for r in records if r.rms_dev is not None and r.rms_dev > 0]
    if len(pts) < 2:
        return None
    ms, devs = zip(*pts)
    return float(np.polyfit(np.log(ms), np.log(devs), 1)[0])


@dataclass(frozen=True)
class ClassConfig:
    ambient_dim: int
    classes: int
    points_per_class: int
    intra_angle_max: float
    inter_angle_min: float
    master_seed: int

    def __post_init__(self):
        if not (0.0 < self.intra_angle_max < self.inter_angle_min <= math.pi):
            raise DomainError(
                "need 0 < intra_angle_max < inter_angle_min <= pi, got "
                f"{self.intra_angle_max} and {self.inter_angle_min}"
            )
        if self.ambient_dim < 2 or self.classes < 1 or self.points_per_class < 1:
            raise DomainError("ambient_dim >= 2, classes >= 1, points_per_class >= 1")


@dataclass(frozen=True)
class SeparationReport:
    """Pre/post pairwise distance statistics; None marks an empty pair group."""

    pre_intra_mean_dist: Optional[float]
    pre_intra_max_dist: Optional[float]
    pre_inter_mean_dist: Optional[float]
    pre_inter_min_dist: Optional[float]
    post_intra_mean_dist: Optional[float]
    post_intra_max_dist: Optional[float]
    post_inter_mean_dist: Optional[float]
    post_inter_min_dist: Optional[float]
    ratio_intra_mean: Optional[float]
    ratio_inter_mean: Optional[float]
    intra_pairs: int
    inter_pairs: int
    trials: int


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def generate_classes(config: ClassConfig) -> tuple[np.ndarray, np.ndarray]:
    """Unit-norm labeled points: slerp from each class center toward a random
    orthogonal direction by an angle uniform in [0, intra_angle_max].

    Class centers are placed greedily on the sphere with rejection; placement
    gives up after CENTER_REJECTION_CAP rejected draws.
    """
    rg = np.random.Generator(np.random.Philox(key=config.master_seed))
    n = config.ambient_dim
    centers: list[np.ndarray] = []
    rejections = 0
    while len(centers) < config.classes:
        c = rg.standard_normal(n)
        norm = np.linalg.norm(c)
        if norm < 1e-12:
            continue
        c /= norm
        if all(
            math.acos(min(1.0, max(-1.0, float(c @ prev)))) >= config.inter_angle_min
            for prev in centers
        ):
            centers.append(c)
        else:
            rejections += 1
            if rejections > CENTER_REJECTION_CAP:
                raise InfeasibleGeometry(
                    f"placed {len(centers)}/{config.classes} centers at "
                    f"separation >= {config.inter_angle_min:.4g} rad in R^{n} "
                    f"after {rejections} rejections"
                )
    points = np.empty((config.classes * config.points_per_class, n))
    labels = np.empty(config.classes * config.points_per_class, dtype=np.int64)
    idx = 0
    for label, c in enumerate(centers):
        for _ in range(config.points_per_class):
            u = rg.standard_normal(n)
            u -= (u @ c) * c
            while np.linalg.norm(u) < 1e-12:
                u = rg.standard_normal(n)
                u -= (u @ c) * c
            u = _unit(u)
            alpha = rg.uniform(0.0, config.intra_angle_max)
            points[idx] = math.cos(alpha) * c + math.sin(alpha) * u
            labels[idx] = label
            idx += 1
    return points, labels


def _pair_sq_dists(z: np.ndarray) -> np.ndarray:
    """Squared distances of all unordered pairs i < j, row-major pair order."""
    sq = np.sum(z * z, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (z @ z.T)
    iu = np.triu_indices(z.shape[0], k=1)
    return np.maximum(d2[iu], 0.0)


def separation_statistics(points: np.ndarray, labels: np.ndarray, m: int,
                          layers: int, trials: int, master_seed: int) -> SeparationReport:
    """Pre/post distance statistics and group-wise shrinkage ratios.

    The shrinkage ratio of a pair is its post-network squared distance
    (averaged over trials) divided by its input squared distance.
    """
    points = np.asarray(points, dtype=np.float64)
    labels = np.asarray(labels)
    if layers < 1:
        raise DomainError("layers must be >= 1")
    n = points.shape[1]
    iu = np.triu_indices(points.shape[0], k=1)
    intra = labels[iu[0]] == labels[iu[1]]
    pre_sq = _pair_sq_dists(points)

    post_sq_sum = np.zeros_like(pre_sq)
    post_dist_sum = np.zeros_like(pre_sq)
    for t in range(trials):
        trial_seed = rng.derive_seed(master_seed, t)
        z = points
        in_dim = n
        for ell in range(layers):
            ent = backend.gaussian_entries(rng.derive_seed(trial_seed, ell), m, in_dim)
            z = np.maximum(z @ ent.T, 0.0)
            in_dim = m
        sq = _pair_sq_dists(z)
        post_sq_sum += sq
        post_dist_sum += np.sqrt(sq)
    post_sq = post_sq_sum / trials
    post_dist = post_dist_sum / trials
    pre_dist = np.sqrt(pre_sq)

    def group(mask: np.ndarray):
        if not np.any(mask):
            return None, None, None, None
        pre_d = pre_dist[mask]
        post_d = post_dist[mask]
        ok = pre_sq[mask] > 0.0
        ratio = float(np.mean(post_sq[mask][ok] / pre_sq[mask][ok])) if np.any(ok) else None
        return pre_d, post_d, ratio, int(mask.sum())

    pre_i, post_i, ratio_i, n_i = group(intra)
    pre_o, post_o, ratio_o, n_o = group(~intra)
    return SeparationReport(
        pre_intra_mean_dist=float(np.mean(pre_i)) if pre_i is not None else None,
        pre_intra_max_dist=float(np.max(pre_i)) if pre_i is not None else None,
        pre_inter_mean_dist=float(np.mean(pre_o)) if pre_o is not None else None,
        pre_inter_min_dist=float(np.min(pre_o)) if pre_o is not None else None,
        post_intra_mean_dist=float(np.mean(post_i)) if post_i is not None else None,
        post_intra_max_dist=float(np.max(post_i)) if post_i is not None else None,
        post_inter_mean_dist=float(np.mean(post_o)) if post_o is not None else None,
        post_inter_min_dist=float(np.min(post_o)) if post_o is not None else None,
        ratio_intra_mean=ratio_i,
        ratio_inter_mean=ratio_o,
        intra_pairs=n_i or 0,
        inter_pairs=n_o or 0,
        trials=trials,
    )


def separation_experiment(config: ClassConfig, m: int, layers: int, trials: int,
                          master_seed: int) -> SeparationReport:
    """Synthetic class-separation study on angle-controlled data."""
    points, labels = generate_classes(config)
    return separation_statistics(points, labels, m, layers, trials, master_seed)


def depth_sweep(theta: float, widths: list[int], layers_max: int, trials: int,
                master_seed: int, n: int = 64) -> list[SweepRecord]:
    """Empirical output cosine per depth vs the iterated angle map.

    A single width in ``widths`` is repeated across layers; depth 0 returns
    the input cosine exactly.
    """
    t = _check_angle(theta)
    if not widths or any(w < 1 for w in widths):
        raise DomainError("widths must be positive")
    x, y = planar_pair(t, n)
    records = [
        SweepRecord(
            kind="angle", theta=t, m=int(widths[0]), trials=trials, layer_count=0,
            mc_mean=math.cos(t), mc_stderr=0.0, predicted_cos=math.cos(t),
        )
    ]
    for depth in range(1, layers_max + 1):
        depth_seed = rng.derive_seed(master_seed, depth)
        values = []
        for trial in range(trials):
            trial_seed = rng.derive_seed(depth_seed, trial)
            zx, zy = x, y
            in_dim = n
            for ell in range(depth):
                w = int(widths[min(ell, len(widths) - 1)])
                ent = backend.gaussian_entries(rng.derive_seed(trial_seed, ell), w, in_dim)
                zx = np.maximum(ent @ zx, 0.0)
                zy = np.maximum(ent @ zy, 0.0)
                in_dim = w
            nx = np.linalg.norm(zx)
            ny = np.linalg.norm(zy)
            if nx == 0.0 or ny == 0.0:
                continue
            values.append(min(1.0, max(-1.0, float(zx @ zy) / (nx * ny))))
        est = _reduce(np.asarray(values), depth_seed)
        records.append(
            SweepRecord(
                kind="angle", theta=t, m=int(widths[0]), trials=est.trials,
                layer_count=depth, mc_mean=est.mean, mc_stderr=est.stderr,
                predicted_cos=math.cos(iterate_angle_map(t, depth)),
            )
        )
    return records
