"""Closed-form geometry of a vector pair under a random ReLU layer.

All functions here are exact real-analysis identities evaluated in double
precision: the angle-distortion term psi, the corrected and original-claim
expected squared output distances, the arc-cosine-kernel cross term, the
expected output cosine, and the shrinkage envelope. Everything is pure and
reentrant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, ZeroVector

#: Domain violations smaller than this are treated as rounding and clamped.
CLAMP_TOL = 1e-12


class Variant(enum.Enum):
    CORRECTED = "Corrected"
    ORIGINAL_CLAIM = "OriginalClaim"


@dataclass(frozen=True)
class PairGeometry:
    """Derived quantities of a pair (x, y): norms, angle, psi, distance."""

    norm_x: float
    norm_y: float
    cos_theta: float
    theta: float
    psi: float
    sq_dist: float


@dataclass(frozen=True)
class DistanceClaim:
    variant: Variant
    value: float


def _check_angle(theta: float) -> float:
    if theta < 0.0:
        if theta < -CLAMP_TOL:
            raise DomainError(f"angle {theta} outside [0, pi]")
        return 0.0
    if theta > math.pi:
        if theta > math.pi + CLAMP_TOL:
            raise DomainError(f"angle {theta} outside [0, pi]")
        return math.pi
    return theta


def psi_of_angle(theta: float) -> float:
    """(1/pi)(sin t - t cos t): the angle-dependent distortion, 0 at 0, 1 at pi."""
    t = _check_angle(theta)
    return (math.sin(t) - t * math.cos(t)) / math.pi


def pair_geometry_from_angle(theta: float, norm_x: float = 1.0, norm_y: float = 1.0) -> PairGeometry:
    """PairGeometry of two vectors with given norms at the given angle."""
    t = _check_angle(theta)
    if norm_x < 0.0 or norm_y < 0.0:
        raise DomainError("norms must be nonnegative")
    c = math.cos(t)
    return PairGeometry(
        norm_x=norm_x,
        norm_y=norm_y,
        cos_theta=c,
        theta=t,
        psi=psi_of_angle(t),
        sq_dist=norm_x * norm_x + norm_y * norm_y - 2.0 * norm_x * norm_y * c,
    )


def angle_between(x: np.ndarray, y: np.ndarray) -> PairGeometry:
    """PairGeometry of two concrete vectors.

    The cosine is clamped into [-1, 1] before arccos; dot/norm rounding can
    push it past 1 by ~1e-16.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    if x.size < 1:
        raise DimensionMismatch("vectors must have dimension >= 1")
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("angle undefined for a zero vector")
    c = min(1.0, max(-1.0, float(x @ y) / (nx * ny)))
    t = math.acos(c)
    return PairGeometry(
        norm_x=nx,
        norm_y=ny,
        cos_theta=c,
        theta=t,
        psi=psi_of_angle(t),
        sq_dist=nx * nx + ny * ny - 2.0 * nx * ny * c,
    )


def expected_sq_dist(geom: PairGeometry, variant: Variant) -> DistanceClaim:
    """Expected squared output distance under the given hypothesis.

    Corrected: 0.5*||x-y||^2 - ||x||*||y||*psi. The original published claim
    carries the cross term with the opposite sign (+psi).
    """
    cross = geom.norm_x * geom.norm_y * geom.psi
    if variant is Variant.CORRECTED:
        return DistanceClaim(variant, 0.5 * geom.sq_dist - cross)
    return DistanceClaim(variant, 0.5 * geom.sq_dist + cross)


def cross_term_closed_form(theta: float, norm_x: float, norm_y: float, m: int) -> float:
    """E[rho(m_i.x) rho(m_i.y)] for one row of the layer.

    Equals (||x|| ||y|| / 2m)(cos t + psi(t)); the equivalent integral form
    (||x|| ||y|| / m pi)[(pi/2) cos t + (sin t - t cos t)/2] agrees to 1e-14.
    """
    t = _check_angle(theta)
    if norm_x < 0.0 or norm_y < 0.0:
        raise DomainError("norms must be nonnegative")
    if m < 1:
        raise DomainError("m must be a positive integer")
    return norm_x * norm_y / (2.0 * m) * (math.cos(t) + psi_of_angle(t))


def expected_output_cos(theta: float) -> float:
    """cos t + psi(t): expected cosine of the output pair angle, in [0, 1]."""
    t = _check_angle(theta)
    return math.cos(t) + psi_of_angle(t)


def angle_map(theta: float) -> float:
    """Expected single-layer evolution of the pair angle: arccos(cos t + psi)."""
    return math.acos(min(1.0, max(-1.0, expected_output_cos(theta))))


def iterate_angle_map(theta: float, depth: int) -> float:
    t = _check_angle(theta)
    for _ in range(depth):
        t = angle_map(t)
    return t


def shrinkage_bounds(geom: PairGeometry) -> tuple[float, float]:
    """Analytic envelope of the corrected expectation: [d^2/4, d^2/2]."""
    return 0.25 * geom.sq_dist, 0.5 * geom.sq_dist


def unit_shrinkage_ratio(theta: float) -> float:
    """Expected output-to-input squared distance ratio for a unit-norm pair.

    0.5 - psi(t)/(2(1 - cos t)); strictly decreasing from 1/2 (t -> 0,
    removable 0/0 singularity) to 1/4 (t = pi).
    """
    t = _check_angle(theta)
    if t < 1e-6:
        return 0.5
    return 0.5 - psi_of_angle(t) / (2.0 * (1.0 - math.cos(t)))
