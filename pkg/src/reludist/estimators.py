"""Monte Carlo estimators, quadrature oracle, and the refutation test.

Each estimator is a pure function of its arguments including the master
seed: trial t uses the layer seed ``rng.derive_seed(master_seed, t)`` and
per-trial values are reduced in ascending trial index, so results do not
depend on any execution schedule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import backend, rng
from .errors import (
    AllTrialsDegenerate,
    DimensionMismatch,
    DomainError,
    HypothesesTooClose,
)
from .geometry import (
    PairGeometry,
    Variant,
    angle_between,
    expected_sq_dist,
    psi_of_angle,
    _check_angle,
)

SIMPSON_PANELS = 2 ** 14


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    stderr: float
    trials: int
    master_seed: int


class VerdictKind(enum.Enum):
    SUPPORTS_CORRECTED = "SupportsCorrected"
    SUPPORTS_ORIGINAL = "SupportsOriginal"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ZScoreVerdict:
    z_corrected: float
    z_original: float
    verdict: VerdictKind


def _reduce(values: np.ndarray, master_seed: int) -> MomentEstimate:
    trials = values.size
    if trials < 2:
        raise DomainError("at least 2 trials required for a standard error")
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(trials))
    return MomentEstimate(mean=mean, stderr=stderr, trials=trials, master_seed=master_seed)


def _check_pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    return x, y


def mc_sq_dist(x: np.ndarray, y: np.ndarray, m: int, trials: int,
               master_seed: int) -> MomentEstimate:
    """Monte Carlo estimate of E||rho(Mx) - rho(My)||^2 over fresh layers."""
    x, y = _check_pair(x, y)
    values = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        values[t] = backend.pair_trial(rng.derive_seed(master_seed, t), m, x, y)[0]
    return _reduce(values, master_seed)


def mc_output_cos(x: np.ndarray, y: np.ndarray, m: int, trials: int,
                  master_seed: int) -> tuple[MomentEstimate, int]:
    """Mean per-trial cosine of the output pair angle.

    Trials where either output vector is identically zero (possible only at
    tiny m) are excluded; the count of excluded trials is returned alongside
    the estimate.
    """
    x, y = _check_pair(x, y)
    if not np.any(x) or not np.any(y):
        raise DomainError("both inputs must be nonzero")
    values = []
    excluded = 0
    for t in range(trials):
        _, dot, nx2, ny2 = backend.pair_trial(rng.derive_seed(master_seed, t), m, x, y)
        if nx2 == 0.0 or ny2 == 0.0:
            excluded += 1
            continue
        values.append(min(1.0, max(-1.0, dot / math.sqrt(nx2 * ny2))))
    if not values:
        raise AllTrialsDegenerate(f"all {trials} trials had a zero output vector")
    return _reduce(np.asarray(values), master_seed), excluded


def cross_term_mc_2d(theta: float, trials: int, master_seed: int) -> MomentEstimate:
    """Planar oracle for the cross term.

    Samples a standard 2-D Gaussian g and estimates E[rho(g.u) rho(g.v)] for
    unit u = (1, 0), v = (cos t, sin t); the target is (cos t + psi(t))/2,
    independent of the closed-form derivation.
    """
    t = _check_angle(theta)
    if trials < 2:
        raise DomainError("at least 2 trials required")
    g = rng.standard_normals(master_seed, (trials, 2))
    a = np.maximum(g[:, 0], 0.0)
    b = np.maximum(g[:, 0] * math.cos(t) + g[:, 1] * math.sin(t), 0.0)
    return _reduce(a * b, master_seed)


def quadrature_cross_integral(theta: float) -> float:
    """Composite-Simpson value of the cross-term integral on [0, pi - t].

    Integrand sin(s) sin(s + t); 2^14 panels. Matches the closed form
    (pi/2) cos t + (sin t - t cos t)/2 within 1e-9 absolute.
    """
    t = _check_angle(theta)
    upper = math.pi - t
    if upper <= 0.0:
        return 0.0
    s = np.linspace(0.0, upper, 2 * SIMPSON_PANELS + 1)
    f = np.sin(s) * np.sin(s + t)
    h = upper / (2 * SIMPSON_PANELS)
    w = np.ones_like(f)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * (w @ f))


def refutation_test(x: np.ndarray, y: np.ndarray, m: int, trials: int,
                    master_seed: int, z_accept: float = 4.0,
                    z_reject: float = 10.0) -> tuple[ZScoreVerdict, MomentEstimate]:
    """Statistically discriminate the corrected (-psi) and original (+psi) claims.

    Raises HypothesesTooClose when the two claims differ by less than five
    standard errors of the run (always the case at psi < 0.01), reporting
    the trial count that would separate them.
    """
    x, y = _check_pair(x, y)
    geom = angle_between(x, y)
    gap = geom.norm_x * geom.norm_y * geom.psi
    if geom.psi < 0.01:
        raise HypothesesTooClose(
            f"psi = {geom.psi:.3g} < 0.01: the claims are statistically indistinguishable"
        )
    est = mc_sq_dist(x, y, m, trials, master_seed)
    if gap < 5.0 * est.stderr:
        required = math.ceil(trials * (5.0 * est.stderr / gap) ** 2)
        raise HypothesesTooClose(
            f"claim gap {gap:.3g} < 5 x stderr {est.stderr:.3g}; "
            f"need about {required} trials",
            required_trials=required,
        )
    corrected = expected_sq_dist(geom, Variant.CORRECTED).value
    original = expected_sq_dist(geom, Variant.ORIGINAL_CLAIM).value
    z_c = (est.mean - corrected) / est.stderr
    z_o = (est.mean - original) / est.stderr
    if abs(z_c) <= z_accept and abs(z_o) >= z_reject:
        kind = VerdictKind.SUPPORTS_CORRECTED
    elif abs(z_o) <= z_accept and abs(z_c) >= z_reject:
        kind = VerdictKind.SUPPORTS_ORIGINAL
    else:
        kind = VerdictKind.INCONCLUSIVE
    return ZScoreVerdict(z_corrected=z_c, z_original=z_o, verdict=kind), est


def mean_width_estimate(points: list[np.ndarray] | np.ndarray, g_samples: int,
                        master_seed: int) -> MomentEstimate:
    """Gaussian mean width of a finite point set.

    For each standard normal g, the per-sample value is
    sup over ordered pairs (x, y) of <g, x - y> = max <g, x> - min <g, y>.
    """
    from .errors import TooFewPoints

    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise TooFewPoints("mean width needs at least 2 points")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    g = rng.standard_normals(master_seed, (g_samples, pts.shape[1]))
    proj = g @ pts.T
    values = proj.max(axis=1) - proj.min(axis=1)
    return _reduce(values, master_seed)
