"""Acceptance suite: the exit criteria of the artifact, runnable via the
``selftest`` CLI subcommand or through tests/test_acceptance.py.

Each criterion is a self-contained check at a pinned tolerance and prints
one pass/fail line when run through :func:`run_all`.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng
from .estimators import (
    VerdictKind,
    cross_term_mc_2d,
    mc_output_cos,
    mc_sq_dist,
    mean_width_estimate,
    quadrature_cross_integral,
    refutation_test,
)
from .experiments import (
    ClassConfig,
    concentration_sweep,
    fit_loglog_slope,
    planar_pair,
    separation_experiment,
)
from .geometry import (
    Variant,
    angle_between,
    expected_output_cos,
    expected_sq_dist,
    pair_geometry_from_angle,
    psi_of_angle,
    shrinkage_bounds,
    unit_shrinkage_ratio,
)
from .layers import relu_forward, sample_layer, sq_dist_realization


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _unit_vector(seed: int, n: int) -> np.ndarray:
    v = rng.standard_normals(seed, (n,))
    return v / np.linalg.norm(v)


def criterion_1_antipodal_exact() -> tuple[bool, str]:
    """100 seeded draws: ||rho(Mx) - rho(M(-x))||^2 == ||Mx||^2 to rel 1e-12."""
    n, m = 64, 1024
    worst = 0.0
    for k in range(100):
        layer = sample_layer(n, m, rng.derive_seed(101, k))
        x = _unit_vector(rng.derive_seed(202, k), n)
        lhs = sq_dist_realization(layer, x, -x)
        mx = layer.entries @ x
        rhs = float(mx @ mx)
        worst = max(worst, abs(lhs - rhs) / rhs)
    geom = pair_geometry_from_angle(math.pi)
    corrected = expected_sq_dist(geom, Variant.CORRECTED).value
    original = expected_sq_dist(geom, Variant.ORIGINAL_CLAIM).value
    ok = worst <= 1e-12 and abs(corrected - 1.0) < 1e-15 and abs(original - 3.0) < 1e-15
    return ok, f"max rel dev {worst:.3g}; corrected={corrected}, original={original}"


def criterion_2_orthogonal_discrimination() -> tuple[bool, str]:
    """Unit orthogonal pair, m=1024, trials=400, seed 0: SupportsCorrected."""
    x, y = planar_pair(math.pi / 2, 64)
    verdict, est = refutation_test(x, y, m=1024, trials=400, master_seed=0)
    corrected = 1.0 - 1.0 / math.pi
    original = 1.0 + 1.0 / math.pi
    ok = (
        abs(est.mean - corrected) <= 4.0 * est.stderr
        and abs(est.mean - original) >= 10.0 * est.stderr
        and verdict.verdict is VerdictKind.SUPPORTS_CORRECTED
    )
    return ok, (
        f"mean={est.mean:.6f} stderr={est.stderr:.2g} "
        f"z_c={verdict.z_corrected:.2f} z_o={verdict.z_original:.1f} {verdict.verdict.value}"
    )


def criterion_3_cross_term_triple() -> tuple[bool, str]:
    """Closed form, Simpson quadrature, and 2-D MC agree on a 7-point grid."""
    worst_quad, worst_mc_z = 0.0, 0.0
    for k in range(7):
        theta = k * math.pi / 6.0
        closed = (math.pi / 2.0) * math.cos(theta) + 0.5 * (
            math.sin(theta) - theta * math.cos(theta)
        )
        quad = quadrature_cross_integral(theta)
        worst_quad = max(worst_quad, abs(quad - closed))
        target = 0.5 * (math.cos(theta) + psi_of_angle(theta))
        est = cross_term_mc_2d(theta, 100_000, rng.derive_seed(303, k))
        dev = abs(est.mean - target)
        if est.stderr == 0.0:
            if dev != 0.0:
                worst_mc_z = math.inf
        else:
            worst_mc_z = max(worst_mc_z, dev / est.stderr)
    ok = worst_quad <= 1e-9 and worst_mc_z <= 4.0
    return ok, f"max |quad-closed|={worst_quad:.2g}, max MC z={worst_mc_z:.2f}"


def criterion_4_angle_law() -> tuple[bool, str]:
    """181-point grid, m=4096, trials=100: sup |mc cos - (cos+psi)| <= 0.02."""
    grid = np.linspace(0.0, math.pi, 181)
    sup = 0.0
    lo, hi = math.inf, -math.inf
    for k, theta in enumerate(grid):
        x, y = planar_pair(float(theta), 64)
        est, _ = mc_output_cos(x, y, m=4096, trials=100, master_seed=rng.derive_seed(404, k))
        sup = max(sup, abs(est.mean - expected_output_cos(float(theta))))
        lo = min(lo, est.mean)
        hi = max(hi, est.mean)
    ok = sup <= 0.02 and lo >= -0.02 and hi <= 1.0
    return ok, f"sup dev {sup:.4f}, empirical cos range [{lo:.4f}, {hi:.4f}]"


def criterion_5_envelope() -> tuple[bool, str]:
    """100 random unit-ball pairs: corrected in [d^2/4, d^2/2]; MC inside +-3se."""
    rg = np.random.Generator(np.random.Philox(key=505))
    n = 16
    worst = ""
    for k in range(100):
        x = rg.standard_normal(n)
        y = rg.standard_normal(n)
        x *= rg.uniform() ** (1.0 / n) / np.linalg.norm(x)
        y *= rg.uniform() ** (1.0 / n) / np.linalg.norm(y)
        geom = angle_between(x, y)
        lo, hi = shrinkage_bounds(geom)
        val = expected_sq_dist(geom, Variant.CORRECTED).value
        if not (lo <= val <= hi):
            return False, f"pair {k}: corrected {val} outside [{lo}, {hi}]"
        est = mc_sq_dist(x, y, m=512, trials=64, master_seed=rng.derive_seed(606, k))
        if not (lo - 3.0 * est.stderr <= est.mean <= hi + 3.0 * est.stderr):
            return False, (
                f"pair {k}: MC mean {est.mean} outside widened envelope "
                f"[{lo - 3 * est.stderr}, {hi + 3 * est.stderr}]"
            )
        worst = f"pair {k} ok"
    return True, f"100 pairs inside analytic and widened MC envelopes ({worst})"


def criterion_6_shrinkage_monotone() -> tuple[bool, str]:
    """unit_shrinkage_ratio strictly decreasing on 181 points, 1/2 to 1/4."""
    grid = np.linspace(0.0, math.pi, 181)
    ratios = [unit_shrinkage_ratio(float(t)) for t in grid]
    strictly = all(a > b for a, b in zip(ratios, ratios[1:]))
    ok = (
        strictly
        and abs(ratios[0] - 0.5) <= 1e-9
        and abs(ratios[-1] - 0.25) <= 1e-9
    )
    return ok, f"strictly decreasing={strictly}, r(0)={ratios[0]}, r(pi)={ratios[-1]}"


def criterion_7_concentration_slope() -> tuple[bool, str]:
    """RMS deviation over m in 2^6..2^13 has log-log slope in [-0.6, -0.4]."""
    records = concentration_sweep(
        [2 ** k for k in range(6, 14)], math.pi / 2, trials=200, master_seed=0
    )
    slope = fit_loglog_slope(records)
    ok = slope is not None and -0.6 <= slope <= -0.4
    return ok, f"slope {slope:.4f}"


def criterion_8_class_separation() -> tuple[bool, str]:
    """Inter-class pairs shrink strictly more than intra-class pairs."""
    config = ClassConfig(
        ambient_dim=64,
        classes=2,
        points_per_class=20,
        intra_angle_max=math.radians(15.0),
        inter_angle_min=math.radians(60.0),
        master_seed=7,
    )
    report = separation_experiment(config, m=2048, layers=1, trials=50, master_seed=11)
    ri, ro = report.ratio_intra_mean, report.ratio_inter_mean
    ok = (
        ri is not None
        and ro is not None
        and ro < ri - 0.02
        and 0.23 <= ri <= 0.52
        and 0.23 <= ro <= 0.52
    )
    return ok, f"ratio intra={ri:.4f}, inter={ro:.4f}"


def criterion_9_mean_width() -> tuple[bool, str]:
    """K = {e1, e2}: estimate within 4 stderr of 2/sqrt(pi)."""
    pts = np.eye(8)[:2]
    est = mean_width_estimate(pts, g_samples=100_000, master_seed=3)
    target = 2.0 / math.sqrt(math.pi)
    ok = abs(est.mean - target) <= 4.0 * est.stderr
    return ok, f"mean={est.mean:.6f} target={target:.6f} stderr={est.stderr:.2g}"


def criterion_10_determinism() -> tuple[bool, str]:
    """Identical RunConfig twice: byte-identical record payloads."""
    from . import cli

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "run.json"
        args = [
            "theta-sweep", "--grid", "5", "--m", "64", "--trials", "16",
            "--seed", "3", "--out", str(out), "--format", "json",
        ]
        assert cli.run(args) == 0
        first = out.read_bytes()
        assert cli.run(args) == 0
        second = out.read_bytes()
        out2 = Path(tmp) / "refute.json"
        rargs = [
            "refute", "--theta", f"{math.pi}", "--m", "256", "--trials", "64",
            "--seed", "1", "--out", str(out2),
        ]
        assert cli.run(rargs) == 0
        r1 = out2.read_bytes()
        assert cli.run(rargs) == 0
        r2 = out2.read_bytes()
    ok = first == second and r1 == r2
    return ok, f"theta-sweep payload {len(first)} bytes, refute payload {len(r1)} bytes"


_CRITERIA = [
    (1, "antipodal refutation (exact identity)", criterion_1_antipodal_exact, 5.0),
    (2, "orthogonal-pair discrimination", criterion_2_orthogonal_discrimination, 10.0),
    (3, "cross-term triple agreement", criterion_3_cross_term_triple, None),
    (4, "angle law on 181-point grid", criterion_4_angle_law, None),
    (5, "shrinkage envelope", criterion_5_envelope, None),
    (6, "shrinkage ratio monotonicity", criterion_6_shrinkage_monotone, None),
    (7, "concentration scaling slope", criterion_7_concentration_slope, 60.0),
    (8, "class-separation refutation", criterion_8_class_separation, None),
    (9, "Gaussian mean width", criterion_9_mean_width, None),
    (10, "byte-identical determinism", criterion_10_determinism, None),
]


def run_criterion(index: int) -> CriterionResult:
    for idx, name, fn, budget in _CRITERIA:
        if idx == index:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, not an abort
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            elapsed = time.perf_counter() - start
            if budget is not None and elapsed > budget:
                passed = False
                detail += f"; exceeded runtime budget {budget:.0f}s"
            return CriterionResult(idx, name, passed, detail, elapsed)
    raise ValueError(f"no criterion {index}")


def run_all(verbose: bool = True) -> list[CriterionResult]:
    results = []
    for idx, _, _, _ in _CRITERIA:
        res = run_criterion(idx)
        results.append(res)
        if verbose:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} criterion {res.index}: {res.name} "
                  f"({res.seconds:.2f}s) - {res.detail}")
    return results
