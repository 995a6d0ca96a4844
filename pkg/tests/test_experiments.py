import math

import numpy as np
import pytest

from reludist import (
    ClassConfig,
    concentration_sweep,
    depth_sweep,
    fit_loglog_slope,
    generate_classes,
    iterate_angle_map,
    planar_pair,
    separation_experiment,
    separation_statistics,
    theta_sweep,
    unit_shrinkage_ratio,
)
from reludist.errors import DimensionMismatch, DomainError, InfeasibleGeometry
from reludist.experiments import SweepRecord


class TestPlanarPair:
    def test_angle_is_exact(self):
        x, y = planar_pair(1.3, 16)
        assert float(x @ y) == pytest.approx(math.cos(1.3), abs=1e-15)
        assert np.linalg.norm(x) == 1.0
        assert np.linalg.norm(y) == pytest.approx(1.0, abs=1e-15)

    def test_needs_two_dims(self):
        with pytest.raises(DimensionMismatch):
            planar_pair(1.0, 1)


class TestThetaSweep:
    def test_zero_grid_point(self):
        (rec,) = theta_sweep([0.0], m=32, trials=8, master_seed=0, n=8)
        assert rec.mc_mean == 0.0
        assert rec.analytic_corrected == 0.0
        assert rec.analytic_original == 0.0

    def test_antipodal_grid_point(self):
        (rec,) = theta_sweep([math.pi], m=1024, trials=400, master_seed=0, n=8)
        assert abs(rec.mc_mean - 1.0) <= 4.0 * rec.mc_stderr
        assert rec.analytic_original == pytest.approx(3.0)
        assert rec.bound_lower == pytest.approx(1.0)
        assert rec.bound_upper == pytest.approx(2.0)

    def test_records_track_corrected_not_original(self):
        grid = np.linspace(math.pi / 3, math.pi, 16)
        records = theta_sweep(grid, m=4096, trials=50, master_seed=1, n=8)
        for rec in records:
            assert abs(rec.mc_mean - rec.analytic_corrected) <= 0.02
            assert abs(rec.mc_mean - rec.analytic_original) >= 0.1
            assert rec.bound_lower <= rec.analytic_corrected <= rec.bound_upper

    def test_empirical_monotone_in_theta(self):
        # stay clear of the endpoints, where the derivative of the
        # corrected expectation vanishes and noise can reorder neighbors
        grid = np.linspace(0.2, 2.6, 10)
        records = theta_sweep(grid, m=2048, trials=100, master_seed=3, n=8)
        means = [r.mc_mean for r in records]
        assert all(a < b for a, b in zip(means, means[1:]))

    def test_deterministic(self):
        a = theta_sweep([1.0], m=64, trials=16, master_seed=9, n=8)
        b = theta_sweep([1.0], m=64, trials=16, master_seed=9, n=8)
        assert a == b


class TestConcentrationSweep:
    def test_rms_decreases(self):
        records = concentration_sweep([64, 4096], math.pi / 2, trials=100, master_seed=0, n=8)
        assert records[1].rms_dev < records[0].rms_dev

    def test_single_m_slope_absent(self):
        records = concentration_sweep([256], math.pi / 2, trials=50, master_seed=0, n=8)
        assert fit_loglog_slope(records) is None

    def test_slope_near_half(self):
        records = concentration_sweep(
            [2 ** k for k in range(6, 14)], math.pi / 2, trials=200, master_seed=0, n=8
        )
        slope = fit_loglog_slope(records)
        assert -0.6 <= slope <= -0.4

    def test_requires_increasing(self):
        with pytest.raises(DomainError):
            concentration_sweep([64, 64], 1.0, trials=10, master_seed=0)


class TestGenerateClasses:
    def test_two_classes_respect_constraints(self):
        config = ClassConfig(3, 2, 10, 0.1, math.pi / 2, master_seed=0)
        points, labels = generate_classes(config)
        assert points.shape == (20, 3)
        assert np.allclose(np.linalg.norm(points, axis=1), 1.0, atol=1e-12)
        # recover centers: first point of each class is within 0.1 of it;
        # check pairwise intra angles <= 2 * intra_angle_max instead
        for label in (0, 1):
            grp = points[labels == label]
            cosines = grp @ grp.T
            assert np.all(np.arccos(np.clip(cosines, -1, 1)) <= 0.2 + 1e-9)

    def test_single_class_trivially_feasible(self):
        config = ClassConfig(4, 1, 5, 0.2, 1.0, master_seed=1)
        points, labels = generate_classes(config)
        assert points.shape == (5, 4)
        assert set(labels) == {0}

    def test_overpacked_sphere_is_infeasible(self):
        config = ClassConfig(3, 40, 1, 0.1, math.pi / 2, master_seed=2)
        with pytest.raises(InfeasibleGeometry):
            generate_classes(config)

    def test_invalid_angles(self):
        with pytest.raises(DomainError):
            ClassConfig(3, 2, 1, 1.0, 0.5, master_seed=0)

    def test_deterministic(self):
        config = ClassConfig(8, 3, 4, 0.2, 1.2, master_seed=5)
        a, la = generate_classes(config)
        b, lb = generate_classes(config)
        assert np.array_equal(a, b)
        assert np.array_equal(la, lb)


class TestSeparation:
    def test_inter_shrinks_more_than_intra(self):
        config = ClassConfig(64, 2, 20, math.radians(15), math.radians(60), master_seed=7)
        report = separation_experiment(config, m=2048, layers=1, trials=50, master_seed=11)
        assert report.ratio_inter_mean < report.ratio_intra_mean - 0.02
        assert 0.23 <= report.ratio_intra_mean <= 0.52
        assert 0.23 <= report.ratio_inter_mean <= 0.52

    def test_closest_inter_distance_decreases(self):
        config = ClassConfig(64, 2, 20, math.radians(15), math.radians(60), master_seed=7)
        report = separation_experiment(config, m=2048, layers=1, trials=50, master_seed=11)
        assert report.post_inter_min_dist < report.pre_inter_min_dist

    def test_degenerate_single_point_single_class(self):
        points = np.array([[1.0, 0.0, 0.0]])
        labels = np.array([0])
        report = separation_statistics(points, labels, m=32, layers=1, trials=4, master_seed=0)
        assert report.intra_pairs == 0
        assert report.inter_pairs == 0
        assert report.ratio_intra_mean is None
        assert report.pre_inter_min_dist is None

    def test_label_swap_reverses_inequality(self):
        # two tight antipodal clusters; labels chosen so same-label pairs
        # have LARGE angles: the ratio inequality must flip, showing the
        # harness carries no hidden intra/inter asymmetry
        cluster_a = np.array([[1.0, 0.0, 0.05], [1.0, 0.05, 0.0]])
        cluster_b = -cluster_a
        points = np.vstack([cluster_a, cluster_b])
        points /= np.linalg.norm(points, axis=1, keepdims=True)
        by_cluster = np.array([0, 0, 1, 1])
        crossed = np.array([0, 1, 0, 1])
        normal = separation_statistics(points, by_cluster, 512, 1, 40, master_seed=3)
        swapped = separation_statistics(points, crossed, 512, 1, 40, master_seed=3)
        assert normal.ratio_inter_mean < normal.ratio_intra_mean
        assert swapped.ratio_inter_mean > swapped.ratio_intra_mean

    def test_layers_validated(self):
        points = np.eye(3)
        with pytest.raises(DomainError):
            separation_statistics(points, np.arange(3), m=8, layers=0, trials=4, master_seed=0)


class TestDepthSweep:
    def test_depth_zero_exact(self):
        records = depth_sweep(1.0, [64], layers_max=0, trials=8, master_seed=0, n=8)
        assert len(records) == 1
        assert records[0].mc_mean == math.cos(1.0)
        assert records[0].mc_stderr == 0.0

    def test_single_layer_antipodal(self):
        records = depth_sweep(math.pi, [1024], layers_max=1, trials=50, master_seed=0, n=8)
        rec = records[1]
        assert rec.predicted_cos == pytest.approx(0.0, abs=1e-15)
        assert abs(rec.mc_mean - rec.predicted_cos) <= max(4.0 * rec.mc_stderr, 0.01)

    def test_angles_collapse_with_depth(self):
        records = depth_sweep(math.pi, [256], layers_max=4, trials=40, master_seed=1, n=8)
        predicted = [r.predicted_cos for r in records]
        assert all(a < b for a, b in zip(predicted, predicted[1:]))
        for rec in records:
            assert abs(rec.mc_mean - rec.predicted_cos) <= 0.05

    def test_iterate_matches_records(self):
        records = depth_sweep(2.0, [128], layers_max=3, trials=10, master_seed=2, n=8)
        for depth, rec in enumerate(records):
            assert rec.predicted_cos == pytest.approx(
                math.cos(iterate_angle_map(2.0, depth)), abs=1e-15
            )


class TestSweepRecordInvariant:
    def test_envelope_enforced(self):
        with pytest.raises(DomainError):
            SweepRecord(
                kind="distance", theta=1.0, m=8, trials=4, layer_count=1,
                mc_mean=0.0, mc_stderr=0.0, analytic_corrected=5.0,
                analytic_original=6.0, bound_lower=0.0, bound_upper=1.0,
            )

    def test_ratio_monotone_on_grid(self):
        grid = np.linspace(0.0, math.pi, 181)
        ratios = [unit_shrinkage_ratio(float(t)) for t in grid]
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
