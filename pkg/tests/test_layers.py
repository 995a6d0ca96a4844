import math

import numpy as np
import pytest

from reludist import (
    GaussianLayer,
    LayerStack,
    load_layer,
    relu_forward,
    sample_layer,
    save_layer,
    sq_dist_realization,
    stack_forward,
)
from reludist import rng
from reludist.errors import DimensionMismatch, SizeOverflow


def _unit(seed, n):
    v = rng.standard_normals(seed, (n,))
    return v / np.linalg.norm(v)


class TestSampleLayer:
    def test_deterministic(self):
        a = sample_layer(3, 2, 42)
        b = sample_layer(3, 2, 42)
        assert np.array_equal(a.entries, b.entries)
        assert a.entries.shape == (2, 3)

    def test_variance_at_scale(self):
        layer = sample_layer(64, 4096, 1)
        assert abs(layer.entries.var() * 4096 - 1.0) < 0.05

    def test_one_by_one(self):
        layer = sample_layer(1, 1, 7)
        assert layer.entries.shape == (1, 1)
        # sqrt(m) * entry is a plain standard normal draw
        assert abs(layer.entries[0, 0]) < 10.0

    def test_size_cap(self):
        with pytest.raises(SizeOverflow):
            sample_layer(2 ** 15, 2 ** 15, 0)

    def test_bad_dims(self):
        with pytest.raises(DimensionMismatch):
            sample_layer(0, 4, 0)

    def test_entries_immutable(self):
        layer = sample_layer(4, 4, 0)
        with pytest.raises(ValueError):
            layer.entries[0, 0] = 1.0


class TestReluForward:
    def test_hand_matrix(self):
        layer = GaussianLayer(2, 2, np.array([[1.0, 0.0], [0.0, -1.0]]), seed=0)
        out = relu_forward(layer, np.array([1.0, 1.0]))
        assert np.array_equal(out, np.array([1.0, 0.0]))

    def test_zero_input(self):
        layer = sample_layer(5, 9, 3)
        assert np.array_equal(relu_forward(layer, np.zeros(5)), np.zeros(9))

    def test_outputs_nonnegative(self):
        layer = sample_layer(8, 64, 5)
        x = rng.standard_normals(1, (8,))
        assert np.all(relu_forward(layer, x) >= 0.0)

    def test_antipodal_difference_recovers_linear_map(self):
        layer = sample_layer(6, 32, 11)
        x = rng.standard_normals(2, (6,))
        diff = relu_forward(layer, x) - relu_forward(layer, -x)
        assert np.array_equal(diff, layer.entries @ x)

    def test_dim_mismatch(self):
        layer = sample_layer(5, 9, 3)
        with pytest.raises(DimensionMismatch):
            relu_forward(layer, np.zeros(6))


class TestSqDistRealization:
    def test_identical_inputs(self):
        layer = sample_layer(4, 16, 1)
        x = rng.standard_normals(3, (4,))
        assert sq_dist_realization(layer, x, x) == 0.0

    def test_antipodal_identity_hundred_draws(self):
        # the direct counterexample to the original claim at theta = pi
        for k in range(100):
            layer = sample_layer(16, 128, rng.derive_seed(21, k))
            x = rng.standard_normals(rng.derive_seed(22, k), (16,))
            mx = layer.entries @ x
            assert sq_dist_realization(layer, x, -x) == pytest.approx(
                float(mx @ mx), rel=1e-12
            )

    def test_single_realization_concentrates(self):
        x = np.zeros(16)
        y = np.zeros(16)
        x[0], y[1] = 1.0, 1.0
        layer = sample_layer(16, 2048, 3)
        val = sq_dist_realization(layer, x, y)
        assert 0.25 * 2.0 - 0.3 <= val <= 0.5 * 2.0 + 0.3

    def test_norm_halving(self):
        # mean of ||rho(Mx)||^2 over trials approaches ||x||^2 / 2
        x = 2.0 * _unit(5, 16)
        vals = []
        for t in range(400):
            layer = sample_layer(16, 1024, rng.derive_seed(50, t))
            out = relu_forward(layer, x)
            vals.append(float(out @ out))
        vals = np.asarray(vals)
        stderr = vals.std(ddof=1) / math.sqrt(vals.size)
        assert abs(vals.mean() - 2.0) <= 4.0 * stderr


class TestStack:
    def test_empty_stack_identity(self):
        out = stack_forward(LayerStack(), np.array([1.0, 2.0]))
        assert np.array_equal(out, np.array([1.0, 2.0]))

    def test_single_layer_matches_relu_forward(self):
        layer = sample_layer(4, 8, 2)
        x = rng.standard_normals(9, (4,))
        assert np.array_equal(
            stack_forward(LayerStack((layer,)), x), relu_forward(layer, x)
        )

    def test_chain_validation(self):
        a = sample_layer(4, 8, 0)
        b = sample_layer(9, 4, 1)  # expects dim 9, a outputs 8
        with pytest.raises(DimensionMismatch, match="layer 1"):
            LayerStack((a, b))

    def test_forward_dim_check_names_layer(self):
        a = sample_layer(4, 8, 0)
        with pytest.raises(DimensionMismatch, match="layer 0"):
            stack_forward(LayerStack((a,)), np.zeros(5))

    def test_outputs_nonnegative_through_depth(self):
        layers = [sample_layer(6, 16, 0), sample_layer(16, 16, 1), sample_layer(16, 8, 2)]
        out = stack_forward(LayerStack(tuple(layers)), rng.standard_normals(3, (6,)))
        assert out.shape == (8,)
        assert np.all(out >= 0.0)


class TestDump:
    def test_binary_roundtrip(self, tmp_path):
        layer = sample_layer(5, 7, 123)
        path = tmp_path / "layer.bin"
        save_layer(path, layer, fmt="binary")
        back = load_layer(path)
        assert (back.rows_m, back.cols_n, back.seed) == (7, 5, 123)
        assert np.array_equal(back.entries, layer.entries)

    def test_csv_roundtrip(self, tmp_path):
        layer = sample_layer(3, 4, 9)
        path = tmp_path / "layer.csv"
        save_layer(path, layer, fmt="csv")
        back = load_layer(path)
        assert (back.rows_m, back.cols_n, back.seed) == (4, 3, 9)
        assert np.allclose(back.entries, layer.entries, rtol=0, atol=0)

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            save_layer(tmp_path / "x", sample_layer(2, 2, 0), fmt="hdf5")
