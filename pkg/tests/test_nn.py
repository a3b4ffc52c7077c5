#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from effcnet.errors import ShapeError, ConfigError, DataError, NumericsError
from effcnet.autograd import Tensor, tsum, mul, analytic_gradient, grad_check
from effcnet.nn import (
    ConvSpec, LayerParams, GROUPED, conv2d, conv2d_direct, conv2d_standard, conv2d_depthwise, conv2d_pointwise,
    conv2d_grouped, leaky_relu, leaky_relu_gain, batch_norm, dropout, channel_permute, permutation_indices, avg_pool,
    linear, softmax_cross_entropy, cross_entropy_per_sample, softmax,
)

TOLERANCE = 1e-4
ORACLE_TOLERANCE = 1e-5
ORACLE_INSTANCES = 100


def random_instance(seed):
    """
    Batch, channels, map side and odd kernel of a small random convolution
    """
    rng = np.random.default_rng(seed)
    n_batch = int(rng.integers(1, 3))
    channels = int(rng.integers(1, 5))
    side = int(rng.integers(3, 7))
    kernel = int(rng.choice([1, 3]))
    return rng, n_batch, channels, side, kernel


def bn_params(channels, rng=None):
    rng = rng or np.random.default_rng(0)
    return LayerParams(
        bn_gamma=Tensor(rng.uniform(0.5, 1.5, channels)),
        bn_beta=Tensor(rng.normal(size=channels)),
        bn_running_mean=Tensor(np.zeros(channels)),
        bn_running_var=Tensor(np.ones(channels)),
    )


class TestConvolutionOracles:
    """
    The specialised kernels against dense convolutions, on 100 random instances each
    """

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_depthwise_equals_channel_masked_dense(self, float64, seed):
        rng, n, c, side, s = random_instance(seed)
        x = Tensor(rng.normal(size=(n, c, side, side)))
        k = rng.normal(size=(s, s, c))

        dense = np.zeros((s, s, c, c))
        for m in range(c):
            dense[:, :, m, m] = k[:, :, m]

        out = conv2d_depthwise(x, LayerParams(weight=Tensor(k)), ConvSpec.depthwise(s, c))
        expected = conv2d_standard(x, LayerParams(weight=Tensor(dense)), ConvSpec.standard(s, c, c))
        assert np.max(np.abs(out.data - expected.data)) < ORACLE_TOLERANCE

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_pointwise_equals_matrix_product(self, float64, seed):
        rng, n, c, side, _ = random_instance(seed)
        y = int(rng.integers(1, 6))
        x = rng.normal(size=(n, c, side, side))
        w = rng.normal(size=(c, y))

        out = conv2d_pointwise(Tensor(x), LayerParams(weight=Tensor(w)), ConvSpec.pointwise(c, y))
        expected = (w.T @ x.transpose(1, 0, 2, 3).reshape(c, -1)).reshape(y, n, side, side).transpose(1, 0, 2, 3)
        assert np.max(np.abs(out.data - expected)) < ORACLE_TOLERANCE

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_single_group_equals_dense(self, float64, seed):
        rng, n, c, side, s = random_instance(seed)
        y = int(rng.integers(1, 6))
        x = Tensor(rng.normal(size=(n, c, side, side)))
        params = LayerParams(weight=Tensor(rng.normal(size=(s, s, c, y))))

        out = conv2d_grouped(x, params, ConvSpec.grouped(s, c, y, 1))
        expected = conv2d_standard(x, params, ConvSpec.standard(s, c, y))
        assert np.max(np.abs(out.data - expected.data)) < ORACLE_TOLERANCE

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_separable_equals_factorized_dense(self, float64, seed):
        rng, n, c, side, s = random_instance(seed)
        y = int(rng.integers(1, 6))
        x = Tensor(rng.normal(size=(n, c, side, side)))
        k = rng.normal(size=(s, s, c))
        p = rng.normal(size=(c, y))

        separable = conv2d_pointwise(
            conv2d_depthwise(x, LayerParams(weight=Tensor(k)), ConvSpec.depthwise(s, c)),
            LayerParams(weight=Tensor(p)), ConvSpec.pointwise(c, y),
        )
        dense = k[:, :, :, None] * p[None, None, :, :]
        expected = conv2d_standard(x, LayerParams(weight=Tensor(dense)), ConvSpec.standard(s, c, y))
        assert np.max(np.abs(separable.data - expected.data)) < ORACLE_TOLERANCE

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_full_groups_equal_depthwise(self, float64, seed):
        rng, n, c, side, s = random_instance(seed)
        c = max(c, 2)
        x = Tensor(rng.normal(size=(n, c, side, side)))
        w = rng.normal(size=(s, s, 1, c))

        out = conv2d_grouped(x, LayerParams(weight=Tensor(w)), ConvSpec.grouped(s, c, c, c))
        expected = conv2d_depthwise(x, LayerParams(weight=Tensor(w.reshape(s, s, c))), ConvSpec.depthwise(s, c))
        assert_array_equal(out.data, expected.data)

    @pytest.mark.parametrize("seed", range(ORACLE_INSTANCES))
    def test_two_groups_equal_split_dense(self, float64, seed):
        rng, n, _, side, s = random_instance(seed)
        half_in, half_out = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        c, y = 2 * half_in, 2 * half_out
        x = rng.normal(size=(n, c, side, side))
        w = rng.normal(size=(s, s, half_in, y))

        out = conv2d_grouped(Tensor(x), LayerParams(weight=Tensor(w)), ConvSpec.grouped(s, c, y, 2))
        halves = [
            conv2d_standard(
                Tensor(x[:, g * half_in:(g + 1) * half_in]),
                LayerParams(weight=Tensor(w[:, :, :, g * half_out:(g + 1) * half_out])),
                ConvSpec.standard(s, half_in, half_out),
            ).data
            for g in range(2)
        ]
        assert np.max(np.abs(out.data - np.concatenate(halves, axis=1))) < ORACLE_TOLERANCE

    def test_centre_delta_reproduces_input(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 3, 6, 6)))
        w = np.zeros((3, 3, 3, 3))
        for m in range(3):
            w[1, 1, m, m] = 1.0
        out = conv2d_standard(x, LayerParams(weight=Tensor(w)), ConvSpec.standard(3, 3, 3))
        assert_array_equal(out.data, x.data)

    def test_ones_kernel_sums_the_window(self, float64):
        x = Tensor(np.ones((1, 1, 5, 5)))
        out = conv2d_standard(x, LayerParams(weight=Tensor(np.ones((3, 3, 1, 1)))), ConvSpec.standard(3, 1, 1))
        assert_array_equal(out.data[0, 0, 1:-1, 1:-1], 9.0)
        assert out.data[0, 0, 0, 0] == 4.0
        assert out.data[0, 0, 0, 2] == 6.0

    @pytest.mark.parametrize("seed", range(10))
    def test_im2col_equals_direct(self, float64, seed):
        rng, n, c, side, s = random_instance(seed)
        groups = int(rng.choice([g for g in (1, 2, 4) if c % g == 0]))
        y = groups * int(rng.integers(1, 3))
        spec = ConvSpec.grouped(s, c, y, groups, stride=int(rng.integers(1, 3)))
        x = Tensor(rng.normal(size=(n, c, side, side)))
        params = LayerParams(weight=Tensor(rng.normal(size=spec.weight_shape(GROUPED))))

        fast = conv2d_grouped(x, params, spec)
        slow = conv2d_grouped(x, params, spec, algorithm='direct')
        assert_allclose(fast.data, slow.data, atol=ORACLE_TOLERANCE)

    @pytest.mark.parametrize("kernel,channels,out_channels,groups,side", [
        (3, 4, 8, 1, 6), (3, 4, 4, 4, 5), (1, 6, 3, 1, 4), (3, 8, 4, 2, 4),
    ])
    def test_direct_counts_macs(self, float64, kernel, channels, out_channels, groups, side):
        spec = ConvSpec.grouped(kernel, channels, out_channels, groups)
        x = np.ones((2, channels, side, side))
        w = np.ones(spec.weight_shape(GROUPED))
        _, macs = conv2d_direct(x, w, spec)
        assert macs == side * side * kernel * kernel * (channels // groups) * out_channels

    def test_stride_and_padding_extents(self):
        spec = ConvSpec.standard(3, 2, 2, stride=2)
        assert spec.output_extent(32) == 16
        assert ConvSpec.standard(3, 2, 2, padding=0).output_extent(5) == 3

    def test_dispatch_on_weight_layout(self, float64, rng):
        x = Tensor(rng.normal(size=(1, 4, 5, 5)))
        depthwise = LayerParams(weight=Tensor(rng.normal(size=(3, 3, 4))))
        assert_array_equal(
            conv2d(x, depthwise, ConvSpec.depthwise(3, 4)).data,
            conv2d_depthwise(x, depthwise, ConvSpec.depthwise(3, 4)).data,
        )


class TestConvolutionErrors:

    def test_depthwise_needs_equal_channels(self):
        with pytest.raises(ShapeError):
            ConvSpec(3, 4, 8, 1, 1, 4).validate('depthwise')

    def test_groups_must_divide_channels(self):
        with pytest.raises(ShapeError):
            ConvSpec.grouped(3, 6, 8, 4).validate()

    def test_even_kernel(self):
        with pytest.raises(ShapeError):
            ConvSpec.standard(2, 3, 3).validate()

    def test_input_channels_mismatch(self, rng):
        x = Tensor(rng.normal(size=(1, 3, 4, 4)))
        params = LayerParams(weight=Tensor(rng.normal(size=(4, 2))))
        with pytest.raises(ShapeError):
            conv2d_pointwise(x, params, ConvSpec.pointwise(4, 2))

    def test_weight_layout_mismatch(self, rng):
        x = Tensor(rng.normal(size=(1, 4, 4, 4)))
        params = LayerParams(weight=Tensor(rng.normal(size=(3, 3, 4, 4))))
        with pytest.raises(ShapeError):
            conv2d_depthwise(x, params, ConvSpec.depthwise(3, 4))

    def test_map_too_small(self, rng):
        x = Tensor(rng.normal(size=(1, 2, 2, 2)))
        params = LayerParams(weight=Tensor(rng.normal(size=(5, 5, 2, 2))))
        with pytest.raises(ShapeError):
            conv2d_standard(x, params, ConvSpec.standard(5, 2, 2, padding=0))


class TestLeakyReLU:

    def test_values(self, float64):
        out = leaky_relu(Tensor(np.array([-2.0, 3.0, 0.0])))
        assert out.at(0) == -0.02
        assert out.at(1) == 3.0
        assert out.at(2) == 0.0

    def test_derivative(self, float64, rng):
        x = Tensor(rng.normal(size=(4, 5)))
        grad = analytic_gradient(lambda t: tsum(leaky_relu(t)), x)
        assert_array_equal(grad, np.where(x.data >= 0, 1.0, 0.01))

    def test_derivative_at_zero_takes_the_positive_branch(self, float64):
        grad = analytic_gradient(lambda t: tsum(leaky_relu(t)), Tensor(np.zeros(3)))
        assert_array_equal(grad, np.ones(3))

    def test_elementwise(self, float64, rng):
        x = rng.normal(size=(3, 4, 5))
        assert_array_equal(leaky_relu(Tensor(x)).data, np.where(x >= 0, x, 0.01 * x))

    def test_slope_range(self):
        with pytest.raises(ConfigError):
            leaky_relu(Tensor(np.ones(2)), slope=1.0)

    def test_gain(self):
        assert leaky_relu_gain(0.01) == pytest.approx(math.sqrt(2.0 / 1.0001))


class TestBatchNorm:

    def test_train_mode_normalizes(self, float64, rng):
        x = Tensor(rng.normal(3.0, 2.0, size=(8, 3, 4, 4)))
        params = LayerParams(
            bn_gamma=Tensor(np.ones(3)), bn_beta=Tensor(np.zeros(3)),
            bn_running_mean=Tensor(np.zeros(3)), bn_running_var=Tensor(np.ones(3)),
        )
        out = batch_norm(x, params, 'train')
        assert_allclose(out.data.mean(axis=(0, 2, 3)), 0.0, atol=1e-10)
        assert_allclose(out.data.var(axis=(0, 2, 3)), 1.0, rtol=1e-3)

    def test_running_statistics_update(self, float64, rng):
        x = Tensor(rng.normal(size=(4, 2, 3, 3)))
        params = bn_params(2)
        batch_norm(x, params, 'train', momentum=0.1)
        count = x.size // 2
        assert_allclose(params.bn_running_mean.data, 0.1 * x.data.mean(axis=(0, 2, 3)))
        assert_allclose(
            params.bn_running_var.data, 0.9 + 0.1 * x.data.var(axis=(0, 2, 3)) * count / (count - 1)
        )

    def test_eval_mode_uses_running_statistics(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 2, 3, 3)))
        params = bn_params(2)
        out = batch_norm(x, params, 'eval', epsilon=0.0)
        expected = x.data * params.bn_gamma.data.reshape(1, 2, 1, 1) + params.bn_beta.data.reshape(1, 2, 1, 1)
        assert_allclose(out.data, expected)
        assert_array_equal(params.bn_running_mean.data, np.zeros(2))

    def test_single_value_per_channel(self):
        with pytest.raises(NumericsError):
            batch_norm(Tensor(np.ones((1, 2, 1, 1))), bn_params(2), 'train')

    def test_gradient(self, float64, rng):
        x = Tensor(rng.normal(size=(3, 2, 3, 3)))
        weights = Tensor(rng.normal(size=x.shape))
        params = bn_params(2, rng)
        assert grad_check(lambda t: tsum(mul(batch_norm(t, params, 'train'), weights)), x) < TOLERANCE


class TestRegularization:

    def test_dropout_eval_is_identity(self, rng):
        x = Tensor(rng.normal(size=(2, 3)))
        assert dropout(x, 0.5, 'eval') is x

    def test_dropout_scaling(self, float64):
        x = Tensor(np.ones((100, 100)))
        out = dropout(x, 0.5, 'train', np.random.default_rng(0))
        assert set(np.unique(out.data)) <= {0.0, 2.0}
        assert 0.45 < np.mean(out.data == 0.0) < 0.55

    def test_dropout_needs_a_generator(self):
        with pytest.raises(ConfigError):
            dropout(Tensor(np.ones(3)), 0.5, 'train')

    def test_permute_indices(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 8, 2, 2)))
        out = channel_permute(x, 4)
        assert_array_equal(out.data, x.data[:, permutation_indices(8, 4)])

    def test_permute_is_inverted(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 12, 2, 2)))
        assert_array_equal(channel_permute(channel_permute(x, 3), 4).data, x.data)

    def test_permute_groups_must_divide(self, rng):
        with pytest.raises(ShapeError):
            channel_permute(Tensor(rng.normal(size=(1, 6, 2, 2))), 4)

    def test_permute_gradient(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 8, 2, 2)))
        weights = Tensor(rng.normal(size=x.shape))
        assert grad_check(lambda t: tsum(mul(channel_permute(t, 2), weights)), x) < TOLERANCE


class TestPoolingAndHead:

    def test_avg_pool(self, float64):
        x = Tensor(np.arange(16.0).reshape(1, 1, 4, 4))
        assert_array_equal(avg_pool(x, 2).data.reshape(-1), [2.5, 4.5, 10.5, 12.5])

    def test_avg_pool_tiling(self):
        with pytest.raises(ShapeError):
            avg_pool(Tensor(np.ones((1, 1, 5, 5))), 2)

    def test_avg_pool_gradient(self, float64, rng):
        x = Tensor(rng.normal(size=(2, 3, 4, 4)))
        weights = Tensor(rng.normal(size=(2, 3, 2, 2)))
        assert grad_check(lambda t: tsum(mul(avg_pool(t, 2), weights)), x) < TOLERANCE

    def test_linear_gradient(self, float64, rng):
        x = Tensor(rng.normal(size=(3, 4)))
        params = LayerParams(weight=Tensor(rng.normal(size=(4, 5))), bias=Tensor(rng.normal(size=5)))
        weights = Tensor(rng.normal(size=(3, 5)))
        assert grad_check(lambda t: tsum(mul(linear(t, params), weights)), x) < TOLERANCE

    def test_uniform_logits_loss(self, float64):
        loss = softmax_cross_entropy(Tensor(np.zeros((4, 10))), [0, 1, 2, 3])
        assert loss.item() == pytest.approx(math.log(10))

    def test_loss_matches_per_sample_mean(self, float64, rng):
        logits = rng.normal(size=(6, 5))
        labels = rng.integers(0, 5, size=6)
        assert softmax_cross_entropy(Tensor(logits), labels).item() == pytest.approx(
            cross_entropy_per_sample(logits, labels).mean()
        )

    def test_loss_gradient(self, float64, rng):
        x = Tensor(rng.normal(size=(5, 4)))
        labels = rng.integers(0, 4, size=5)
        assert grad_check(lambda t: softmax_cross_entropy(t, labels), x) < TOLERANCE

    def test_large_logit_is_stable(self):
        logits = Tensor(np.array([[1000.0, 0.0, 0.0], [0.0, 1000.0, 0.0]]))
        loss = softmax_cross_entropy(logits, [0, 1])
        assert np.isfinite(loss.item())
        assert loss.item() < 1e-6

        grad = analytic_gradient(lambda t: softmax_cross_entropy(t, [0, 1]), logits)
        assert np.all(np.isfinite(grad))
        assert_allclose(grad, 0.0, atol=1e-6)

    def test_label_range(self):
        with pytest.raises(DataError):
            softmax_cross_entropy(Tensor(np.zeros((2, 3))), [0, 3])

    def test_softmax_sums_to_one(self, rng):
        assert_allclose(softmax(rng.normal(size=(3, 7))).sum(axis=1), 1.0)


class TestConvolutionGradients:

    @pytest.fixture
    def x(self, float64, rng):
        return Tensor(rng.normal(size=(2, 4, 5, 5)))

    def check(self, function, spec, weight, x, rng):
        out_shape = function(x, LayerParams(weight=weight), spec).shape
        weights = Tensor(rng.normal(size=out_shape))
        assert grad_check(lambda t: tsum(mul(function(t, LayerParams(weight=weight), spec), weights)), x) < TOLERANCE
        assert grad_check(lambda t: tsum(mul(function(x, LayerParams(weight=t), spec), weights)), weight) < TOLERANCE

    def test_standard(self, x, rng):
        self.check(conv2d_standard, ConvSpec.standard(3, 4, 3), Tensor(rng.normal(size=(3, 3, 4, 3))), x, rng)

    def test_strided(self, x, rng):
        spec = ConvSpec.standard(3, 4, 2, stride=2)
        self.check(conv2d_standard, spec, Tensor(rng.normal(size=(3, 3, 4, 2))), x, rng)

    def test_depthwise(self, x, rng):
        self.check(conv2d_depthwise, ConvSpec.depthwise(3, 4), Tensor(rng.normal(size=(3, 3, 4))), x, rng)

    def test_pointwise(self, x, rng):
        self.check(conv2d_pointwise, ConvSpec.pointwise(4, 6), Tensor(rng.normal(size=(4, 6))), x, rng)

    def test_grouped(self, x, rng):
        self.check(conv2d_grouped, ConvSpec.grouped(3, 4, 6, 2), Tensor(rng.normal(size=(3, 3, 2, 6))), x, rng)

# vim: ft=python:ts=4:sw=4
