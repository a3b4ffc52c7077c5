#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from effcnet.errors import ConfigError, ShapeError
from effcnet.config import Config
from effcnet.autograd import Tensor, tsum, mul, grad_check
from effcnet.nn import softmax_cross_entropy
from effcnet.model import (
    NetworkConfig, BlockConfig, growth_channels, assemble_network, forward, build_effcnet_block,
    build_condensenet_block_static, CONDENSENET_STATIC, EFFCNET,
)
from effcnet.resources import resource_path

TOLERANCE = 1e-4


class TestNetworkConfig:

    def test_growth_schedule(self):
        assert [growth_channels(d, 8) for d in range(3)] == [8, 16, 32]

    @pytest.mark.parametrize("d,x0", [(-1, 8), (0, 0)])
    def test_growth_range(self, d, x0):
        with pytest.raises(ConfigError):
            growth_channels(d, x0)

    def test_parse_stages(self):
        cfg = NetworkConfig.from_string("[network]\nstages = 2:0, 3:2\nbase_growth = 4\n")
        assert cfg.stages == ((2, 0), (3, 2))
        assert cfg.growth_rates() == [4, 16]

    def test_stage_index_defaults_to_position(self):
        cfg = NetworkConfig.from_string("[network]\nstages = 2, 2\n")
        assert cfg.stages == ((2, 0), (2, 1))

    def test_growth_must_increase(self):
        with pytest.raises(ConfigError):
            NetworkConfig.from_string("[network]\nstages = 2:1, 2:1\n")

    def test_missing_section(self):
        with pytest.raises(ConfigError):
            NetworkConfig.from_string("[training]\nepochs = 1\n")

    @pytest.mark.parametrize("text", [
        "[network]\nbase_growth = many\n",
        "[network]\nvariant = resnet\n",
        "[network]\nnum_classes = 1\n",
        "[network]\nbatch_norm = maybe\n",
        "[network]\nstages = 6:x\n",
        "[network\nstages = 6\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ConfigError):
            NetworkConfig.from_string(text)

    def test_input_size_must_halve(self):
        with pytest.raises(ConfigError):
            NetworkConfig(stages=((1, 0), (1, 1), (1, 2)), input_size=6).validate()

    def test_section_round_trip(self):
        cfg = NetworkConfig.load(resource_path("effcnet-cifar10.ini"))
        again = NetworkConfig.from_config(Config.from_sections({'network': cfg.to_section()}))
        assert again == cfg

    def test_permute_groups_divide_bottleneck(self):
        with pytest.raises(ConfigError):
            BlockConfig(in_channels=8, growth=3, permute_groups=8).validate()


class TestBlocks:

    def test_effcnet_block_layers(self):
        block = build_effcnet_block(BlockConfig(in_channels=24, growth=10), "b")
        assert [layer.name for layer in block.layers] == [
            "bn", "relu", "dw", "dw_bn", "dw_relu", "pw1", "permute", "pw2",
        ]
        assert block.output_shape((24, 8, 8)) == (34, 8, 8)

    def test_effcnet_block_parameters(self):
        block = build_effcnet_block(BlockConfig(in_channels=24, growth=10), "b")
        k, x = 10, 24
        assert sum(layer.param_count() for layer in block.layers) == 13 * x + 4 * k * x + 4 * k * k

    def test_single_pointwise_block(self):
        block = build_effcnet_block(BlockConfig(in_channels=16, growth=8, single_pointwise=True), "b")
        assert [layer.name for layer in block.layers][-1] == "pw"
        assert "permute" not in [layer.name for layer in block.layers]

    def test_dropout_layer_only_when_enabled(self):
        block = build_effcnet_block(BlockConfig(in_channels=16, growth=8, dropout_rate=0.2), "b")
        assert block.layers[-1].name == "dropout"

    def test_condensenet_block(self):
        block = build_condensenet_block_static(BlockConfig(in_channels=24, growth=8), 4, "b")
        assert [layer.name for layer in block.layers] == [
            "bn", "relu", "gconv1", "shuffle", "gconv1_bn", "gconv1_relu", "gconv3",
        ]

    def test_condensenet_divisibility(self):
        with pytest.raises(ConfigError):
            build_condensenet_block_static(BlockConfig(in_channels=26, growth=8), 4, "b")

    def test_dense_connectivity(self, float64, rng):
        block = build_effcnet_block(BlockConfig(in_channels=4, growth=2), "b")
        block.reset_parameters(rng)
        x = Tensor(rng.normal(size=(2, 4, 4, 4)))
        out = block.forward(x, 'eval')
        assert out.shape == (2, 6, 4, 4)
        assert_array_equal(out.data[:, :4], x.data)


class TestNetwork:

    def test_forward_shape(self, toy_config, rng):
        model = assemble_network(toy_config)
        logits = forward(model, Tensor(rng.normal(size=(3, 3, 32, 32))))
        assert logits.shape == (3, 2)

    def test_reference_forward_shape(self):
        model = assemble_network(NetworkConfig.load(resource_path("effcnet-cifar10.ini")))
        assert model.final_features == 444
        logits = forward(model, Tensor(np.zeros((1, 3, 32, 32))))
        assert logits.shape == (1, 10)

    def test_input_shape_checked(self, toy_config):
        model = assemble_network(toy_config)
        with pytest.raises(ShapeError):
            forward(model, Tensor(np.zeros((1, 3, 16, 16))))

    def test_unknown_mode(self, toy_config):
        with pytest.raises(ConfigError):
            forward(assemble_network(toy_config), Tensor(np.zeros((1, 3, 32, 32))), mode='infer')

    def test_parameter_names(self, toy_config):
        names = list(assemble_network(toy_config).parameters())
        assert names[0] == "stem.conv.weight"
        assert "stage1.block1.dw.weight" in names
        assert "stage1.block2.pw2.weight" in names
        assert names[-2:] == ["head.linear.weight", "head.linear.bias"]

    def test_state_includes_running_statistics(self, toy_config):
        model = assemble_network(toy_config)
        assert "stage1.block1.bn.bn_running_var" in model.state()
        assert "stage1.block1.bn.bn_running_var" not in model.parameters()

    def test_trainable_tensors_require_grad(self, toy_config):
        model = assemble_network(toy_config)
        assert all(t.requires_grad for t in model.parameters().values())
        assert not model.state()["head.bn.bn_running_mean"].requires_grad

    def test_seeded_initialization(self, toy_config):
        a, b = assemble_network(toy_config, seed=3), assemble_network(toy_config, seed=3)
        for (name, x), (_, y) in zip(a.state().items(), b.state().items()):
            assert_array_equal(x.data, y.data, err_msg=name)
        c = assemble_network(toy_config, seed=4)
        assert not np.array_equal(a.state()["stem.conv.weight"].data, c.state()["stem.conv.weight"].data)

    def test_load_state(self, toy_config, rng):
        source, target = assemble_network(toy_config, seed=1), assemble_network(toy_config, seed=2)
        target.load_state({name: t.data for name, t in source.state().items()})
        x = Tensor(rng.normal(size=(2, 3, 32, 32)))
        assert_array_equal(forward(source, x).data, forward(target, x).data)

    def test_load_state_names(self, toy_config):
        model = assemble_network(toy_config)
        state = {name: t.data for name, t in model.state().items()}
        state.pop("stem.conv.weight")
        with pytest.raises(ConfigError):
            model.load_state(state)

    def test_load_state_sizes(self, toy_config):
        model = assemble_network(toy_config)
        state = {name: t.data for name, t in model.state().items()}
        state["stem.conv.weight"] = np.zeros(3)
        with pytest.raises(ShapeError):
            model.load_state(state)

    def test_zero_head_gives_zero_logits(self, toy_config, rng):
        model = assemble_network(NetworkConfig(**dict(toy_config.__dict__, zero_head=True)))
        assert_array_equal(forward(model, Tensor(rng.normal(size=(2, 3, 32, 32)))).data, 0.0)

    def test_condensenet_network(self):
        cfg = NetworkConfig(
            variant=CONDENSENET_STATIC, stages=((2, 0), (2, 1)), base_growth=8, init_channels=16, num_classes=10
        )
        model = assemble_network(cfg)
        assert forward(model, Tensor(np.zeros((1, 3, 32, 32)))).shape == (1, 10)

    def test_train_mode_updates_running_statistics(self, toy_config, rng):
        model = assemble_network(toy_config)
        before = model.state()["stem.conv.weight"]
        forward(model, Tensor(rng.normal(size=(4, 3, 32, 32))), mode='train', rng=rng)
        assert model.state()["stem.conv.weight"] is before
        assert not np.array_equal(model.state()["head.bn.bn_running_mean"].data, 0.0)


class TestNetworkGradients:
    """
    Whole network against finite differences: one block on 8 x 8 inputs
    """

    @pytest.fixture
    def model(self, float64, micro_config):
        assert micro_config.variant == EFFCNET
        return assemble_network(micro_config, seed=5)

    def test_input_gradient(self, model, rng):
        x = Tensor(rng.normal(size=(2, 3, 8, 8)))
        weights = Tensor(rng.normal(size=(2, 3)))
        assert grad_check(lambda t: tsum(mul(forward(model, t, 'eval'), weights)), x) < TOLERANCE

    @pytest.mark.parametrize("name", [
        "stem.conv.weight", "stage1.block1.dw.weight", "stage1.block1.pw1.weight", "stage1.block1.pw2.weight",
        "stage1.block1.bn.bn_gamma", "head.linear.weight",
    ])
    def test_parameter_gradient(self, model, rng, name):
        x = Tensor(rng.normal(size=(2, 3, 8, 8)))
        labels = np.array([0, 2])

        def loss(t):
            model.set_parameter(name, t)
            return softmax_cross_entropy(forward(model, x, 'eval'), labels)

        assert grad_check(loss, model.parameters()[name]) < TOLERANCE

# vim: ft=python:ts=4:sw=4
