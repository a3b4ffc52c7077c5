#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

import pytest

from effcnet.errors import ShapeError
from effcnet.model import NetworkConfig, assemble_network, analyze, count_params, count_flops, compare
from effcnet.resources import resource_path

REFERENCE_COSTS = {
    "effcnet-cifar10.ini": (462292, 60839256),
    "effcnet-cifar100.ini": (502342, 60879216),
    "condensenet-cifar10.ini": (527458, 64208784),
    "condensenet-cifar100.ini": (600268, 64281504),
}


def reference_model(name):
    return assemble_network(NetworkConfig.load(resource_path(name)))


@pytest.mark.parametrize("name", sorted(REFERENCE_COSTS))
def test_reference_costs(name):
    report = analyze(reference_model(name))
    assert (report.total_params, report.total_flops) == REFERENCE_COSTS[name]


@pytest.mark.parametrize("dataset", ["cifar10", "cifar100"])
def test_effcnet_is_cheaper_than_baseline(dataset):
    ours = analyze(reference_model("effcnet-%s.ini" % dataset))
    baseline = analyze(reference_model("condensenet-%s.ini" % dataset))
    assert ours.total_params < baseline.total_params
    assert ours.total_flops < baseline.total_flops


def test_params_match_model_tensors(toy_config):
    model = assemble_network(toy_config)
    assert count_params(model).total_params == model.param_count()


def test_detailed_report_has_same_totals(toy_config):
    model = assemble_network(toy_config)
    coarse, detailed = analyze(model), analyze(model, detailed=True)
    assert (coarse.total_params, coarse.total_flops) == (detailed.total_params, detailed.total_flops)
    assert "stage1.block1.dw" in [row.name for row in detailed.rows]
    assert "stage1.block1.relu" not in [row.name for row in detailed.rows]


def test_stem_and_head_only():
    model = assemble_network(NetworkConfig.from_string(
        "[network]\nstages =\ninit_channels = 8\nnum_classes = 10\n"
    ))
    report = analyze(model)
    assert [row.name for row in report.rows] == ["stem", "head"]
    assert report.row("stem") == ("stem", 216, 221184)
    assert report.row("head") == ("head", 106, 80)


def test_flops_scale_with_input(toy_config):
    model = assemble_network(toy_config)
    full = count_flops(model).row("stem").flops
    half = count_flops(model, input_shape=(3, 16, 16)).row("stem").flops
    assert full == 4 * half


def test_bad_input_shape(toy_config):
    with pytest.raises(ShapeError):
        analyze(assemble_network(toy_config), input_shape=(32, 32))


def test_outputs(toy_config):
    report = analyze(assemble_network(toy_config))
    table = report.to_table()
    assert table.startswith("toy\n")
    assert "{:,}".format(report.total_params) in table

    csv = report.to_csv().splitlines()
    assert csv[0] == "layer,params,flops"
    assert csv[-1] == "total,%d,%d" % (report.total_params, report.total_flops)
    assert len(csv) == len(report.rows) + 2


def test_compare():
    text = compare(analyze(reference_model("effcnet-cifar10.ini")), analyze(reference_model("condensenet-cifar10.ini")))
    assert "462,292" in text
    assert "527,458" in text
    assert "%.3f" % (462292 / 527458) in text

# vim: ft=python:ts=4:sw=4
