#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# cost.py - Parameter and FLOP analyzer
#
# FLOPs follow the multiply-accumulate convention: one MAC is one FLOP and only
# convolutions and linear layers are counted. A convolution costs
# D' x D' x S x S x X/G x Y, a linear layer F x classes.
#

import collections
import io

from effcnet.errors import ShapeError

CONVENTION = "1 multiply-accumulate = 1 FLOP, convolutions and linear layers only"

CostRow = collections.namedtuple('CostRow', ['name', 'params', 'flops'])


class CostReport(object):
    """
    Per-layer parameter and FLOP counts with their totals
    """

    def __init__(self, rows, title="", input_shape=None):
        self.rows = [CostRow(*row) for row in rows]
        self.title = title
        self.input_shape = tuple(input_shape) if input_shape else None

    @property
    def total_params(self):
        return sum(row.params for row in self.rows)

    @property
    def total_flops(self):
        return sum(row.flops for row in self.rows)

    def row(self, name):
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def to_table(self):
        """
        Aligned plain-text table with a totals line
        """
        name_width = max([len("layer"), len("total")] + [len(r.name) for r in self.rows])
        params_width = max(len("params"), len("{:,}".format(self.total_params)))
        flops_width = max(len("flops"), len("{:,}".format(self.total_flops)))

        def line(name, params, flops):
            return "%s  %s  %s\n" % (name.ljust(name_width), params.rjust(params_width), flops.rjust(flops_width))

        out = io.StringIO()
        if self.title:
            out.write("%s\n" % self.title)
        if self.input_shape:
            out.write("input: %s\n" % "x".join(str(e) for e in self.input_shape))
        out.write("flops: %s\n\n" % CONVENTION)

        out.write(line("layer", "params", "flops"))
        out.write(line("-" * name_width, "-" * params_width, "-" * flops_width))
        for r in self.rows:
            out.write(line(r.name, "{:,}".format(r.params), "{:,}".format(r.flops)))
        out.write(line("-" * name_width, "-" * params_width, "-" * flops_width))
        out.write(line("total", "{:,}".format(self.total_params), "{:,}".format(self.total_flops)))
        out.write("\n%.2f M parameters, %.2f M FLOPs\n" % (self.total_params / 1e6, self.total_flops / 1e6))
        return out.getvalue()

    def to_csv(self):
        """
        layer,params,flops rows and a final total row
        """
        out = io.StringIO()
        out.write("layer,params,flops\n")
        for r in self.rows:
            out.write("%s,%d,%d\n" % (r.name, r.params, r.flops))
        out.write("total,%d,%d\n" % (self.total_params, self.total_flops))
        return out.getvalue()

    def __repr__(self):
        return "CostReport(%s, %d rows, params=%d, flops=%d)" % (
            self.title, len(self.rows), self.total_params, self.total_flops
        )


def analyze(model, input_shape=None, detailed=False):
    """
    Cost report of a model: one row per unit (stem, block, transition, head),
    or one row per layer with parameters or FLOPs when detailed
    """
    shape = tuple(input_shape) if input_shape is not None else model.input_shape
    if len(shape) != 3:
        raise ShapeError("Input shape must be (C, H, W), got %s" % list(shape))
    input_shape = shape

    rows = []
    for unit in model.units:
        unit_params, unit_flops = 0, 0
        for layer, in_shape, _ in unit.trace(shape):
            params, flops = layer.param_count(), layer.macs(in_shape)
            unit_params += params
            unit_flops += flops
            if detailed and (params or flops):
                rows.append(("%s.%s" % (unit.name, layer.name), params, flops))
        if not detailed:
            rows.append((unit.name, unit_params, unit_flops))
        shape = unit.output_shape(shape)

    title = model.config.label or "%s, %d classes" % (model.config.variant, model.config.num_classes)
    return CostReport(rows, title, input_shape)


def count_params(model, detailed=False):
    """
    Trainable elements per layer: convolution weights, BN gamma and beta,
    linear weight and bias
    """
    return analyze(model, detailed=detailed)


def count_flops(model, input_shape=None, detailed=False):
    return analyze(model, input_shape, detailed)


def compare(report, baseline):
    """
    Side-by-side totals of two reports, with the ratio report / baseline
    """
    headers = (report.title or "model", baseline.title or "baseline")
    width = max(len("params"), len("flops"))
    col_a = max(len(headers[0]), len("{:,}".format(max(report.total_params, report.total_flops))))
    col_b = max(len(headers[1]), len("{:,}".format(max(baseline.total_params, baseline.total_flops))))

    def line(name, a, b, ratio):
        return "%s  %s  %s  %s\n" % (name.ljust(width), a.rjust(col_a), b.rjust(col_b), ratio.rjust(5))

    def ratio(a, b):
        return "%.3f" % (a / b) if b else "-"

    out = io.StringIO()
    out.write("flops: %s\n\n" % CONVENTION)
    out.write(line("", headers[0], headers[1], "ratio"))
    out.write(line("params", "{:,}".format(report.total_params), "{:,}".format(baseline.total_params),
                   ratio(report.total_params, baseline.total_params)))
    out.write(line("flops", "{:,}".format(report.total_flops), "{:,}".format(baseline.total_flops),
                   ratio(report.total_flops, baseline.total_flops)))
    return out.getvalue()


__all__ = ['CostReport', 'CostRow', 'analyze', 'count_params', 'count_flops', 'compare', 'CONVENTION']

# vim: ft=python:ts=4:sw=4
