"""Tabulates the Tracy-Widom distribution F1 and the Hastings-McLeod solution."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging

from lagstruct import rmt
from lagstruct.cli import config as cfg
from lagstruct.panel_io import write_results

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("twtable", help=__doc__)
    cfg.add_common_arguments(parser)
    parser.add_argument("--s-min", type=float, help="Left end of the s grid.")
    parser.add_argument(
        "--s-max", type=float, help="Right end of the s grid, at least 6."
    )
    parser.add_argument("--step", type=float, help="Grid spacing.")
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_twtable(cfg.resolve(args))


def cmd_twtable(config: cfg.RunConfig) -> int:
    table = rmt.build_tw_table(config.s_min, config.s_max, config.step)
    logger.info(
        f"F1(0) = {float(rmt.tw_cdf(0, table)):.4f}, "
        f"F1(1) = {float(rmt.tw_cdf(1, table)):.4f}, "
        f"F1(2) = {float(rmt.tw_cdf(2, table)):.4f}"
    )
    write_results(
        table, config.out_path("twtable"), config.format, config=config.as_dict()
    )
    return 0
