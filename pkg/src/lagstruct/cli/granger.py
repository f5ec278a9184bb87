"""Runs Granger causality F-tests of each cause against the effect."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging

from lagstruct import granger
from lagstruct.cli import config as cfg
from lagstruct.cli.indicator import resolve_causes
from lagstruct.panel_io import read_panel, write_results

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("granger", help=__doc__)
    cfg.add_common_arguments(parser)
    cfg.add_panel_arguments(parser)
    parser.add_argument(
        "--lag-orders", type=int, nargs="+", help="Lag orders to test."
    )
    parser.add_argument(
        "--variants",
        nargs="+",
        choices=granger.VARIANTS,
        help="Transformations applied before testing.",
    )
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_granger(cfg.resolve(args))


def cmd_granger(config: cfg.RunConfig) -> int:
    panel = read_panel(config.input_path(), config.schema())
    effect = config.require_effect()
    results = granger.granger_panel(
        panel,
        effect,
        resolve_causes(panel, config),
        lag_orders=config.lag_orders,
        variants=config.variants,
    )
    write_results(
        results, config.out_path("granger"), config.format, config=config.as_dict()
    )

    failures = sum(r.error is not None for r in results)
    if failures:
        logger.warning(f"{failures} of {len(results)} tests failed.")
    if results and failures == len(results):
        logger.error("Every Granger test failed.")
        return 3
    return 0
