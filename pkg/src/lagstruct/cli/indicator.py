"""Computes the sigma_lambda lead-lag indicator for a panel."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging
from pathlib import Path
from typing import List

from lagstruct import indicator
from lagstruct.cli import config as cfg
from lagstruct.panel import TimeSeriesPanel
from lagstruct.panel_io import read_panel, write_results

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("indicator", help=__doc__)
    cfg.add_common_arguments(parser)
    cfg.add_panel_arguments(parser)
    parser.add_argument("-w", "--window-w", type=int, help="Rolling window length.")
    parser.add_argument("-L", "--max-lag", type=int, help="Largest lag.")
    parser.add_argument(
        "--include-lag0",
        action="store_true",
        default=None,
        help="Include lag 0 in the lag set.",
    )
    parser.add_argument(
        "--tw-monitor",
        action="store_true",
        default=None,
        help="Also write the rolling largest-eigenvalue test of the panel.",
    )
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_indicator(cfg.resolve(args))


def resolve_causes(panel: TimeSeriesPanel, config: cfg.RunConfig) -> List[str]:
    """Returns the configured causes, or every column but the effect."""
    effect = config.require_effect()
    if config.causes is not None:
        return list(config.causes)
    return [n for n in panel.names if n != effect]


def monitor_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}_tw_monitor{out.suffix}")


def cmd_indicator(config: cfg.RunConfig) -> int:
    panel = read_panel(config.input_path(), config.schema())
    effect = config.require_effect()
    causes = resolve_causes(panel, config)
    spec = indicator.WindowSpec(config.window_w, config.max_lag, config.include_lag0)

    series = indicator.indicator_series(
        panel, effect, causes, spec, processes=config.processes
    )
    for cause, mean in indicator.rank_causes(series):
        logger.info(f"{cause}: mean sigma_lambda {mean:.6g}")

    out = config.out_path("indicator")
    write_results(series, out, config.format, config=config.as_dict())

    if config.tw_monitor:
        monitor = indicator.tw_monitor_series(
            panel, [effect] + causes, config.window_w
        )
        write_results(
            monitor, monitor_path(out), config.format, config=config.as_dict()
        )
    return 0
