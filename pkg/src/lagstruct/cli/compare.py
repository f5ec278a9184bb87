"""Compares the sigma_lambda ranking of causes with the Granger ranking.

For each configured lag, the output table holds every cause's mean
sigma_lambda (with that lag as the largest lag) and its Granger log(1/p)
at that lag order.  The Spearman rank correlation between the two columns
at each lag is written as a note.
"""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from lagstruct import granger, indicator
from lagstruct.cli import config as cfg
from lagstruct.cli.indicator import resolve_causes
from lagstruct.panel import TimeSeriesPanel
from lagstruct.panel_io import read_panel, write_results

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser(
        "compare", help="Compares the sigma_lambda and Granger rankings of causes."
    )
    cfg.add_common_arguments(parser)
    cfg.add_panel_arguments(parser)
    parser.add_argument("-w", "--window-w", type=int, help="Rolling window length.")
    parser.add_argument(
        "--compare-lags", type=int, nargs="+", help="Lags to compare at."
    )
    parser.add_argument(
        "--compare-variant",
        choices=granger.VARIANTS,
        help="Granger variant to compare against.",
    )
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_compare(cfg.resolve(args))


def spearman(a, b) -> float:
    """
    Returns the Spearman rank correlation of *a* and *b*, ignoring pairs
    with a NaN, or NaN if fewer than three pairs remain or either side is
    constant.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ok = ~(np.isnan(a) | np.isnan(b))
    if np.count_nonzero(ok) < 3 or np.ptp(a[ok]) == 0 or np.ptp(b[ok]) == 0:
        return np.nan
    return float(stats.spearmanr(a[ok], b[ok]).statistic)


def comparison_table(
    panel: TimeSeriesPanel,
    effect: str,
    causes: List[str],
    config: cfg.RunConfig,
) -> Tuple[pd.DataFrame, Dict[str, float]]:
    """
    Returns the comparison DataFrame (one row per cause) and a dict of the
    Spearman correlations keyed by "spearman_lag<L>".
    """
    table = pd.DataFrame({"cause": causes})
    for lag in config.compare_lags:
        spec = indicator.WindowSpec(config.window_w, lag, config.include_lag0)
        series = indicator.indicator_series(
            panel, effect, causes, spec, processes=config.processes
        )
        means = dict(indicator.rank_causes(series))
        table[f"mean_sigma_lambda_lag{lag}"] = [means[c] for c in causes]

    results = granger.granger_panel(
        panel,
        effect,
        causes,
        lag_orders=config.compare_lags,
        variants=[config.compare_variant],
    )
    for lag in config.compare_lags:
        by_cause = {r.cause_name: r.log_inv_p for r in results if r.lag_order == lag}
        table[f"log_inv_p_lag{lag}"] = [by_cause[c] for c in causes]

    notes = {
        f"spearman_lag{lag}": spearman(
            table[f"mean_sigma_lambda_lag{lag}"], table[f"log_inv_p_lag{lag}"]
        )
        for lag in config.compare_lags
    }
    return table, notes


def cmd_compare(config: cfg.RunConfig) -> int:
    panel = read_panel(config.input_path(), config.schema())
    effect = config.require_effect()
    table, notes = comparison_table(
        panel, effect, resolve_causes(panel, config), config
    )
    for k, v in notes.items():
        logger.info(f"{k}: {v:.4f}")

    write_results(
        table,
        config.out_path("compare"),
        config.format,
        config=config.as_dict(),
        notes=notes,
    )
    return 0
