"""Writes a synthetic time series panel."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging

from lagstruct import synth
from lagstruct.cli import config as cfg
from lagstruct.panel_io import write_panel, write_results

logger = logging.getLogger(__name__)


def add_parser(subparsers):
    parser = subparsers.add_parser("simulate", help=__doc__)
    cfg.add_common_arguments(parser)
    parser.add_argument(
        "--kind",
        choices=cfg.KINDS,
        help="Independent columns, or a coupled pair with distractors.",
    )
    parser.add_argument("--length", type=int, help="Number of time steps.")
    parser.add_argument(
        "--n-series", type=int, help="Number of columns of an iid panel."
    )
    parser.add_argument("--true-lag", type=int, help="Lag of the coupling.")
    parser.add_argument("--beta", type=float, help="Coupling coefficient.")
    parser.add_argument("--noise-sigma", type=float, help="Effect noise level.")
    parser.add_argument(
        "--switch-period",
        type=int,
        help="Alternate the coupling on and off in blocks of this length.",
    )
    parser.add_argument("--n-iid", type=int, help="Number of distractor columns.")
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_simulate(cfg.resolve(args))


def cmd_simulate(config: cfg.RunConfig) -> int:
    if config.kind == "iid":
        panel = synth.iid_panel(config.n_series, config.length, config.seed)
    else:
        spec = synth.CouplingSpec(
            true_lag=config.true_lag,
            beta=config.beta,
            noise_sigma=config.noise_sigma,
            length=config.length,
            seed=config.seed,
            switch_period=config.switch_period,
        )
        panel = synth.coupled_panel(spec, config.n_iid)

    out = config.out_path("simulate")
    if config.format == "csv":
        write_panel(panel, out, config=config.as_dict())
    else:
        write_results(panel.to_frame(), out, "json", config=config.as_dict())
    logger.info(f"Simulated a {config.kind} panel with columns {list(panel.names)}")
    return 0
