"""Checks the random matrix results against Wishart simulations.

The standardized largest eigenvalue of simulated white Wishart matrices
is compared with the tabulated Tracy-Widom F1, its scaled mean with the
almost-sure limit, and simulated spectra with the Marcenko-Pastur
density.  Checks at small dimensions are reported but do not fail the
run.
"""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import logging
import math

import numpy as np
import pandas as pd

from lagstruct import rmt
from lagstruct.cli import config as cfg
from lagstruct.errors import ConfigError
from lagstruct.panel_io import write_results

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 100


def add_parser(subparsers):
    parser = subparsers.add_parser(
        "validate-rmt", help="Checks the random matrix results by simulation."
    )
    cfg.add_common_arguments(parser)
    parser.add_argument("-n", type=int, help="Number of rows of each sample.")
    parser.add_argument("-p", type=int, help="Number of columns of each sample.")
    parser.add_argument(
        "-r", "--replications", type=int, help="Number of simulated matrices."
    )
    parser.add_argument("--processes", type=int, help="Number of worker processes.")
    parser.add_argument(
        "--mp-n", type=int, help="Rows of the Marcenko-Pastur check matrices."
    )
    parser.add_argument(
        "--mp-ratios", type=float, nargs="+", help="Values of p/n to check."
    )
    parser.set_defaults(func=main)
    return parser


def main(args) -> int:
    return cmd_validate_rmt(cfg.resolve(args))


def _row(check, value, lower, upper, gated):
    passed = bool(lower <= value <= upper)
    return {
        "check": check,
        "value": value,
        "lower": lower,
        "upper": upper,
        "gated": gated,
        "passed": passed,
    }


def validation_report(config: cfg.RunConfig) -> pd.DataFrame:
    """
    Returns a DataFrame with one row per check, giving the measured value,
    its accepted range, whether the check is gated at these dimensions,
    and whether it passed.
    """
    if config.replications < MIN_REPLICATIONS:
        raise ConfigError(
            f"At least {MIN_REPLICATIONS} replications are needed, "
            f"got {config.replications}."
        )
    n, p = config.n, config.p
    table = rmt.default_tw_table()

    l1 = rmt.lmax_sample(
        n, p, config.replications, config.seed, processes=config.processes
    )
    consts = rmt.wishart_constants(n, p)
    z = (l1 - consts.mu_np) / consts.sigma_np

    gated = min(n, p) >= config.gate_min_dim
    lo, hi = config.p_le_zero_range
    rows = [
        _row("ks_distance", rmt.ks_distance(z, table), 0.0, config.ks_tolerance, gated),
        _row("p_le_zero", float(np.mean(z <= 0)), lo, hi, gated),
    ]

    limit = (1 + math.sqrt(min(n, p) / max(n, p))) ** 2
    ratio = float(np.mean(l1 / max(n, p)) / limit)
    rows.append(
        _row(
            "strong_law_ratio",
            ratio,
            1 - config.strong_law_tolerance,
            1 + config.strong_law_tolerance,
            min(n, p) >= config.strong_law_min_dim,
        )
    )

    for i, r in enumerate(config.mp_ratios):
        mp_p = max(1, round(r * config.mp_n))
        params = rmt.MPParams.from_dims(config.mp_n, mp_p)
        eigs = rmt.wishart_spectrum(config.mp_n, mp_p, config.seed + i)
        dev = rmt.mp_histogram_deviation(eigs, params, bins=config.mp_bins)
        rows.append(
            _row(
                f"mp_deviation_{r:g}",
                dev,
                0.0,
                config.mp_tolerance,
                config.mp_n >= config.gate_min_dim,
            )
        )
        tol = config.mp_normalization_tolerance
        rows.append(
            _row(
                f"mp_normalization_{r:g}",
                rmt.mp_normalization(params),
                1 - tol,
                1 + tol,
                True,
            )
        )

    return pd.DataFrame(rows)


def cmd_validate_rmt(config: cfg.RunConfig) -> int:
    report = validation_report(config)

    for r in report.itertuples():
        if r.gated:
            verdict = "PASS" if r.passed else "FAIL"
        else:
            verdict = "INFO"
        print(f"{r.check}: {r.value:.6g} in [{r.lower:g}, {r.upper:g}] {verdict}")

    failed = report[report["gated"] & ~report["passed"]]
    write_results(
        report,
        config.out_path("validate-rmt"),
        config.format,
        config=config.as_dict(),
        notes={"passed": failed.empty},
    )
    if not failed.empty:
        logger.error(f"Failed checks: {', '.join(failed['check'])}")
        return 3
    return 0
