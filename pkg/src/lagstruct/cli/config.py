"""Run configuration for the lagstruct subcommands.

A configuration file is a flat YAML mapping whose keys are the field names
of RunConfig.  Every key also has a command-line flag (the key with
underscores replaced by hyphens), and a flag given on the command line
overrides the file.
"""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import argparse
import dataclasses
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from lagstruct.errors import ConfigError
from lagstruct.granger import VARIANTS
from lagstruct.panel_io import FORMATS, MISSING_POLICIES, PanelSchema

logger = logging.getLogger(__name__)

KINDS = ("iid", "coupled")


@dataclass(frozen=True)
class RunConfig:
    # common
    seed: int = 0
    out: Optional[str] = None
    format: str = "csv"
    processes: int = 1

    # twtable
    s_min: float = -10.0
    s_max: float = 8.0
    step: float = 0.005

    # validate-rmt
    n: int = 100
    p: int = 100
    replications: int = 2000
    ks_tolerance: float = 0.05
    p_le_zero_range: List[float] = field(default_factory=lambda: [0.80, 0.86])
    strong_law_tolerance: float = 0.03
    strong_law_min_dim: int = 200
    mp_n: int = 1000
    mp_ratios: List[float] = field(default_factory=lambda: [1.0, 0.5])
    mp_bins: int = 40
    mp_tolerance: float = 0.02
    mp_normalization_tolerance: float = 1e-3
    gate_min_dim: int = 100

    # simulate
    kind: str = "coupled"
    length: int = 400
    n_series: int = 10
    true_lag: int = 2
    beta: float = 0.9
    noise_sigma: float = 0.5
    switch_period: Optional[int] = None
    n_iid: int = 3

    # indicator, granger, and compare
    input: Optional[str] = None
    time_column: Optional[str] = None
    date_format: Optional[str] = None
    missing_policy: str = "drop_row"
    effect: Optional[str] = None
    causes: Optional[List[str]] = None
    window_w: int = 60
    max_lag: int = 5
    include_lag0: bool = False
    tw_monitor: bool = False
    lag_orders: List[int] = field(default_factory=lambda: [2, 5])
    variants: List[str] = field(default_factory=lambda: list(VARIANTS))
    compare_lags: List[int] = field(default_factory=lambda: [2, 5])
    compare_variant: str = "raw"

    # Echoed into outputs only: a mapping of bucket name to column names.
    buckets: Optional[Dict[str, List[str]]] = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}.")
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}.")
        if self.missing_policy not in MISSING_POLICIES:
            raise ConfigError(
                f"missing_policy must be one of {MISSING_POLICIES}, "
                f"got {self.missing_policy!r}."
            )
        for v in list(self.variants) + [self.compare_variant]:
            if v not in VARIANTS:
                raise ConfigError(f"Unknown Granger variant {v!r}.")
        if len(self.p_le_zero_range) != 2:
            raise ConfigError("p_le_zero_range must hold a lower and an upper bound.")
        if self.processes < 1:
            raise ConfigError("processes must be a positive integer.")
        if self.buckets is not None and not isinstance(self.buckets, dict):
            raise ConfigError("buckets must map bucket names to lists of columns.")

    def as_dict(self) -> Dict[str, Any]:
        """Returns the configuration with sorted keys, for echoing."""
        return dict(sorted(dataclasses.asdict(self).items()))

    def schema(self) -> PanelSchema:
        """Returns the PanelSchema for reading the input panel."""
        return PanelSchema(
            time_column=self.time_column,
            date_format=self.date_format,
            missing_policy=self.missing_policy,
        )

    def out_path(self, default: str) -> Path:
        """Returns the output path, or *default* with the format's suffix."""
        if self.out is None:
            return Path(f"{default}.{self.format}")
        return Path(self.out)

    def input_path(self) -> Path:
        if self.input is None:
            raise ConfigError("An input panel is required (input, or --input).")
        return Path(self.input)

    def require_effect(self) -> str:
        if self.effect is None:
            raise ConfigError("An effect column is required (effect, or --effect).")
        return self.effect


FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config(path: Optional[Path]) -> Dict[str, Any]:
    """
    Returns the mapping read from the YAML file at *path*, or an empty
    dict if *path* is None.
    """
    if path is None:
        return {}
    try:
        info = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as err:
        raise ConfigError(f"{path} is not valid YAML: {err}") from err

    if info is None:
        return {}
    if not isinstance(info, dict):
        raise ConfigError(f"{path} must hold a mapping of keys to values.")
    unknown = sorted(set(info) - FIELDS)
    if unknown:
        raise ConfigError(f"Unknown configuration key(s) in {path}: {unknown}")
    return info


def resolve(args: argparse.Namespace) -> RunConfig:
    """
    Returns the RunConfig built from the defaults, then the file named by
    args.config, then any flags in *args* that were given (not None).
    """
    info = load_config(getattr(args, "config", None))
    for key, value in vars(args).items():
        if key in FIELDS and value is not None:
            info[key] = value
    try:
        config = RunConfig(**info)
    except TypeError as err:
        raise ConfigError(str(err)) from err
    logger.debug(f"Resolved configuration: {config.as_dict()}")
    return config


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Adds the flags shared by every subcommand to *parser*."""
    parser.add_argument(
        "-c", "--config", type=Path, help="YAML file of configuration keys."
    )
    parser.add_argument("--seed", type=int, help="Random seed.")
    parser.add_argument("-o", "--out", help="Output file path.")
    parser.add_argument("--format", choices=FORMATS, help="Output format.")


def add_panel_arguments(parser: argparse.ArgumentParser) -> None:
    """Adds the flags for reading a panel and choosing columns."""
    parser.add_argument("-i", "--input", help="CSV file of the time series panel.")
    parser.add_argument("--time-column", help="Name of the timestamp column.")
    parser.add_argument("--date-format", help="strftime() pattern of the timestamps.")
    parser.add_argument(
        "--missing-policy",
        choices=MISSING_POLICIES,
        help="What to do with rows that have missing values.",
    )
    parser.add_argument("--effect", help="Name of the effect column.")
    parser.add_argument(
        "--causes", nargs="+", help="Names of the cause columns (default: all others)."
    )
    parser.add_argument("--processes", type=int, help="Number of worker processes.")
