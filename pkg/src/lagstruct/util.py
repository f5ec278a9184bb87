#!/usr/bin/env python
"""This module contains lagstruct utility functions."""

# Copyright 2026, lagstruct developers.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import argparse
import logging
from typing import Sequence

import numpy as np

import lagstruct


def parent_parser() -> argparse.ArgumentParser:
    """Returns a parent parser with common arguments for lagstruct programs."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Displays additional information.",
    )
    parent.add_argument(
        "--version",
        action="version",
        version=f"lagstruct Software version {lagstruct.__version__}",
        help="Show library version number.",
    )
    return parent


def set_logger(verblvl=None) -> None:
    """Sets the log level and configuration for applications."""
    logger = logging.getLogger(__name__.split(".")[0])
    lvl_dict = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
    if verblvl in lvl_dict:
        lvl = lvl_dict[verblvl]
    else:
        lvl = lvl_dict[max(lvl_dict.keys())]

    logger.setLevel(lvl)

    ch = logging.StreamHandler()
    ch.setLevel(lvl)

    if lvl < 20:  # less than INFO
        formatter = logging.Formatter("%(name)s - %(levelname)s: %(message)s")
    else:
        formatter = logging.Formatter("%(levelname)s: %(message)s")

    ch.setFormatter(formatter)
    logger.addHandler(ch)

    return


def spawn_generators(seed: int, count: int) -> list:
    """
    Returns a list of *count* independent numpy Generators derived from
    *seed*.

    Child i is built from ``SeedSequence(seed).spawn(count)[i]`` and the
    PCG64 bit generator, so the stream for child i does not depend on how
    many other children are requested or on the order in which they are
    consumed.
    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(ss)) for ss in children]


def format_number(value: float, digits: int = 12) -> str:
    """
    Returns *value* as text with *digits* significant digits, or an empty
    string when *value* is NaN (the gap convention of all output files).
    """
    if value is None or np.isnan(value):
        return ""
    return f"{value:.{digits}g}"


def as_float_array(values: Sequence) -> np.ndarray:
    """Returns *values* as a one-dimensional float ndarray."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"Expected a one-dimensional series, got shape {arr.shape}.")
    return arr
