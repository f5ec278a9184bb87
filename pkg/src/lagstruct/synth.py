"""Synthetic panel generators.

These build the independent and structurally coupled panels that the
indicator is exercised on.  Every generator is deterministic given its
seed: SeedSequence(seed).spawn(k) provides one PCG64 stream per column,
so column i of a panel does not change when more columns are requested.
"""

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

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from lagstruct.panel import TimeSeriesPanel
from lagstruct.util import spawn_generators

logger = logging.getLogger(__name__)

START_DATE = "2022-01-03"


@dataclass(frozen=True)
class CouplingSpec:
    """
    Describes a cause x and an effect y with

        y[t] = beta * x[t - true_lag] + noise_sigma * e[t]

    If *switch_period* is given, the coupling is only active in alternating
    blocks of that many observations (the first block is active).
    """

    true_lag: int = 2
    beta: float = 0.9
    noise_sigma: float = 0.5
    length: int = 400
    seed: int = 0
    switch_period: Optional[int] = None

    def __post_init__(self):
        if self.true_lag < 0:
            raise ValueError(f"true_lag must not be negative, got {self.true_lag}.")
        if self.noise_sigma < 0:
            raise ValueError(
                f"noise_sigma must not be negative, got {self.noise_sigma}."
            )
        if not self.length > self.true_lag + 10:
            raise ValueError(
                f"length ({self.length}) must exceed true_lag + 10 "
                f"({self.true_lag + 10})."
            )
        if self.switch_period is not None and self.switch_period < 1:
            raise ValueError("switch_period must be a positive integer.")


def date_index(length: int, start: str = START_DATE) -> pd.DatetimeIndex:
    """Returns *length* consecutive daily timestamps beginning at *start*."""
    return pd.date_range(start, periods=length, freq="D")


def iid_panel(
    n_series: int, T: int, seed: int, prefix: str = "iid"
) -> TimeSeriesPanel:
    """
    Returns a panel of *n_series* independent standard normal columns of
    length *T*, named prefix0, prefix1, ...
    """
    if n_series < 2:
        raise ValueError(f"n_series must be at least 2, got {n_series}.")
    if T < 10:
        raise ValueError(f"T must be at least 10, got {T}.")

    gens = spawn_generators(seed, n_series)
    values = np.column_stack([g.standard_normal(T) for g in gens])
    names = tuple(f"{prefix}{i}" for i in range(n_series))
    return TimeSeriesPanel(date_index(T), names, values)


def coupling_mask(length: int, switch_period: Optional[int]) -> np.ndarray:
    """Returns a boolean array that is True where the coupling is active."""
    if switch_period is None:
        return np.ones(length, dtype=bool)
    return (np.arange(length) // switch_period) % 2 == 0


def _coupled_columns(spec: CouplingSpec, gens: Sequence[np.random.Generator]):
    # Returns x and y using the first two generators in *gens*.
    T = spec.length
    lag = spec.true_lag
    x = gens[0].standard_normal(T)
    e = gens[1].standard_normal(T)

    # Where y is pure noise it keeps the variance of the coupled part, so
    # that switching the coupling off changes only the dependence.
    scale = math.hypot(spec.beta, spec.noise_sigma) or 1.0
    y = scale * e

    coupled = np.zeros(T)
    coupled[lag:] = spec.beta * x[: T - lag] + spec.noise_sigma * e[lag:]
    active = coupling_mask(T, spec.switch_period)
    active[:lag] = False
    y[active] = coupled[active]
    return x, y


def coupled_pair(spec: CouplingSpec) -> TimeSeriesPanel:
    """
    Returns a two-column panel, the cause "x" followed by the effect "y",
    built as described by *spec*.

    Where the coupling is inactive (the first true_lag entries, and the off
    blocks when switch_period is set) y is pure noise scaled to
    hypot(beta, noise_sigma), the standard deviation of the coupled part,
    or to 1 if both are zero.  With beta = 1 and noise_sigma = 0 the head of
    y therefore has unit variance while the rest is an exact copy of x.
    """
    x, y = _coupled_columns(spec, spawn_generators(spec.seed, 2))
    return TimeSeriesPanel(
        date_index(spec.length), ("x", "y"), np.column_stack([x, y])
    )


def coupled_panel(spec: CouplingSpec, n_iid: int = 3) -> TimeSeriesPanel:
    """
    Returns the coupled pair of *spec* ("x" and "y") together with *n_iid*
    independent standard normal distractor columns "iid0", "iid1", ...

    The x and y columns are identical to those of coupled_pair(spec).
    """
    if n_iid < 0:
        raise ValueError(f"n_iid must not be negative, got {n_iid}.")
    gens = spawn_generators(spec.seed, 2 + n_iid)
    x, y = _coupled_columns(spec, gens)
    distractors = [g.standard_normal(spec.length) for g in gens[2:]]
    names = ("x", "y") + tuple(f"iid{i}" for i in range(n_iid))
    return TimeSeriesPanel(
        date_index(spec.length), names, np.column_stack([x, y] + distractors)
    )


def random_walk_pair(T: int, seed: int) -> TimeSeriesPanel:
    """
    Returns two independent Gaussian random walks, "x" and "y", of length
    *T*.  Regressions on their levels are the classic spurious case.
    """
    if T < 10:
        raise ValueError(f"T must be at least 10, got {T}.")
    gens = spawn_generators(seed, 2)
    values = np.column_stack([np.cumsum(g.standard_normal(T)) for g in gens])
    return TimeSeriesPanel(date_index(T), ("x", "y"), values)
