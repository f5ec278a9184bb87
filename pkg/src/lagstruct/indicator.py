"""Structural time dependence indicator.

For an effect series y and a cause candidate x, every rolling window of
w observations is standardized and, for each lag i from 0 to the maximum
lag, x is shifted forward by i and correlated with y.  The 2 by 2
correlation matrix of the pair has eigenvalues 1 +/- |rho|, so the
explanatory power of its first principal component, l1 / (l1 + l2), is
(1 + |rho|) / 2.  The indicator sigma_lambda is the standard deviation of
that explanatory power across lags.

Under independence the explanatory power barely moves from lag to lag
and sigma_lambda stays small.  A lead-lag relationship makes one lag
stand out, and sigma_lambda rises.

Conventions:

- Shifts are not cumulative: lag i shifts the original window by i.
- The rows that a shift leaves without a partner are dropped, and the
  overlap is standardized again before it is correlated.
- All standard deviations use the population convention (divide by the
  count).
- By default lag 0 is computed but left out of sigma_lambda.
- A window with zero variance leaves a gap (NaN) in the output.
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

import functools
import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
import pandas as pd

from lagstruct import rmt
from lagstruct.errors import (
    DegenerateWindowError,
    InsufficientDataError,
    InsufficientOverlapError,
)
from lagstruct.panel import TimeSeriesPanel
from lagstruct.util import as_float_array

logger = logging.getLogger(__name__)

# A window whose standard deviation is this small relative to its largest
# magnitude is treated as constant.
DEGENERATE_RTOL = 1e-12

MIN_OVERLAP = 3


@dataclass(frozen=True)
class WindowSpec:
    """
    The rolling window length *window_w*, the maximum lag *max_lag*, and
    whether lag 0 enters the standard deviation (*include_lag0*).
    """

    window_w: int = 60
    max_lag: int = 5
    include_lag0: bool = False

    def __post_init__(self):
        if self.window_w < 4:
            raise ValueError(f"window_w must be at least 4, got {self.window_w}.")
        if self.max_lag < 1:
            raise ValueError(f"max_lag must be at least 1, got {self.max_lag}.")
        if not self.window_w > self.max_lag + 2:
            raise ValueError(
                f"window_w ({self.window_w}) must exceed max_lag + 2 "
                f"({self.max_lag + 2}) so that every shift leaves "
                f"{MIN_OVERLAP} overlapping points."
            )

    @property
    def lag_set(self) -> Tuple[int, ...]:
        """The lags whose explanatory power enters sigma_lambda."""
        first = 0 if self.include_lag0 else 1
        return tuple(range(first, self.max_lag + 1))


@dataclass(frozen=True, eq=False)
class LagProfile:
    cause_name: str
    effect_name: str
    window_end: int
    V: np.ndarray


@dataclass(frozen=True, eq=False)
class IndicatorSeries:
    """
    The sigma_lambda series of one effect against several causes.

    *sigma_lambda* has one row per window end (*timestamps*) and one column
    per cause; gaps are NaN.  When the series was computed (rather than read
    back from a file), *profiles* holds the explanatory power of every
    window, cause, and lag, and *spec* the window specification.
    """

    effect_name: str
    cause_names: Tuple[str, ...]
    timestamps: pd.DatetimeIndex
    sigma_lambda: np.ndarray
    profiles: Optional[np.ndarray] = None
    spec: Optional[WindowSpec] = None

    def cause_index(self, cause: str) -> int:
        try:
            return self.cause_names.index(cause)
        except ValueError:
            raise KeyError(f"{cause!r} is not a cause in this series.") from None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            self.sigma_lambda,
            index=self.timestamps,
            columns=[f"sigma_lambda_{c}" for c in self.cause_names],
        )


def standardize_window(segment: npt.ArrayLike) -> np.ndarray:
    """
    Returns *segment* with its mean removed and divided by its population
    standard deviation.

    A DegenerateWindowError is raised if *segment* is constant.
    """
    x = as_float_array(segment)
    if x.size < 2:
        raise ValueError("A window needs at least two points to be standardized.")
    std = x.std()
    if std <= DEGENERATE_RTOL * np.max(np.abs(x)):
        raise DegenerateWindowError("The window has zero variance.")
    return (x - x.mean()) / std


def lagged_correlation(y: npt.ArrayLike, x: npt.ArrayLike, lag: int) -> float:
    """
    Returns the Pearson correlation between y[lag:] and x[:len(x) - lag],
    that is, between y and x shifted forward by *lag* steps, with the
    overlapping parts standardized again.
    """
    y_arr = as_float_array(y)
    x_arr = as_float_array(x)
    if y_arr.size != x_arr.size:
        raise ValueError(
            f"The series have different lengths, {y_arr.size} and {x_arr.size}."
        )
    if lag < 0:
        raise ValueError(f"lag must not be negative, got {lag}.")

    overlap = y_arr.size - lag
    if overlap < MIN_OVERLAP:
        raise InsufficientOverlapError(
            f"A lag of {lag} leaves {max(overlap, 0)} overlapping points, "
            f"fewer than {MIN_OVERLAP}."
        )

    ys = standardize_window(y_arr[lag:])
    xs = standardize_window(x_arr[:overlap])
    rho = float(np.mean(ys * xs))
    return min(1.0, max(-1.0, rho))


def explanatory_power(rho: Union[float, npt.ArrayLike]):
    """
    Returns l1 / (l1 + l2) for a 2 by 2 correlation matrix with off-diagonal
    *rho*, which is (1 + |rho|) / 2.
    """
    r = np.abs(np.asarray(rho, dtype=float))
    if np.any(r > 1 + 1e-12):
        raise ValueError(f"A correlation must lie in [-1, 1], got {rho}.")
    power = (1 + np.minimum(r, 1.0)) / 2
    if power.ndim == 0:
        return float(power)
    return power


def pca_explanatory_power(rho: float) -> float:
    """
    Returns l1 / (l1 + l2) from an explicit eigen-decomposition of the
    2 by 2 correlation matrix with off-diagonal *rho*.
    """
    if abs(rho) > 1 + 1e-12:
        raise ValueError(f"A correlation must lie in [-1, 1], got {rho}.")
    eigs = np.linalg.eigvalsh(np.array([[1.0, rho], [rho, 1.0]]))
    return float(eigs[-1] / eigs.sum())


def lag_profile(
    y: npt.ArrayLike,
    x: npt.ArrayLike,
    spec: WindowSpec,
    cause_name: str = "x",
    effect_name: str = "y",
    window_end: int = -1,
) -> LagProfile:
    """
    Returns the LagProfile of the window pair *y*, *x*: the explanatory
    power at each lag from 0 to spec.max_lag.
    """
    ys = standardize_window(y)
    xs = standardize_window(x)
    V = np.array(
        [
            explanatory_power(lagged_correlation(ys, xs, i))
            for i in range(spec.max_lag + 1)
        ]
    )
    return LagProfile(cause_name, effect_name, window_end, V)


def sigma_lambda(profile: LagProfile, spec: WindowSpec) -> float:
    """
    Returns the population standard deviation of the explanatory power over
    the lags in spec.lag_set.
    """
    lags = spec.lag_set
    if len(lags) < 2:
        raise ValueError(
            f"sigma_lambda needs at least two lags, but the lag set is {lags}."
        )
    if profile.V.size < spec.max_lag + 1:
        raise ValueError(
            f"The profile has {profile.V.size} lags, but max_lag is {spec.max_lag}."
        )
    return float(np.std(profile.V[list(lags)]))


def _cause_sweep(
    x: np.ndarray, y: np.ndarray, spec: WindowSpec
) -> Tuple[np.ndarray, np.ndarray]:
    # All windows for one cause: sigma_lambda (N,) and profiles (N, L + 1).
    w = spec.window_w
    count = y.size - w + 1
    sigmas = np.full(count, np.nan)
    profiles = np.full((count, spec.max_lag + 1), np.nan)
    for row, k in enumerate(range(w - 1, y.size)):
        try:
            prof = lag_profile(y[k - w + 1 : k + 1], x[k - w + 1 : k + 1], spec)
        except (DegenerateWindowError, InsufficientOverlapError):
            continue
        profiles[row] = prof.V
        sigmas[row] = sigma_lambda(prof, spec)
    return sigmas, profiles


def indicator_series(
    panel: TimeSeriesPanel,
    effect: str,
    causes: Sequence[str],
    spec: WindowSpec,
    processes: int = 1,
) -> IndicatorSeries:
    """
    Returns the IndicatorSeries of *effect* against each of *causes*.

    There is one output row for every window end k from window_w - 1 to
    T - 1, computed on panel rows k - window_w + 1 through k.  Causes are
    spread over *processes* worker processes; the output does not depend on
    how many are used.
    """
    if len(spec.lag_set) < 2:
        raise ValueError(f"The lag set {spec.lag_set} has fewer than two lags.")
    if processes < 1:
        raise ValueError("Processes must be a positive integer.")
    causes = tuple(causes)
    if not causes:
        raise ValueError("At least one cause is required.")

    y = panel.column(effect)
    xs = [panel.column(c) for c in causes]
    if panel.length <= spec.window_w:
        raise InsufficientDataError(
            f"The panel has {panel.length} rows, which is not more than the "
            f"window length {spec.window_w}."
        )

    start = time.perf_counter()
    worker = functools.partial(_cause_sweep, y=y, spec=spec)
    if processes == 1:
        results = list(map(worker, xs))
    else:
        with Pool(processes=processes) as pool:
            results = list(pool.imap(worker, xs))
    logger.debug(
        f"Swept {len(causes)} causes over {panel.length - spec.window_w + 1} "
        f"windows in {time.perf_counter() - start:.6f}s"
    )

    sigmas = np.column_stack([r[0] for r in results])
    profiles = np.stack([r[1] for r in results], axis=1)

    gaps = int(np.count_nonzero(np.isnan(sigmas)))
    if gaps:
        logger.info(f"{gaps} window(s) had zero variance and were left as gaps.")

    return IndicatorSeries(
        effect_name=effect,
        cause_names=causes,
        timestamps=panel.timestamps[spec.window_w - 1 :],
        sigma_lambda=sigmas,
        profiles=profiles,
        spec=spec,
    )


def mean_lag_profile(series: IndicatorSeries, cause: str) -> np.ndarray:
    """
    Returns the explanatory power of *cause* at each lag, averaged over all
    windows without gaps.
    """
    if series.profiles is None:
        raise ValueError("This series does not carry lag profiles.")
    prof = series.profiles[:, series.cause_index(cause), :]
    complete = ~np.any(np.isnan(prof), axis=1)
    if not np.any(complete):
        return np.full(prof.shape[1], np.nan)
    return prof[complete].mean(axis=0)


def dominant_lag(series: IndicatorSeries, cause: str) -> int:
    """Returns the lag at which the window-averaged explanatory power peaks."""
    profile = mean_lag_profile(series, cause)
    if np.all(np.isnan(profile)):
        raise DegenerateWindowError(f"Every window for {cause!r} is a gap.")
    return int(np.nanargmax(profile))


def rank_causes(series: IndicatorSeries) -> List[Tuple[str, float]]:
    """
    Returns (cause, mean sigma_lambda) pairs, largest mean first.  Causes
    that are nothing but gaps come last.
    """
    means = []
    for j, cause in enumerate(series.cause_names):
        col = series.sigma_lambda[:, j]
        if np.all(np.isnan(col)):
            means.append((cause, np.nan))
        else:
            means.append((cause, float(np.nanmean(col))))

    # sorted() is stable, so ties keep the cause order.
    return sorted(means, key=lambda cm: np.inf if np.isnan(cm[1]) else -cm[1])


def tw_monitor_series(
    panel: TimeSeriesPanel,
    columns: Sequence[str],
    window_w: int,
    table: Optional["rmt.TWTable"] = None,
) -> pd.DataFrame:
    """
    Returns a DataFrame, indexed by window end, of the standardized largest
    eigenvalue of each rolling window of *columns* and its Tracy-Widom
    upper-tail probability (see rmt.largest_eigenvalue_test).
    """
    if table is None:
        table = rmt.default_tw_table()
    if window_w < 4:
        raise ValueError(f"window_w must be at least 4, got {window_w}.")
    sub = panel.select(columns)
    if sub.length <= window_w:
        raise InsufficientDataError(
            f"The panel has {sub.length} rows, which is not more than the "
            f"window length {window_w}."
        )

    stats = np.full(sub.length - window_w + 1, np.nan)
    pvals = np.full_like(stats, np.nan)
    for row, k in enumerate(range(window_w - 1, sub.length)):
        try:
            stats[row], pvals[row] = rmt.largest_eigenvalue_test(
                sub.values[k - window_w + 1 : k + 1], table
            )
        except DegenerateWindowError:
            continue

    return pd.DataFrame(
        {"lmax_statistic": stats, "p_value": pvals},
        index=sub.timestamps[window_w - 1 :],
    )
