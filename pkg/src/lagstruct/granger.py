"""Granger causality baseline.

This is the single-equation F-test: the effect y is regressed on an
intercept and its own lags 1..L (restricted model), and again with lags
1..L of the cause x added (unrestricted model).  With T_eff usable rows,

    F = ((RSS_r - RSS_u) / L) / (RSS_u / (T_eff - 2L - 1))

and the p-value is the upper tail of F(L, T_eff - 2L - 1), evaluated
with the regularized incomplete beta function.  Results are reported as
log(1/p) as well.

The tests can be run on the raw series, on their first differences, and
on winsorized copies (the lowest and highest 1% of observations clipped).
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
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import special

from lagstruct.errors import (
    DataError,
    DegenerateModelError,
    NumericalError,
    SingularDesignError,
)
from lagstruct.panel import TimeSeriesPanel
from lagstruct.util import as_float_array

logger = logging.getLogger(__name__)

VARIANTS = ("raw", "diff", "winsor", "diff_winsor")
WINSOR_PERCENTILES = (1.0, 99.0)

# Keeps log(1/p) finite when the upper tail underflows.
MIN_P_VALUE = np.finfo(float).tiny


@dataclass(frozen=True)
class GrangerResult:
    """
    The outcome of one Granger test.  If the test failed, *error* holds the
    reason and the statistics are NaN.
    """

    cause_name: str
    effect_name: str
    lag_order: int
    variant: str
    f_statistic: float
    p_value: float
    log_inv_p: float
    error: Optional[str] = None


def f_sf(f: float, d1: float, d2: float) -> float:
    """
    Returns P(F > *f*) for an F(*d1*, *d2*) random variable,

        I_x(d2 / 2, d1 / 2),  x = d2 / (d2 + d1 f)

    where I is the regularized incomplete beta function.
    """
    if d1 <= 0 or d2 <= 0:
        raise ValueError(f"Degrees of freedom must be positive, got {d1}, {d2}.")
    if f <= 0:
        return 1.0
    return float(special.betainc(d2 / 2, d1 / 2, d2 / (d2 + d1 * f)))


def winsorize(
    series: npt.ArrayLike, percentiles: Tuple[float, float] = WINSOR_PERCENTILES
) -> np.ndarray:
    """
    Returns a copy of *series* clipped to its own *percentiles* (the 1st
    and 99th by default, linearly interpolated), so a gross outlier is
    pulled in at any series length.
    """
    arr = as_float_array(series)
    lo, hi = np.percentile(arr, percentiles)
    return np.clip(arr, lo, hi)


def variant_flags(variant: str) -> Tuple[bool, bool]:
    """Returns (difference_first, winsorize) for the named *variant*."""
    if variant not in VARIANTS:
        raise ValueError(f"Unknown variant {variant!r}, expected one of {VARIANTS}.")
    return variant.startswith("diff"), variant.endswith("winsor")


def _lags(series: np.ndarray, lag_order: int) -> np.ndarray:
    # Column i - 1 holds series[t - i] for rows t = lag_order .. T - 1.
    T = series.size
    cols = [series[lag_order - i : T - i] for i in range(1, lag_order + 1)]
    return np.column_stack(cols)


def _ols_rss(target: np.ndarray, design: np.ndarray) -> Tuple[float, int]:
    # Residual sum of squares and numerical rank of the least-squares fit.
    coef, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    return float(resid @ resid), int(rank)


def granger_test(
    y: npt.ArrayLike,
    x: npt.ArrayLike,
    lag_order: int,
    difference_first: bool = False,
    winsorize_first: bool = False,
    cause_name: str = "x",
    effect_name: str = "y",
) -> GrangerResult:
    """
    Returns the GrangerResult of the test that *x* Granger-causes *y* with
    *lag_order* lags.

    If *difference_first* is True, both series are differenced before
    fitting; if *winsorize_first* is True they are then winsorized.

    A SingularDesignError is raised if either design matrix is rank
    deficient (for example when x duplicates y), and a DegenerateModelError
    if the unrestricted model leaves no residual variance.
    """
    y_arr = as_float_array(y)
    x_arr = as_float_array(x)
    if y_arr.size != x_arr.size:
        raise ValueError(
            f"The series have different lengths, {y_arr.size} and {x_arr.size}."
        )
    if lag_order < 1:
        raise ValueError(f"lag_order must be at least 1, got {lag_order}.")
    if not np.all(np.isfinite(y_arr)) or not np.all(np.isfinite(x_arr)):
        raise DataError("The series must be finite.")

    if difference_first:
        y_arr = np.diff(y_arr)
        x_arr = np.diff(x_arr)
    if winsorize_first:
        y_arr = winsorize(y_arr)
        x_arr = winsorize(x_arr)

    T = y_arr.size
    if not T > 3 * lag_order + 2:
        raise DataError(
            f"{T} observations are too few for lag order {lag_order}; more "
            f"than {3 * lag_order + 2} are needed."
        )

    target = y_arr[lag_order:]
    t_eff = target.size
    ones = np.ones(t_eff)
    y_lags = _lags(y_arr, lag_order)
    x_lags = _lags(x_arr, lag_order)
    restricted = np.column_stack([ones, y_lags])
    unrestricted = np.column_stack([ones, y_lags, x_lags])

    rss_r, rank_r = _ols_rss(target, restricted)
    rss_u, rank_u = _ols_rss(target, unrestricted)
    if rank_r < restricted.shape[1] or rank_u < unrestricted.shape[1]:
        raise SingularDesignError(
            f"The design matrix for {cause_name} -> {effect_name} at lag "
            f"{lag_order} is rank deficient ({rank_u} of {unrestricted.shape[1]})."
        )

    total = float(np.sum((target - target.mean()) ** 2))
    if rss_u <= np.finfo(float).eps * total:
        raise DegenerateModelError(
            f"The unrestricted model for {cause_name} -> {effect_name} fits "
            "exactly and leaves no residual variance."
        )

    d1 = lag_order
    d2 = t_eff - 2 * lag_order - 1
    f_stat = (max(rss_r - rss_u, 0.0) / d1) / (rss_u / d2)
    p_value = max(f_sf(f_stat, d1, d2), MIN_P_VALUE)

    variant = "diff" if difference_first else "raw"
    if winsorize_first:
        variant = "diff_winsor" if difference_first else "winsor"
    return GrangerResult(
        cause_name=cause_name,
        effect_name=effect_name,
        lag_order=lag_order,
        variant=variant,
        f_statistic=f_stat,
        p_value=p_value,
        log_inv_p=-math.log(p_value),
    )


def granger_panel(
    panel: TimeSeriesPanel,
    effect: str,
    causes: Sequence[str],
    lag_orders: Iterable[int] = (2, 5),
    variants: Iterable[str] = VARIANTS,
) -> List[GrangerResult]:
    """
    Returns one GrangerResult for every combination of cause, lag order,
    and variant, in that nesting order.

    A test that fails is logged and recorded with its error message rather
    than stopping the run.
    """
    lag_orders = tuple(lag_orders)
    variants = tuple(variants)
    flags = {v: variant_flags(v) for v in variants}

    y = panel.column(effect)
    xs = {c: panel.column(c) for c in causes}

    results = []
    for cause in causes:
        for lag_order in lag_orders:
            for variant in variants:
                diff, wins = flags[variant]
                try:
                    res = granger_test(
                        y,
                        xs[cause],
                        lag_order,
                        difference_first=diff,
                        winsorize_first=wins,
                        cause_name=cause,
                        effect_name=effect,
                    )
                except (DataError, NumericalError, ValueError) as err:
                    logger.warning(
                        f"Granger test {cause} -> {effect}, lag {lag_order}, "
                        f"{variant}: {err}"
                    )
                    res = GrangerResult(
                        cause_name=cause,
                        effect_name=effect,
                        lag_order=lag_order,
                        variant=variant,
                        f_statistic=np.nan,
                        p_value=np.nan,
                        log_inv_p=np.nan,
                        error=str(err),
                    )
                results.append(res)

    return results
