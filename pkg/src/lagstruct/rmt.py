"""Random matrix theory module.

This module evaluates the Tracy-Widom law of order one (F1) from a
tabulated Hastings-McLeod solution of the Painleve II equation, the
Marcenko-Pastur density, and the centering and scaling constants for the
largest eigenvalue of a white Wishart matrix.  It also draws Wishart
samples so that those results can be checked by simulation.

Random draws come from numpy's PCG64 bit generator, with one child
SeedSequence per replication, so sampled arrays depend only on the seed.
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
import math
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Any, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
from scipy import integrate, special, stats
from scipy.interpolate import PchipInterpolator
from scipy.linalg import LinAlgError, eigh, eigvalsh
from scipy.optimize import brentq

from lagstruct.errors import (
    ConsistencyError,
    DegenerateWindowError,
    IntegrationError,
    SamplingError,
)
from lagstruct.util import spawn_generators

logger = logging.getLogger(__name__)

# Tabulation window and grid for F1.
S_MIN = -10.0
S_MAX = 8.0
STEP = 0.005

# The Airy initial condition is only trusted this far to the right.
MIN_S_MAX = 6.0

# Below this point q is taken from its left asymptotic expansion.  Backward
# integration amplifies local errors roughly like exp(0.94 |s|^1.5) for s < 0.
LEFT_JOIN = -7.0

RTOL = 1e-12

# Absolute tolerance relative to Ai(s_max), which underflows toward 1e-20
# and below once s_max passes about 16.
ATOL_REL = 1e-12

AIRY_MATCH_TOL = 1e-3
MONOTONE_TOL = 1e-9

# At most this fraction of Monte-Carlo replications may fail.
MAX_SKIP_FRACTION = 0.01

Real = Union[float, npt.NDArray[np.float64]]


@dataclass(frozen=True)
class MPParams:
    """
    Parameters of the Marcenko-Pastur law.

    *gamma* is n/p (at least 1); the spectral edges *a* and *b* are
    (1 -/+ sqrt(p/n))^2, so that 0 <= a < b.
    """

    gamma: float
    a: float
    b: float

    def __post_init__(self):
        if not self.gamma >= 1:
            raise ValueError(f"gamma = n/p must be at least 1, got {self.gamma}.")
        if self.a < 0 or not self.b > self.a:
            raise ValueError(
                f"Spectral edges must satisfy 0 <= a < b, got a={self.a}, b={self.b}."
            )

    @classmethod
    def from_ratio(cls, gamma: float) -> "MPParams":
        """Returns the parameters for the aspect ratio *gamma* = n/p."""
        if not gamma >= 1:
            raise ValueError(f"gamma = n/p must be at least 1, got {gamma}.")
        root = math.sqrt(1 / gamma)
        return cls(gamma=gamma, a=(1 - root) ** 2, b=(1 + root) ** 2)

    @classmethod
    def from_dims(cls, n: int, p: int) -> "MPParams":
        """Returns the parameters for *n* samples of dimension *p* (p <= n)."""
        if p > n:
            raise ValueError(f"The dimension p ({p}) may not exceed n ({n}).")
        return cls.from_ratio(n / p)

    @property
    def ratio(self) -> float:
        """The inverse aspect ratio p/n, at most 1."""
        return 1 / self.gamma


@dataclass(frozen=True)
class WishartConstants:
    n: int
    p: int
    mu_np: float
    sigma_np: float


@dataclass(frozen=True, eq=False)
class TWTable:
    """
    A tabulation of the Hastings-McLeod solution *q* and of F1 on an
    ascending *grid* of s values.

    The arrays are made read-only on construction, and a monotone
    interpolant of F1 is built once, so a table may be shared freely.
    """

    grid: np.ndarray
    q: np.ndarray
    F1: np.ndarray
    s_min: float
    s_max: float
    _cdf: Any = field(init=False, repr=False)
    _pdf: Any = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("grid", "q", "F1"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        if not self.grid.shape == self.q.shape == self.F1.shape:
            raise ValueError("grid, q, and F1 must have the same shape.")

        cdf = PchipInterpolator(self.grid, self.F1, extrapolate=False)
        object.__setattr__(self, "_cdf", cdf)
        object.__setattr__(self, "_pdf", cdf.derivative())


def mp_density(t: npt.ArrayLike, params: MPParams) -> Real:
    """
    Returns the Marcenko-Pastur density g(t) for eigenvalues of X'X / n.

        g(t) = gamma / (2 pi t) * sqrt((b - t)(t - a)),  a < t <= b

    and zero everywhere else, including t = 0 when a = 0.
    """
    t_arr = np.asarray(t, dtype=float)
    out = np.zeros_like(t_arr)
    inside = (t_arr > params.a) & (t_arr <= params.b) & (t_arr > 0)
    ti = t_arr[inside]
    out[inside] = (
        params.gamma
        / (2 * np.pi * ti)
        * np.sqrt(np.clip((params.b - ti) * (ti - params.a), 0, None))
    )
    if out.ndim == 0:
        return float(out)
    return out


def mp_normalization(params: MPParams) -> float:
    """Returns the numerical integral of mp_density() over [a, b]."""
    total, _ = integrate.quad(mp_density, params.a, params.b, args=(params,), limit=200)
    return total


def wishart_constants(n: int, p: int) -> WishartConstants:
    """
    Returns the centering and scaling constants for the largest eigenvalue
    of an n by p white Wishart matrix:

        mu_np = (sqrt(n - 1) + sqrt(p))^2
        sigma_np = (sqrt(n - 1) + sqrt(p)) (1/sqrt(n - 1) + 1/sqrt(p))^(1/3)

    If *n* is smaller than *p*, the roles of the two are reversed first.
    """
    if p < 1 or n < 1:
        raise ValueError(f"n and p must be positive, got n={n}, p={p}.")
    if n < p:
        n, p = p, n
    if n < 2:
        raise ValueError("n must be at least 2 so that sqrt(n - 1) is positive.")

    root_n = math.sqrt(n - 1)
    root_p = math.sqrt(p)
    mu = (root_n + root_p) ** 2
    sigma = (root_n + root_p) * (1 / root_n + 1 / root_p) ** (1 / 3)
    return WishartConstants(n=n, p=p, mu_np=mu, sigma_np=sigma)


def airy_asymptotic(s: npt.ArrayLike, terms: int = 3) -> Real:
    """
    Returns the asymptotic expansion of the Airy function Ai(s) for large
    positive *s* using *terms* terms of the series

        e^(-z) / (2 sqrt(pi) s^(1/4)) * sum_k (-1)^k u_k / z^k

    where z = (2/3) s^(3/2).
    """
    if terms < 1:
        raise ValueError("At least one term is required.")
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0):
        raise ValueError("The Airy asymptotic series needs s > 0.")

    zeta = 2 / 3 * s_arr**1.5
    total = np.zeros_like(s_arr)
    for k in range(terms):
        u_k = special.gamma(3 * k + 0.5) / (
            54**k * math.factorial(k) * special.gamma(k + 0.5)
        )
        total = total + (-1) ** k * u_k / zeta**k

    out = np.exp(-zeta) / (2 * math.sqrt(math.pi) * s_arr**0.25) * total
    if out.ndim == 0:
        return float(out)
    return out


def hastings_mcleod_left(s: npt.ArrayLike) -> Real:
    """
    Returns the s -> -infinity asymptotic expansion of the Hastings-McLeod
    solution,

        q(s) ~ sqrt(-s/2) (1 + 1/(8 s^3) - 73/(128 s^6) + 10657/(1024 s^9))
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr >= 0):
        raise ValueError("The left asymptotic expansion needs s < 0.")
    s3 = s_arr**3
    out = np.sqrt(-s_arr / 2) * (
        1 + 1 / (8 * s3) - 73 / (128 * s3**2) + 10657 / (1024 * s3**3)
    )
    if out.ndim == 0:
        return float(out)
    return out


def painleve_ii(grid: np.ndarray, left_join: Optional[float] = LEFT_JOIN):
    """
    Returns the Hastings-McLeod solution q of q'' = s q + 2 q^3 evaluated
    at the ascending *grid*.

    The equation is integrated backward from the right end of *grid* with
    q = Ai, q' = Ai' as the initial condition, using an adaptive
    Runge-Kutta scheme (DOP853).  Grid points left of *left_join* take
    their values from hastings_mcleod_left() instead; if *left_join* is
    None the integration runs over the whole grid.

    An IntegrationError is raised if q starts to diverge before the left
    end of the integrated range is reached.
    """
    s_max = float(grid[-1])
    if left_join is None:
        join = float(grid[0])
    else:
        join = max(float(grid[0]), left_join)
    numeric = grid >= join

    ai, aip, _, _ = special.airy(s_max)
    atol = ATOL_REL * abs(float(ai))

    def rhs(s, y):
        return [y[1], s * y[0] + 2 * y[0] ** 3]

    def diverged(s, y):
        return abs(y[0]) - (10 + 2 * math.sqrt(abs(s)))

    diverged.terminal = True  # type: ignore[attr-defined]

    t_eval = grid[numeric][::-1]
    sol = integrate.solve_ivp(
        rhs,
        (s_max, float(t_eval[-1])),
        [ai, aip],
        method="DOP853",
        t_eval=t_eval,
        rtol=RTOL,
        atol=atol,
        events=diverged,
    )

    if sol.status == 1:
        raise IntegrationError(
            f"The Painleve II solution diverged near s = {sol.t_events[0][0]:.3f}. "
            f"Use a larger s_min than {grid[0]} or tabulate the left tail "
            "asymptotically."
        )
    if not sol.success:
        raise IntegrationError(f"Painleve II integration failed: {sol.message}")

    q = np.empty_like(grid, dtype=float)
    q[numeric] = sol.y[0][::-1]
    if np.any(~numeric):
        q[~numeric] = hastings_mcleod_left(grid[~numeric])
    return q


def build_tw_table(
    s_min: float = S_MIN,
    s_max: float = S_MAX,
    step: float = STEP,
    left_join: Optional[float] = LEFT_JOIN,
) -> TWTable:
    """
    Returns a TWTable with F1 evaluated on a grid from *s_min* to *s_max*.

    One Painleve II solve provides q on the grid, and

        F1(s) = exp(-1/2 * integral_s^inf q(x) + (x - s) q(x)^2 dx)

    is then evaluated at every grid point with composite Simpson
    quadrature, splitting the inner integral into the running integrals of
    q, q^2, and x q^2.  The contribution beyond *s_max* is below 1e-7 for
    s_max >= 6 and is not included.

    The grid spacing is *step*, adjusted slightly if needed so that the
    grid ends exactly at *s_max*.
    """
    if not s_min < s_max:
        raise ValueError(f"s_min ({s_min}) must be less than s_max ({s_max}).")
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}.")
    if s_max < MIN_S_MAX:
        raise ValueError(
            f"s_max must be at least {MIN_S_MAX} so that the Airy function is a "
            f"valid starting value for the Hastings-McLeod solution, got {s_max}."
        )

    count = int(round((s_max - s_min) / step)) + 1
    if count < 3:
        raise ValueError("The grid must have at least three points.")
    grid = np.linspace(s_min, s_max, count)
    if not math.isclose(grid[1] - grid[0], step, rel_tol=1e-9):
        logger.info(f"Grid step adjusted from {step} to {grid[1] - grid[0]}.")

    start = time.perf_counter()
    q = painleve_ii(grid, left_join=left_join)
    logger.debug(f"Integrated Painleve II in {time.perf_counter() - start:.6f}s")

    if np.any(q <= 0):
        raise ConsistencyError(
            "The tabulated Hastings-McLeod solution is not positive."
        )

    ratio = q[-1] / airy_asymptotic(s_max)
    if abs(ratio - 1) > AIRY_MATCH_TOL:
        raise ConsistencyError(
            f"q(s_max) / Ai(s_max) = {ratio}, outside 1 +/- {AIRY_MATCH_TOL}."
        )

    q2 = q**2
    cum_q = integrate.cumulative_simpson(q, x=grid, initial=0)
    cum_q2 = integrate.cumulative_simpson(q2, x=grid, initial=0)
    cum_xq2 = integrate.cumulative_simpson(grid * q2, x=grid, initial=0)

    tail_q = cum_q[-1] - cum_q
    tail_q2 = cum_q2[-1] - cum_q2
    tail_xq2 = cum_xq2[-1] - cum_xq2

    F1 = np.exp(-0.5 * (tail_q + tail_xq2 - grid * tail_q2))

    if np.any(np.diff(F1) < -MONOTONE_TOL):
        raise ConsistencyError("The tabulated F1 is not monotone.")
    F1 = np.clip(np.maximum.accumulate(F1), 0, 1)

    logger.debug(
        f"Built F1 table of {count} points in {time.perf_counter() - start:.6f}s"
    )
    return TWTable(grid=grid, q=q, F1=F1, s_min=float(s_min), s_max=float(s_max))


@functools.lru_cache(maxsize=None)
def default_tw_table() -> TWTable:
    """Returns a cached TWTable built with the default bounds and step."""
    return build_tw_table()


def tw_cdf(s: npt.ArrayLike, table: TWTable) -> Real:
    """
    Returns F1(*s*) from *table*, by monotone interpolation on the grid.
    Values at or below s_min are 0, and values above s_max are 1.
    """
    s_arr = np.asarray(s, dtype=float)
    inner = table._cdf(np.clip(s_arr, table.s_min, table.s_max))
    out = np.where(
        s_arr <= table.s_min,
        0.0,
        np.where(s_arr > table.s_max, 1.0, np.clip(inner, 0, 1)),
    )
    if out.ndim == 0:
        return float(out)
    return out


def tw_pdf(s: npt.ArrayLike, table: TWTable) -> Real:
    """Returns the density f1 = F1' from *table*, zero outside the grid."""
    s_arr = np.asarray(s, dtype=float)
    inside = (s_arr >= table.s_min) & (s_arr <= table.s_max)
    inner = table._pdf(np.clip(s_arr, table.s_min, table.s_max))
    out = np.where(inside, np.clip(inner, 0, None), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def tw_quantile(prob: float, table: TWTable) -> float:
    """
    Returns the s value at which F1 reaches *prob*, found by root-bracketing
    on the interpolated table.  Probabilities beyond the tabulated range map
    to the corresponding end of the grid.
    """
    if not 0 < prob < 1:
        raise ValueError(f"prob must be in (0, 1), got {prob}.")
    if prob <= table.F1[0]:
        return table.s_min
    if prob >= table.F1[-1]:
        return table.s_max

    return brentq(
        lambda s: float(table._cdf(s)) - prob, table.s_min, table.s_max, xtol=1e-12
    )


def _largest_eigenvalue(ss: np.random.SeedSequence, n: int, p: int) -> float:
    # One replication: the largest eigenvalue of X'X for an n by p normal X.
    rng = np.random.Generator(np.random.PCG64(ss))
    x = rng.standard_normal((n, p))
    w = x.T @ x if p <= n else x @ x.T
    dim = w.shape[0]
    try:
        eigs = eigh(w, eigvals_only=True, subset_by_index=[dim - 1, dim - 1])
    except LinAlgError:
        return np.nan
    return float(eigs[-1])


def lmax_sample(
    n: int, p: int, replications: int, seed: int, processes: int = 1
) -> np.ndarray:
    """
    Returns an array of largest eigenvalues l1 of white Wishart matrices
    X'X, with X an *n* by *p* matrix of independent standard normals.

    Replication i draws from its own child of SeedSequence(*seed*), so the
    result does not depend on *processes*.  Replications whose eigen-solve
    fails are skipped, and a SamplingError is raised if more than 1% of
    them fail.
    """
    if n < 2 or p < 1:
        raise ValueError(f"Need n >= 2 and p >= 1, got n={n}, p={p}.")
    if replications < 1:
        raise ValueError("At least one replication is required.")
    if processes < 1:
        raise ValueError("Processes must be a positive integer.")

    seeds = np.random.SeedSequence(seed).spawn(replications)
    worker = functools.partial(_largest_eigenvalue, n=n, p=p)

    start = time.perf_counter()
    if processes == 1:
        values = np.fromiter(map(worker, seeds), dtype=float, count=replications)
    else:
        with Pool(processes=processes) as pool:
            results = pool.imap(
                worker, seeds, chunksize=max(1, replications // (4 * processes))
            )
            values = np.fromiter(results, dtype=float, count=replications)
    logger.debug(
        f"Sampled {replications} Wishart matrices ({n} x {p}) in "
        f"{time.perf_counter() - start:.6f}s"
    )

    failed = np.isnan(values)
    skipped = int(np.count_nonzero(failed))
    if skipped:
        logger.warning(f"{skipped} of {replications} eigen-solves failed.")
        if skipped > MAX_SKIP_FRACTION * replications:
            raise SamplingError(
                f"{skipped} of {replications} replications failed, more than "
                f"{MAX_SKIP_FRACTION:.0%}."
            )
    return values[~failed]


def standardized_lmax_sample(
    n: int, p: int, replications: int, seed: int, processes: int = 1
) -> np.ndarray:
    """
    Returns (l1 - mu_np) / sigma_np for each replication of lmax_sample(),
    which converges in distribution to F1.
    """
    consts = wishart_constants(n, p)
    l1 = lmax_sample(n, p, replications, seed, processes=processes)
    return (l1 - consts.mu_np) / consts.sigma_np


def wishart_spectrum(n: int, p: int, seed: int) -> np.ndarray:
    """
    Returns the ascending eigenvalues of X'X / n for one *n* by *p* matrix
    X of independent standard normals (p <= n).
    """
    if p > n:
        raise ValueError(f"The dimension p ({p}) may not exceed n ({n}).")
    rng = spawn_generators(seed, 1)[0]
    x = rng.standard_normal((n, p))
    return eigvalsh(x.T @ x) / n


def mp_histogram_deviation(
    eigenvalues: npt.ArrayLike, params: MPParams, bins: int = 40
) -> float:
    """
    Returns the mean absolute deviation between the histogram density of
    *eigenvalues* over [a, b] and the Marcenko-Pastur density averaged over
    the same bins.

    Each bin's height is its count divided by the total number of
    eigenvalues and the bin width, so eigenvalues that fall just outside
    [a, b] lower the histogram rather than being renormalized away.
    """
    values = np.asarray(eigenvalues, dtype=float)
    counts, edges = np.histogram(values, bins=bins, range=(params.a, params.b))
    width = edges[1] - edges[0]
    empirical = counts / (values.size * width)
    expected = (
        np.array(
            [
                integrate.quad(mp_density, lo, hi, args=(params,), limit=100)[0]
                for lo, hi in zip(edges[:-1], edges[1:])
            ]
        )
        / width
    )
    return float(np.mean(np.abs(empirical - expected)))


def ks_distance(samples: npt.ArrayLike, table: TWTable) -> float:
    """
    Returns the Kolmogorov-Smirnov distance between the empirical
    distribution of *samples* and the tabulated F1.
    """
    result = stats.kstest(
        np.asarray(samples, dtype=float), lambda x: tw_cdf(x, table)
    )
    return float(result.statistic)


def strong_law_ratio(
    n: int, p: int, replications: int, seed: int, processes: int = 1
) -> float:
    """
    Returns mean(l1 / n) divided by its almost-sure limit (1 + sqrt(p/n))^2.
    """
    l1 = lmax_sample(n, p, replications, seed, processes=processes)
    return float(np.mean(l1 / n) / (1 + math.sqrt(p / n)) ** 2)


def largest_eigenvalue_test(
    window: npt.ArrayLike, table: TWTable
) -> Tuple[float, float]:
    """
    Returns a two-tuple of the standardized largest eigenvalue of a data
    *window* and its upper-tail probability under F1.

    The columns of the T_w by M *window* are standardized, so X'X is T_w
    times the sample correlation matrix.  Its largest eigenvalue is
    standardized with wishart_constants(T_w, M).  Small probabilities
    indicate that the columns are not independent.
    """
    x = np.asarray(window, dtype=float)
    if x.ndim != 2 or x.shape[1] < 2:
        raise ValueError("The window must be two-dimensional with at least 2 columns.")
    std = x.std(axis=0)
    if np.any(std <= 0):
        raise DegenerateWindowError("A column of the window has zero variance.")
    z = (x - x.mean(axis=0)) / std
    w = z.T @ z
    l1 = float(eigvalsh(w)[-1])
    consts = wishart_constants(x.shape[0], x.shape[1])
    statistic = (l1 - consts.mu_np) / consts.sigma_np
    return statistic, 1.0 - tw_cdf(statistic, table)
