#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the `indicator` module."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import unittest

import numpy as np
import pandas as pd
from scipy import stats

from lagstruct import indicator as ind
from lagstruct.errors import (
    ColumnNotFoundError,
    DegenerateWindowError,
    InsufficientDataError,
    InsufficientOverlapError,
)
from lagstruct.panel import TimeSeriesPanel
from lagstruct.synth import CouplingSpec, coupled_pair, coupled_panel, iid_panel


def mean_sigma(panel, effect, cause, spec):
    series = ind.indicator_series(panel, effect, [cause], spec)
    return np.nanmean(series.sigma_lambda)


class TestWindowSpec(unittest.TestCase):
    def test_lag_set(self):
        self.assertEqual(ind.WindowSpec(60, 5).lag_set, (1, 2, 3, 4, 5))
        self.assertEqual(
            ind.WindowSpec(60, 2, include_lag0=True).lag_set, (0, 1, 2)
        )

    def test_bad(self):
        self.assertRaises(ValueError, ind.WindowSpec, 3, 1)
        self.assertRaises(ValueError, ind.WindowSpec, 60, 0)
        self.assertRaises(ValueError, ind.WindowSpec, 5, 3)


class TestExplanatoryPower(unittest.TestCase):
    def test_values(self):
        self.assertEqual(ind.explanatory_power(0), 0.5)
        self.assertEqual(ind.explanatory_power(1), 1)
        self.assertAlmostEqual(ind.explanatory_power(-0.6), 0.8)

    def test_pca_oracle(self):
        rng = np.random.default_rng(5)
        rhos = rng.uniform(-1, 1, 1000)
        expected = ind.explanatory_power(rhos)
        computed = np.array([ind.pca_explanatory_power(r) for r in rhos])
        np.testing.assert_allclose(computed, expected, rtol=0, atol=1e-10)

    def test_bad(self):
        self.assertRaises(ValueError, ind.explanatory_power, 1.5)
        self.assertRaises(ValueError, ind.pca_explanatory_power, -1.01)


class TestCorrelation(unittest.TestCase):
    def setUp(self):
        self.x = np.random.default_rng(3).standard_normal(100)

    def test_standardize(self):
        z = ind.standardize_window(self.x)
        self.assertAlmostEqual(z.mean(), 0)
        self.assertAlmostEqual(z.std(), 1)
        self.assertRaises(DegenerateWindowError, ind.standardize_window, np.ones(10))

    def test_standardize_example(self):
        np.testing.assert_allclose(
            ind.standardize_window([1, 2, 3]), [-1.2247449, 0, 1.2247449], atol=1e-7
        )
        z = ind.standardize_window(self.x)
        np.testing.assert_allclose(ind.standardize_window(z), z, rtol=0, atol=1e-12)

    def test_shifted(self):
        y = np.roll(self.x, 2)
        self.assertAlmostEqual(ind.lagged_correlation(y, self.x, 2), 1)
        self.assertLess(abs(ind.lagged_correlation(y, self.x, 0)), 0.5)

    def test_symmetric_at_zero(self):
        y = np.random.default_rng(4).standard_normal(100)
        self.assertAlmostEqual(
            ind.lagged_correlation(y, self.x, 0), ind.lagged_correlation(self.x, y, 0)
        )

    def test_overlap(self):
        self.assertRaises(
            InsufficientOverlapError, ind.lagged_correlation, self.x, self.x, 98
        )
        self.assertRaises(ValueError, ind.lagged_correlation, self.x, self.x, -1)
        self.assertRaises(ValueError, ind.lagged_correlation, self.x[:50], self.x, 1)


class TestSigmaLambda(unittest.TestCase):
    def test_value(self):
        spec = ind.WindowSpec(10, 2, include_lag0=True)
        prof = ind.LagProfile("x", "y", 9, np.array([0.5, 0.6, 0.7]))
        self.assertAlmostEqual(ind.sigma_lambda(prof, spec), 0.0816497, places=6)

    def test_lag0_excluded(self):
        spec = ind.WindowSpec(10, 2)
        prof = ind.LagProfile("x", "y", 9, np.array([0.9, 0.6, 0.7]))
        self.assertAlmostEqual(ind.sigma_lambda(prof, spec), 0.05)

    def test_single_lag(self):
        spec = ind.WindowSpec(10, 1)
        prof = ind.LagProfile("x", "y", 9, np.array([0.5, 0.6]))
        self.assertRaises(ValueError, ind.sigma_lambda, prof, spec)

    def test_profile(self):
        spec = ind.WindowSpec(60, 3)
        panel = coupled_pair(CouplingSpec(true_lag=1, beta=1, noise_sigma=0, seed=2))
        prof = ind.lag_profile(panel.column("y")[:60], panel.column("x")[:60], spec)
        self.assertEqual(prof.V.shape, (4,))
        self.assertEqual(int(np.argmax(prof.V)), 1)
        self.assertAlmostEqual(prof.V[1], 1)

    def test_profile_invariance(self):
        spec = ind.WindowSpec(60, 4)
        pair = coupled_pair(CouplingSpec(true_lag=2, seed=6))
        y = pair.column("y")[100:160]
        x = pair.column("x")[100:160]
        base = ind.lag_profile(y, x, spec).V
        scaled = ind.lag_profile(3.5 * y + 2, 0.25 * x - 7, spec).V
        negated = ind.lag_profile(y, -x, spec).V
        np.testing.assert_allclose(scaled, base, rtol=0, atol=1e-12)
        np.testing.assert_allclose(negated, base, rtol=0, atol=1e-12)
        self.assertAlmostEqual(
            ind.sigma_lambda(ind.LagProfile("x", "y", 159, negated), spec),
            ind.sigma_lambda(ind.LagProfile("x", "y", 159, base), spec),
        )


class TestIndicatorSeries(unittest.TestCase):
    def setUp(self):
        self.panel = coupled_panel(CouplingSpec(seed=7, length=100), n_iid=2)
        self.spec = ind.WindowSpec(60, 5)

    def test_shape(self):
        series = ind.indicator_series(self.panel, "y", ["x", "iid0"], self.spec)
        self.assertEqual(series.sigma_lambda.shape, (41, 2))
        self.assertEqual(series.profiles.shape, (41, 2, 6))
        self.assertEqual(series.timestamps[0], self.panel.timestamps[59])
        self.assertEqual(series.cause_names, ("x", "iid0"))
        frame = series.to_frame()
        self.assertEqual(
            list(frame.columns), ["sigma_lambda_x", "sigma_lambda_iid0"]
        )

    def test_processes(self):
        a = ind.indicator_series(self.panel, "y", ["x", "iid0", "iid1"], self.spec)
        b = ind.indicator_series(
            self.panel, "y", ["x", "iid0", "iid1"], self.spec, processes=2
        )
        np.testing.assert_array_equal(a.sigma_lambda, b.sigma_lambda)

    def test_errors(self):
        self.assertRaises(
            ColumnNotFoundError,
            ind.indicator_series,
            self.panel,
            "nope",
            ["x"],
            self.spec,
        )
        self.assertRaises(
            InsufficientDataError,
            ind.indicator_series,
            self.panel,
            "y",
            ["x"],
            ind.WindowSpec(100, 5),
        )
        self.assertRaises(
            ValueError,
            ind.indicator_series,
            self.panel,
            "y",
            ["x"],
            ind.WindowSpec(60, 1),
        )
        self.assertRaises(
            ValueError, ind.indicator_series, self.panel, "y", [], self.spec
        )

    def test_gaps(self):
        rng = np.random.default_rng(8)
        x = np.concatenate([np.zeros(70), rng.standard_normal(30)])
        y = rng.standard_normal(100)
        panel = TimeSeriesPanel(
            pd.date_range("2022-01-03", periods=100),
            ("y", "x"),
            np.column_stack([y, x]),
        )
        series = ind.indicator_series(panel, "y", ["x"], self.spec)
        self.assertTrue(np.all(np.isnan(series.sigma_lambda[:11, 0])))
        self.assertTrue(np.isfinite(series.sigma_lambda[-1, 0]))

    def test_rank_and_lag(self):
        panel = coupled_panel(CouplingSpec(seed=7), n_iid=2)
        series = ind.indicator_series(panel, "y", ["iid0", "x", "iid1"], self.spec)
        ranking = ind.rank_causes(series)
        self.assertEqual(ranking[0][0], "x")
        self.assertEqual(ind.dominant_lag(series, "x"), 2)
        self.assertEqual(ind.mean_lag_profile(series, "x").shape, (6,))


class TestRankCauses(unittest.TestCase):
    def test_ties_and_gaps(self):
        series = ind.IndicatorSeries(
            "y",
            ("a", "b", "c", "d"),
            pd.date_range("2022-01-03", periods=2),
            np.array(
                [[0.1, np.nan, 0.3, 0.1], [0.1, np.nan, 0.3, 0.1]]
            ),
        )
        names = [c for c, _ in ind.rank_causes(series)]
        self.assertEqual(names, ["c", "a", "d", "b"])

    def test_no_profiles(self):
        series = ind.IndicatorSeries(
            "y", ("a",), pd.date_range("2022-01-03", periods=1), np.zeros((1, 1))
        )
        self.assertRaises(ValueError, ind.mean_lag_profile, series, "a")


class TestSeparation(unittest.TestCase):
    def test_coupled_exceeds_iid(self):
        for max_lag in (2, 5):
            spec = ind.WindowSpec(60, max_lag)
            coupled = []
            independent = []
            for seed in range(100):
                pair = coupled_pair(CouplingSpec(seed=seed))
                coupled.append(mean_sigma(pair, "y", "x", spec))
                iid = iid_panel(2, 400, seed)
                independent.append(mean_sigma(iid, "iid0", "iid1", spec))
            with self.subTest(max_lag=max_lag):
                self.assertGreaterEqual(
                    np.mean(coupled), 1.5 * np.mean(independent)
                )

    def test_lag_recovery(self):
        spec = ind.WindowSpec(60, 5)
        hits = 0
        for seed in range(50):
            pair = coupled_pair(CouplingSpec(seed=seed))
            series = ind.indicator_series(pair, "y", ["x"], spec)
            hits += ind.dominant_lag(series, "x") == 2
        self.assertGreaterEqual(hits, 45)

    def test_higher_lags_smoother(self):
        # Both lag ranges follow the on and off pattern of the coupling.
        rhos = []
        for seed in range(5):
            panel = coupled_pair(CouplingSpec(seed=seed, switch_period=100))
            s5 = ind.indicator_series(panel, "y", ["x"], ind.WindowSpec(60, 5))
            s10 = ind.indicator_series(panel, "y", ["x"], ind.WindowSpec(60, 10))
            rho = stats.spearmanr(s5.sigma_lambda[:, 0], s10.sigma_lambda[:, 0])
            rhos.append(rho.statistic)
        self.assertGreater(np.mean(rhos), 0.8)


class TestTWMonitor(unittest.TestCase):
    def test_monitor(self):
        panel = coupled_panel(CouplingSpec(seed=1, length=150), n_iid=3)
        df = ind.tw_monitor_series(panel, ["x", "y", "iid0", "iid1"], 60)
        self.assertEqual(list(df.columns), ["lmax_statistic", "p_value"])
        self.assertEqual(len(df), 91)
        self.assertTrue(np.all((df["p_value"] >= 0) & (df["p_value"] <= 1)))

    def test_short(self):
        panel = iid_panel(3, 50, 0)
        self.assertRaises(
            InsufficientDataError, ind.tw_monitor_series, panel, ["iid0", "iid1"], 60
        )
