#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the `cli` package."""

# Copyright 2026, lagstruct developers.
#
# SPDX-License-Identifier: Apache-2.0
#
# Reuse is permitted under the terms of the license.
# The AUTHORS file and the LICENSE file are at the
# top level of this library.

import json
import tempfile
import unittest
from argparse import ArgumentParser
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pandas as pd

from lagstruct import cli
from lagstruct.cli import config as cfg
from lagstruct.cli import twtable
from lagstruct.errors import ConfigError
from lagstruct.panel_io import read_indicator_series


class TestParser(unittest.TestCase):
    def test_parser(self):
        parser = cli.arg_parser()
        self.assertIsInstance(parser, ArgumentParser)
        args = parser.parse_args(
            ["indicator", "-i", "in.csv", "--effect", "y", "--causes", "a", "b"]
        )
        self.assertEqual(args.causes, ["a", "b"])
        self.assertIsNone(args.window_w)
        self.assertIsNone(args.include_lag0)
        self.assertEqual(args.func.__module__, "lagstruct.cli.indicator")

    def test_add_parser(self):
        parser = ArgumentParser()
        subparsers = parser.add_subparsers()
        twtable.add_parser(subparsers)
        d = vars(parser.parse_args(["twtable", "--s-max", "7", "-o", "t.csv"]))
        self.assertEqual(d["s_max"], 7)
        self.assertEqual(d["out"], "t.csv")

    def test_no_subcommand(self):
        self.assertEqual(cli.main([]), 1)

    def test_exit_codes(self):
        with patch("lagstruct.cli.twtable.cmd_twtable", side_effect=ConfigError("x")):
            self.assertEqual(cli.main(["twtable"]), 1)
        with patch(
            "lagstruct.cli.twtable.cmd_twtable",
            side_effect=cli.NumericalError("x"),
        ):
            self.assertEqual(cli.main(["twtable"]), 3)
        with patch("lagstruct.cli.twtable.cmd_twtable", side_effect=OSError("x")):
            self.assertEqual(cli.main(["twtable"]), 2)


class TestConfig(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_defaults(self):
        config = cfg.resolve(ArgumentParser().parse_args([]))
        self.assertEqual(config, cfg.RunConfig())
        self.assertEqual(config.window_w, 60)
        self.assertEqual(list(config.as_dict()), sorted(config.as_dict()))

    def test_override(self):
        path = self.dir / "run.yml"
        path.write_text("seed: 5\nwindow_w: 40\nbuckets:\n  trades: [a, b]\n")
        parser = ArgumentParser()
        cfg.add_common_arguments(parser)
        config = cfg.resolve(parser.parse_args(["-c", str(path), "--seed", "7"]))
        self.assertEqual(config.seed, 7)
        self.assertEqual(config.window_w, 40)
        self.assertEqual(config.buckets, {"trades": ["a", "b"]})

    def test_bad_files(self):
        path = self.dir / "run.yml"
        path.write_text("windoww: 40\n")
        self.assertRaises(ConfigError, cfg.load_config, path)
        path.write_text("- 1\n- 2\n")
        self.assertRaises(ConfigError, cfg.load_config, path)
        path.write_text("seed: [1\n")
        self.assertRaises(ConfigError, cfg.load_config, path)
        path.write_text("")
        self.assertEqual(cfg.load_config(path), {})

    def test_bad_values(self):
        self.assertRaises(ConfigError, cfg.RunConfig, format="xml")
        self.assertRaises(ConfigError, cfg.RunConfig, variants=["log"])
        self.assertRaises(ConfigError, cfg.RunConfig, kind="garch")

    def test_paths(self):
        config = cfg.RunConfig(format="json")
        self.assertEqual(config.out_path("granger"), Path("granger.json"))
        self.assertRaises(ConfigError, config.input_path)
        self.assertRaises(ConfigError, config.require_effect)


class CLICase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return str(self.dir / name)

    def simulate(self, *extra):
        out = self.path("panel.csv")
        self.assertEqual(cli.main(["simulate", "-o", out, "--seed", "3", *extra]), 0)
        return out

    def assert_rerun_identical(self, argv, out):
        self.assertIn(cli.main(argv), (0, 3))
        first = Path(out).read_bytes()
        cli.main(argv)
        self.assertEqual(Path(out).read_bytes(), first)


class TestTWTable(CLICase):
    def test_default(self):
        out = self.path("tw.csv")
        self.assertEqual(cli.main(["twtable", "-o", out]), 0)
        df = pd.read_csv(out, comment="#")
        row = df.iloc[(df["s"]).abs().argmin()]
        self.assertAlmostEqual(row["s"], 0)
        self.assertAlmostEqual(row["F1"], 0.83, delta=0.01)

    def test_deterministic(self):
        a = self.path("a.csv")
        b = self.path("b.csv")
        argv = ["twtable", "--s-min", "-5", "--s-max", "6", "--step", "0.05"]
        self.assertEqual(cli.main(argv + ["-o", a]), 0)
        self.assertEqual(cli.main(argv + ["-o", b]), 0)
        a_lines = [s for s in Path(a).read_text().splitlines() if "# out:" not in s]
        b_lines = [s for s in Path(b).read_text().splitlines() if "# out:" not in s]
        self.assertEqual(a_lines, b_lines)

    def test_refused(self):
        out = self.path("tw.csv")
        self.assertEqual(cli.main(["twtable", "--s-max", "5", "-o", out]), 1)
        self.assertFalse(Path(out).exists())

    def test_far_right_end(self):
        out = self.path("tw.csv")
        argv = ["twtable", "--s-min", "-6", "--s-max", "16", "--step", "0.01"]
        self.assertEqual(cli.main(argv + ["-o", out]), 0)
        df = pd.read_csv(out, comment="#")
        self.assertTrue((df["q"] > 0).all())


class TestValidateRMT(CLICase):
    def test_small(self):
        out = self.path("v.json")
        argv = ["validate-rmt", "-n", "10", "-p", "10", "-r", "200", "--mp-n", "50"]
        self.assertEqual(cli.main(argv + ["-o", out, "--format", "json"]), 0)
        d = json.loads(Path(out).read_text())
        self.assertTrue(d["passed"])
        checks = [row[0] for row in d["rows"]]
        self.assertIn("ks_distance", checks)
        self.assertIn("mp_normalization_0.5", checks)

    def test_too_few(self):
        out = self.path("v.csv")
        self.assertEqual(cli.main(["validate-rmt", "-r", "1", "-o", out]), 1)

    def test_failure(self):
        conf = self.dir / "strict.yml"
        conf.write_text("ks_tolerance: 0.0\ngate_min_dim: 1\nmp_n: 50\n")
        out = self.path("v.csv")
        argv = ["validate-rmt", "-c", str(conf), "-n", "10", "-p", "10", "-r", "100"]
        self.assertEqual(cli.main(argv + ["-o", out]), 3)
        self.assertIn("# passed: false", Path(out).read_text())

    def test_deterministic(self):
        out = self.path("v.csv")
        argv = ["validate-rmt", "-n", "10", "-p", "10", "-r", "100", "--mp-n", "50"]
        self.assert_rerun_identical(argv + ["-o", out], out)


class TestSimulate(CLICase):
    def test_coupled(self):
        out = self.simulate()
        text = Path(out).read_text()
        self.assertIn("# kind: coupled", text)
        df = pd.read_csv(out, comment="#")
        self.assertEqual(
            list(df.columns), ["timestamp", "x", "y", "iid0", "iid1", "iid2"]
        )
        self.assertEqual(len(df), 400)

    def test_iid(self):
        out = self.simulate("--kind", "iid", "--n-series", "4", "--length", "50")
        df = pd.read_csv(out, comment="#")
        self.assertEqual(df.shape, (50, 5))

    def test_deterministic(self):
        a = Path(self.simulate()).read_bytes()
        b = Path(self.simulate()).read_bytes()
        self.assertEqual(a, b)


class TestIndicator(CLICase):
    def test_run(self):
        panel = self.simulate()
        out = self.path("ind.csv")
        argv = ["indicator", "-i", panel, "-o", out, "--effect", "y"]
        argv += ["--causes", "x", "iid0", "-w", "60", "-L", "2", "--tw-monitor"]
        self.assertEqual(cli.main(argv), 0)
        series = read_indicator_series(out)
        self.assertEqual(series.cause_names, ("x", "iid0"))
        means = np.nanmean(series.sigma_lambda, axis=0)
        self.assertGreater(means[0], means[1])
        self.assertTrue((self.dir / "ind_tw_monitor.csv").exists())

    def test_all_causes(self):
        panel = self.simulate()
        out = self.path("ind.json")
        argv = ["indicator", "-i", panel, "-o", out, "--effect", "y"]
        self.assertEqual(cli.main(argv + ["--format", "json"]), 0)
        series = read_indicator_series(out)
        self.assertEqual(series.cause_names, ("x", "iid0", "iid1", "iid2"))

    def test_errors(self):
        panel = self.simulate()
        out = self.path("ind.csv")
        base = ["indicator", "-i", panel, "-o", out]
        self.assertEqual(cli.main(base + ["--effect", "nope"]), 2)
        self.assertEqual(cli.main(base + ["--effect", "y", "-w", "500"]), 2)
        self.assertEqual(cli.main(base), 1)
        missing = self.path("missing.csv")
        self.assertEqual(cli.main(["indicator", "-i", missing, "--effect", "y"]), 2)

    def test_deterministic(self):
        panel = self.simulate()
        out = self.path("ind.csv")
        argv = ["indicator", "-i", panel, "-o", out, "--effect", "y", "-L", "3"]
        self.assert_rerun_identical(argv, out)


class TestGranger(CLICase):
    def test_run(self):
        panel = self.simulate()
        out = self.path("g.csv")
        argv = ["granger", "-i", panel, "-o", out, "--effect", "y", "--causes", "x"]
        self.assertEqual(cli.main(argv + ["iid0"]), 0)
        df = pd.read_csv(out, comment="#")
        self.assertEqual(len(df), 16)
        self.assertEqual(list(df["cause"][:8]), ["x"] * 8)

    def test_all_fail(self):
        path = self.dir / "dup.csv"
        y = np.random.default_rng(1).standard_normal(100)
        frame = pd.DataFrame(
            {"y": y, "d": y}, index=pd.date_range("2022-01-03", periods=100)
        )
        frame.to_csv(path, index_label="date")
        out = self.path("g.csv")
        argv = ["granger", "-i", str(path), "-o", out, "--effect", "y"]
        self.assertEqual(cli.main(argv), 3)
        df = pd.read_csv(out, comment="#")
        self.assertTrue(df["error"].notna().all())

    def test_deterministic(self):
        panel = self.simulate()
        out = self.path("g.json")
        argv = ["granger", "-i", panel, "-o", out, "--effect", "y", "--format", "json"]
        self.assert_rerun_identical(argv, out)


class TestCompare(CLICase):
    def test_run(self):
        panel = self.simulate()
        out = self.path("cmp.csv")
        argv = ["compare", "-i", panel, "-o", out, "--effect", "y"]
        self.assertEqual(cli.main(argv), 0)
        df = pd.read_csv(out, comment="#")
        self.assertEqual(
            list(df.columns),
            [
                "cause",
                "mean_sigma_lambda_lag2",
                "mean_sigma_lambda_lag5",
                "log_inv_p_lag2",
                "log_inv_p_lag5",
            ],
        )
        for col in df.columns[1:]:
            with self.subTest(column=col):
                self.assertEqual(df["cause"][df[col].idxmax()], "x")
        self.assertIn("# spearman_lag2: ", Path(out).read_text())

    def test_iid(self):
        panel = self.simulate("--kind", "iid", "--n-series", "4")
        out = self.path("cmp.json")
        argv = ["compare", "-i", panel, "-o", out, "--effect", "iid0"]
        self.assertEqual(cli.main(argv + ["--format", "json"]), 0)
        d = json.loads(Path(out).read_text())
        self.assertEqual(len(d["rows"]), 3)
        self.assertIn("spearman_lag5", d)

    def test_deterministic(self):
        panel = self.simulate()
        out = self.path("cmp.csv")
        argv = ["compare", "-i", panel, "-o", out, "--effect", "y"]
        self.assert_rerun_identical(argv, out)
