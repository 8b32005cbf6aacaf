# Copyright (c) 2026, hetnet_power_setting contributors
# See license.txt

import json
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from hetnet_power_setting.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main
from hetnet_power_setting.csv_io import read_manifest


class TestCommands(unittest.TestCase):
	@classmethod
	def setUpClass(cls):
		cls.tmp = tempfile.TemporaryDirectory()
		cls.root = Path(cls.tmp.name)
		cls.scenario = cls.root / "scenario"
		assert main(["generate", "--config", "toy", "--seed", "5", "--out", str(cls.scenario)]) == EXIT_OK

	@classmethod
	def tearDownClass(cls):
		cls.tmp.cleanup()

	def _out(self, name):
		return str(self.root / name)

	def test_generate_writes_scenario(self):
		for name in ("tiles.csv", "locations.csv", "attenuation.csv", "carriers.csv", "config.json", "manifest.txt"):
			self.assertTrue((self.scenario / name).exists(), name)
		self.assertEqual(read_manifest(self.scenario)["seed"], "5")

	def test_generate_is_reproducible(self):
		again = self.root / "again"
		self.assertEqual(main(["generate", "--config", "toy", "--seed", "5", "--out", str(again)]), EXIT_OK)
		for name in ("tiles.csv", "locations.csv", "attenuation.csv", "config.json"):
			self.assertEqual((again / name).read_bytes(), (self.scenario / name).read_bytes(), name)

	def test_bad_config_key(self):
		path = self.root / "bad.json"
		path.write_text(json.dumps({"geometry": {"site_spacing": 1}}))
		with self.assertLogs("hetnet_power_setting", level="ERROR") as logs:
			code = main(["generate", "--config", str(path), "--out", self._out("bad")])
		self.assertEqual(code, EXIT_USAGE)
		self.assertIn("geometry.site_spacing", "\n".join(logs.output))

	def test_play(self):
		out = self.root / "play"
		self.assertEqual(main(["play", str(self.scenario), "--out", str(out)]), EXIT_OK)
		strategy = pd.read_csv(out / "strategy.csv")
		self.assertEqual(len(strategy), 4 * 2)
		self.assertTrue(strategy["fraction"].isin([0.0, 0.25, 0.5, 1.0]).all())
		self.assertEqual(read_manifest(out)["converged"], "True")
		self.assertTrue((out / "trace.csv").exists())
		self.assertTrue((out / "prices.csv").exists())

	def test_play_single_carrier(self):
		out = self.root / "single"
		self.assertEqual(main(["play", str(self.scenario), "--carriers", "1", "--out", str(out)]), EXIT_OK)
		strategy = pd.read_csv(out / "strategy.csv")
		self.assertTrue((strategy.loc[strategy["carrier_id"] == 0, "fraction"] == 0.0).all())
		trace = pd.read_csv(out / "trace.csv")
		self.assertEqual(set(trace["carrier"]), {1})

	def test_play_fixed_policy(self):
		out = self.root / "max"
		self.assertEqual(main(["play", str(self.scenario), "--policy", "max", "--out", str(out)]), EXIT_OK)
		self.assertTrue((pd.read_csv(out / "strategy.csv")["fraction"] == 1.0).all())
		self.assertEqual(len(pd.read_csv(out / "trace.csv")), 0)

	def test_simulate_every_policy(self):
		out = self.root / "simulate"
		code = main(["simulate", str(self.scenario), "--duration-s", "0.2", "--seed", "1", "--out", str(out)])
		self.assertEqual(code, EXIT_OK)
		metrics = pd.read_csv(out / "metrics.csv")
		self.assertEqual(list(metrics.columns), ["policy", "time_of_day", "metric", "poa_kind", "value"])
		self.assertEqual(set(metrics["policy"]), {"BPS", "MaxPower", "MinPower", "EicicLite"})
		counts = metrics.groupby("policy").size()
		self.assertEqual(counts.nunique(), 1)

	def test_simulate_rejects_zero_duration(self):
		code = main(["simulate", str(self.scenario), "--duration-s", "0", "--out", self._out("zero")])
		self.assertEqual(code, EXIT_USAGE)

	def test_missing_scenario_directory(self):
		code = main(["play", str(self.root / "nowhere"), "--out", self._out("nowhere_out")])
		self.assertEqual(code, EXIT_IO)

	def test_verify_unknown_suite(self):
		self.assertEqual(main(["verify", "everything", "--out", self._out("verify_bad")]), EXIT_USAGE)

	def test_verify_order(self):
		out = self.root / "verify"
		self.assertEqual(main(["verify", "order", "--samples", "2", "--out", str(out)]), EXIT_OK)
		report = pd.read_csv(out / "verify.csv")
		self.assertEqual(set(report["suite"]), {"order"})

	def test_unknown_command(self):
		self.assertEqual(main(["launch"]), EXIT_USAGE)
