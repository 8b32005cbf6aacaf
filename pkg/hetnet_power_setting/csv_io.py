"""CSV import and export of scenarios and every run artifact.

A scenario directory holds ``tiles.csv``, ``locations.csv``, ``carriers.csv``,
``attenuation.csv``, the resolved ``config.json`` and ``scenario.json`` (grid, power
levels, time of day, seed). Outputs are written with fixed column order and ``\\n`` line
endings so that a rerun reproduces them byte for byte.
"""

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from hetnet_power_setting.config import ScenarioConfig
from hetnet_power_setting.power_setting.propagation.propagation import AttenuationTensor
from hetnet_power_setting.power_setting.scenario.scenario import (
	AreaType,
	Carrier,
	Location,
	PoaKind,
	PowerLevelSet,
	Tile,
	TileGrid,
	TrafficProfile,
	assemble_scenario,
)
from hetnet_power_setting.utils import logger, throw

SCENARIO_FILES = ("tiles.csv", "locations.csv", "carriers.csv", "attenuation.csv", "config.json", "scenario.json")
GAIN_FORMAT = "%.17g"


@dataclass(frozen=True)
class RunManifest:
	command: str
	config: str
	seed: int
	out_dir: str
	timestamp: str
	version: str
	arguments: str = ""
	converged: bool | None = None

	def lines(self):
		return [f"{key}: {'' if value is None else value}" for key, value in asdict(self).items()]


def write_manifest(manifest, directory):
	path = Path(directory) / "manifest.txt"
	path.write_text("\n".join(manifest.lines()) + "\n")
	return path


def read_manifest(directory):
	entries = {}
	for line in (Path(directory) / "manifest.txt").read_text().splitlines():
		key, _, value = line.partition(": ")
		entries[key] = value
	return entries


def _write(frame, path, **kwargs):
	path = Path(path)
	path.parent.mkdir(parents=True, exist_ok=True)
	frame.to_csv(path, index=False, lineterminator="\n", **kwargs)
	logger(__name__).debug(f"Wrote {len(frame)} rows to {path}")
	return path


def _read(path, **kwargs):
	path = Path(path)
	if not path.exists():
		throw(f"Missing file {path}", exc=FileNotFoundError)
	return pd.read_csv(path, float_precision="round_trip", **kwargs)


def write_scenario(scenario, tensor, config, directory):
	"""Write `scenario` and `tensor` as a scenario directory; returns the written paths."""
	directory = Path(directory)
	directory.mkdir(parents=True, exist_ok=True)
	tiles = pd.DataFrame(
		{
			"id": [t.id for t in scenario.tiles],
			"x": [t.x for t in scenario.tiles],
			"y": [t.y for t in scenario.tiles],
			"side": [t.side for t in scenario.tiles],
			"area_type": [AreaType(t.area_type).value for t in scenario.tiles],
			"serving_location": [t.serving_location_id for t in scenario.tiles],
			"ue_ped": [t.ue_count_pedestrian for t in scenario.tiles],
			"ue_veh": [t.ue_count_vehicular for t in scenario.tiles],
		}
	)
	locations = pd.DataFrame(
		{
			"id": [loc.id for loc in scenario.locations],
			"kind": [loc.kind.value for loc in scenario.locations],
			"x": [loc.x for loc in scenario.locations],
			"y": [loc.y for loc in scenario.locations],
			"max_w": [loc.max_power for loc in scenario.locations],
			"team": [loc.team_id for loc in scenario.locations],
		}
	)
	carriers = pd.DataFrame(
		{
			"id": [c.id for c in scenario.carriers],
			"freq_hz": [c.center_frequency for c in scenario.carriers],
			"bandwidth_hz": [c.bandwidth for c in scenario.carriers],
		}
	)
	paths = [
		_write(tiles, directory / "tiles.csv"),
		_write(locations, directory / "locations.csv"),
		_write(carriers, directory / "carriers.csv"),
		write_attenuation(tensor, directory / "attenuation.csv"),
	]
	(directory / "config.json").write_text(config.to_json() + "\n")
	meta = {
		"grid": asdict(scenario.grid),
		"power_levels": list(scenario.power_levels.fractions),
		"time_of_day": scenario.time_of_day.value,
		"seed": scenario.seed,
		"micro_radius": scenario.micro_radius,
	}
	(directory / "scenario.json").write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
	paths += [directory / "config.json", directory / "scenario.json"]
	logger(__name__).info(f"Wrote scenario {scenario!r} to {directory}")
	return paths


def write_attenuation(tensor, path):
	"""Rows (location_id, tile_id, carrier_id, gain) in row-major order."""
	index = np.indices(tensor.shape).reshape(3, -1)
	frame = pd.DataFrame(
		{"location_id": index[0], "tile_id": index[1], "carrier_id": index[2], "gain": tensor.gains.reshape(-1)}
	)
	return _write(frame, path, float_format=GAIN_FORMAT)


def read_attenuation(path, shape=None):
	frame = _read(path)
	if shape is None:
		shape = tuple(int(frame[c].max()) + 1 for c in ("location_id", "tile_id", "carrier_id"))
	gains = np.zeros(shape)
	gains[frame["location_id"].to_numpy(), frame["tile_id"].to_numpy(), frame["carrier_id"].to_numpy()] = frame[
		"gain"
	].to_numpy()
	return AttenuationTensor(gains)


def read_scenario(directory):
	"""(scenario, tensor, config) from a directory written by `write_scenario`."""
	directory = Path(directory)
	for name in SCENARIO_FILES:
		if not (directory / name).exists():
			throw(f"Scenario directory {directory} has no {name}", exc=FileNotFoundError)
	config = ScenarioConfig.from_dict(json.loads((directory / "config.json").read_text()), source=str(directory))
	meta = json.loads((directory / "scenario.json").read_text())
	tiles = _read(directory / "tiles.csv").sort_values("id")
	locations = _read(directory / "locations.csv").sort_values("id")
	carriers = _read(directory / "carriers.csv").sort_values("id")

	scenario = assemble_scenario(
		carriers=[Carrier(int(r.id), float(r.freq_hz), float(r.bandwidth_hz)) for r in carriers.itertuples()],
		locations=[
			Location(int(r.id), PoaKind(r.kind), float(r.x), float(r.y), float(r.max_w), int(r.team))
			for r in locations.itertuples()
		],
		tiles=[
			Tile(
				int(r.id),
				float(r.x),
				float(r.y),
				float(r.side),
				int(r.serving_location),
				AreaType(r.area_type),
				int(r.ue_ped),
				int(r.ue_veh),
			)
			for r in tiles.itertuples()
		],
		grid=TileGrid(**meta["grid"]),
		power_levels=PowerLevelSet(tuple(meta["power_levels"])),
		traffic=TrafficProfile.from_config(config),
		time_of_day=meta["time_of_day"],
		seed=meta["seed"],
		micro_radius=meta["micro_radius"],
	)
	tensor = read_attenuation(
		directory / "attenuation.csv", (len(scenario.locations), len(scenario.tiles), len(scenario.carriers))
	)
	logger(__name__).info(f"Read scenario {scenario!r} from {directory}")
	return scenario, tensor, config


def write_strategy(profile, scenario, path):
	"""Rows (team_id, location_id, carrier_id, fraction, watts)."""
	rows = [
		{
			"team_id": loc.team_id,
			"location_id": loc.id,
			"carrier_id": c.id,
			"fraction": float(profile.fractions[loc.id, c.id]),
			"watts": float(profile.fractions[loc.id, c.id] * loc.max_power),
		}
		for loc in scenario.locations
		for c in scenario.carriers
	]
	return _write(pd.DataFrame(rows, columns=["team_id", "location_id", "carrier_id", "fraction", "watts"]), path)


def write_trace(trace, path):
	columns = ["carrier", "round", "iteration", "team", "payoff", "utility", "cost", "e_t", "total_watts", "changed"]
	return _write(pd.DataFrame(trace, columns=columns), path)


def write_prices(prices, path):
	index = np.indices(prices.xi.shape).reshape(2, -1)
	frame = pd.DataFrame({"location_id": index[0], "carrier_id": index[1], "xi": prices.xi.reshape(-1)})
	return _write(frame, path)


def write_metrics(reports, path):
	"""One row per (policy, time_of_day, metric, poa_kind, value) over every report."""
	rows = [
		{"policy": r.policy, "time_of_day": r.time_of_day, "metric": metric, "poa_kind": kind, "value": value}
		for r in reports
		for metric, kind, value in r.rows()
	]
	return _write(pd.DataFrame(rows, columns=["policy", "time_of_day", "metric", "poa_kind", "value"]), path)


def write_ue_throughput(reports, path):
	columns = ["policy", "request", "tile", "ue", "area_type", "content", "mobility", "edge", "status", "throughput_bps"]
	rows = [{"policy": r.policy, **row} for r in reports for row in r.ue_rows]
	return _write(pd.DataFrame(rows, columns=columns), path)


def write_mean_strategy(reports, scenario, path):
	rows = [
		{
			"policy": r.policy,
			"location_id": loc.id,
			"carrier_id": c.id,
			"fraction": float(r.mean_strategy[loc.id, c.id]),
		}
		for r in reports
		for loc in scenario.locations
		for c in scenario.carriers
	]
	return _write(pd.DataFrame(rows, columns=["policy", "location_id", "carrier_id", "fraction"]), path)


def profile_hash(profile):
	"""Short digest of a strategy profile, stable across runs."""
	return hashlib.sha256(np.round(profile.fractions, 12).astype("<f8").tobytes()).hexdigest()[:16]


def write_ne_report(report, scenario, directory):
	"""``ne.csv`` (ne_index, welfare, is_bps_outcome, profile_hash) and ``ne_<i>_strategy.csv`` per equilibrium."""
	directory = Path(directory)
	rows = []
	for i, (profile, welfare) in enumerate(zip(report.profiles, report.welfare, strict=True)):
		is_bps = report.bps_profile is not None and profile == report.bps_profile
		rows.append({"ne_index": i, "welfare": float(welfare), "is_bps_outcome": is_bps, "profile_hash": profile_hash(profile)})
		write_strategy(profile, scenario, directory / f"ne_{i}_strategy.csv")
	return _write(pd.DataFrame(rows, columns=["ne_index", "welfare", "is_bps_outcome", "profile_hash"]), directory / "ne.csv")


def write_verify_report(reports, path):
	rows = [row for report in reports for row in report.rows]
	return _write(pd.DataFrame(rows, columns=["suite", "check", "checked", "failures", "informational", "detail"]), path)


def write_sign_tests(results, path):
	rows = [asdict(r) for r in results]
	return _write(pd.DataFrame(rows, columns=["metric", "wins", "losses", "ties", "p_value"]), path)
