"""Scenario configuration documents.

A configuration is a JSON document merged over ``defaults.json``. Every key that a
document may carry is present in the defaults; anything else is rejected with the
dotted key in the message.
"""

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

from hetnet_power_setting.exceptions import InvalidConfig
from hetnet_power_setting.utils import logger, throw

CONFIG_DIR = Path(__file__).resolve().parent
DEFAULTS_PATH = CONFIG_DIR / "defaults.json"
BUILTIN = {"defaults": "defaults.json", "desk": "desk.json", "city": "city.json", "toy": "toy.json"}

AREA_TYPES = ("CityCentre", "Commercial", "School", "Park", "Residential")
TIMES_OF_DAY = ("Morning", "Afternoon", "Evening")

NULLABLE_KEYS = {"tiles.columns", "tiles.rows", "traffic.area_types", "game.noise_power_w"}


@dataclass(frozen=True)
class ScenarioConfig:
	"""Resolved configuration document (defaults merged with the user document)."""

	document: dict = field(repr=False)
	source: str | None = None

	def get(self, key, default=None):
		node = self.document
		for part in key.split("."):
			if not isinstance(node, dict) or part not in node:
				return default
			node = node[part]
		return node

	def to_json(self):
		return json.dumps(self.document, indent=1, sort_keys=True)

	def with_overrides(self, overrides):
		return ScenarioConfig.from_dict(_merge(copy.deepcopy(self.document), overrides), source=self.source)

	@classmethod
	def from_dict(cls, document=None, source=None):
		merged = _merge(load_defaults(), document or {})
		validate_config(merged)
		return cls(document=merged, source=source)


def load_defaults():
	with open(DEFAULTS_PATH) as f:
		return json.load(f)


def load_config(path=None):
	"""Load a configuration by path or built-in name (`desk`, `city`, `toy`)."""
	if path is None:
		path = "desk"
	if str(path) in BUILTIN:
		resolved = CONFIG_DIR / BUILTIN[str(path)]
	else:
		resolved = Path(path)
	try:
		with open(resolved) as f:
			document = json.load(f)
	except json.JSONDecodeError as e:
		throw(f"Configuration {resolved} is not valid JSON: {e}", exc=InvalidConfig)
	logger(__name__).info(f"Loaded configuration {resolved}")
	return ScenarioConfig.from_dict(document, source=str(resolved))


def _merge(base, override, prefix=""):
	if not isinstance(override, dict):
		throw(f"Configuration section {prefix or '<root>'} must be an object", exc=InvalidConfig, key=prefix or None)
	for key, value in override.items():
		dotted = f"{prefix}{key}"
		if key not in base:
			throw(f"Unknown configuration key {dotted}", exc=InvalidConfig, key=dotted)
		if isinstance(base[key], dict):
			if value is None:
				throw(f"Configuration key {dotted} must be an object", exc=InvalidConfig, key=dotted)
			_merge(base[key], value, prefix=dotted + ".")
		else:
			base[key] = value
	return base


def _number(document, key, minimum=None, maximum=None, exclusive_min=False, integer=False):
	node = document
	for part in key.split("."):
		node = node[part]
	if node is None and key in NULLABLE_KEYS:
		return None
	if isinstance(node, bool) or not isinstance(node, int | float):
		throw(f"Configuration key {key} must be a number, got {node!r}", exc=InvalidConfig, key=key)
	if integer and int(node) != node:
		throw(f"Configuration key {key} must be an integer, got {node!r}", exc=InvalidConfig, key=key)
	if minimum is not None and (node < minimum or (exclusive_min and node == minimum)):
		bound = ">" if exclusive_min else ">="
		throw(f"Configuration key {key} must be {bound} {minimum}, got {node!r}", exc=InvalidConfig, key=key)
	if maximum is not None and node > maximum:
		throw(f"Configuration key {key} must be <= {maximum}, got {node!r}", exc=InvalidConfig, key=key)
	return node


def _flag(document, key):
	node = document
	for part in key.split("."):
		node = node[part]
	if not isinstance(node, bool):
		throw(f"Configuration key {key} must be true or false, got {node!r}", exc=InvalidConfig, key=key)
	return node


def validate_config(document):
	"""Range checks on a merged document; raises InvalidConfig naming the offending key."""
	_number(document, "geometry.inter_site_distance_m", 0, exclusive_min=True)
	_number(document, "geometry.macro_count", 1, integer=True)
	_number(document, "geometry.micros_per_cell", 0, integer=True)
	_number(document, "geometry.micro_radius_m", 0, exclusive_min=True)
	_number(document, "geometry.placement_retries", 1, integer=True)
	_number(document, "tiles.side_m", 0, exclusive_min=True)
	_number(document, "tiles.columns", 1, integer=True)
	_number(document, "tiles.rows", 1, integer=True)
	_number(document, "tiles.max_ues_per_tile", 0, exclusive_min=True)
	_number(document, "tiles.hotspot_factor", 1)

	carriers = document["carriers"]
	if not isinstance(carriers, list) or not carriers:
		throw("Configuration key carriers must be a non-empty list", exc=InvalidConfig, key="carriers")
	seen = set()
	for i, carrier in enumerate(carriers):
		key = f"carriers[{i}]"
		if not isinstance(carrier, dict) or set(carrier) != {"freq_hz", "bandwidth_hz"}:
			throw(f"Configuration key {key} must have exactly freq_hz and bandwidth_hz", exc=InvalidConfig, key=key)
		for name in ("freq_hz", "bandwidth_hz"):
			value = carrier[name]
			if isinstance(value, bool) or not isinstance(value, int | float) or value <= 0:
				throw(f"Configuration key {key}.{name} must be > 0, got {value!r}", exc=InvalidConfig, key=f"{key}.{name}")
		if carrier["freq_hz"] in seen:
			throw(f"Configuration key {key}.freq_hz duplicates another carrier", exc=InvalidConfig, key=f"{key}.freq_hz")
		seen.add(carrier["freq_hz"])

	levels = document["power"]["levels"]
	if not isinstance(levels, list) or len(levels) < 2:
		throw("Configuration key power.levels needs at least two levels", exc=InvalidConfig, key="power.levels")
	if levels[0] != 0:
		throw("Configuration key power.levels must start with 0", exc=InvalidConfig, key="power.levels")
	if any(b <= a for a, b in zip(levels, levels[1:], strict=False)) or levels[-1] > 1:
		throw("Configuration key power.levels must be strictly ascending within [0, 1]", exc=InvalidConfig, key="power.levels")
	_number(document, "power.macro_max_w", 0, exclusive_min=True)
	_number(document, "power.micro_max_w", 0, exclusive_min=True)

	for kind in ("macro", "micro"):
		_number(document, f"propagation.{kind}.exponent", 2)
		_number(document, f"propagation.{kind}.intercept_db")
		_number(document, f"propagation.{kind}.shadowing_std_db", 0)
	_number(document, "propagation.reference_frequency_hz", 0, exclusive_min=True)
	_number(document, "propagation.frequency_coefficient_db", 0)
	_number(document, "propagation.min_distance_m", 0, exclusive_min=True)
	_number(document, "propagation.fast_fading_std_db", 0)

	traffic = document["traffic"]
	area_types = traffic["area_types"]
	if area_types is not None:
		if not isinstance(area_types, list) or len(area_types) != document["geometry"]["macro_count"]:
			throw("Configuration key traffic.area_types must list one area type per macro", exc=InvalidConfig, key="traffic.area_types")
		for name in area_types:
			if name not in AREA_TYPES:
				throw(f"Configuration key traffic.area_types has unknown area {name!r}", exc=InvalidConfig, key="traffic.area_types")
	_number(document, "traffic.density_scale", 0, exclusive_min=True)
	for area in AREA_TYPES:
		_number(document, f"traffic.baseline_density.{area}", 0)
		_number(document, f"traffic.vehicle_share.{area}", 0, 1)
		for tod in TIMES_OF_DAY:
			_number(document, f"traffic.density_weights.{tod}.{area}", 0)
			_number(document, f"traffic.arrival_rates.{tod}.{area}", 0)
	total = 0.0
	for kind in ("Video", "Generic"):
		_number(document, f"traffic.contents.{kind}.size_bits", 0, exclusive_min=True)
		_number(document, f"traffic.contents.{kind}.deadline_s", 0, exclusive_min=True)
		total += _number(document, f"traffic.contents.{kind}.probability", 0, 1)
	if abs(total - 1.0) > 1e-9:
		throw("Configuration key traffic.contents probabilities must sum to 1", exc=InvalidConfig, key="traffic.contents")

	_number(document, "game.alpha", 0, exclusive_min=True)
	_number(document, "game.beta")
	_number(document, "game.delta", 0)
	_number(document, "game.k", 0, 0.25, exclusive_min=True)
	_number(document, "game.gamma_min_db")
	_number(document, "game.noise_figure_db", 0)
	_number(document, "game.noise_power_w", 0, exclusive_min=True)
	_number(document, "game.tie_tolerance", 0)
	_number(document, "game.max_rounds", 1, integer=True)
	_flag(document, "game.update_prices_each_iteration")
	if document["game"]["price_reference"] not in ("max", "min"):
		throw("Configuration key game.price_reference must be \"max\" or \"min\"", exc=InvalidConfig, key="game.price_reference")
	_flag(document, "tiles.enforce_max_ues")
	_flag(document, "simulation.redrop_ues")

	_number(document, "simulation.tti_s", 0, exclusive_min=True)
	_number(document, "simulation.update_period_s", 0, exclusive_min=True)
	_number(document, "simulation.pf_time_constant_tti", 1)
	_number(document, "simulation.pf_epsilon", 0, exclusive_min=True)
	_number(document, "simulation.edge_threshold_db")
	_number(document, "simulation.cre_bias_db", 0)
	_number(document, "simulation.abs_fraction", 0, 1)
	table = document["simulation"]["rate_table"]
	if len(table["sinr_db"]) != len(table["efficiency"]) or not table["sinr_db"]:
		throw("Configuration key simulation.rate_table needs matching non-empty columns", exc=InvalidConfig, key="simulation.rate_table")

	for kind in ("macro", "micro"):
		_number(document, f"energy.{kind}.static_w", 0)
		_number(document, f"energy.{kind}.load_slope", 0)
	return document
