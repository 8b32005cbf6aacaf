"""Log-distance path loss with log-normal shadowing, and the attenuation tensor built from it."""

from dataclasses import dataclass

import numpy as np

from hetnet_power_setting.exceptions import EmptyTileSet, InvalidDistance, ValidationError
from hetnet_power_setting.utils import logger, rng, throw


@dataclass(frozen=True)
class KindModel:
	exponent: float
	intercept_db: float
	shadowing_std_db: float


@dataclass(frozen=True)
class PropagationModel:
	macro: KindModel
	micro: KindModel
	reference_frequency: float = 1e9
	frequency_coefficient_db: float = 20.0
	min_distance: float = 10.0
	fast_fading_std_db: float = 0.0

	def __post_init__(self):
		for name, kind in (("macro", self.macro), ("micro", self.micro)):
			if kind.exponent < 2:
				throw(f"Path-loss exponent for {name} must be >= 2, got {kind.exponent}", exc=ValidationError)
			if kind.shadowing_std_db < 0:
				throw(f"Shadowing std-dev for {name} must be >= 0", exc=ValidationError)
		if self.reference_frequency <= 0 or self.min_distance <= 0:
			throw("Reference frequency and minimum distance must be > 0", exc=ValidationError)

	@classmethod
	def from_config(cls, config):
		section = config.get("propagation")
		return cls(
			macro=KindModel(**{k: float(v) for k, v in section["macro"].items()}),
			micro=KindModel(**{k: float(v) for k, v in section["micro"].items()}),
			reference_frequency=float(section["reference_frequency_hz"]),
			frequency_coefficient_db=float(section["frequency_coefficient_db"]),
			min_distance=float(section["min_distance_m"]),
			fast_fading_std_db=float(section["fast_fading_std_db"]),
		)

	def without_shadowing(self):
		return PropagationModel(
			macro=KindModel(self.macro.exponent, self.macro.intercept_db, 0.0),
			micro=KindModel(self.micro.exponent, self.micro.intercept_db, 0.0),
			reference_frequency=self.reference_frequency,
			frequency_coefficient_db=self.frequency_coefficient_db,
			min_distance=self.min_distance,
			fast_fading_std_db=self.fast_fading_std_db,
		)

	def for_kind(self, kind):
		return self.macro if _kind_name(kind) == "Macro" else self.micro

	def path_loss_db(self, kind, distance, frequency):
		params = self.for_kind(kind)
		return (
			params.intercept_db
			+ 10.0 * params.exponent * np.log10(distance)
			+ self.frequency_coefficient_db * np.log10(frequency / self.reference_frequency)
		)

	def gain_matrix(self, kinds, positions, points, frequency, shadow_db=None):
		"""Linear gains (locations x points); distances below `min_distance` are clamped."""
		positions = np.asarray(positions, dtype=float).reshape(-1, 2)
		points = np.asarray(points, dtype=float).reshape(-1, 2)
		distance = np.hypot(points[None, :, 0] - positions[:, None, 0], points[None, :, 1] - positions[:, None, 1])
		distance = np.maximum(distance, self.min_distance)
		params = [self.for_kind(kind) for kind in kinds]
		intercept = np.array([p.intercept_db for p in params]).reshape(-1, 1)
		exponent = np.array([p.exponent for p in params]).reshape(-1, 1)
		loss = (
			intercept
			+ 10.0 * exponent * np.log10(distance)
			+ self.frequency_coefficient_db * np.log10(frequency / self.reference_frequency)
		)
		if shadow_db is not None:
			loss = loss - np.asarray(shadow_db, dtype=float)
		return np.minimum(1.0, np.power(10.0, -loss / 10.0))


def _kind_name(kind):
	return getattr(kind, "value", kind)


def path_gain(model, kind, distance, frequency, shadow_draw=0.0):
	"""Linear gain in [0, 1] for one link; `shadow_draw` is in dB."""
	if np.any(np.asarray(distance) <= 0):
		throw(f"Distance must be > 0, got {distance}", exc=InvalidDistance)
	if np.any(np.asarray(frequency) <= 0):
		throw(f"Frequency must be > 0, got {frequency}", exc=ValidationError)
	distance = np.maximum(distance, model.min_distance)
	loss = model.path_loss_db(kind, distance, frequency) - shadow_draw
	gain = np.minimum(1.0, np.power(10.0, -loss / 10.0))
	return float(gain) if np.ndim(gain) == 0 else gain


def shadowing_draws(model, kinds, tile_count, seed):
	"""One dB draw per (location, tile), shared by every carrier."""
	std = np.array([model.for_kind(kind).shadowing_std_db for kind in kinds], dtype=float)
	normal = rng(seed, "shadowing").standard_normal((len(std), tile_count))
	return normal * std[:, None]


def fast_fading_draws(model, shape, seed, period):
	if model.fast_fading_std_db <= 0:
		return np.zeros(shape)
	return rng(seed, "fading", period).normal(0.0, model.fast_fading_std_db, size=shape)


class AttenuationTensor:
	"""Linear gains a[l, z, c] from every location to every tile on every carrier."""

	def __init__(self, gains):
		gains = np.array(gains, dtype=float)
		if gains.ndim != 3:
			throw(f"Attenuation tensor must be 3-D (location, tile, carrier), got shape {gains.shape}", exc=ValidationError)
		if not np.all(np.isfinite(gains)) or np.any(gains < 0) or np.any(gains > 1):
			throw("Attenuation entries must be finite and within [0, 1]", exc=ValidationError)
		gains.setflags(write=False)
		self.gains = gains

	def __repr__(self):
		return f"AttenuationTensor(locations={self.location_count}, tiles={self.tile_count}, carriers={self.carrier_count})"

	def __eq__(self, other):
		return isinstance(other, AttenuationTensor) and np.array_equal(self.gains, other.gains)

	__hash__ = None

	@property
	def shape(self):
		return self.gains.shape

	@property
	def location_count(self):
		return self.gains.shape[0]

	@property
	def tile_count(self):
		return self.gains.shape[1]

	@property
	def carrier_count(self):
		return self.gains.shape[2]

	def matches(self, scenario):
		return self.shape == (len(scenario.locations), len(scenario.tiles), len(scenario.carriers))


def build_attenuation_tensor(scenario, model, seed=None):
	"""Gains for `scenario` under `model`; `seed` defaults to the scenario seed.

	With the scenario seed the shadowing matches the draws used for tile association.
	"""
	seed = scenario.seed if seed is None else seed
	kinds = [loc.kind for loc in scenario.locations]
	shadow = shadowing_draws(model, kinds, len(scenario.tiles), seed)
	layers = [
		model.gain_matrix(kinds, scenario.positions, scenario.tile_centres, carrier.center_frequency, shadow)
		for carrier in scenario.carriers
	]
	tensor = AttenuationTensor(np.stack(layers, axis=2))
	logger(__name__).debug(f"Built attenuation tensor {tensor.shape}")
	return tensor


def average_attenuation(tensor, location, carrier, served_tiles, ue_counts=None, log_domain=False):
	"""UE-weighted mean gain of `location` over `served_tiles` on `carrier`.

	`ue_counts` is aligned with `served_tiles`. Without it, or when the tiles hold no UEs,
	the mean is unweighted. With `log_domain` the mean is taken over gains in dB, a
	weighted geometric mean.
	"""
	served_tiles = np.asarray(served_tiles, dtype=int)
	if served_tiles.size == 0:
		throw(f"Location {location} serves no tiles", exc=EmptyTileSet)
	gains = tensor.gains[location, served_tiles, carrier]
	if log_domain:
		gains = np.log(np.maximum(gains, np.finfo(float).tiny))
	weights = None if ue_counts is None else np.asarray(ue_counts, dtype=float)
	if weights is None or weights.sum() <= 0:
		mean = float(gains.mean())
	else:
		mean = float(np.dot(weights, gains) / weights.sum())
	return float(np.exp(mean)) if log_domain else mean


def average_attenuation_table(scenario, tensor):
	"""ā for every (location, carrier); 0 where a location serves no tiles."""
	table = np.zeros((len(scenario.locations), len(scenario.carriers)))
	for loc in scenario.locations:
		tiles = scenario.location_tiles(loc.id)
		if tiles.size == 0:
			continue
		for carrier in scenario.carriers:
			table[loc.id, carrier.id] = average_attenuation(tensor, loc.id, carrier.id, tiles, scenario.ue_counts[tiles])
	return table
