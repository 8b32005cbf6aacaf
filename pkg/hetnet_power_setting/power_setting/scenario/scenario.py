"""Network scenarios: carriers, PoA locations, tiles, teams and UE counts.

A scenario is an immutable snapshot. Ids of carriers, locations, tiles and teams are
contiguous and equal to their position in the owning tuple, and the locations of one
team are contiguous with the macro first.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property

import numpy as np

from hetnet_power_setting.exceptions import GeometryError, InvalidConfig, ValidationError
from hetnet_power_setting.utils import logger, rng, throw

RB_BANDWIDTH_HZ = 180e3

# axial unit steps, counter-clockwise from +x
HEX_DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


class PoaKind(str, Enum):
	MACRO = "Macro"
	MICRO = "Micro"


class AreaType(str, Enum):
	CITY_CENTRE = "CityCentre"
	COMMERCIAL = "Commercial"
	SCHOOL = "School"
	PARK = "Park"
	RESIDENTIAL = "Residential"


class TimeOfDay(str, Enum):
	MORNING = "Morning"
	AFTERNOON = "Afternoon"
	EVENING = "Evening"


@dataclass(frozen=True)
class Carrier:
	id: int
	center_frequency: float
	bandwidth: float

	@property
	def rb_count(self):
		return int(math.floor(self.bandwidth / RB_BANDWIDTH_HZ + 1e-9))


@dataclass(frozen=True)
class Location:
	id: int
	kind: PoaKind
	x: float
	y: float
	max_power: float
	team_id: int

	@property
	def position(self):
		return np.array([self.x, self.y])

	@property
	def is_macro(self):
		return self.kind == PoaKind.MACRO


@dataclass(frozen=True)
class Tile:
	"""Square tile; (x, y) is the lower-left corner."""

	id: int
	x: float
	y: float
	side: float
	serving_location_id: int
	area_type: AreaType = AreaType.RESIDENTIAL
	ue_count_pedestrian: int = 0
	ue_count_vehicular: int = 0

	@property
	def ue_count(self):
		return self.ue_count_pedestrian + self.ue_count_vehicular

	@property
	def center(self):
		return np.array([self.x + self.side / 2.0, self.y + self.side / 2.0])

	@property
	def area(self):
		return self.side * self.side


@dataclass(frozen=True)
class Team:
	id: int
	leader_location_id: int
	member_location_ids: tuple
	tile_ids: tuple
	ue_count: int
	area_type: AreaType = AreaType.RESIDENTIAL


@dataclass(frozen=True)
class TileGrid:
	x0: float
	y0: float
	columns: int
	rows: int
	side: float

	@property
	def bounds(self):
		return (self.x0, self.y0, self.x0 + self.columns * self.side, self.y0 + self.rows * self.side)

	@property
	def area(self):
		return self.columns * self.rows * self.side * self.side

	def contains(self, x, y):
		x0, y0, x1, y1 = self.bounds
		return x0 <= x <= x1 and y0 <= y <= y1


@dataclass(frozen=True)
class PowerLevelSet:
	"""Discrete transmit levels as fractions of a location's maximum power."""

	fractions: tuple

	def __post_init__(self):
		fractions = tuple(float(f) for f in self.fractions)
		if len(fractions) < 1 or fractions[0] != 0.0:
			throw("Power levels must start with 0 (carrier switched off)", exc=ValidationError)
		if any(b <= a for a, b in zip(fractions, fractions[1:], strict=False)) or fractions[-1] > 1.0:
			throw(f"Power levels must be strictly ascending within [0, 1], got {fractions}", exc=ValidationError)
		object.__setattr__(self, "fractions", fractions)

	def __len__(self):
		return len(self.fractions)

	def __iter__(self):
		return iter(self.fractions)

	@property
	def values(self):
		return np.array(self.fractions)

	@property
	def lowest_nonzero(self):
		return self.fractions[1] if len(self.fractions) > 1 else 0.0

	def contains(self, fraction, tol=1e-12):
		return bool(np.any(np.abs(self.values - fraction) <= tol))


@dataclass(frozen=True)
class ContentSpec:
	kind: str
	size_bits: float
	deadline_s: float
	probability: float


@dataclass(frozen=True)
class TrafficProfile:
	"""UE densities and request arrival rates per (time of day, area type).

	`density_weights` and `arrival_rates` are keyed by ``(time_of_day, area_type)``
	string pairs; `baseline_density` and `vehicle_share` by area type.
	"""

	baseline_density: dict
	vehicle_share: dict
	density_weights: dict
	arrival_rates: dict
	contents: tuple
	hotspot_factor: float = 4.0
	density_scale: float = 1.0

	def __post_init__(self):
		if any(rate < 0 for rate in self.arrival_rates.values()):
			throw("Request arrival rates must be >= 0", exc=ValidationError)
		if abs(sum(c.probability for c in self.contents) - 1.0) > 1e-9:
			throw("Content selection probabilities must sum to 1", exc=ValidationError)

	@classmethod
	def from_config(cls, config):
		traffic = config.get("traffic")
		weights = {(tod, area): w for tod, row in traffic["density_weights"].items() for area, w in row.items()}
		rates = {(tod, area): r for tod, row in traffic["arrival_rates"].items() for area, r in row.items()}
		contents = tuple(
			ContentSpec(kind, float(c["size_bits"]), float(c["deadline_s"]), float(c["probability"]))
			for kind, c in traffic["contents"].items()
		)
		return cls(
			baseline_density=dict(traffic["baseline_density"]),
			vehicle_share=dict(traffic["vehicle_share"]),
			density_weights=weights,
			arrival_rates=rates,
			contents=contents,
			hotspot_factor=float(config.get("tiles.hotspot_factor")),
			density_scale=float(config.get("traffic.density_scale")),
		)

	def density(self, area_type, time_of_day):
		area = AreaType(area_type).value
		return self.density_scale * self.baseline_density[area] * self.density_weights[(TimeOfDay(time_of_day).value, area)]

	def rate(self, area_type, time_of_day):
		return self.arrival_rates[(TimeOfDay(time_of_day).value, AreaType(area_type).value)]

	def content(self, kind):
		for spec in self.contents:
			if spec.kind == kind:
				return spec
		throw(f"Unknown content kind {kind}", exc=KeyError)


@dataclass(frozen=True, repr=False)
class Scenario:
	carriers: tuple
	locations: tuple
	tiles: tuple
	teams: tuple
	power_levels: PowerLevelSet
	traffic: TrafficProfile
	grid: TileGrid
	time_of_day: TimeOfDay = TimeOfDay.AFTERNOON
	seed: int = 0
	micro_radius: float = 60.0

	def __repr__(self):
		return (
			f"Scenario(teams={len(self.teams)}, locations={len(self.locations)}, "
			f"tiles={len(self.tiles)}, carriers={len(self.carriers)})"
		)

	@cached_property
	def max_powers(self):
		return _frozen(np.array([loc.max_power for loc in self.locations], dtype=float))

	@cached_property
	def is_macro(self):
		return _frozen(np.array([loc.is_macro for loc in self.locations], dtype=bool))

	@cached_property
	def positions(self):
		return _frozen(np.array([[loc.x, loc.y] for loc in self.locations], dtype=float).reshape(-1, 2))

	@cached_property
	def team_of_location(self):
		return _frozen(np.array([loc.team_id for loc in self.locations], dtype=int))

	@cached_property
	def tile_centres(self):
		return _frozen(np.array([tile.center for tile in self.tiles], dtype=float).reshape(-1, 2))

	@cached_property
	def serving(self):
		return _frozen(np.array([tile.serving_location_id for tile in self.tiles], dtype=int))

	@cached_property
	def ue_counts(self):
		return _frozen(np.array([tile.ue_count for tile in self.tiles], dtype=float))

	@cached_property
	def frequencies(self):
		return _frozen(np.array([c.center_frequency for c in self.carriers], dtype=float))

	@property
	def carrier_order(self):
		"""Carrier ids by descending center frequency."""
		return [c.id for c in sorted(self.carriers, key=lambda c: (-c.center_frequency, c.id))]

	@property
	def reference_carrier(self):
		return min(self.carriers, key=lambda c: (c.center_frequency, c.id))

	def location_tiles(self, location_id):
		return np.flatnonzero(self.serving == location_id)

	def team_tiles(self, team_id):
		return np.array(self.teams[team_id].tile_ids, dtype=int)

	def location_ue_count(self, location_id):
		return float(self.ue_counts[self.serving == location_id].sum())

	def micro_order(self, team_id):
		"""Micro ids of a team by ascending distance to its macro (ties by id)."""
		team = self.teams[team_id]
		leader = self.positions[team.leader_location_id]
		micros = [lid for lid in team.member_location_ids if not self.is_macro[lid]]
		return sorted(micros, key=lambda lid: (float(np.hypot(*(self.positions[lid] - leader))), lid))

	def with_tiles(self, tiles, time_of_day=None):
		return assemble_scenario(
			carriers=self.carriers,
			locations=self.locations,
			tiles=tiles,
			grid=self.grid,
			power_levels=self.power_levels,
			traffic=self.traffic,
			time_of_day=self.time_of_day if time_of_day is None else time_of_day,
			seed=self.seed,
			micro_radius=self.micro_radius,
		)


@dataclass(frozen=True)
class Violation:
	entity: str
	invariant: str
	detail: str = ""


def _frozen(array):
	array.setflags(write=False)
	return array


def assemble_scenario(
	carriers, locations, tiles, grid, power_levels, traffic, time_of_day=TimeOfDay.AFTERNOON, seed=0, micro_radius=60.0
):
	"""Derive teams from locations and tile association and freeze everything into a Scenario."""
	carriers = tuple(carriers)
	locations = tuple(locations)
	tiles = tuple(tiles)
	team_ids = sorted({loc.team_id for loc in locations})
	served = {}
	for tile in tiles:
		served.setdefault(tile.serving_location_id, []).append(tile.id)
	centres = np.array([tile.center for tile in tiles]).reshape(-1, 2)

	teams = []
	for t in team_ids:
		members = tuple(loc.id for loc in locations if loc.team_id == t)
		macros = [lid for lid in members if locations[lid].is_macro]
		leader = macros[0] if macros else members[0]
		tile_ids = tuple(sorted(z for lid in members for z in served.get(lid, [])))
		ue_count = int(sum(tiles[z].ue_count for z in tile_ids))
		area_type = AreaType.RESIDENTIAL
		if len(tiles):
			nearest = int(np.argmin(np.hypot(*(centres - locations[leader].position).T)))
			area_type = tiles[nearest].area_type
		teams.append(Team(t, leader, members, tile_ids, ue_count, area_type))

	return Scenario(
		carriers=carriers,
		locations=locations,
		tiles=tiles,
		teams=tuple(teams),
		power_levels=power_levels,
		traffic=traffic,
		grid=grid,
		time_of_day=TimeOfDay(time_of_day),
		seed=int(seed),
		micro_radius=float(micro_radius),
	)


def hex_lattice(count, spacing):
	"""First `count` sites of a hexagonal spiral; returns (positions, ring index per site)."""
	sites = [(0, 0, 0)]
	ring = 1
	while len(sites) < count:
		q, r = ring, 0
		for i in (2, 3, 4, 5, 0, 1):
			dq, dr = HEX_DIRECTIONS[i]
			for _ in range(ring):
				sites.append((q, r, ring))
				q, r = q + dq, r + dr
		ring += 1
	sites = sites[:count]
	positions = np.array([[spacing * (q + r / 2.0), spacing * (math.sqrt(3) / 2.0) * r] for q, r, _ in sites])
	return positions, np.array([s[2] for s in sites], dtype=int)


def inside_cell(offset, spacing):
	"""Whether `offset` from a lattice site lies in that site's hexagonal cell."""
	for angle in (0.0, math.pi / 3.0, 2.0 * math.pi / 3.0):
		if abs(offset[0] * math.cos(angle) + offset[1] * math.sin(angle)) > spacing / 2.0:
			return False
	return True


def place_micros(centre, count, spacing, radius, grid, generator, retries=1000):
	"""Rejection-sample `count` micro positions inside one hexagonal cell.

	Micros of the same cell keep a pairwise distance of at least 2 * `radius`.
	"""
	placed = []
	circumradius = spacing / math.sqrt(3)
	for i in range(count):
		for _ in range(retries):
			offset = generator.uniform(-circumradius, circumradius, size=2)
			point = centre + offset
			if not inside_cell(offset, spacing) or not grid.contains(point[0], point[1]):
				continue
			if any(math.hypot(*(point - other)) < 2.0 * radius for other in placed):
				continue
			placed.append(point)
			break
		else:
			throw(
				f"Could not place micro {i + 1} of {count} around ({centre[0]:.1f}, {centre[1]:.1f}) "
				f"after {retries} attempts",
				exc=GeometryError,
			)
	return placed


def area_types_for_rings(rings):
	inner = (AreaType.COMMERCIAL, AreaType.SCHOOL)
	outer = (AreaType.RESIDENTIAL, AreaType.PARK)
	types = []
	position_in_ring = {}
	for ring in rings:
		index = position_in_ring.get(ring, 0)
		position_in_ring[ring] = index + 1
		if ring == 0:
			types.append(AreaType.CITY_CENTRE)
		elif ring == 1:
			types.append(inner[index % 2])
		else:
			types.append(outer[index % 2])
	return types


def _tile_grid(config, centres):
	side = float(config.get("tiles.side_m"))
	spacing = float(config.get("geometry.inter_site_distance_m"))
	lo, hi = centres.min(axis=0), centres.max(axis=0)
	mid = (lo + hi) / 2.0
	columns = config.get("tiles.columns") or math.ceil((hi[0] - lo[0] + spacing) / side)
	rows = config.get("tiles.rows") or math.ceil((hi[1] - lo[1] + spacing) / side)
	return TileGrid(
		x0=float(mid[0] - columns * side / 2.0),
		y0=float(mid[1] - rows * side / 2.0),
		columns=int(columns),
		rows=int(rows),
		side=side,
	)


def peak_tile_load(traffic, side):
	"""Expected UE count of the busiest possible tile: densest area and hour, inside a hotspot."""
	peak = max(traffic.density(area, tod) for area in AreaType for tod in TimeOfDay)
	return peak * traffic.hotspot_factor * side * side


def _check_tile_load(config, traffic, side):
	expected = peak_tile_load(traffic, side)
	limit = config.get("tiles.max_ues_per_tile")
	if expected <= limit:
		return
	message = f"Expected peak tile load {expected:.2f} UEs exceeds tiles.max_ues_per_tile={limit} at side {side} m"
	if config.get("tiles.enforce_max_ues"):
		throw(message, exc=InvalidConfig, key="tiles.side_m")
	logger(__name__).warning(message)


def build_scenario(config, seed, time_of_day=TimeOfDay.AFTERNOON):
	"""Place macros and micros, lay the tile grid and associate every tile.

	UE counts start at zero; see `populate_ues`.
	"""
	from hetnet_power_setting.power_setting.propagation.propagation import PropagationModel, shadowing_draws

	spacing = float(config.get("geometry.inter_site_distance_m"))
	centres, rings = hex_lattice(int(config.get("geometry.macro_count")), spacing)
	grid = _tile_grid(config, centres)
	traffic = TrafficProfile.from_config(config)
	_check_tile_load(config, traffic, grid.side)

	listed = config.get("traffic.area_types")
	macro_areas = [AreaType(a) for a in listed] if listed else area_types_for_rings(rings)

	placement = rng(seed, "placement")
	radius = float(config.get("geometry.micro_radius_m"))
	locations = []
	for t, centre in enumerate(centres):
		if not grid.contains(centre[0], centre[1]):
			throw(f"Macro {t} at ({centre[0]:.1f}, {centre[1]:.1f}) lies outside the tile grid", exc=InvalidConfig, key="tiles.columns")
		locations.append(Location(len(locations), PoaKind.MACRO, float(centre[0]), float(centre[1]), float(config.get("power.macro_max_w")), t))
		micros = place_micros(
			centre,
			int(config.get("geometry.micros_per_cell")),
			spacing,
			radius,
			grid,
			placement,
			retries=int(config.get("geometry.placement_retries")),
		)
		for point in micros:
			locations.append(Location(len(locations), PoaKind.MICRO, float(point[0]), float(point[1]), float(config.get("power.micro_max_w")), t))

	carriers = [Carrier(i, float(c["freq_hz"]), float(c["bandwidth_hz"])) for i, c in enumerate(config.get("carriers"))]

	side = grid.side
	corners = [
		(grid.x0 + col * side, grid.y0 + row * side) for row in range(grid.rows) for col in range(grid.columns)
	]
	tile_centres = np.array([(x + side / 2.0, y + side / 2.0) for x, y in corners])
	nearest_macro = np.argmin(
		np.hypot(tile_centres[:, None, 0] - centres[None, :, 0], tile_centres[:, None, 1] - centres[None, :, 1]), axis=1
	)

	model = PropagationModel.from_config(config)
	kinds = [loc.kind for loc in locations]
	positions = np.array([[loc.x, loc.y] for loc in locations])
	reference = min(carriers, key=lambda c: (c.center_frequency, c.id))
	shadow = shadowing_draws(model, kinds, len(corners), seed)
	gains = model.gain_matrix(kinds, positions, tile_centres, reference.center_frequency, shadow)
	serving = associate(np.array([loc.max_power for loc in locations]), gains)

	tiles = [
		Tile(z, float(x), float(y), side, int(serving[z]), macro_areas[nearest_macro[z]])
		for z, (x, y) in enumerate(corners)
	]
	scenario = assemble_scenario(
		carriers=carriers,
		locations=locations,
		tiles=tiles,
		grid=grid,
		power_levels=PowerLevelSet(tuple(config.get("power.levels"))),
		traffic=traffic,
		time_of_day=time_of_day,
		seed=seed,
		micro_radius=radius,
	)
	logger(__name__).info(
		f"Built scenario with {len(scenario.teams)} teams, {len(locations)} locations, "
		f"{len(tiles)} tiles and {len(carriers)} carriers (seed {seed})"
	)
	return scenario


def associate(max_powers, gains, bias=None):
	"""Serving location per tile: strongest `max_power * gain`, lower id on ties.

	`bias` multiplies the received reference power per location (range extension).
	"""
	received = np.asarray(max_powers, dtype=float)[:, None] * np.asarray(gains, dtype=float)
	if bias is not None:
		received = received * np.asarray(bias, dtype=float)[:, None]
	return np.argmax(received, axis=0)


def populate_ues(scenario, time_of_day, seed):
	"""Draw pedestrian and vehicular UE counts per tile for `time_of_day`."""
	tod = TimeOfDay(time_of_day)
	generator = rng(seed, "population")
	traffic = scenario.traffic
	centres = scenario.tile_centres
	micros = scenario.positions[~scenario.is_macro]
	if len(micros):
		distance = np.hypot(centres[:, None, 0] - micros[None, :, 0], centres[:, None, 1] - micros[None, :, 1])
		hotspot = distance.min(axis=1) <= scenario.micro_radius
	else:
		hotspot = np.zeros(len(centres), dtype=bool)

	density = np.array([traffic.density(tile.area_type, tod) for tile in scenario.tiles])
	area = np.array([tile.area for tile in scenario.tiles])
	expected = density * area * np.where(hotspot, traffic.hotspot_factor, 1.0)
	counts = generator.poisson(np.maximum(expected, 0.0))
	share = np.array([traffic.vehicle_share[AreaType(tile.area_type).value] for tile in scenario.tiles])
	vehicular = generator.binomial(counts, share)

	tiles = [
		replace(tile, ue_count_pedestrian=int(n - v), ue_count_vehicular=int(v))
		for tile, n, v in zip(scenario.tiles, counts, vehicular, strict=True)
	]
	populated = scenario.with_tiles(tiles, time_of_day=tod)
	logger(__name__).info(f"Populated {int(counts.sum())} UEs for {tod.value} (seed {seed})")
	return populated


def validate_scenario(scenario):
	"""Every broken invariant of `scenario` as a Violation; empty when well formed."""
	violations = []

	def add(entity, invariant, detail=""):
		violations.append(Violation(entity, invariant, detail))

	frequencies = set()
	for index, carrier in enumerate(scenario.carriers):
		if carrier.id != index:
			add(f"carrier {carrier.id}", "contiguous ids")
		if carrier.center_frequency <= 0 or carrier.bandwidth <= 0:
			add(f"carrier {carrier.id}", "positive frequency and bandwidth")
		if carrier.center_frequency in frequencies:
			add(f"carrier {carrier.id}", "distinct center frequencies")
		frequencies.add(carrier.center_frequency)

	team_ids = {team.id for team in scenario.teams}
	for index, loc in enumerate(scenario.locations):
		if loc.id != index:
			add(f"location {loc.id}", "contiguous ids")
		if loc.max_power <= 0:
			add(f"location {loc.id}", "max_power > 0", f"max_power={loc.max_power}")
		if not scenario.grid.contains(loc.x, loc.y):
			add(f"location {loc.id}", "inside bounding box", f"position=({loc.x}, {loc.y})")
		if loc.team_id not in team_ids:
			add(f"location {loc.id}", "belongs to a team", f"team={loc.team_id}")

	for team in scenario.teams:
		members = [scenario.locations[lid] for lid in team.member_location_ids]
		macros = [loc for loc in members if loc.is_macro]
		if len(macros) != 1:
			add(f"team {team.id}", "one Macro per team", f"found {len(macros)}")
		if not scenario.locations[team.leader_location_id].is_macro:
			add(f"team {team.id}", "leader is Macro")
		if any(loc.team_id != team.id for loc in members):
			add(f"team {team.id}", "members belong to team")
		served = sorted(z for z in range(len(scenario.tiles)) if scenario.tiles[z].serving_location_id in team.member_location_ids)
		if tuple(served) != tuple(team.tile_ids):
			add(f"team {team.id}", "tiles are the members' served tiles")
		tile_total = sum(scenario.tiles[z].ue_count for z in team.tile_ids if z < len(scenario.tiles))
		location_total = sum(scenario.location_ue_count(lid) for lid in team.member_location_ids)
		if team.ue_count != tile_total or tile_total != location_total:
			add(f"team {team.id}", "UE accounting", f"E_t={team.ue_count}, tiles={tile_total}, locations={location_total}")

	grid = scenario.grid
	cells = set()
	for index, tile in enumerate(scenario.tiles):
		if tile.id != index:
			add(f"tile {tile.id}", "contiguous ids")
		if tile.side != grid.side:
			add(f"tile {tile.id}", "identical side length", f"side={tile.side}")
		col = (tile.x - grid.x0) / grid.side
		row = (tile.y - grid.y0) / grid.side
		cell = (round(col), round(row))
		if abs(col - cell[0]) > 1e-6 or abs(row - cell[1]) > 1e-6 or not (0 <= cell[0] < grid.columns and 0 <= cell[1] < grid.rows):
			add(f"tile {tile.id}", "on the tile grid")
		elif cell in cells:
			add(f"tile {tile.id}", "tiles do not overlap")
		cells.add(cell)
		owner = tile.serving_location_id
		if not 0 <= owner < len(scenario.locations) or scenario.locations[owner].team_id not in team_ids:
			add(f"tile {tile.id}", "serving location belongs to a team", f"serving={owner}")
		if tile.ue_count_pedestrian < 0 or tile.ue_count_vehicular < 0:
			add(f"tile {tile.id}", "nonnegative UE counts")
	if len(cells) != grid.columns * grid.rows:
		add("grid", "tiles partition the network area", f"{len(cells)} of {grid.columns * grid.rows} cells covered")
	return violations


def toy_scenario(
	team_sizes,
	tile_serving,
	ue_counts,
	carriers=(2.6e9,),
	levels=(0.0, 0.5, 1.0),
	max_power=1.0,
	positions=None,
	tile_side=10.0,
	area_type=AreaType.CITY_CENTRE,
	vehicular=None,
	bandwidth=10e6,
	traffic=None,
):
	"""Small scenario with hand-chosen association, for use with an explicit attenuation tensor.

	`team_sizes` lists the location count per team (macro first), `tile_serving` the
	serving location id per tile, laid out as a single row of tiles.
	"""
	from hetnet_power_setting.config import ScenarioConfig

	tile_serving = list(tile_serving)
	ue_counts = list(ue_counts)
	vehicular = list(vehicular) if vehicular is not None else [0] * len(tile_serving)
	total = sum(team_sizes)
	powers = list(max_power) if np.ndim(max_power) else [float(max_power)] * total
	grid = TileGrid(0.0, 0.0, len(tile_serving), 1, float(tile_side))

	locations = []
	for t, size in enumerate(team_sizes):
		first = len(locations)
		served = [z for z, lid in enumerate(tile_serving) if first <= lid < first + size]
		home = served[0] if served else 0
		for j in range(size):
			lid = len(locations)
			if positions is not None:
				x, y = positions[lid]
			else:
				x = (home + 0.5) * tile_side
				y = (0.5 + 0.1 * j) * tile_side
			kind = PoaKind.MACRO if j == 0 else PoaKind.MICRO
			locations.append(Location(lid, kind, float(x), float(y), float(powers[lid]), t))

	tiles = [
		Tile(z, z * float(tile_side), 0.0, float(tile_side), int(lid), AreaType(area_type), int(n), int(v))
		for z, (lid, n, v) in enumerate(zip(tile_serving, ue_counts, vehicular, strict=True))
	]
	return assemble_scenario(
		carriers=[Carrier(i, float(f), float(bandwidth)) for i, f in enumerate(carriers)],
		locations=locations,
		tiles=tiles,
		grid=grid,
		power_levels=PowerLevelSet(tuple(levels)),
		traffic=traffic or TrafficProfile.from_config(ScenarioConfig.from_dict()),
		time_of_day=TimeOfDay.AFTERNOON,
	)
