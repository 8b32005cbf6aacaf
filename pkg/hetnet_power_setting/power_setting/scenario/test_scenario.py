# Copyright (c) 2026, hetnet_power_setting contributors
# See license.txt

import math
import unittest
from dataclasses import replace

import numpy as np

from hetnet_power_setting.config import ScenarioConfig, load_config
from hetnet_power_setting.exceptions import GeometryError, InvalidConfig, ValidationError
from hetnet_power_setting.power_setting.propagation.propagation import PropagationModel, build_attenuation_tensor
from hetnet_power_setting.power_setting.scenario.scenario import (
	AreaType,
	Carrier,
	PoaKind,
	PowerLevelSet,
	TimeOfDay,
	TrafficProfile,
	area_types_for_rings,
	build_scenario,
	hex_lattice,
	inside_cell,
	peak_tile_load,
	populate_ues,
	toy_scenario,
	validate_scenario,
)

SINGLE_MACRO = {
	"geometry": {"macro_count": 1, "micros_per_cell": 0},
	"tiles": {"side_m": 50.0, "columns": 2, "rows": 2},
	"carriers": [{"freq_hz": 2.6e9, "bandwidth_hz": 10e6}],
}


class TestScenarioTypes(unittest.TestCase):
	def test_rb_count_from_bandwidth(self):
		self.assertEqual(Carrier(0, 2.6e9, 10e6).rb_count, 55)
		self.assertEqual(Carrier(0, 2.6e9, 1.8e6).rb_count, 10)

	def test_power_levels_must_start_at_zero(self):
		with self.assertRaises(ValidationError):
			PowerLevelSet((0.1, 0.5))

	def test_power_levels_must_be_strictly_ascending(self):
		with self.assertRaises(ValidationError):
			PowerLevelSet((0.0, 0.5, 0.5))
		with self.assertRaises(ValidationError):
			PowerLevelSet((0.0, 1.5))

	def test_power_levels_membership(self):
		levels = PowerLevelSet((0, 0.25, 1))
		self.assertTrue(levels.contains(0.25))
		self.assertFalse(levels.contains(0.3))
		self.assertEqual(levels.lowest_nonzero, 0.25)


class TestLayout(unittest.TestCase):
	def test_first_ring_is_one_spacing_away(self):
		positions, rings = hex_lattice(7, 500.0)
		np.testing.assert_allclose(positions[0], [0.0, 0.0])
		np.testing.assert_allclose(np.hypot(*positions[1:].T), 500.0)
		self.assertEqual(rings.tolist(), [0, 1, 1, 1, 1, 1, 1])
		self.assertEqual(len({tuple(np.round(p, 6)) for p in positions}), 7)

	def test_second_ring_follows_first(self):
		_, rings = hex_lattice(19, 500.0)
		self.assertEqual(rings.tolist().count(2), 12)

	def test_area_types_by_ring(self):
		self.assertEqual(
			area_types_for_rings([0, 1, 1, 2, 2]),
			[AreaType.CITY_CENTRE, AreaType.COMMERCIAL, AreaType.SCHOOL, AreaType.RESIDENTIAL, AreaType.PARK],
		)

	def test_cell_membership(self):
		self.assertTrue(inside_cell((0.0, 0.0), 500.0))
		self.assertTrue(inside_cell((240.0, 0.0), 500.0))
		self.assertFalse(inside_cell((260.0, 0.0), 500.0))
		self.assertFalse(inside_cell((0.0, 290.0), 500.0))


class TestBuildScenario(unittest.TestCase):
	@classmethod
	def setUpClass(cls):
		cls.config = load_config("desk")
		cls.scenario = build_scenario(cls.config, seed=7)

	def test_single_macro_serves_every_tile(self):
		scenario = build_scenario(ScenarioConfig.from_dict(SINGLE_MACRO), seed=1)
		self.assertEqual(len(scenario.teams), 1)
		self.assertEqual(len(scenario.locations), 1)
		self.assertEqual(len(scenario.tiles), 4)
		self.assertEqual({tile.serving_location_id for tile in scenario.tiles}, {0})
		self.assertEqual(scenario.teams[0].tile_ids, (0, 1, 2, 3))

	def test_same_seed_gives_identical_scenario(self):
		again = build_scenario(self.config, seed=7)
		self.assertEqual(again, self.scenario)
		other = build_scenario(self.config, seed=8)
		self.assertNotEqual(other.locations, self.scenario.locations)

	def test_desk_dimensions(self):
		self.assertEqual(len(self.scenario.teams), 7)
		self.assertEqual(len(self.scenario.locations), 35)
		self.assertEqual(len(self.scenario.carriers), 3)
		for team in self.scenario.teams:
			self.assertEqual(len(team.member_location_ids), 5)
			self.assertEqual(self.scenario.locations[team.leader_location_id].kind, PoaKind.MACRO)

	def test_location_ids_contiguous_per_team(self):
		for team in self.scenario.teams:
			members = team.member_location_ids
			self.assertEqual(list(members), list(range(members[0], members[0] + len(members))))
			self.assertEqual(team.leader_location_id, members[0])

	def test_well_formed_scenario_has_no_violations(self):
		self.assertEqual(validate_scenario(self.scenario), [])
		populated = populate_ues(self.scenario, TimeOfDay.MORNING, seed=3)
		self.assertEqual(validate_scenario(populated), [])

	def test_tiles_partition_network_area(self):
		grid = self.scenario.grid
		self.assertEqual(len(self.scenario.tiles), grid.columns * grid.rows)
		total = sum(tile.area for tile in self.scenario.tiles)
		self.assertAlmostEqual(total, grid.area, places=6)

	def test_micros_inside_cell_and_apart(self):
		radius = self.config.get("geometry.micro_radius_m")
		spacing = self.config.get("geometry.inter_site_distance_m")
		for team in self.scenario.teams:
			macro = self.scenario.locations[team.leader_location_id].position
			micros = [self.scenario.locations[lid].position for lid in team.member_location_ids[1:]]
			for i, p in enumerate(micros):
				self.assertTrue(inside_cell(p - macro, spacing))
				for q in micros[i + 1 :]:
					self.assertGreaterEqual(math.hypot(*(p - q)), 2 * radius)

	def test_tiles_associate_to_strongest_reference(self):
		model = PropagationModel.from_config(self.config)
		tensor = build_attenuation_tensor(self.scenario, model)
		reference = self.scenario.reference_carrier.id
		received = self.scenario.max_powers[:, None] * tensor.gains[:, :, reference]
		serving = self.scenario.serving
		best = received.max(axis=0)
		np.testing.assert_array_equal(received[serving, np.arange(len(serving))], best)

	def test_tile_area_types_follow_nearest_macro(self):
		centre = self.scenario.teams[0]
		self.assertEqual(centre.area_type, AreaType.CITY_CENTRE)
		self.assertEqual(
			{t.area_type for t in self.scenario.teams[1:]},
			{AreaType.COMMERCIAL, AreaType.SCHOOL},
		)

	def test_placement_failure_raises_geometry_error(self):
		config = ScenarioConfig.from_dict(
			{
				"geometry": {"macro_count": 1, "micros_per_cell": 20, "micro_radius_m": 200.0, "placement_retries": 20},
				"tiles": {"columns": 4, "rows": 4, "side_m": 150.0},
			}
		)
		with self.assertRaises(GeometryError):
			build_scenario(config, seed=1)

	def test_enforced_tile_load_rejects_large_tiles(self):
		config = ScenarioConfig.from_dict({"tiles": {"enforce_max_ues": True, "side_m": 50.0}})
		with self.assertRaises(InvalidConfig) as ctx:
			build_scenario(config, seed=1)
		self.assertEqual(ctx.exception.key, "tiles.side_m")

	def test_builtin_configs_respect_tile_load_limit(self):
		for name in ("desk", "city", "toy"):
			config = load_config(name)
			traffic = TrafficProfile.from_config(config)
			load = peak_tile_load(traffic, config.get("tiles.side_m"))
			self.assertLessEqual(load, config.get("tiles.max_ues_per_tile"), name)
			self.assertGreater(load, 2.5, name)

	def test_density_scale_shrinks_expected_load(self):
		full = TrafficProfile.from_config(ScenarioConfig.from_dict())
		scaled = TrafficProfile.from_config(ScenarioConfig.from_dict({"traffic": {"density_scale": 0.04}}))
		# city centre afternoon, 50 m tiles, 4x hotspot: 0.0245 * 4 * 2500
		self.assertAlmostEqual(peak_tile_load(full, 50.0), 245.0)
		self.assertAlmostEqual(peak_tile_load(scaled, 50.0), 9.8)

	def test_enforced_limit_accepts_desk(self):
		config = load_config("desk").with_overrides({"tiles": {"enforce_max_ues": True}})
		self.assertEqual(len(build_scenario(config, seed=1).teams), 7)


class TestCityScenario(unittest.TestCase):
	def test_city_dimensions(self):
		scenario = build_scenario(load_config("city"), seed=11)
		self.assertEqual(len(scenario.teams), 57)
		self.assertEqual(len(scenario.locations), 285)
		self.assertEqual(len(scenario.tiles), 4560)
		self.assertEqual(len(scenario.carriers), 3)
		self.assertEqual(validate_scenario(scenario), [])
		for team in scenario.teams:
			self.assertEqual(len(team.member_location_ids), 5)


class TestPopulateUes(unittest.TestCase):
	def test_zero_density_weight_gives_empty_tiles(self):
		weights = {area.value: 0.0 for area in AreaType}
		config = ScenarioConfig.from_dict({**SINGLE_MACRO, "traffic": {"density_weights": {"Morning": weights}}})
		scenario = populate_ues(build_scenario(config, seed=2), TimeOfDay.MORNING, seed=2)
		self.assertEqual(scenario.ue_counts.sum(), 0)
		self.assertEqual(scenario.teams[0].ue_count, 0)

	def test_expected_count_matches_density(self):
		# city centre, afternoon, 100 m2 tiles: 0.0245 * 1.0 * 100
		scenario = toy_scenario([1], [0] * 400, [0] * 400, tile_side=10.0)
		totals = [populate_ues(scenario, TimeOfDay.AFTERNOON, seed).ue_counts.mean() for seed in range(25)]
		self.assertAlmostEqual(float(np.mean(totals)) / 2.45, 1.0, delta=0.05)

	def test_hotspot_around_micro(self):
		positions = [(550.0, 50.0), (50.0, 50.0)]
		scenario = toy_scenario([2], [0] * 6, [0] * 6, tile_side=100.0, positions=positions)
		near, far = [], []
		for seed in range(20):
			counts = populate_ues(scenario, TimeOfDay.AFTERNOON, seed).ue_counts
			near.append(counts[0])
			far.extend(counts[2:])
		self.assertAlmostEqual(np.mean(near) / np.mean(far), 4.0, delta=0.4)

	def test_vehicle_share(self):
		scenario = toy_scenario([1], [0] * 200, [0] * 200, tile_side=20.0)
		populated = populate_ues(scenario, TimeOfDay.AFTERNOON, seed=5)
		vehicles = sum(t.ue_count_vehicular for t in populated.tiles)
		total = sum(t.ue_count for t in populated.tiles)
		self.assertAlmostEqual(vehicles / total, 0.30, delta=0.05)

	def test_team_accounting_after_population(self):
		scenario = toy_scenario([1, 1], [0, 0, 1, 1], [0, 0, 0, 0], tile_side=50.0)
		populated = populate_ues(scenario, TimeOfDay.AFTERNOON, seed=9)
		for team in populated.teams:
			self.assertEqual(team.ue_count, sum(populated.tiles[z].ue_count for z in team.tile_ids))
		self.assertEqual(populated.time_of_day, TimeOfDay.AFTERNOON)


class TestValidateScenario(unittest.TestCase):
	def setUp(self):
		self.scenario = toy_scenario([2, 1], [0, 1, 2], [1, 2, 3])

	def test_toy_is_well_formed(self):
		self.assertEqual(validate_scenario(self.scenario), [])

	def test_two_macros_in_one_team(self):
		locations = list(self.scenario.locations)
		locations[1] = replace(locations[1], kind=PoaKind.MACRO)
		broken = replace(self.scenario, locations=tuple(locations))
		invariants = [v.invariant for v in validate_scenario(broken)]
		self.assertIn("one Macro per team", invariants)

	def test_ue_accounting_mismatch(self):
		teams = list(self.scenario.teams)
		teams[0] = replace(teams[0], ue_count=teams[0].ue_count + 1)
		broken = replace(self.scenario, teams=tuple(teams))
		violations = validate_scenario(broken)
		self.assertEqual([v.invariant for v in violations], ["UE accounting"])
		self.assertEqual(violations[0].entity, "team 0")

	def test_overlapping_tiles(self):
		tiles = list(self.scenario.tiles)
		tiles[2] = replace(tiles[2], x=tiles[1].x)
		broken = replace(self.scenario, tiles=tuple(tiles))
		invariants = {v.invariant for v in validate_scenario(broken)}
		self.assertIn("tiles do not overlap", invariants)
		self.assertIn("tiles partition the network area", invariants)

	def test_location_outside_bounding_box(self):
		locations = list(self.scenario.locations)
		locations[2] = replace(locations[2], x=-100.0)
		broken = replace(self.scenario, locations=tuple(locations))
		self.assertIn("inside bounding box", [v.invariant for v in validate_scenario(broken)])
