# Copyright (c) 2026, hetnet_power_setting contributors
# See license.txt

import math
import unittest
from dataclasses import replace

import numpy as np

from hetnet_power_setting.exceptions import DomainError, TooLarge, ValidationError
from hetnet_power_setting.power_setting.analysis.analysis import (
	ContinuousGameParams,
	anti_coordination_game,
	best_reply_derivative,
	check_equilibrium,
	check_order_independence,
	check_strategic_substitutes,
	closed_form_best_reply,
	compare_fixed_strategies,
	coupled_toy_game,
	deviation_gains,
	enumerate_pure_ne,
	global_best_reply,
	interference_matrix,
	payoff_along_best_reply,
	random_toy_game,
	stagnation_interference,
	sweep_discrete_best_reply,
	verify_closed_form,
	verify_ne,
	verify_order,
	verify_substitutes,
	verify_welfare,
)
from hetnet_power_setting.power_setting.game.game import (
	GameParams,
	PriceTable,
	StrategyProfile,
	TeamCarrierView,
	run_multi_carrier_game,
	run_single_carrier_game,
)
from hetnet_power_setting.power_setting.propagation.propagation import AttenuationTensor
from hetnet_power_setting.power_setting.scenario.scenario import toy_scenario

UNIT = ContinuousGameParams(alpha=1.0, beta=1.0, a=1.0, noise=0.1, xi=1.0, s_max=10.0)
TOY = GameParams(alpha=1.0, beta=1.0, delta=0.6, gamma_min=0.1, noise_power=1e-3)


class TestClosedForm(unittest.TestCase):
	def test_unit_parameters(self):
		reply = closed_form_best_reply(0.0, UNIT)
		self.assertFalse(reply.degenerate)
		self.assertAlmostEqual(reply.power, 0.30634, places=4)

	def test_matches_grid_maximizer(self):
		grid = np.linspace(0.0, 1.0, 100_001)
		found = grid[int(np.argmax(UNIT.payoff(grid, 0.0)))]
		self.assertLessEqual(abs(found - closed_form_best_reply(0.0, UNIT).power), 1e-5)

	def test_price_at_bound(self):
		p = ContinuousGameParams(alpha=1.0, beta=1.5, a=0.5, noise=0.25, xi=1.0, s_max=10.0)
		reply = closed_form_best_reply(0.0, p)
		self.assertFalse(reply.degenerate)
		self.assertAlmostEqual(reply.stationary, 0.25 * 1.5 / 0.5)

	def test_price_beyond_bound(self):
		p = replace(UNIT, xi=2.5 * 1.01)
		reply = closed_form_best_reply(0.0, p)
		self.assertTrue(reply.degenerate)
		self.assertEqual(reply.power, 0.0)

	def test_clamped_to_maximum(self):
		reply = closed_form_best_reply(0.0, replace(UNIT, s_max=0.2))
		self.assertEqual(reply.power, 0.2)
		self.assertGreater(reply.stationary, 0.2)

	def test_needs_positive_price(self):
		with self.assertRaises(DomainError):
			closed_form_best_reply(0.0, replace(UNIT, xi=0.0))


class TestDerivative(unittest.TestCase):
	def setUp(self):
		self.p = ContinuousGameParams(alpha=1.0, beta=1.0, a=1.0, noise=0.001, xi=1.0, s_max=10.0)

	def test_positive_at_low_interference(self):
		self.assertGreater(best_reply_derivative(0.0, self.p), 0.0)

	def test_diverges_at_bound(self):
		self.assertLess(best_reply_derivative(0.249 - 1e-9, self.p), -1000.0)
		self.assertEqual(best_reply_derivative(0.0, replace(self.p, noise=0.25)), float("-inf"))

	def test_beyond_bound(self):
		with self.assertRaises(DomainError):
			best_reply_derivative(0.3, self.p)

	def test_central_differences(self):
		for interference in (0.0, 0.05, 0.2):
			h = 1e-6 * (interference + self.p.noise)
			numeric = (
				closed_form_best_reply(interference + h, self.p).stationary
				- closed_form_best_reply(interference - h, self.p).stationary
			) / (2 * h)
			slope = best_reply_derivative(interference, self.p)
			self.assertLessEqual(abs(numeric - slope), 1e-6 * max(1.0, abs(slope)))

	def test_single_sign_change(self):
		slopes = np.array([best_reply_derivative(i, self.p) for i in np.linspace(0.0, 0.249, 500, endpoint=False)])
		self.assertEqual(int(np.count_nonzero(np.diff(np.sign(slopes)) != 0)), 1)

	def test_stagnation_is_the_root(self):
		root = stagnation_interference(self.p)
		self.assertGreater(root, 0.0)
		self.assertAlmostEqual(best_reply_derivative(root, self.p), 0.0, places=6)

	def test_no_stagnation_when_reply_never_grows(self):
		p = ContinuousGameParams(alpha=1.0, beta=0.1, a=1.0, noise=0.1, xi=2.4, s_max=10.0)
		self.assertEqual(stagnation_interference(p), 0.0)


class TestPayoffAlongBestReply(unittest.TestCase):
	def test_decreasing_in_interference(self):
		low = payoff_along_best_reply(0.1, UNIT)
		high = payoff_along_best_reply(0.12, UNIT)
		self.assertGreater(low[0], high[0])
		self.assertGreater(low[1], high[1])

	def test_agrees_with_scalar_payoff(self):
		for interference in (0.0, 0.07, 0.14):
			_, payoff = payoff_along_best_reply(interference, UNIT)
			stationary = closed_form_best_reply(interference, UNIT).stationary
			self.assertAlmostEqual(payoff, UNIT.payoff(stationary, interference), places=12)

	def test_utility_at_bound(self):
		utility, _ = payoff_along_best_reply(0.0, replace(UNIT, noise=0.25))
		self.assertAlmostEqual(utility, 2 * 1.0 * 0.25 / 1.0)

	def test_clamped_reply_is_evaluated_at_maximum_power(self):
		p = replace(UNIT, s_max=0.2)
		utility, payoff = payoff_along_best_reply(0.0, p)
		self.assertAlmostEqual(utility, 1 / (1 + math.exp(-1.0)))
		self.assertAlmostEqual(payoff, p.payoff(0.2, 0.0), places=12)
		self.assertLess(payoff, payoff_along_best_reply(0.0, UNIT)[1])


class TestScalarReplies(unittest.TestCase):
	def test_global_reply_prefers_transmitting(self):
		self.assertAlmostEqual(global_best_reply(0.0, UNIT), closed_form_best_reply(0.0, UNIT).power)

	def test_global_reply_switches_off(self):
		p = ContinuousGameParams(alpha=1.0, beta=3.0, a=1.0, noise=0.1, xi=2.4, s_max=10.0)
		self.assertEqual(global_best_reply(0.0, p), 0.0)

	def test_discrete_sweep_matches_game_reply(self):
		levels = [round(0.01 * i, 2) for i in range(101)]
		replies = sweep_discrete_best_reply([0.0], replace(UNIT, s_max=1.0), levels)
		self.assertAlmostEqual(replies[0], 0.31)

	def test_on_off_sweep_is_non_increasing(self):
		sweep = np.linspace(0.0, 1.0, 200)
		replies = sweep_discrete_best_reply(sweep, replace(UNIT, s_max=0.3), (0.0, 1.0))
		self.assertTrue(np.all(np.diff(replies) <= 0))
		self.assertEqual(replies[0], 0.3)
		self.assertEqual(replies[-1], 0.0)

	def test_unpriced_sweep_is_non_decreasing(self):
		sweep = np.linspace(0.0, 5.0, 100)
		replies = sweep_discrete_best_reply(sweep, UNIT, np.linspace(0.0, 1.0, 5), xi=0.0, tolerance=0.0)
		self.assertTrue(np.all(np.diff(replies) >= 0))


class TestEnumeration(unittest.TestCase):
	def test_single_team_equilibrium_is_its_argmax(self):
		scenario = toy_scenario([1], [0], [1], levels=tuple(round(0.1 * i, 1) for i in range(11)))
		tensor = AttenuationTensor(np.ones((1, 1, 1)))
		params = GameParams(delta=0.0, noise_power=0.1)
		report = enumerate_pure_ne(scenario, tensor, params, prices=PriceTable.uniform(scenario, 1.0))
		self.assertEqual(report.joint_count, 11)
		self.assertEqual(len(report.profiles), 1)
		self.assertAlmostEqual(report.profiles[0].fractions[0, 0], 0.3)

	def test_anti_coordination_has_two_equilibria(self):
		scenario, tensor, params, prices = anti_coordination_game()
		outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
		report = enumerate_pure_ne(scenario, tensor, params, prices=prices, bps_outcome=outcome)
		found = sorted(tuple(p.fractions[:, 0]) for p in report.profiles)
		self.assertEqual(found, [(0.0, 1.0), (1.0, 0.0)])
		np.testing.assert_allclose(report.welfare, report.welfare[0])
		expected = (1 / (1 + math.exp(-9)) - 0.1) + 1 / (1 + math.e)
		self.assertAlmostEqual(report.best_welfare, expected)
		self.assertTrue(report.bps_is_ne)
		self.assertAlmostEqual(report.bps_welfare, report.best_welfare)

	def test_coupled_toys_have_two_equilibria(self):
		_, _, params, prices = anti_coordination_game()
		for seed in range(5):
			scenario, tensor = coupled_toy_game(np.random.default_rng(seed))
			outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
			report = enumerate_pure_ne(scenario, tensor, params, prices=prices, bps_outcome=outcome)
			found = sorted(tuple(p.fractions[:, 0]) for p in report.profiles)
			self.assertEqual(found, [(0.0, 1.0), (1.0, 0.0)])
			self.assertTrue(report.bps_is_ne)
			self.assertAlmostEqual(report.bps_welfare, report.best_welfare)

	def test_symmetric_teams_give_symmetric_equilibria(self):
		scenario = toy_scenario([1, 1], [0, 1], [1, 1], levels=(0.0, 0.5, 1.0))
		tensor = AttenuationTensor(np.array([[[0.3], [0.2]], [[0.2], [0.3]]]))
		params = GameParams(delta=0.0, noise_power=0.01)
		report = enumerate_pure_ne(scenario, tensor, params, prices=PriceTable.uniform(scenario, 1.0))
		found = {tuple(p.fractions[:, 0]) for p in report.profiles}
		self.assertTrue(found)
		self.assertEqual(found, {(b, a) for a, b in found})

	def test_bps_outcome_is_an_equilibrium(self):
		scenario, tensor = random_toy_game(np.random.default_rng(1), teams=3, carriers=1, max_locations=1, levels=4)
		outcome = run_single_carrier_game(scenario, tensor, 0, TOY)
		self.assertTrue(outcome.converged)
		report = enumerate_pure_ne(scenario, tensor, TOY, prices=outcome.prices, bps_outcome=outcome)
		self.assertEqual(report.joint_count, 4**3)
		self.assertTrue(report.bps_is_ne)
		self.assertTrue(check_equilibrium(scenario, tensor, outcome, TOY).holds)

	def test_enumeration_budget(self):
		scenario, tensor, params, prices = anti_coordination_game()
		with self.assertRaises(TooLarge):
			enumerate_pure_ne(scenario, tensor, params, prices=prices, max_profiles=3)


class TestEquilibriumCheck(unittest.TestCase):
	def test_multi_carrier_outcome_passes(self):
		scenario, tensor = random_toy_game(np.random.default_rng(5), teams=2, carriers=2, max_locations=2, levels=3)
		outcome = run_multi_carrier_game(scenario, tensor, TOY)
		report = check_equilibrium(scenario, tensor, outcome, TOY)
		self.assertTrue(report.holds)
		self.assertEqual(report.checked, 2 * 2)

	def test_silent_profile_fails(self):
		scenario, tensor, params, prices = anti_coordination_game()
		outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
		silent = replace(outcome, profile=StrategyProfile.zeros(scenario))
		report = check_equilibrium(scenario, tensor, silent, params)
		self.assertFalse(report.holds)
		self.assertEqual(report.violations[0]["team"], 0)

	def test_deviation_gains_at_equilibrium(self):
		scenario, tensor, params, prices = anti_coordination_game()
		outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
		gains = deviation_gains(scenario, tensor, outcome.profile, params, prices)
		self.assertLessEqual(max(gains.values()), 1e-9)


class TestSubstitutesAndOrder(unittest.TestCase):
	def test_report_accounts_for_every_sample(self):
		scenario, tensor = random_toy_game(np.random.default_rng(2), teams=2, carriers=1)
		report = check_strategic_substitutes(scenario, tensor, TOY, 30, seed=4)
		self.assertEqual(report.checked + report.skipped, 30)
		self.assertGreater(report.checked, 0)

	def test_reply_matrix_spans_every_carrier(self):
		scenario, tensor = random_toy_game(np.random.default_rng(6), teams=2, carriers=2, max_locations=2, levels=3)
		report = check_strategic_substitutes(scenario, tensor, TOY, 20, seed=1)
		self.assertEqual(report.checked + report.skipped, 20)
		for violation in report.violations:
			self.assertEqual(np.shape(violation["reply_low"]), (len(scenario.teams[violation["team"]].member_location_ids), 2))

	def test_interference_matrix_stacks_carriers(self):
		scenario, tensor = random_toy_game(np.random.default_rng(6), teams=2, carriers=2, max_locations=2, levels=3)
		views = [TeamCarrierView(scenario, tensor, 0, c, TOY) for c in (0, 1)]
		fractions = np.full((len(scenario.locations), 2), 0.5)
		fractions[:, 1] = 1.0
		matrix = interference_matrix(views, fractions)
		self.assertEqual(matrix.shape, (len(scenario.teams[0].tile_ids), 2))
		np.testing.assert_allclose(matrix[:, 0], views[0].external_interference(fractions[:, 0]))
		np.testing.assert_allclose(matrix[:, 1], views[1].external_interference(fractions[:, 1]))

	def test_requires_positive_prices(self):
		scenario, tensor = random_toy_game(np.random.default_rng(2), teams=2, carriers=1)
		with self.assertRaises(ValidationError):
			check_strategic_substitutes(scenario, tensor, TOY, 5, seed=4, prices=PriceTable.zeros(scenario))

	def test_order_changes_anti_coordination_outcome(self):
		scenario, tensor, params, prices = anti_coordination_game()
		report = check_order_independence(scenario, tensor, 0, params, prices=prices)
		self.assertEqual(len(report.runs), 2)
		self.assertFalse(report.same_profile)
		self.assertTrue(report.same_welfare)

	def test_order_replay_budget(self):
		scenario, tensor, params, prices = anti_coordination_game()
		with self.assertRaises(TooLarge):
			check_order_independence(scenario, tensor, 0, params, prices=prices, max_teams=1)


class TestFixedStrategies(unittest.TestCase):
	def test_min_power_beats_max_power(self):
		scenario = toy_scenario([1], [0], [1], levels=(0.0, 0.5, 1.0))
		tensor = AttenuationTensor(np.ones((1, 1, 1)))
		result = compare_fixed_strategies(scenario, tensor, GameParams(delta=0.0, noise_power=0.1), PriceTable.uniform(scenario, 1.0))
		self.assertAlmostEqual(result.min_power, 1 / (1 + math.exp(-4)) - 0.5)
		self.assertTrue(result.min_power_wins)


class TestVerifySuites(unittest.TestCase):
	def test_closed_form_suite(self):
		report = verify_closed_form(seed=3, samples=20)
		self.assertTrue(report.passed, report.rows)
		self.assertEqual(report.rows[0]["checked"], 20)

	def test_substitutes_suite(self):
		report = verify_substitutes(seed=3, samples=20)
		self.assertTrue(report.passed, report.rows)
		self.assertTrue(any(row["informational"] for row in report.rows))

	def test_ne_suite(self):
		self.assertTrue(verify_ne(seed=3, samples=4).passed)

	def test_welfare_suite(self):
		report = verify_welfare(seed=3, samples=3)
		self.assertTrue(report.passed, report.rows)
		self.assertEqual(report.rows[0]["failures"], 0)
		coupled = next(row for row in report.rows if row["check"] == "coupled toys reach the best NE")
		self.assertFalse(coupled["informational"])
		self.assertEqual(coupled["checked"], 3)
		self.assertEqual(coupled["failures"], 0)

	def test_order_suite(self):
		self.assertTrue(verify_order(seed=3, samples=2).passed)
