"""Checks on the power-setting game: the continuous single-link best reply, strategic
substitutes, exhaustive pure NE enumeration and the verification suites built on them."""

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from hetnet_power_setting.exceptions import DomainError, TooLarge, ValidationError
from hetnet_power_setting.power_setting.game.game import (
	GameParams,
	PriceTable,
	StrategyProfile,
	TeamCarrierView,
	best_reply,
	candidate_block,
	candidate_payoffs,
	default_prices,
	max_power_profile,
	min_power_profile,
	run_multi_carrier_game,
	run_single_carrier_game,
	scalar_payoff,
	served_tiles,
	social_welfare,
)
from hetnet_power_setting.power_setting.propagation.propagation import AttenuationTensor
from hetnet_power_setting.power_setting.scenario.scenario import toy_scenario
from hetnet_power_setting.utils import logger, rng, throw

GRID_POINTS = 100_000
MAX_JOINT_PROFILES = 10_000_000
JOINT_CHUNK = 65_536


@dataclass(frozen=True)
class ContinuousGameParams:
	"""One location, one tile, one carrier: w(s) = sigmoid(alpha (a s / (I + N) - beta)) - xi a s."""

	alpha: float
	beta: float
	a: float
	noise: float
	xi: float
	s_max: float

	def __post_init__(self):
		if min(self.alpha, self.beta, self.a, self.noise, self.s_max) <= 0 or self.xi < 0:
			throw(f"Continuous game parameters must be positive: {self}", exc=ValidationError)

	def price_bound(self, interference):
		return self.alpha / (4.0 * (interference + self.noise))

	def payoff(self, power, interference, xi=None):
		xi = self.xi if xi is None else xi
		return scalar_payoff(power, interference, self.alpha, self.beta, self.a, self.noise, xi)


@dataclass(frozen=True)
class ClosedFormReply:
	power: float
	stationary: float
	degenerate: bool


def _arccosh_argument(interference, p):
	load = interference + p.noise
	return max(1.0, p.alpha / (2.0 * p.xi * load) - 1.0)


def closed_form_best_reply(interference, p):
	"""Stationary point of w(s), clamped to [0, s_max].

	Degenerate (power 0) when xi exceeds alpha / (4 (I + N)) and the stationary point
	is not real.
	"""
	if p.xi <= 0:
		throw("The closed form needs a positive price", exc=DomainError)
	load = interference + p.noise
	if p.xi > p.alpha / (4.0 * load):
		return ClosedFormReply(0.0, float("nan"), True)
	x = _arccosh_argument(interference, p)
	stationary = load / (p.alpha * p.a) * (np.arccosh(x) + p.alpha * p.beta)
	return ClosedFormReply(float(min(max(stationary, 0.0), p.s_max)), float(stationary), False)


def _radicand(interference, p):
	radicand = p.alpha * (p.alpha - 4.0 * p.xi * (interference + p.noise))
	if radicand < 0:
		throw(f"Interference {interference} lies beyond the price bound", exc=DomainError)
	return radicand


def best_reply_derivative(interference, p):
	"""d s*/d I; -inf exactly at the price bound."""
	radicand = _radicand(interference, p)
	if radicand == 0:
		return float("-inf")
	x = _arccosh_argument(interference, p)
	return float(p.beta / p.a + np.arccosh(x) / (p.alpha * p.a) - 1.0 / (p.a * np.sqrt(radicand)))


def payoff_along_best_reply(interference, p):
	"""(utility, payoff) at the best reply clamped to [0, s_max]."""
	radicand = _radicand(interference, p)
	load = interference + p.noise
	reply = closed_form_best_reply(interference, p)
	if reply.power == reply.stationary:
		utility = 2.0 * p.xi * load / (p.alpha - np.sqrt(radicand))
	else:
		utility = expit(p.alpha * (p.a * reply.power / load - p.beta))
	return float(utility), float(utility - p.xi * p.a * reply.power)


def stagnation_interference(p):
	"""Interference at which the stationary point stops growing; 0 if it never grows."""
	upper = p.alpha / (4.0 * p.xi) - p.noise
	if upper <= 0:
		throw("Price exceeds the bound even without interference", exc=DomainError)
	if best_reply_derivative(0.0, p) <= 0:
		return 0.0
	return float(brentq(lambda i: best_reply_derivative(i, p), 0.0, upper * (1.0 - 1e-12), xtol=1e-14, rtol=1e-12))


def global_best_reply(interference, p):
	"""Best of switching off and the clamped stationary point; ties switch off."""
	reply = closed_form_best_reply(interference, p)
	if reply.degenerate or reply.power <= 0:
		return 0.0
	if p.payoff(reply.power, interference) > p.payoff(0.0, interference):
		return reply.power
	return 0.0


def sweep_discrete_best_reply(interferences, p, levels, xi=None, tolerance=1e-9):
	"""Discrete best reply (watts) for every interference value; ties go to the lowest level."""
	powers = np.asarray(levels, dtype=float) * p.s_max
	replies = np.empty(len(interferences))
	for i, interference in enumerate(interferences):
		payoffs = np.atleast_1d(p.payoff(powers, interference, xi))
		best = payoffs.max()
		replies[i] = powers[np.flatnonzero(payoffs >= best - tolerance * max(1.0, abs(best)))[0]]
	return replies


@dataclass
class SubstitutesReport:
	checked: int = 0
	skipped: int = 0
	violations: list = field(default_factory=list)


def interference_matrix(views, fractions):
	"""External interference on a team's (tile x carrier) grid; `views` are the team's per-carrier views."""
	fractions = np.asarray(fractions, dtype=float)
	return np.column_stack([view.external_interference(fractions[:, view.carrier]) for view in views])


def check_strategic_substitutes(scenario, tensor, params, sample_count, seed, prices=None):
	"""Sample opponent profiles over every carrier in pairs, keep the element-wise ordered ones
	and check that the Frobenius norm of the team's reply matrix does not grow with the
	Frobenius norm of its (tile x carrier) interference matrix."""
	prices = prices or default_prices(scenario, tensor, params)
	if np.any(prices.xi <= 0):
		throw("Strategic substitutes need a positive price everywhere", exc=ValidationError)
	generator = rng(seed, "analysis", 2)
	levels = scenario.power_levels.values
	teams = [team.id for team in scenario.teams if team.ue_count > 0]
	shape = (len(scenario.locations), len(scenario.carriers))
	views = {}
	report = SubstitutesReport()
	for sample in range(sample_count):
		t = int(generator.choice(teams))
		first = levels[generator.integers(len(levels), size=shape)]
		second = levels[generator.integers(len(levels), size=shape)]
		if sample % 2 == 0:
			second = np.maximum(first, second)
		members = list(scenario.teams[t].member_location_ids)
		first[members] = second[members] = 0.0
		if t not in views:
			views[t] = [TeamCarrierView(scenario, tensor, t, c.id, params) for c in scenario.carriers]
		low, high = interference_matrix(views[t], first), interference_matrix(views[t], second)
		if np.all(high >= low) and np.linalg.norm(high) > np.linalg.norm(low):
			pair = (first, second)
		elif np.all(low >= high) and np.linalg.norm(low) > np.linalg.norm(high):
			pair = (second, first)
			low, high = high, low
		else:
			report.skipped += 1
			continue
		replies = []
		for opponents in pair:
			profile = StrategyProfile(opponents)
			columns = [
				best_reply(scenario, tensor, profile, t, view.carrier, params, prices, view=view).fractions * view.max_powers
				for view in views[t]
			]
			replies.append(np.column_stack(columns))
		report.checked += 1
		if np.linalg.norm(replies[1]) > np.linalg.norm(replies[0]) * (1 + 1e-9) + 1e-12:
			report.violations.append(
				{
					"team": t,
					"interference_low": float(np.linalg.norm(low)),
					"interference_high": float(np.linalg.norm(high)),
					"reply_low": replies[0].tolist(),
					"reply_high": replies[1].tolist(),
				}
			)
	return report


@dataclass
class EquilibriumReport:
	checked: int = 0
	violations: list = field(default_factory=list)

	@property
	def holds(self):
		return not self.violations


def check_equilibrium(scenario, tensor, outcome, params):
	"""No team gains by changing its column on any carrier, in the context that carrier was played in.

	Carrier c is checked with earlier carriers at their final values and their served
	tiles counted as served, and later carriers switched off.
	"""
	levels = scenario.power_levels.values
	prior = np.zeros(len(scenario.tiles), dtype=bool)
	report = EquilibriumReport()
	for position, c in enumerate(outcome.carrier_order):
		profile = outcome.profile
		for later in outcome.carrier_order[position + 1 :]:
			profile = profile.with_carrier(later, 0.0)
		for team in scenario.teams:
			if team.ue_count <= 0:
				continue
			view = TeamCarrierView(scenario, tensor, team.id, c, params)
			payoffs = candidate_payoffs(view, levels, profile, params, outcome.prices, prior)
			column = profile.fractions[view.locations, c]
			utility, cost, _ = view.evaluate(
				column,
				view.external_interference(profile.fractions[:, c]),
				outcome.prices.xi[view.locations, c],
				params,
				prior,
			)
			current = float(utility[0] - cost[0])
			best = float(payoffs.max())
			report.checked += 1
			if best > current + params.tolerance(best):
				report.violations.append({"team": team.id, "carrier": c, "payoff": current, "best": best})
		prior = prior | served_tiles(scenario, tensor, profile, c, params)
	return report


class _JointGame:
	"""Team payoffs for batches of joint profiles over a set of carriers, played at once."""

	def __init__(self, scenario, tensor, params, prices, carriers):
		self.scenario = scenario
		self.params = params
		self.prices = prices
		self.carriers = list(carriers)
		self.levels = scenario.power_levels.values
		self.active = [team.id for team in scenario.teams if team.ue_count > 0]
		self.views = {(t, c): TeamCarrierView(scenario, tensor, t, c, params) for t in self.active for c in self.carriers}

	def strategies(self, team_id):
		"""Every strategy of a team as (count, L_t, carriers); teams without UEs only stay silent."""
		width = len(self.scenario.teams[team_id].member_location_ids)
		shape = (width, len(self.carriers))
		if team_id not in self.active:
			return np.zeros((1, *shape))
		count = len(self.levels) ** (width * len(self.carriers))
		return candidate_block(self.levels, width * len(self.carriers), 0, count).reshape(count, *shape)

	def payoffs(self, fractions):
		"""(K, teams) payoffs for fractions of shape (K, locations, carriers); NaN for teams without UEs."""
		params = self.params
		out = np.full((fractions.shape[0], len(self.scenario.teams)), np.nan)
		for t in self.active:
			utility = cost = 0.0
			unserved = None
			for ci, c in enumerate(self.carriers):
				view = self.views[t, c]
				column = fractions[:, view.locations, ci]
				gamma = view.sinr(column, view.external_interference(fractions[:, :, ci]))
				utility = utility + expit(params.alpha * (gamma - params.beta)) @ view.weights
				cost = cost + column @ (self.prices.xi[view.locations, c] * view.abar * view.max_powers)
				below = gamma <= params.gamma_min
				unserved = below if unserved is None else unserved & below
			out[:, t] = utility - cost - params.delta * (unserved @ view.weights)
		return out

	def strategy_index(self, team_id, matrix):
		if team_id not in self.active:
			return 0
		digits = [int(np.argmin(np.abs(self.levels - f))) for f in np.asarray(matrix).ravel()]
		return int(np.ravel_multi_index(digits, (len(self.levels),) * len(digits)))


@dataclass
class NEReport:
	profiles: list
	welfare: np.ndarray
	carriers: list
	joint_count: int
	bps_profile: StrategyProfile | None = None
	bps_welfare: float | None = None
	bps_is_ne: bool | None = None

	@property
	def best_index(self):
		return int(np.argmax(self.welfare)) if len(self.welfare) else None

	@property
	def best_welfare(self):
		return float(self.welfare.max()) if len(self.welfare) else None


def enumerate_pure_ne(scenario, tensor, params, carriers=None, prices=None, bps_outcome=None, max_profiles=MAX_JOINT_PROFILES):
	"""Every pure NE of the game over `carriers` played jointly, found by exhaustive scan.

	A joint profile is an NE when no team with UEs has a strategy over all in-scope
	carriers that beats its payoff by more than the tie tolerance.
	"""
	carriers = [c.id for c in scenario.carriers] if carriers is None else list(carriers)
	prices = prices or default_prices(scenario, tensor, params, carriers=carriers)
	game = _JointGame(scenario, tensor, params, prices, carriers)
	strategies = [game.strategies(team.id) for team in scenario.teams]
	dims = tuple(len(s) for s in strategies)
	joint_count = int(np.prod(dims, dtype=object))
	if joint_count > max_profiles:
		throw(f"{joint_count} joint profiles exceed the enumeration budget of {max_profiles}", exc=TooLarge)
	logger(__name__).info(f"Enumerating {joint_count} joint profiles over carriers {carriers}")

	payoffs = np.empty((joint_count, len(scenario.teams)))
	shape = (len(scenario.locations), len(carriers))
	for start in range(0, joint_count, JOINT_CHUNK):
		stop = min(joint_count, start + JOINT_CHUNK)
		index = np.unravel_index(np.arange(start, stop), dims)
		fractions = np.zeros((stop - start, *shape))
		for team, strategy, digits in zip(scenario.teams, strategies, index, strict=True):
			fractions[:, list(team.member_location_ids), :] = strategy[digits]
		payoffs[start:stop] = game.payoffs(fractions)

	is_ne = np.ones(dims, dtype=bool)
	for t in game.active:
		table = payoffs[:, t].reshape(dims)
		best = table.max(axis=t, keepdims=True)
		is_ne &= table >= best - params.tie_tolerance * np.maximum(1.0, np.abs(best))

	welfare = np.nansum(payoffs, axis=1)
	profiles = []
	for joint in np.flatnonzero(is_ne.ravel()):
		profiles.append(_joint_profile(scenario, strategies, np.unravel_index(joint, dims), carriers))
	report = NEReport(profiles, welfare[is_ne.ravel()], carriers, joint_count)

	if bps_outcome is not None:
		digits = [
			game.strategy_index(team.id, bps_outcome.profile.fractions[list(team.member_location_ids)][:, carriers])
			for team in scenario.teams
		]
		joint = int(np.ravel_multi_index(digits, dims))
		report.bps_profile = _joint_profile(scenario, strategies, digits, carriers)
		report.bps_welfare = float(welfare[joint])
		report.bps_is_ne = bool(is_ne.ravel()[joint])
	return report


def _joint_profile(scenario, strategies, digits, carriers):
	fractions = np.zeros((len(scenario.locations), len(scenario.carriers)))
	for team, strategy, digit in zip(scenario.teams, strategies, digits, strict=True):
		fractions[np.ix_(list(team.member_location_ids), carriers)] = strategy[int(digit)]
	return StrategyProfile(fractions)


def deviation_gains(scenario, tensor, profile, params, prices, carriers=None, max_profiles=MAX_JOINT_PROFILES):
	"""Largest payoff gain per team from changing its whole strategy over `carriers` at once."""
	carriers = [c.id for c in scenario.carriers] if carriers is None else list(carriers)
	game = _JointGame(scenario, tensor, params, prices, carriers)
	base = profile.fractions[:, carriers]
	current = game.payoffs(base[None])[0]
	gains = {}
	for t in game.active:
		strategies = game.strategies(t)
		if len(strategies) > max_profiles:
			throw(f"Team {t} has {len(strategies)} strategies, beyond the enumeration budget", exc=TooLarge)
		fractions = np.repeat(base[None], len(strategies), axis=0)
		fractions[:, list(scenario.teams[t].member_location_ids), :] = strategies
		gains[t] = float(game.payoffs(fractions)[:, t].max() - current[t])
	return gains


@dataclass
class OrderRun:
	order: tuple
	profile: StrategyProfile
	welfare: float
	converged: bool


@dataclass
class OrderReport:
	runs: list

	@property
	def same_profile(self):
		return all(run.profile == self.runs[0].profile for run in self.runs)

	@property
	def same_welfare(self):
		first = self.runs[0].welfare
		return all(abs(run.welfare - first) <= 1e-9 * max(1.0, abs(first)) for run in self.runs)


def check_order_independence(scenario, tensor, carrier, params, prices=None, max_teams=6):
	"""Replay the single-carrier game under every team order."""
	if len(scenario.teams) > max_teams:
		throw(f"{len(scenario.teams)} teams give too many orders to replay", exc=TooLarge)
	prices = prices or default_prices(scenario, tensor, params, carriers=[carrier])
	runs = []
	for order in itertools.permutations(range(len(scenario.teams))):
		outcome = run_single_carrier_game(scenario, tensor, carrier, params, team_order=order, prices=prices)
		welfare = social_welfare(scenario, tensor, outcome.profile, params, prices, carriers=[carrier])
		runs.append(OrderRun(order, outcome.profile, welfare, outcome.converged))
	return OrderReport(runs)


@dataclass(frozen=True)
class FixedStrategyComparison:
	min_power: float
	max_power: float

	@property
	def min_power_wins(self):
		return self.min_power >= self.max_power


def compare_fixed_strategies(scenario, tensor, params, prices=None):
	"""Mean team payoff over all carriers with every location at the lowest and at the highest level."""
	prices = prices or default_prices(scenario, tensor, params)
	active = sum(1 for team in scenario.teams if team.ue_count > 0)
	if not active:
		throw("No team has UEs", exc=ValidationError)
	return FixedStrategyComparison(
		social_welfare(scenario, tensor, min_power_profile(scenario), params, prices) / active,
		social_welfare(scenario, tensor, max_power_profile(scenario), params, prices) / active,
	)


def random_toy_game(generator, teams=None, carriers=None, max_locations=2, levels=None, two_tier=False):
	"""Small random game: 2-3 teams of up to `max_locations` locations, each serving one tile."""
	team_count = teams or int(generator.integers(2, 4))
	sizes = [2 if two_tier else int(generator.integers(1, max_locations + 1)) for _ in range(team_count)]
	carrier_count = carriers or int(generator.integers(1, 3))
	level_count = levels or int(generator.integers(2, 5))
	total = sum(sizes)
	powers = [10.0 if j == 0 else 1.0 for size in sizes for j in range(size)]
	scenario = toy_scenario(
		sizes,
		list(range(total)),
		generator.integers(1, 6, size=total).tolist(),
		carriers=(2.6e9, 8e8)[:carrier_count],
		levels=tuple(np.round(np.linspace(0.0, 1.0, level_count), 6)),
		max_power=powers,
	)
	gains = generator.uniform(0.0, 0.02, size=(total, total, carrier_count))
	own = np.arange(total)
	gains[own, own, :] = generator.uniform(0.05, 0.2, size=(total, carrier_count))
	return scenario, AttenuationTensor(gains)


def anti_coordination_game():
	"""Two teams with weak own links and strong cross links: two pure NEs of equal welfare."""
	scenario = toy_scenario([1, 1], [0, 1], [1, 1], levels=(0.0, 1.0))
	tensor = AttenuationTensor(np.array([[[0.1], [1.0]], [[1.0], [0.1]]]))
	params = GameParams(alpha=1.0, beta=1.0, delta=0.0, noise_power=0.01)
	return scenario, tensor, params, PriceTable.uniform(scenario, 1.0)


def coupled_toy_game(generator):
	"""Two one-location teams with random weak own links and strong cross links.

	Under `anti_coordination_game`'s parameters and prices either team alone at full
	power is an NE, and both NEs have the same welfare.
	"""
	ues = int(generator.integers(1, 6))
	scenario = toy_scenario([1, 1], [0, 1], [ues, ues], levels=(0.0, 1.0))
	own = generator.uniform(0.05, 0.2)
	cross = generator.uniform(0.5, 1.0)
	return scenario, AttenuationTensor(np.array([[[own], [cross]], [[cross], [own]]]))


TOY_PARAMS = GameParams(alpha=1.0, beta=1.0, delta=0.6, k=0.25, gamma_min=0.1, noise_power=1e-3)


@dataclass
class VerifyReport:
	suite: str
	rows: list = field(default_factory=list)

	def add(self, check, checked, failures, detail="", informational=False):
		self.rows.append(
			{
				"suite": self.suite,
				"check": check,
				"checked": int(checked),
				"failures": int(failures),
				"informational": bool(informational),
				"detail": detail,
			}
		)

	@property
	def passed(self):
		return all(row["informational"] or row["failures"] == 0 for row in self.rows)


def _random_continuous(generator, price_share):
	alpha = generator.uniform(0.5, 3.0)
	noise = generator.uniform(0.01, 0.2)
	interference = generator.uniform(0.0, 1.0)
	bound = alpha / (4.0 * (interference + noise))
	p = ContinuousGameParams(
		alpha=alpha,
		beta=generator.uniform(0.5, 2.0),
		a=generator.uniform(0.05, 1.0),
		noise=noise,
		xi=price_share * bound,
		s_max=1.0,
	)
	return p, interference


def verify_closed_form(seed=0, samples=None):
	"""Closed form against a grid maximizer, its derivative against finite differences, and the price bound."""
	samples = samples or 1000
	generator = rng(seed, "analysis", 1)
	report = VerifyReport("closedform")

	checked = skipped = failures = 0
	worst = 0.0
	while checked < samples and checked + skipped < 20 * samples:
		p, interference = _random_continuous(generator, generator.uniform(0.05, 1.0))
		stationary = closed_form_best_reply(interference, p).stationary
		p = replace(p, s_max=stationary * generator.uniform(0.5, 2.0))
		reply = closed_form_best_reply(interference, p)
		if p.payoff(reply.power, interference) < p.payoff(0.0, interference):
			skipped += 1
			continue
		grid = np.linspace(0.0, p.s_max, GRID_POINTS)
		values = p.payoff(grid, interference)
		found = grid[int(np.argmax(values))]
		step = p.s_max / (GRID_POINTS - 1)
		error = abs(found - reply.power)
		checked += 1
		worst = max(worst, error / step)
		if error > step * (1 + 1e-9) and abs(values.max() - p.payoff(reply.power, interference)) > 1e-9:
			failures += 1
	report.add(
		"grid maximizer within one step",
		checked,
		failures + samples - checked,
		f"{checked} draws compared, {skipped} redrawn where switching off wins; worst {worst:.3f} steps",
	)

	checked = failures = 0
	for _ in range(samples):
		p, interference = _random_continuous(generator, generator.uniform(0.05, 0.9))
		h = 1e-6 * (interference + p.noise)
		slope = best_reply_derivative(interference, p)
		numeric = (
			closed_form_best_reply(interference + h, p).stationary - closed_form_best_reply(interference - h, p).stationary
		) / (2 * h)
		checked += 1
		if abs(numeric - slope) > 1e-6 * max(1.0, abs(slope)):
			failures += 1
	report.add("derivative matches central differences", checked, failures)

	checked = failures = 0
	for _ in range(samples):
		p, interference = _random_continuous(generator, 1.0)
		for scale in (1.0, 1 - 1e-6, 1 + 1e-6, generator.uniform(0.01, 3.0)):
			trial = replace(p, xi=p.xi * scale)
			reply = closed_form_best_reply(interference, trial)
			real_positive = not reply.degenerate and reply.stationary > 0
			checked += 1
			if real_positive != (trial.xi <= trial.price_bound(interference)):
				failures += 1
	report.add("real positive reply iff price within bound", checked, failures)

	checked = failures = 0
	for _ in range(max(1, samples // 10)):
		p, _ = _random_continuous(generator, 1.0)
		p = replace(p, xi=generator.uniform(0.05, 0.9) * p.alpha / (4.0 * p.noise))
		upper = p.alpha / (4.0 * p.xi) - p.noise
		slopes = np.array([best_reply_derivative(i, p) for i in np.linspace(0.0, upper, 2000, endpoint=False)])
		changes = int(np.count_nonzero(np.diff(np.sign(slopes)) != 0))
		checked += 1
		if changes > 1 or slopes[-1] >= 0:
			failures += 1
	report.add("derivative changes sign at most once", checked, failures)
	return report


def verify_substitutes(seed=0, samples=None):
	"""Monotonicity of scalar best replies in the interference, with and without a price."""
	samples = samples or 1000
	generator = rng(seed, "analysis", 3)
	report = VerifyReport("substitutes")
	counts = {"continuous": 0, "two-level": 0, "control": 0, "multi-level": 0}
	for _ in range(samples):
		alpha = generator.uniform(0.5, 3.0)
		noise = generator.uniform(0.01, 0.2)
		p = ContinuousGameParams(
			alpha=alpha,
			beta=generator.uniform(0.5, 2.0),
			a=generator.uniform(0.05, 1.0),
			noise=noise,
			xi=generator.uniform(0.1, 0.9) * alpha / (4.0 * noise),
			s_max=generator.uniform(0.5, 3.0),
		)
		upper = p.alpha / (4.0 * p.xi) - p.noise
		start = stagnation_interference(p)
		past = np.linspace(start, upper, 200, endpoint=False)
		stationary = np.array([closed_form_best_reply(i, p).stationary for i in past])
		if np.any(np.diff(stationary) > 1e-12 * np.maximum(1.0, stationary[1:])):
			counts["continuous"] += 1

		sweep = np.linspace(0.0, 2.0 * upper, 200)
		if np.any(np.diff(sweep_discrete_best_reply(sweep, p, (0.0, 1.0))) > 0):
			counts["two-level"] += 1
		if np.any(np.diff(sweep_discrete_best_reply(sweep, p, np.linspace(0.0, 1.0, 5), xi=0.0, tolerance=0.0)) < 0):
			counts["control"] += 1
		if np.any(np.diff(sweep_discrete_best_reply(sweep, p, np.linspace(0.0, 1.0, 11))) > 0):
			counts["multi-level"] += 1

	report.add("continuous reply non-increasing past stagnation", samples, counts["continuous"])
	report.add("on/off reply non-increasing", samples, counts["two-level"])
	report.add("unpriced reply non-decreasing", samples, counts["control"])
	report.add(
		"multi-level reply non-increasing",
		samples,
		counts["multi-level"],
		"replies grow with interference below the stagnation point",
		informational=True,
	)

	checked = violations = skipped = 0
	for i in range(max(1, samples // 100)):
		scenario, tensor = random_toy_game(rng(seed, "analysis", 4, i))
		team_report = check_strategic_substitutes(scenario, tensor, TOY_PARAMS, 20, seed + i)
		checked += team_report.checked
		skipped += team_report.skipped
		violations += len(team_report.violations)
	report.add("team reply norm non-increasing", checked, violations, f"skipped {skipped} unordered pairs", informational=True)
	return report


def verify_ne(seed=0, samples=None):
	"""BPS outcomes on random toys are equilibria, converge quickly and evaluate |P|^L columns per reply."""
	samples = samples or 50
	report = VerifyReport("ne")
	converged = certificate = slow = accounting = oracle = single = full = 0
	for i in range(samples):
		scenario, tensor = random_toy_game(rng(seed, "analysis", 5, i))
		outcome = run_multi_carrier_game(scenario, tensor, TOY_PARAMS)
		if not outcome.converged:
			converged += 1
			continue
		if not check_equilibrium(scenario, tensor, outcome, TOY_PARAMS).holds:
			certificate += 1
		if any(sub.rounds > 5 for sub in outcome.sub_outcomes.values()):
			slow += 1
		expected = sum(len(scenario.power_levels) ** len(scenario.teams[row["team"]].member_location_ids) for row in outcome.trace)
		if outcome.evaluations != expected:
			accounting += 1
		if len(scenario.carriers) == 1:
			single += 1
			ne = enumerate_pure_ne(scenario, tensor, TOY_PARAMS, prices=outcome.prices, bps_outcome=outcome)
			if not ne.bps_is_ne:
				oracle += 1
		gains = deviation_gains(scenario, tensor, outcome.profile, TOY_PARAMS, outcome.prices)
		if any(gain > TOY_PARAMS.tolerance(gain) for gain in gains.values()):
			full += 1
	report.add("converged", samples, converged)
	report.add("per-carrier deviation check", samples - converged, certificate)
	report.add("at most 5 rounds per carrier", samples - converged, slow)
	report.add("evaluations equal |P|^L per best reply", samples - converged, accounting)
	report.add("single-carrier outcome is an enumerated NE", single, oracle)
	report.add(
		"no gain from joint all-carrier deviations",
		samples - converged,
		full,
		"carriers are played in sequence, so joint deviations are outside the game",
		informational=True,
	)
	return report


def verify_welfare(seed=0, samples=None):
	"""BPS welfare against the best enumerated NE."""
	samples = samples or 50
	report = VerifyReport("welfare")
	scenario, tensor, params, prices = anti_coordination_game()
	outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
	ne = enumerate_pure_ne(scenario, tensor, params, prices=prices, bps_outcome=outcome)
	best = ne.best_welfare
	failed = len(ne.profiles) != 2 or not ne.bps_is_ne or ne.bps_welfare < best - params.tolerance(best)
	report.add("anti-coordination toy reaches the best NE", 1, int(failed))

	coupled = below = 0
	for i in range(samples):
		scenario, tensor = coupled_toy_game(rng(seed, "analysis", 7, i))
		outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
		ne = enumerate_pure_ne(scenario, tensor, params, prices=prices, bps_outcome=outcome)
		if len(ne.profiles) < 2:
			continue
		coupled += 1
		if not ne.bps_is_ne or ne.bps_welfare < ne.best_welfare - params.tolerance(ne.best_welfare):
			below += 1
	report.add(
		"coupled toys reach the best NE",
		coupled,
		below + int(coupled == 0),
		f"{coupled} of {samples} instances with two or more NEs",
	)

	multiple = below = 0
	for i in range(samples):
		scenario, tensor = random_toy_game(rng(seed, "analysis", 6, i), carriers=1)
		outcome = run_single_carrier_game(scenario, tensor, 0, TOY_PARAMS)
		ne = enumerate_pure_ne(scenario, tensor, TOY_PARAMS, prices=outcome.prices, bps_outcome=outcome)
		if len(ne.profiles) < 2:
			continue
		multiple += 1
		if ne.bps_welfare < ne.best_welfare - TOY_PARAMS.tolerance(ne.best_welfare):
			below += 1
	report.add("random toys reach the best NE", multiple, below, "instances with two or more NEs", informational=True)
	return report


def verify_fixed(seed=0, samples=None):
	"""Min-power fixed strategy against max-power on two-tier toys."""
	samples = samples or 20
	report = VerifyReport("fixed")
	losses = 0
	for i in range(samples):
		scenario, tensor = random_toy_game(rng(seed, "analysis", 8, i), two_tier=True)
		if not compare_fixed_strategies(scenario, tensor, TOY_PARAMS).min_power_wins:
			losses += 1
	allowed = int(np.floor(0.05 * samples))
	report.add("min-power mean payoff at least max-power", samples, max(0, losses - allowed), f"{losses} losses, {allowed} allowed")
	return report


def verify_order(seed=0, samples=None):
	"""Outcome and welfare under every team order."""
	samples = samples or 20
	report = VerifyReport("order")
	profiles = welfare = 0
	for i in range(samples):
		scenario, tensor = random_toy_game(rng(seed, "analysis", 9, i), carriers=1)
		result = check_order_independence(scenario, tensor, 0, TOY_PARAMS)
		profiles += not result.same_profile
		welfare += not result.same_welfare
	scenario, tensor, params, prices = anti_coordination_game()
	toy = check_order_independence(scenario, tensor, 0, params, prices=prices)
	report.add("same outcome under every order", samples, profiles, informational=True)
	report.add("same welfare under every order", samples, welfare, informational=True)
	report.add(
		"anti-coordination toy: order changes the outcome, not the welfare",
		1,
		int(toy.same_profile or not toy.same_welfare),
	)
	return report
