"""Team power-setting game.

Teams (one macro plus its micros) pick per-carrier power fractions from a discrete
level set. Payoff is a sigmoid utility of tile SINRs weighted by UE share, minus a
price on radiated power scaled by the average link gain and a penalty on unserved UEs.
Best-reply power setting (BPS) plays carriers from the highest frequency down, each
carrier as sequential best replies from the all-zero profile until a full round
changes nothing.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from hetnet_power_setting.exceptions import NoUsers, TileNotInTeam, ValidationError, ZeroInterference
from hetnet_power_setting.power_setting.propagation.propagation import average_attenuation
from hetnet_power_setting.utils import db_to_linear, log_error, logger, thermal_noise_power, throw

CHUNK_SIZE = 8192
PRICE_REFERENCES = ("max", "min")


@dataclass(frozen=True)
class GameParams:
	alpha: float = 1.0
	beta: float = 1.0
	delta: float = 0.6
	k: float = 0.25
	gamma_min: float = 0.1
	noise_power: float | None = None
	noise_figure_db: float = 9.0
	tie_tolerance: float = 1e-9
	max_rounds: int = 50
	update_prices_each_iteration: bool = False
	price_reference: str = "max"

	def __post_init__(self):
		if self.alpha <= 0:
			throw(f"alpha must be > 0, got {self.alpha}", exc=ValidationError)
		if self.delta < 0:
			throw(f"delta must be >= 0, got {self.delta}", exc=ValidationError)
		if not 0 < self.k <= 0.25:
			throw(f"k must lie in (0, 1/4], got {self.k}", exc=ValidationError)
		if self.gamma_min <= 0:
			throw(f"gamma_min must be > 0 (linear), got {self.gamma_min}", exc=ValidationError)
		if self.noise_power is not None and self.noise_power <= 0:
			throw(f"noise_power must be > 0, got {self.noise_power}", exc=ValidationError)
		if self.tie_tolerance < 0 or self.max_rounds < 1:
			throw("tie_tolerance must be >= 0 and max_rounds >= 1", exc=ValidationError)
		if self.price_reference not in PRICE_REFERENCES:
			throw(f"price_reference must be one of {PRICE_REFERENCES}, got {self.price_reference!r}", exc=ValidationError)

	@classmethod
	def from_config(cls, config, **overrides):
		game = config.get("game")
		values = {
			"alpha": float(game["alpha"]),
			"beta": float(game["beta"]),
			"delta": float(game["delta"]),
			"k": float(game["k"]),
			"gamma_min": float(db_to_linear(game["gamma_min_db"])),
			"noise_power": None if game["noise_power_w"] is None else float(game["noise_power_w"]),
			"noise_figure_db": float(game["noise_figure_db"]),
			"tie_tolerance": float(game["tie_tolerance"]),
			"max_rounds": int(game["max_rounds"]),
			"update_prices_each_iteration": bool(game["update_prices_each_iteration"]),
			"price_reference": str(game["price_reference"]),
		}
		values.update({k: v for k, v in overrides.items() if v is not None})
		return cls(**values)

	def noise(self, carrier):
		"""Noise power in watts on `carrier`."""
		if self.noise_power is not None:
			return self.noise_power
		return thermal_noise_power(carrier.bandwidth, self.noise_figure_db)

	def tolerance(self, best):
		return self.tie_tolerance * max(1.0, abs(best))


class StrategyProfile:
	"""Power fractions for every (location, carrier).

	Team t's L_t x C strategy matrix is the block of rows of its member locations.
	"""

	def __init__(self, fractions):
		fractions = np.array(fractions, dtype=float)
		if fractions.ndim != 2:
			throw(f"Strategy profile must be 2-D (location, carrier), got shape {fractions.shape}", exc=ValidationError)
		fractions.setflags(write=False)
		self.fractions = fractions

	@classmethod
	def zeros(cls, scenario):
		return cls(np.zeros((len(scenario.locations), len(scenario.carriers))))

	def __repr__(self):
		return f"StrategyProfile(shape={self.fractions.shape}, total_fraction={self.fractions.sum():.3f})"

	def __eq__(self, other):
		return isinstance(other, StrategyProfile) and np.array_equal(self.fractions, other.fractions)

	__hash__ = None

	def team(self, scenario, team_id):
		return self.fractions[list(scenario.teams[team_id].member_location_ids)]

	def with_values(self, location_ids, carrier, values):
		fractions = self.fractions.copy()
		fractions[np.asarray(location_ids, dtype=int), carrier] = values
		return StrategyProfile(fractions)

	def with_carrier(self, carrier, values):
		fractions = self.fractions.copy()
		fractions[:, carrier] = values
		return StrategyProfile(fractions)

	def radiated(self, scenario):
		return self.fractions * scenario.max_powers[:, None]

	def total_watts(self, scenario, carrier=None):
		radiated = self.radiated(scenario)
		return float(radiated.sum() if carrier is None else radiated[:, carrier].sum())

	def is_valid(self, levels):
		return all(levels.contains(f) for f in np.unique(self.fractions))


class PriceTable:
	"""Price ξ per (location, carrier), in 1/W."""

	def __init__(self, xi):
		xi = np.array(xi, dtype=float)
		if xi.ndim != 2 or not np.all(np.isfinite(xi)) or np.any(xi < 0):
			throw("Prices must be a finite, nonnegative (location, carrier) table", exc=ValidationError)
		xi.setflags(write=False)
		self.xi = xi

	@classmethod
	def zeros(cls, scenario):
		return cls(np.zeros((len(scenario.locations), len(scenario.carriers))))

	@classmethod
	def uniform(cls, scenario, value):
		return cls(np.full((len(scenario.locations), len(scenario.carriers)), float(value)))

	def __repr__(self):
		return f"PriceTable(shape={self.xi.shape})"

	def with_values(self, location_ids, carrier, values):
		xi = self.xi.copy()
		xi[np.asarray(location_ids, dtype=int), carrier] = values
		return PriceTable(xi)


@dataclass
class BestReply:
	fractions: np.ndarray
	payoff: float
	utility: float
	cost: float
	unserved: float
	evaluations: int


@dataclass
class GameOutcome:
	profile: StrategyProfile
	trace: list
	iterations: int
	rounds: int
	converged: bool
	evaluations: int
	messages: int
	prices: PriceTable
	carrier_order: list
	served: np.ndarray
	sub_outcomes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TeamMetrics:
	utility: float
	cost: float
	unserved: float

	@property
	def payoff(self):
		return self.utility - self.cost


class TeamCarrierView:
	"""Arrays needed to evaluate team `team_id` on `carrier` for many candidate columns.

	Gains are pre-multiplied by maximum power, so a candidate is a (K x L_t) array of
	fractions. `abar` is each location's UE share of the team times its UE-weighted
	geometric mean gain over the tiles it serves, the same per-UE scale as the utility.
	"""

	def __init__(self, scenario, tensor, team_id, carrier, params):
		team = scenario.teams[team_id]
		self.team_id = team_id
		self.carrier = carrier
		self.locations = np.array(team.member_location_ids, dtype=int)
		self.tiles = np.array(team.tile_ids, dtype=int)
		self.ue_total = float(team.ue_count)
		counts = scenario.ue_counts[self.tiles]
		self.weights = counts / self.ue_total if self.ue_total > 0 else np.zeros(len(self.tiles))

		local = {int(lid): i for i, lid in enumerate(self.locations)}
		self.serve = np.array([local[int(scenario.serving[z])] for z in self.tiles], dtype=int)
		self.max_powers = scenario.max_powers[self.locations]
		received = tensor.gains[self.locations][:, self.tiles, carrier] * self.max_powers[:, None]
		columns = np.arange(len(self.tiles))
		self.signal = received[self.serve, columns]
		intra = received.copy()
		intra[self.serve, columns] = 0.0
		self.intra = intra
		self.external = np.flatnonzero(scenario.team_of_location != team_id)
		self.external_gain = tensor.gains[self.external][:, self.tiles, carrier] * scenario.max_powers[self.external][:, None]
		self.noise = params.noise(scenario.carriers[carrier])

		self.abar = np.zeros(len(self.locations))
		for i, lid in enumerate(self.locations):
			served = self.tiles[self.serve == i]
			if served.size:
				share = self.weights[self.serve == i].sum()
				self.abar[i] = share * average_attenuation(tensor, lid, carrier, served, scenario.ue_counts[served], log_domain=True)

		self.micro_order = [local[lid] for lid in scenario.micro_order(team_id)]
		self.carrier_order = scenario.carrier_order

	def external_interference(self, fractions):
		"""Interference from other teams per team tile; `fractions` is (L,) or (K, L) over all locations."""
		return np.asarray(fractions)[..., self.external] @ self.external_gain

	def sinr(self, candidates, external):
		candidates = np.atleast_2d(candidates)
		signal = candidates[:, self.serve] * self.signal
		interference = candidates @ self.intra + external + self.noise
		return signal / interference

	def evaluate(self, candidates, external, xi, params, prior_served=None):
		"""Utility, cost and unserved share for each candidate row on this carrier."""
		candidates = np.atleast_2d(candidates)
		gamma = self.sinr(candidates, external)
		utility = expit(params.alpha * (gamma - params.beta)) @ self.weights
		unserved_tiles = gamma <= params.gamma_min
		if prior_served is not None:
			unserved_tiles &= ~prior_served[self.tiles]
		unserved = unserved_tiles @ self.weights
		cost = candidates @ (xi * self.abar * self.max_powers) + params.delta * unserved
		return utility, cost, unserved


def scalar_payoff(power, interference, alpha, beta, gain, noise, xi):
	"""Single-location, single-tile payoff w(s) with the cost on received power."""
	power = np.asarray(power, dtype=float)
	received = gain * power
	payoff = expit(alpha * (received / (interference + noise) - beta)) - xi * received
	return float(payoff) if payoff.ndim == 0 else payoff


def candidate_block(levels, width, start, stop):
	"""Candidates `start`..`stop` of the |P|^width grid, last position varying fastest."""
	index = np.unravel_index(np.arange(start, stop), (len(levels),) * width)
	return np.asarray(levels, dtype=float)[np.stack(index, axis=1)]


def preference_key(matrix, max_powers, micro_order, carrier_order):
	"""Sort key among payoff ties; the smallest key wins.

	Order: least radiated watts, then more power on micros nearer the macro, then more
	power on higher-frequency carriers, then the smaller flattened matrix.
	"""
	matrix = np.asarray(matrix, dtype=float)
	radiated = matrix * np.asarray(max_powers, dtype=float)[:, None]
	return (
		round(float(radiated.sum()), 9),
		tuple(-round(float(matrix[i].sum()), 12) for i in micro_order),
		tuple(-round(float(radiated[:, c].sum()), 9) for c in carrier_order),
		tuple(float(v) for v in matrix.ravel()),
	)


def min_power_profile(scenario):
	"""Every location at the lowest nonzero level on every carrier."""
	shape = (len(scenario.locations), len(scenario.carriers))
	return StrategyProfile(np.full(shape, scenario.power_levels.lowest_nonzero))


def max_power_profile(scenario):
	shape = (len(scenario.locations), len(scenario.carriers))
	return StrategyProfile(np.full(shape, scenario.power_levels.fractions[-1]))


def _check_tile(scenario, team_id, tile):
	if tile not in scenario.teams[team_id].tile_ids:
		throw(f"Tile {tile} is not served by team {team_id}", exc=TileNotInTeam)


def interference(scenario, tensor, profile, team_id, tile, carrier):
	"""Watts received at `tile` on `carrier` from every location outside `team_id`."""
	_check_tile(scenario, team_id, tile)
	others = scenario.team_of_location != team_id
	radiated = profile.fractions[others, carrier] * scenario.max_powers[others]
	return float(radiated @ tensor.gains[others, tile, carrier])


def sinr(scenario, tensor, profile, team_id, location, tile, carrier, params):
	_check_tile(scenario, team_id, tile)
	if scenario.locations[location].team_id != team_id:
		throw(f"Location {location} does not belong to team {team_id}", exc=ValidationError)
	radiated = profile.fractions[:, carrier] * scenario.max_powers
	received = radiated * tensor.gains[:, tile, carrier]
	members = scenario.team_of_location == team_id
	intra = received[members].sum() - received[location]
	noise = params.noise(scenario.carriers[carrier])
	return float(received[location] / (noise + intra + interference(scenario, tensor, profile, team_id, tile, carrier)))


def tile_sinr(scenario, tensor, profile, params, serving=None, muted=None, fading_db=None):
	"""SINR of every tile (rows) on every carrier (columns) under its serving location.

	`muted` silences locations, `fading_db` (tiles x carriers) scales the wanted signal.
	"""
	serving = scenario.serving if serving is None else np.asarray(serving, dtype=int)
	radiated = profile.radiated(scenario)
	if muted is not None:
		radiated = radiated * ~np.asarray(muted, dtype=bool)[:, None]
	columns = np.arange(len(scenario.tiles))
	gamma = np.zeros((len(scenario.tiles), len(scenario.carriers)))
	for carrier in scenario.carriers:
		c = carrier.id
		received = radiated[:, c, None] * tensor.gains[:, :, c]
		signal = received[serving, columns]
		other = received.sum(axis=0) - signal
		if fading_db is not None:
			signal = signal * db_to_linear(fading_db[:, c])
		gamma[:, c] = signal / (params.noise(carrier) + np.maximum(other, 0.0))
	return gamma


def served_tiles(scenario, tensor, profile, carrier, params):
	"""Tiles whose SINR on `carrier` is above gamma_min."""
	return tile_sinr(scenario, tensor, profile, params)[:, carrier] > params.gamma_min


def team_metrics(scenario, tensor, profile, team_id, params, prices, carriers=None):
	"""Utility, cost and unserved share of a team over `carriers` (default all)."""
	team = scenario.teams[team_id]
	carriers = [c.id for c in scenario.carriers] if carriers is None else list(carriers)
	tiles = scenario.team_tiles(team_id)
	weights = scenario.ue_counts[tiles] / team.ue_count if team.ue_count > 0 else np.zeros(len(tiles))
	utility = cost = 0.0
	unserved_tiles = np.ones(len(tiles), dtype=bool)
	for c in carriers:
		view = TeamCarrierView(scenario, tensor, team_id, c, params)
		column = profile.fractions[view.locations, c]
		gamma = view.sinr(column, view.external_interference(profile.fractions[:, c]))[0]
		utility += float(expit(params.alpha * (gamma - params.beta)) @ view.weights)
		cost += float(column @ (prices.xi[view.locations, c] * view.abar * view.max_powers))
		unserved_tiles &= gamma <= params.gamma_min
	unserved = float(unserved_tiles @ weights)
	return TeamMetrics(utility, cost + params.delta * unserved, unserved)


def team_utility(scenario, tensor, profile, team_id, params, carriers=None):
	if scenario.teams[team_id].ue_count <= 0:
		throw(f"Team {team_id} has no UEs", exc=NoUsers)
	return team_metrics(scenario, tensor, profile, team_id, params, PriceTable.zeros(scenario), carriers).utility


def team_cost(scenario, tensor, profile, team_id, params, prices, carriers=None):
	"""(cost, e_t) for a team: priced radiated power plus delta times the unserved share.

	A team without UEs has e_t = 0 and, since every location's UE share is zero, no priced power.
	"""
	metrics = team_metrics(scenario, tensor, profile, team_id, params, prices, carriers)
	return metrics.cost, metrics.unserved


def team_payoff(scenario, tensor, profile, team_id, params, prices, carriers=None):
	return team_metrics(scenario, tensor, profile, team_id, params, prices, carriers).payoff


def social_welfare(scenario, tensor, profile, params, prices, carriers=None):
	"""Sum of payoffs of the teams that have UEs."""
	return sum(
		team_payoff(scenario, tensor, profile, team.id, params, prices, carriers)
		for team in scenario.teams
		if team.ue_count > 0
	)


def price_for(mean_interference, params, noise=0.0):
	"""k * alpha / (I + N) for a location whose tiles see `mean_interference` watts."""
	if mean_interference <= 0:
		throw("Average interference is zero", exc=ZeroInterference)
	return params.k * params.alpha / (mean_interference + noise)


def update_prices(scenario, tensor, reference_profile, team_id, carrier, params, view=None):
	"""Prices of a team's locations on `carrier` from the interference they see under `reference_profile`.

	Each location averages, over its tiles and weighted by UEs, the external plus
	intra-team interference and prices at k * alpha / (average + N), the same
	interference-plus-noise scale the SINR uses. Without interference the price is
	k * alpha / (4 N).
	"""
	view = view or TeamCarrierView(scenario, tensor, team_id, carrier, params)
	column = reference_profile.fractions[view.locations, carrier]
	total = view.external_interference(reference_profile.fractions[:, carrier]) + column @ view.intra
	prices = np.zeros(len(view.locations))
	for i, lid in enumerate(view.locations):
		mask = view.serve == i
		mean = 0.0
		if mask.any():
			counts = scenario.ue_counts[view.tiles[mask]]
			mean = float(np.average(total[mask], weights=counts)) if counts.sum() > 0 else float(total[mask].mean())
		try:
			prices[i] = price_for(mean, params, view.noise)
		except ZeroInterference:
			prices[i] = params.k * params.alpha / (4.0 * view.noise)
			logger(__name__).debug(f"Location {lid} on carrier {carrier}: no interference, noise-floor price {prices[i]:.4g}")
	return prices


def price_reference_profile(scenario, params):
	"""Fixed strategy the prices are set against: max or min power, per `params.price_reference`."""
	if params.price_reference == "min":
		return min_power_profile(scenario)
	return max_power_profile(scenario)


def compute_price_table(scenario, tensor, reference_profile, params, carriers=None, prices=None):
	"""Run the team price setting for every team and carrier in `carriers`."""
	prices = prices or PriceTable.zeros(scenario)
	carriers = [c.id for c in scenario.carriers] if carriers is None else list(carriers)
	for c in carriers:
		for team in scenario.teams:
			values = update_prices(scenario, tensor, reference_profile, team.id, c, params)
			prices = prices.with_values(team.member_location_ids, c, values)
	return prices


def default_prices(scenario, tensor, params, carriers=None):
	return compute_price_table(scenario, tensor, price_reference_profile(scenario, params), params, carriers=carriers)


def candidate_payoffs(view, levels, profile, params, prices, prior_served=None):
	"""Payoff of every candidate column of `view`'s team, in `candidate_block` order."""
	width = len(view.locations)
	count = len(levels) ** width
	external = view.external_interference(profile.fractions[:, view.carrier])
	xi = prices.xi[view.locations, view.carrier]
	payoffs = np.empty(count)
	for start in range(0, count, CHUNK_SIZE):
		stop = min(count, start + CHUNK_SIZE)
		utility, cost, _ = view.evaluate(candidate_block(levels, width, start, stop), external, xi, params, prior_served)
		payoffs[start:stop] = utility - cost
	return payoffs


def best_reply(scenario, tensor, profile, team_id, carrier, params, prices, prior_served=None, view=None):
	"""Payoff-maximizing column of power fractions for a team on one carrier.

	Every one of the |P|^L_t columns is evaluated against the other teams' entries of
	`profile`; ties within the relative tolerance go to the smallest `preference_key`.
	`prior_served` marks tiles already above gamma_min on settled carriers.
	"""
	view = view or TeamCarrierView(scenario, tensor, team_id, carrier, params)
	levels = scenario.power_levels.values
	width = len(view.locations)
	count = len(levels) ** width
	external = view.external_interference(profile.fractions[:, carrier])
	xi = prices.xi[view.locations, carrier]
	payoffs = candidate_payoffs(view, levels, profile, params, prices, prior_served)

	best = float(payoffs.max())
	ties = np.flatnonzero(payoffs >= best - params.tolerance(best))
	matrix = profile.fractions[view.locations].copy()
	keyed = []
	for index in ties:
		column = candidate_block(levels, width, index, index + 1)[0]
		matrix[:, carrier] = column
		keyed.append((preference_key(matrix, view.max_powers, view.micro_order, view.carrier_order), index, column))
	_, index, column = min(keyed, key=lambda item: item[0])

	utility, cost, unserved = view.evaluate(column, external, xi, params, prior_served)
	return BestReply(
		fractions=column,
		payoff=float(utility[0] - cost[0]),
		utility=float(utility[0]),
		cost=float(cost[0]),
		unserved=float(unserved[0]),
		evaluations=count,
	)


def _team_order(scenario, team_order):
	order = [team.id for team in scenario.teams] if team_order is None else [int(t) for t in team_order]
	if sorted(order) != [team.id for team in scenario.teams]:
		throw(f"Team order {order} is not a permutation of the teams", exc=ValidationError)
	return order


def run_single_carrier_game(
	scenario, tensor, carrier, params, team_order=None, prices=None, prior_served=None, initial=None
):
	"""Sequential best replies on one carrier from zero power until a full round changes nothing.

	Other carriers keep the values in `initial`. Prices default to the team price setting
	against `price_reference_profile`, computed once.
	"""
	order = _team_order(scenario, team_order)
	profile = (initial or StrategyProfile.zeros(scenario)).with_carrier(carrier, 0.0)
	if prices is None:
		prices = default_prices(scenario, tensor, params, carriers=[carrier])
	prior_served = np.zeros(len(scenario.tiles), dtype=bool) if prior_served is None else np.asarray(prior_served, dtype=bool)

	active = []
	for t in order:
		if scenario.teams[t].ue_count > 0:
			active.append(t)
		else:
			log_error(f"Team {t} has no UEs and keeps zero power on carrier {carrier}", title="BPS")
	views = {t: TeamCarrierView(scenario, tensor, t, carrier, params) for t in active}

	trace = []
	iterations = evaluations = messages = rounds = 0
	converged = False
	while rounds < params.max_rounds:
		rounds += 1
		changed = False
		for t in active:
			view = views[t]
			if params.update_prices_each_iteration:
				prices = prices.with_values(view.locations, carrier, update_prices(scenario, tensor, profile, t, carrier, params, view))
			reply = best_reply(scenario, tensor, profile, t, carrier, params, prices, prior_served, view)
			iterations += 1
			evaluations += reply.evaluations
			moved = not np.array_equal(reply.fractions, profile.fractions[view.locations, carrier])
			if moved:
				profile = profile.with_values(view.locations, carrier, reply.fractions)
				messages += 1
				changed = True
			trace.append(
				{
					"carrier": carrier,
					"round": rounds,
					"iteration": iterations,
					"team": t,
					"payoff": reply.payoff,
					"utility": reply.utility,
					"cost": reply.cost,
					"e_t": reply.unserved,
					"total_watts": profile.total_watts(scenario, carrier),
					"changed": moved,
				}
			)
			logger(__name__).debug(
				f"carrier {carrier} iteration {iterations}: team {t} -> {reply.fractions.tolist()} payoff {reply.payoff:.6f}"
			)
		if not changed:
			converged = True
			break

	if not converged:
		log_error(f"Carrier {carrier} game did not converge within {params.max_rounds} rounds", title="BPS")
	logger(__name__).info(
		f"Carrier {carrier}: converged={converged} after {rounds} rounds, {iterations} best replies, "
		f"{profile.total_watts(scenario, carrier):.3f} W radiated"
	)
	return GameOutcome(
		profile=profile,
		trace=trace,
		iterations=iterations,
		rounds=rounds,
		converged=converged,
		evaluations=evaluations,
		messages=messages,
		prices=prices,
		carrier_order=[carrier],
		served=served_tiles(scenario, tensor, profile, carrier, params),
	)


def run_multi_carrier_game(scenario, tensor, params, team_order=None, carriers=None, prices=None):
	"""BPS over every carrier in descending center frequency.

	A settled carrier stays frozen, and UEs already above gamma_min on it count as
	served in the later carriers' games.
	"""
	order = [c for c in scenario.carrier_order if carriers is None or c in carriers]
	if not order:
		throw("At least one carrier is required", exc=ValidationError)
	profile = StrategyProfile.zeros(scenario)
	table = prices or default_prices(scenario, tensor, params, carriers=order)
	prior = np.zeros(len(scenario.tiles), dtype=bool)

	subs = {}
	for c in order:
		sub = run_single_carrier_game(
			scenario, tensor, c, params, team_order=team_order, prices=table, prior_served=prior, initial=profile
		)
		subs[c] = sub
		profile = sub.profile
		table = sub.prices
		prior = prior | sub.served

	return GameOutcome(
		profile=profile,
		trace=[row for c in order for row in subs[c].trace],
		iterations=sum(s.iterations for s in subs.values()),
		rounds=sum(s.rounds for s in subs.values()),
		converged=all(s.converged for s in subs.values()),
		evaluations=sum(s.evaluations for s in subs.values()),
		messages=sum(s.messages for s in subs.values()),
		prices=table,
		carrier_order=order,
		served=prior,
		sub_outcomes=subs,
	)
