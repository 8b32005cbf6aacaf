"""TTI-level downlink simulation of a power policy: Poisson download requests, PF
scheduling per location and carrier, energy drawn by every location, and the resulting
efficiency and fairness metrics."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.stats import binomtest

from hetnet_power_setting.config import ScenarioConfig
from hetnet_power_setting.exceptions import AllZero, ValidationError
from hetnet_power_setting.power_setting.game.game import (
	GameParams,
	max_power_profile,
	min_power_profile,
	run_multi_carrier_game,
	tile_sinr,
)
from hetnet_power_setting.power_setting.propagation.propagation import PropagationModel, fast_fading_draws
from hetnet_power_setting.power_setting.scenario.scenario import (
	RB_BANDWIDTH_HZ,
	AreaType,
	PoaKind,
	TimeOfDay,
	associate,
	populate_ues,
)
from hetnet_power_setting.utils import db_to_linear, linear_to_db, logger, rng, throw

KINDS = (PoaKind.MACRO.value, PoaKind.MICRO.value)


class Policy(str, Enum):
	BPS = "BPS"
	MAX_POWER = "MaxPower"
	MIN_POWER = "MinPower"
	EICIC_LITE = "EicicLite"


@dataclass(frozen=True)
class DownloadRequest:
	id: int
	tile: int
	kind: str
	size_bits: float
	deadline_s: float
	arrival_s: float
	vehicular: bool = False
	ue: int = 0


@dataclass(frozen=True)
class RateTable:
	"""Step map from SINR (dB breakpoints) to spectral efficiency in b/s/Hz."""

	sinr_db: tuple
	efficiency: tuple
	tti_s: float = 1e-3

	def __post_init__(self):
		if len(self.sinr_db) != len(self.efficiency) or not self.sinr_db:
			throw("Rate table needs one efficiency per SINR breakpoint", exc=ValidationError)
		if np.any(np.diff(self.sinr_db) <= 0) or np.any(np.diff(self.efficiency) < 0):
			throw("Rate table breakpoints must ascend and efficiencies must not decrease", exc=ValidationError)

	@classmethod
	def from_config(cls, config):
		table = config.get("simulation.rate_table")
		return cls(tuple(table["sinr_db"]), tuple(table["efficiency"]), float(config.get("simulation.tti_s")))

	def bits_per_rb(self, gamma):
		"""Bits one RB carries in one TTI at linear SINR `gamma`."""
		gamma = np.asarray(gamma, dtype=float)
		db = linear_to_db(np.maximum(gamma, 1e-300))
		index = np.searchsorted(np.asarray(self.sinr_db), db, side="right") - 1
		efficiency = np.where(index >= 0, np.asarray(self.efficiency)[np.clip(index, 0, None)], 0.0)
		bits = efficiency * RB_BANDWIDTH_HZ * self.tti_s
		return float(bits) if bits.ndim == 0 else bits


def sinr_to_rate(gamma, table):
	return table.bits_per_rb(gamma)


@dataclass(frozen=True)
class EnergyModel:
	"""Location power draw P0 + slope * radiated watts."""

	macro_static_w: float = 130.0
	macro_load_slope: float = 4.7
	micro_static_w: float = 6.8
	micro_load_slope: float = 4.0

	def __post_init__(self):
		if min(self.macro_static_w, self.macro_load_slope, self.micro_static_w, self.micro_load_slope) < 0:
			throw("Energy model coefficients must be >= 0", exc=ValidationError)

	@classmethod
	def from_config(cls, config):
		energy = config.get("energy")
		return cls(
			float(energy["macro"]["static_w"]),
			float(energy["macro"]["load_slope"]),
			float(energy["micro"]["static_w"]),
			float(energy["micro"]["load_slope"]),
		)

	def static(self, kind):
		return self.macro_static_w if PoaKind(kind) == PoaKind.MACRO else self.micro_static_w

	def slope(self, kind):
		return self.macro_load_slope if PoaKind(kind) == PoaKind.MACRO else self.micro_load_slope

	def power_draw(self, kind, radiated_w):
		return self.static(kind) + self.slope(kind) * radiated_w


def energy_consumed(location, fractions, duration, model):
	"""Joules drawn by `location` radiating `fractions` (one entry per carrier) for `duration` seconds."""
	if duration < 0:
		throw(f"Duration must be >= 0, got {duration}", exc=ValidationError)
	radiated = float(np.sum(fractions)) * location.max_power
	return model.power_draw(location.kind, radiated) * duration


def jain_index(values):
	"""(sum x)^2 / (n sum x^2)"""
	values = np.asarray(values, dtype=float)
	if values.size == 0 or np.any(values < 0):
		throw("Jain index needs at least one nonnegative value", exc=ValidationError)
	if not np.any(values > 0):
		throw("Jain index is undefined when every value is zero", exc=AllZero)
	return float(values.sum() ** 2 / (values.size * np.square(values).sum()))


def pf_schedule(rates, averages, rb_budget, demands=None, time_constant=100.0, epsilon=1e-9):
	"""RB count per download: each RB goes to the highest rate / max(epsilon, served average).

	The average includes what the download was already given in this TTI, scaled by
	1 / `time_constant`. Downloads with nothing left in `demands` get no more RBs.
	"""
	rates = np.asarray(rates, dtype=float)
	allocation = np.zeros(len(rates), dtype=int)
	if len(rates) == 0 or rb_budget <= 0:
		return allocation
	wanted = np.full(len(rates), np.inf) if demands is None else np.asarray(demands, dtype=float)
	if len(rates) == 1:
		if rates[0] > 0 and wanted[0] > 0:
			needed = rb_budget if np.isinf(wanted[0]) else math.ceil(wanted[0] / rates[0])
			allocation[0] = min(int(rb_budget), needed)
		return allocation

	base = np.asarray(averages, dtype=float)
	served = np.zeros(len(rates))
	for _ in range(int(rb_budget)):
		open_ = (rates > 0) & (served < wanted)
		if not open_.any():
			break
		scores = np.where(open_, rates / np.maximum(epsilon, base + served / time_constant), -np.inf)
		i = int(np.argmax(scores))
		allocation[i] += 1
		served[i] += rates[i]
	return allocation


def generate_traffic(
	scenario, profile=None, duration=1.0, seed=0, start=0.0, stream=0, time_of_day=None, first_id=0
):
	"""Download requests of every cell over [start, start + duration).

	Each team is a cell with the arrival rate of its area type; the requesting tile is
	drawn in proportion to its UEs, the requesting UE uniformly among the tile's UEs
	(vehicular ones first) and the content kind by its selection probability.
	"""
	if duration <= 0:
		throw(f"Duration must be > 0, got {duration}", exc=ValidationError)
	profile = profile or scenario.traffic
	tod = TimeOfDay(time_of_day or scenario.time_of_day)
	generator = rng(seed, "traffic", stream)
	kinds = [c.kind for c in profile.contents]
	probabilities = [c.probability for c in profile.contents]
	drawn = []
	for team in scenario.teams:
		rate = profile.rate(team.area_type, tod)
		if rate <= 0 or team.ue_count <= 0:
			continue
		count = int(generator.poisson(rate * duration))
		if not count:
			continue
		tiles = scenario.team_tiles(team.id)
		weights = scenario.ue_counts[tiles] / team.ue_count
		arrivals = start + generator.uniform(0.0, duration, size=count)
		chosen = generator.choice(tiles, size=count, p=weights)
		kind_draws = generator.choice(len(kinds), size=count, p=probabilities)
		moving = generator.uniform(size=count)
		for arrival, tile, k, u in zip(arrivals, chosen, kind_draws, moving, strict=True):
			content = profile.content(kinds[k])
			ues = scenario.tiles[tile]
			ue = min(int(u * ues.ue_count), ues.ue_count - 1)
			drawn.append((float(arrival), team.id, int(tile), content, ue < ues.ue_count_vehicular, ue))
	drawn.sort(key=lambda item: (item[0], item[1]))
	return [
		DownloadRequest(first_id + i, tile, content.kind, content.size_bits, content.deadline_s, arrival, vehicular, ue)
		for i, (arrival, _, tile, content, vehicular, ue) in enumerate(drawn)
	]


@dataclass(frozen=True)
class SimulationSettings:
	tti_s: float = 1e-3
	update_period_s: float = 0.1
	pf_time_constant: float = 100.0
	pf_epsilon: float = 1e-9
	edge_threshold_db: float = 3.0
	cre_bias_db: float = 8.0
	abs_fraction: float = 0.25
	redrop_ues: bool = False
	rate_table: RateTable | None = None
	energy: EnergyModel = field(default_factory=EnergyModel)

	@classmethod
	def from_config(cls, config):
		sim = config.get("simulation")
		return cls(
			tti_s=float(sim["tti_s"]),
			update_period_s=float(sim["update_period_s"]),
			pf_time_constant=float(sim["pf_time_constant_tti"]),
			pf_epsilon=float(sim["pf_epsilon"]),
			edge_threshold_db=float(sim["edge_threshold_db"]),
			cre_bias_db=float(sim["cre_bias_db"]),
			abs_fraction=float(sim["abs_fraction"]),
			redrop_ues=bool(sim["redrop_ues"]),
			rate_table=RateTable.from_config(config),
			energy=EnergyModel.from_config(config),
		)

	@property
	def abs_period(self):
		return max(1, round(1.0 / self.abs_fraction)) if self.abs_fraction > 0 else 0


@dataclass
class MetricsReport:
	policy: str
	time_of_day: str
	duration_s: float
	requests: int = 0
	completed: int = 0
	failed: int = 0
	in_flight: int = 0
	requested_bits: float = 0.0
	delivered_bits: float = 0.0
	capacity_bits: float = 0.0
	failed_by_content: dict = field(default_factory=dict)
	bits_by_kind: dict = field(default_factory=dict)
	energy_by_kind: dict = field(default_factory=dict)
	rbs_by_kind: dict = field(default_factory=dict)
	area_bits: dict = field(default_factory=dict)
	area_energy: dict = field(default_factory=dict)
	area_throughput: dict = field(default_factory=dict)
	mobility_throughput: dict = field(default_factory=dict)
	jain_inner: float | None = None
	jain_edge: float | None = None
	mean_ue_throughput: float = 0.0
	ue_rows: list = field(default_factory=list)
	ue_summary: list = field(default_factory=list)
	mean_strategy: np.ndarray | None = None

	@property
	def demand_met(self):
		return 1.0 if self.requested_bits <= 0 else self.delivered_bits / self.requested_bits

	@property
	def energy_j(self):
		return sum(self.energy_by_kind.values())

	def energy_efficiency(self, kind):
		"""Bits per joule for PoAs of `kind`."""
		energy = self.energy_by_kind.get(kind, 0.0)
		return self.bits_by_kind.get(kind, 0.0) / energy if energy > 0 else 0.0

	def rb_efficiency(self, kind):
		"""Kilobits per RB for PoAs of `kind`."""
		rbs = self.rbs_by_kind.get(kind, 0)
		return self.bits_by_kind.get(kind, 0.0) / 1e3 / rbs if rbs else 0.0

	def rows(self):
		"""(metric, poa_kind, value) rows; poa_kind "All" for network-wide values."""
		rows = [
			("requests", "All", self.requests),
			("completed", "All", self.completed),
			("failed", "All", self.failed),
			("in_flight", "All", self.in_flight),
			("delivered_bits", "All", self.delivered_bits),
			("demand_met", "All", self.demand_met),
			("energy_j", "All", self.energy_j),
			("mean_ue_throughput_bps", "All", self.mean_ue_throughput),
			("jain_inner", "All", self.jain_inner),
			("jain_edge", "All", self.jain_edge),
		]
		for content, fraction in sorted(self.failed_by_content.items()):
			rows.append((f"failed_fraction_{content}", "All", fraction))
		for kind in KINDS:
			rows.append(("energy_j", kind, self.energy_by_kind.get(kind, 0.0)))
			rows.append(("energy_efficiency_bpj", kind, self.energy_efficiency(kind)))
			rows.append(("rb_efficiency_kb_per_rb", kind, self.rb_efficiency(kind)))
		for area, value in sorted(self.area_throughput.items()):
			rows.append((f"ue_throughput_bps_{area}", "All", value))
		for area in sorted(self.area_energy):
			energy = self.area_energy[area]
			rows.append((f"energy_efficiency_bpj_{area}", "All", self.area_bits.get(area, 0.0) / energy if energy > 0 else 0.0))
		for mobility, value in sorted(self.mobility_throughput.items()):
			rows.append((f"ue_throughput_bps_{mobility}", "All", value))
		return rows


def edge_tiles(scenario, tensor, serving, threshold_db):
	"""Tiles whose serving reference power is less than `threshold_db` above the strongest other location."""
	reference = scenario.reference_carrier.id
	received = scenario.max_powers[:, None] * tensor.gains[:, :, reference]
	columns = np.arange(len(scenario.tiles))
	wanted = received[serving, columns]
	others = received.copy()
	others[serving, columns] = -np.inf
	best_other = others.max(axis=0) if len(scenario.locations) > 1 else np.zeros(len(columns))
	with np.errstate(divide="ignore"):
		ratio_db = linear_to_db(wanted) - linear_to_db(np.maximum(best_other, 0.0))
	return ratio_db < threshold_db


def policy_association(scenario, tensor, policy, settings, profile=None):
	"""Serving location per tile under `policy`.

	EicicLite biases the max-power association towards micros. BPS, given its deployed
	`profile`, attaches each tile to the strongest received power summed over carriers;
	tiles that receive nothing keep their max-power association.
	"""
	policy = Policy(policy)
	if policy == Policy.EICIC_LITE:
		bias = np.where(scenario.is_macro, 1.0, db_to_linear(settings.cre_bias_db))
		return associate(scenario.max_powers, tensor.gains[:, :, scenario.reference_carrier.id], bias)
	if policy != Policy.BPS or profile is None:
		return np.asarray(scenario.serving)
	radiated = profile.radiated(scenario)
	received = np.einsum("lc,lzc->lz", radiated, tensor.gains)
	return np.where(received.max(axis=0) > 0, received.argmax(axis=0), scenario.serving)


def _mean(values):
	return float(np.mean(values)) if len(values) else 0.0


def _jain_or_none(values):
	if len(values) == 0 or not np.any(np.asarray(values) > 0):
		return None
	return jain_index(values)


def run_simulation(scenario, tensor, policy, duration, seed, config=None, params=None, settings=None, model=None):
	"""Simulate `duration` seconds of downlink traffic under `policy`.

	BPS replays the game every update period (only when the UE drop changed) and
	re-associates tiles under the deployed powers; the fixed policies keep one profile
	and the max-power association. EicicLite transmits at maximum power, biases
	association towards micros and mutes macros on every `abs_period`-th TTI.
	"""
	policy = Policy(policy)
	config = config or ScenarioConfig.from_dict()
	params = params or GameParams.from_config(config)
	settings = settings or SimulationSettings.from_config(config)
	model = model or PropagationModel.from_config(config)
	table = settings.rate_table or RateTable.from_config(config)
	if duration < settings.update_period_s - 1e-12:
		throw(f"Duration {duration} s is shorter than one update period", exc=ValidationError)

	tod = TimeOfDay(scenario.time_of_day)
	tti = settings.tti_s
	total_ttis = int(round(duration / tti))
	period_ttis = max(1, int(round(settings.update_period_s / tti)))
	tau = settings.pf_time_constant
	serving = policy_association(scenario, tensor, policy, settings)
	edge = edge_tiles(scenario, tensor, serving, settings.edge_threshold_db)
	kinds = np.array([loc.kind.value for loc in scenario.locations])
	statics = np.array([settings.energy.static(loc.kind) for loc in scenario.locations])
	slopes = np.array([settings.energy.slope(loc.kind) for loc in scenario.locations])
	location_area = np.array([AreaType(scenario.teams[loc.team_id].area_type).value for loc in scenario.locations])
	muted_mask = scenario.is_macro if policy == Policy.EICIC_LITE and settings.abs_period else None
	carrier_order = scenario.carrier_order
	rb_counts = {c.id: c.rb_count for c in scenario.carriers}

	requests = []
	remaining = np.zeros(0)
	average = np.zeros(0)
	delivered = np.zeros(0)
	end_time = np.zeros(0)
	status = []
	location_bits = np.zeros(len(scenario.locations))
	location_rbs = np.zeros(len(scenario.locations), dtype=int)
	location_energy = np.zeros(len(scenario.locations))
	capacity = 0.0
	strategy_sum = np.zeros((len(scenario.locations), len(scenario.carriers)))
	cache = {}
	log = logger(__name__)

	for period in range(math.ceil(total_ttis / period_ttis)):
		first, last = period * period_ttis, min(total_ttis, (period + 1) * period_ttis)
		if settings.redrop_ues and period > 0:
			scenario = populate_ues(scenario, tod, int(rng(seed, "redrop", period).integers(2**31)))
		profile = _policy_profile(scenario, tensor, policy, params, cache)
		if policy == Policy.BPS:
			serving = policy_association(scenario, tensor, policy, settings, profile)
		strategy_sum += profile.fractions * (last - first)
		radiated = profile.radiated(scenario).sum(axis=1)

		fading = None
		if model.fast_fading_std_db > 0:
			fading = fast_fading_draws(model, (len(scenario.tiles), len(scenario.carriers)), seed, period)
		rates = {False: table.bits_per_rb(tile_sinr(scenario, tensor, profile, params, serving=serving))}
		moving = {False: rates[False]}
		if fading is not None:
			moving[False] = table.bits_per_rb(tile_sinr(scenario, tensor, profile, params, serving=serving, fading_db=fading))
		if muted_mask is not None:
			rates[True] = table.bits_per_rb(tile_sinr(scenario, tensor, profile, params, serving=serving, muted=muted_mask))
			moving[True] = rates[True]
			if fading is not None:
				moving[True] = table.bits_per_rb(
					tile_sinr(scenario, tensor, profile, params, serving=serving, muted=muted_mask, fading_db=fading)
				)

		new = generate_traffic(
			scenario, duration=(last - first) * tti, seed=seed, start=first * tti, stream=period, first_id=len(requests)
		)
		requests.extend(new)
		remaining = np.concatenate([remaining, [r.size_bits for r in new]])
		average = np.concatenate([average, np.zeros(len(new))])
		delivered = np.concatenate([delivered, np.zeros(len(new))])
		end_time = np.concatenate([end_time, np.full(len(new), np.nan)])
		status.extend(["pending"] * len(new))
		tiles = np.array([r.tile for r in requests], dtype=int)
		arrivals = np.array([r.arrival_s for r in requests])
		deadlines = arrivals + np.array([r.deadline_s for r in requests])
		vehicular = np.array([r.vehicular for r in requests], dtype=bool)
		owners = serving[tiles] if len(tiles) else np.zeros(0, dtype=int)

		for step in range(first, last):
			now = step * tti
			muted = muted_mask is not None and step % settings.abs_period == 0
			for i in np.flatnonzero(arrivals <= now + 1e-12):
				if status[i] == "pending":
					status[i] = "active"
			for i in np.flatnonzero(deadlines <= now + 1e-12):
				if status[i] == "active":
					status[i] = "failed"
					end_time[i] = deadlines[i]

			active = np.array([i for i, s in enumerate(status) if s == "active"], dtype=int)
			given = np.zeros(len(requests))
			on = radiated * ~muted_mask if muted else radiated
			location_energy += (statics + slopes * on) * tti
			if not active.size:
				average *= 1.0 - 1.0 / tau
				continue

			table_now, moving_now = rates[muted], moving[muted]
			for loc in np.unique(owners[active]):
				if muted and muted_mask[loc]:
					continue
				mine = active[owners[active] == loc]
				for c in carrier_order:
					per_rb = np.where(vehicular[mine], moving_now[tiles[mine], c], table_now[tiles[mine], c])
					rbs = pf_schedule(
						per_rb,
						average[mine] + given[mine] / tau,
						rb_counts[c],
						demands=remaining[mine] - given[mine],
						time_constant=tau,
						epsilon=settings.pf_epsilon,
					)
					bits = np.minimum(rbs * per_rb, remaining[mine] - given[mine])
					given[mine] += bits
					capacity += float(np.dot(rbs, per_rb))
					location_rbs[loc] += int(rbs.sum())
					location_bits[loc] += float(bits.sum())

			remaining -= given
			delivered += given
			average = (1.0 - 1.0 / tau) * average + given / tau
			for i in active[remaining[active] <= 1e-9]:
				status[i] = "completed"
				end_time[i] = now + tti

		log.debug(f"{policy.value} period {period}: {sum(s == 'active' for s in status)} active downloads")

	horizon = total_ttis * tti
	report = MetricsReport(policy.value, tod.value, horizon)
	report.requests = len(requests)
	report.completed = status.count("completed")
	report.failed = status.count("failed")
	report.in_flight = report.requests - report.completed - report.failed
	report.requested_bits = float(sum(r.size_bits for r in requests))
	report.delivered_bits = float(delivered.sum())
	report.capacity_bits = capacity
	report.mean_strategy = strategy_sum / max(1, total_ttis)
	for kind in KINDS:
		mask = kinds == kind
		report.bits_by_kind[kind] = float(location_bits[mask].sum())
		report.energy_by_kind[kind] = float(location_energy[mask].sum())
		report.rbs_by_kind[kind] = int(location_rbs[mask].sum())
	for area in np.unique(location_area):
		mask = location_area == area
		report.area_bits[str(area)] = float(location_bits[mask].sum())
		report.area_energy[str(area)] = float(location_energy[mask].sum())

	contents = {}
	per_ue = {}
	for i, request in enumerate(requests):
		contents.setdefault(request.kind, []).append(status[i] == "failed")
		if status[i] == "pending":
			continue
		finish = end_time[i] if not np.isnan(end_time[i]) else horizon
		active_time = max(finish - request.arrival_s, tti)
		rate = delivered[i] / active_time
		bits, seconds, _ = per_ue.get((request.tile, request.ue), (0.0, 0.0, request.vehicular))
		per_ue[(request.tile, request.ue)] = (bits + delivered[i], seconds + active_time, request.vehicular)
		report.ue_rows.append(
			{
				"request": request.id,
				"tile": request.tile,
				"ue": request.ue,
				"area_type": AreaType(scenario.tiles[request.tile].area_type).value,
				"content": request.kind,
				"mobility": "vehicular" if request.vehicular else "pedestrian",
				"edge": bool(edge[request.tile]),
				"status": status[i],
				"throughput_bps": rate,
			}
		)
	report.failed_by_content = {kind: float(np.mean(flags)) for kind, flags in contents.items()}
	for (tile, ue), (bits, seconds, in_vehicle) in sorted(per_ue.items()):
		report.ue_summary.append(
			{
				"tile": tile,
				"ue": ue,
				"area_type": AreaType(scenario.tiles[tile].area_type).value,
				"mobility": "vehicular" if in_vehicle else "pedestrian",
				"edge": bool(edge[tile]),
				"throughput_bps": bits / seconds,
			}
		)
	rows = report.ue_summary
	report.mean_ue_throughput = _mean([r["throughput_bps"] for r in rows])
	report.jain_inner = _jain_or_none([r["throughput_bps"] for r in rows if not r["edge"]])
	report.jain_edge = _jain_or_none([r["throughput_bps"] for r in rows if r["edge"]])
	for area in sorted({r["area_type"] for r in rows}):
		report.area_throughput[area] = _mean([r["throughput_bps"] for r in rows if r["area_type"] == area])
	for mobility in ("pedestrian", "vehicular"):
		report.mobility_throughput[mobility] = _mean([r["throughput_bps"] for r in rows if r["mobility"] == mobility])

	log.info(
		f"{policy.value}: {report.requests} requests, {report.completed} completed, {report.failed} failed, "
		f"demand met {report.demand_met:.3f}, energy {report.energy_j:.1f} J"
	)
	return report


def _policy_profile(scenario, tensor, policy, params, cache):
	if policy == Policy.MIN_POWER:
		return min_power_profile(scenario)
	if policy in (Policy.MAX_POWER, Policy.EICIC_LITE):
		return max_power_profile(scenario)
	key = tuple(scenario.ue_counts.tolist())
	if key not in cache:
		cache[key] = run_multi_carrier_game(scenario, tensor, params).profile
	return cache[key]


@dataclass(frozen=True)
class SignTest:
	metric: str
	wins: int
	losses: int
	ties: int
	p_value: float


def sign_test(metric, first, second):
	"""One-sided paired sign test that `first` beats `second`; ties are dropped."""
	pairs = list(zip(first, second, strict=True))
	wins = sum(1 for a, b in pairs if a > b)
	losses = sum(1 for a, b in pairs if a < b)
	p_value = binomtest(wins, wins + losses, 0.5, alternative="greater").pvalue if wins + losses else 1.0
	return SignTest(metric, wins, losses, len(pairs) - wins - losses, float(p_value))


def compare_policies(reports, challenger=Policy.BPS, baseline=Policy.EICIC_LITE):
	"""Sign tests over paired runs; `reports` is a list of {policy: MetricsReport} per seed."""
	micro = PoaKind.MICRO.value
	first = [run[Policy(challenger).value] for run in reports]
	second = [run[Policy(baseline).value] for run in reports]
	return [
		sign_test(
			"micro_energy_efficiency_bpj",
			[r.energy_efficiency(micro) for r in first],
			[r.energy_efficiency(micro) for r in second],
		),
		sign_test("mean_ue_throughput_bps", [r.mean_ue_throughput for r in first], [r.mean_ue_throughput for r in second]),
	]
