"""Command-line entry point: ``hetnet-power-setting <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error, 3 IO error.
"""

import argparse
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

from hetnet_power_setting import __version__, hooks
from hetnet_power_setting.config import load_config
from hetnet_power_setting.csv_io import (
	RunManifest,
	read_scenario,
	write_manifest,
	write_mean_strategy,
	write_metrics,
	write_ne_report,
	write_prices,
	write_scenario,
	write_sign_tests,
	write_strategy,
	write_trace,
	write_ue_throughput,
	write_verify_report,
)
from hetnet_power_setting.exceptions import PowerSettingError, VerificationFailed
from hetnet_power_setting.power_setting.analysis.analysis import anti_coordination_game, enumerate_pure_ne
from hetnet_power_setting.power_setting.game.game import (
	GameOutcome,
	GameParams,
	default_prices,
	max_power_profile,
	min_power_profile,
	run_multi_carrier_game,
	run_single_carrier_game,
	served_tiles,
)
from hetnet_power_setting.power_setting.propagation.propagation import PropagationModel, build_attenuation_tensor
from hetnet_power_setting.power_setting.scenario.scenario import (
	TimeOfDay,
	build_scenario,
	populate_ues,
	validate_scenario,
)
from hetnet_power_setting.power_setting.simulate.simulate import Policy, compare_policies, run_simulation
from hetnet_power_setting.utils import get_attr, log_error, logger, throw

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_IO = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
POLICIES = {p.value.lower(): p for p in Policy}


def _manifest(args, argv, **extra):
	return RunManifest(
		command=args.command,
		config=str(args.config or ("" if hasattr(args, "scenario") else "desk")),
		seed=args.seed,
		out_dir=str(args.out),
		timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
		version=__version__,
		arguments=" ".join(argv),
		**extra,
	)


def _game_params(args, config):
	return GameParams.from_config(
		config,
		alpha=args.alpha,
		beta=args.beta,
		delta=args.delta,
		k=args.k,
		max_rounds=args.max_rounds,
	)


def _carriers(value):
	if value is None:
		return None
	try:
		return [int(c) for c in str(value).split(",") if c.strip()]
	except ValueError:
		throw(f"--carriers takes comma-separated carrier ids, got {value!r}", exc=PowerSettingError)


def _scenario_for_seed(config, seed, time_of_day):
	scenario = build_scenario(config, seed, time_of_day)
	scenario = populate_ues(scenario, time_of_day, seed)
	tensor = build_attenuation_tensor(scenario, PropagationModel.from_config(config))
	return scenario, tensor


def cmd_generate(args, argv):
	"""Build, populate and export a scenario."""
	config = load_config(args.config)
	tod = args.time_of_day or TimeOfDay.AFTERNOON
	scenario, tensor = _scenario_for_seed(config, args.seed, tod)
	for violation in validate_scenario(scenario):
		logger(__name__).warning(f"{violation.entity}: {violation.invariant} {violation.detail}".strip())
	write_scenario(scenario, tensor, config, args.out)
	write_manifest(_manifest(args, argv), args.out)
	return EXIT_OK


def cmd_play(args, argv):
	"""Run BPS (or emit a fixed profile) on a scenario directory."""
	scenario, tensor, config = read_scenario(args.scenario)
	params = _game_params(args, config)
	carriers = _carriers(args.carriers)
	out = Path(args.out)

	if args.policy in ("min", "max"):
		profile = min_power_profile(scenario) if args.policy == "min" else max_power_profile(scenario)
		prices = default_prices(scenario, tensor, params, carriers=carriers)
		order = [c for c in scenario.carrier_order if carriers is None or c in carriers]
		served = served_tiles(scenario, tensor, profile, scenario.reference_carrier.id, params)
		outcome = GameOutcome(profile, [], 0, 0, True, 0, 0, prices, order, served)
	elif carriers is not None and len(carriers) == 1:
		outcome = run_single_carrier_game(scenario, tensor, carriers[0], params)
	else:
		outcome = run_multi_carrier_game(scenario, tensor, params, carriers=carriers)

	if not outcome.converged:
		log_error("Game did not converge; writing the last profile", title="play")
	write_strategy(outcome.profile, scenario, out / "strategy.csv")
	write_trace(outcome.trace, out / "trace.csv")
	write_prices(outcome.prices, out / "prices.csv")
	write_manifest(_manifest(args, argv, converged=outcome.converged), out)
	logger(__name__).info(
		f"play: {outcome.iterations} best replies, {outcome.messages} broadcasts, "
		f"{outcome.profile.total_watts(scenario):.3f} W radiated"
	)
	return EXIT_OK


def _paired_runs(scenarios, args, config):
	runs = []
	for seed, (scenario, tensor) in scenarios:
		runs.append(
			{
				policy.value: run_simulation(scenario, tensor, policy, args.duration_s, seed, config=config)
				for policy in (Policy.BPS, Policy.EICIC_LITE)
			}
		)
	return runs


def _write_comparison(runs, out):
	results = compare_policies(runs)
	for result in results:
		logger(__name__).info(
			f"{result.metric}: BPS wins {result.wins}, loses {result.losses}, ties {result.ties}, p={result.p_value:.4g}"
		)
	write_metrics([report for run in runs for report in run.values()], Path(out) / "compare_metrics.csv")
	write_sign_tests(results, Path(out) / "sign_tests.csv")
	return results


def cmd_simulate(args, argv):
	"""Simulate one or every policy on a scenario directory."""
	scenario, tensor, config = read_scenario(args.scenario)
	if args.time_of_day and TimeOfDay(args.time_of_day) != scenario.time_of_day:
		scenario = populate_ues(scenario, args.time_of_day, args.seed)
	out = Path(args.out)
	policies = list(Policy) if args.policy == "all" else [POLICIES[args.policy.lower()]]
	reports = [run_simulation(scenario, tensor, policy, args.duration_s, args.seed, config=config) for policy in policies]
	write_metrics(reports, out / "metrics.csv")
	write_ue_throughput(reports, out / "ue_throughput.csv")
	write_mean_strategy(reports, scenario, out / "mean_strategy.csv")
	if args.compare:
		seeds = range(args.seed, args.seed + args.runs)
		_write_comparison(_paired_runs(((s, (scenario, tensor)) for s in seeds), args, config), out)
	write_manifest(_manifest(args, argv), out)
	return EXIT_OK


def cmd_compare(args, argv):
	"""BPS against EicicLite over fresh scenarios, one per seed, with paired sign tests."""
	config = load_config(args.config)
	tod = args.time_of_day or TimeOfDay.MORNING
	seeds = range(args.seed, args.seed + args.runs)
	runs = _paired_runs(((s, _scenario_for_seed(config, s, tod)) for s in seeds), args, config)
	_write_comparison(runs, args.out)
	write_manifest(_manifest(args, argv), args.out)
	return EXIT_OK


def cmd_verify(args, argv):
	"""Run verification suites; exit 1 when any asserted check fails."""
	names = list(hooks.verify_suites) if args.suite == "all" else [args.suite]
	for name in names:
		if name not in hooks.verify_suites:
			throw(f"Unknown verification suite {name}; choose from {', '.join(hooks.verify_suites)}", exc=PowerSettingError)
	out = Path(args.out)
	reports = [get_attr(hooks.verify_suites[name])(seed=args.seed, samples=args.samples) for name in names]
	write_verify_report(reports, out / "verify.csv")
	if "ne" in names:
		scenario, tensor, params, prices = anti_coordination_game()
		outcome = run_single_carrier_game(scenario, tensor, 0, params, prices=prices)
		write_ne_report(enumerate_pure_ne(scenario, tensor, params, prices=prices, bps_outcome=outcome), scenario, out / "ne")
	write_manifest(_manifest(args, argv), out)

	failed = [r.suite for r in reports if not r.passed]
	for report in reports:
		for row in report.rows:
			level = logging.INFO if row["informational"] or not row["failures"] else logging.ERROR
			logger(__name__).log(level, f"{row['suite']}/{row['check']}: {row['failures']} of {row['checked']} failed")
	if failed:
		throw(f"Verification failed: {', '.join(failed)}", exc=VerificationFailed)
	return EXIT_OK


def build_parser():
	parser = argparse.ArgumentParser(prog="hetnet-power-setting", description=__doc__.splitlines()[0])
	parser.add_argument("--version", action="version", version=__version__)
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--config", default=None, help="configuration file or built-in name (desk, city, toy)")
	common.add_argument("--seed", type=int, default=0)
	common.add_argument("--out", default="out", help="output directory")
	common.add_argument("--threads", type=int, default=1, help="worker cap; commands run single-process")
	common.add_argument("--time-of-day", choices=[t.value for t in TimeOfDay], default=None)
	common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

	game = argparse.ArgumentParser(add_help=False)
	game.add_argument("--alpha", type=float, default=None)
	game.add_argument("--beta", type=float, default=None)
	game.add_argument("--delta", type=float, default=None)
	game.add_argument("--k", type=float, default=None)
	game.add_argument("--max-rounds", type=int, default=None)

	commands = parser.add_subparsers(dest="command", required=True)
	commands.add_parser("generate", parents=[common], help="build a scenario directory")

	play = commands.add_parser("play", parents=[common, game], help="run the power setting game")
	play.add_argument("scenario", help="scenario directory")
	play.add_argument("--carriers", default=None, help="comma-separated carrier ids")
	play.add_argument("--policy", choices=["bps", "min", "max"], default="bps")

	simulate = commands.add_parser("simulate", parents=[common], help="simulate downlink traffic")
	simulate.add_argument("scenario", help="scenario directory")
	simulate.add_argument("--policy", choices=["all", *POLICIES], type=str.lower, default="all")
	simulate.add_argument("--duration-s", type=float, default=1.0)
	simulate.add_argument("--compare", action="store_true", help="also run BPS against EicicLite over --runs seeds")
	simulate.add_argument("--runs", type=int, default=10)

	verify = commands.add_parser("verify", parents=[common], help="run verification suites")
	verify.add_argument("suite", help=f"one of {', '.join(hooks.verify_suites)} or all")
	verify.add_argument("--samples", type=int, default=None)

	compare = commands.add_parser("compare", parents=[common], help="BPS against EicicLite over many seeds")
	compare.add_argument("--duration-s", type=float, default=1.0)
	compare.add_argument("--runs", type=int, default=10)
	return parser


def main(argv=None):
	argv = list(sys.argv[1:] if argv is None else argv)
	try:
		args = build_parser().parse_args(argv)
	except SystemExit as e:
		return EXIT_OK if e.code == 0 else EXIT_USAGE

	logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)
	log = logger(__name__)
	log.info(f"{args.command} started (seed {args.seed}, out {args.out})")
	try:
		code = get_attr(hooks.commands[args.command])(args, argv)
	except VerificationFailed as e:
		log.error(str(e))
		return EXIT_VERIFICATION
	except OSError as e:
		log.error(f"IO error: {e}")
		return EXIT_IO
	except (PowerSettingError, ValueError, KeyError) as e:
		log.error(str(e))
		return EXIT_USAGE
	log.info(f"{args.command} finished")
	return code


if __name__ == "__main__":
	sys.exit(main())
