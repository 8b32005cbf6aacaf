import importlib
import logging

import numpy as np

from hetnet_power_setting.exceptions import PowerSettingError

APP_LOGGER = "hetnet_power_setting"

# independent random streams derived from one user seed
SEED_STREAMS = {
	"placement": 1,
	"shadowing": 2,
	"population": 3,
	"traffic": 4,
	"fading": 5,
	"redrop": 6,
	"analysis": 7,
}


def logger(module=None):
	"""Package logger, or a child logger for `module`"""
	if not module or module == APP_LOGGER:
		return logging.getLogger(APP_LOGGER)
	if module.startswith(APP_LOGGER + "."):
		return logging.getLogger(module)
	return logging.getLogger(f"{APP_LOGGER}.{module}")


def log_error(message, title="Error"):
	"""Record a handled failure that is reported as data rather than raised."""
	logger().error(f"[{title}] {message}")


def throw(message, exc=PowerSettingError, **kwargs):
	"""Log and raise `exc(message)`."""
	logger().debug(f"raising {exc.__name__}: {message}")
	raise exc(message, **kwargs)


def rng(seed, stream, *extra):
	"""Generator for a named stream of `seed`; `extra` integers split it further."""
	if stream not in SEED_STREAMS:
		throw(f"Unknown random stream {stream}", exc=ValueError)
	entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, SEED_STREAMS[stream], *[int(e) for e in extra]]
	return np.random.default_rng(np.random.SeedSequence(entropy))


def db_to_linear(db):
	return np.power(10.0, np.asarray(db, dtype=float) / 10.0)


def linear_to_db(value):
	return 10.0 * np.log10(np.asarray(value, dtype=float))


def thermal_noise_power(bandwidth_hz, noise_figure_db=9.0):
	"""Noise power in watts: -174 dBm/Hz over `bandwidth_hz` plus the receiver noise figure."""
	dbm = -174.0 + 10.0 * np.log10(bandwidth_hz) + noise_figure_db
	return float(10.0 ** ((dbm - 30.0) / 10.0))


def get_attr(method_string):
	"""Object at a dotted path such as ``package.module.function``."""
	module_name, _, attribute = method_string.rpartition(".")
	if not module_name:
		throw(f"{method_string} is not a dotted path", exc=ValueError)
	return getattr(importlib.import_module(module_name), attribute)
