class PowerSettingError(Exception):
	"""Base class for every error raised by hetnet_power_setting."""


class ValidationError(PowerSettingError):
	pass


class InvalidConfig(ValidationError):
	"""A configuration key is unknown or its value is out of range."""

	def __init__(self, message, key=None):
		super().__init__(message)
		self.key = key


class GeometryError(PowerSettingError):
	"""Micro PoAs could not be placed without overlap."""


class InvalidDistance(ValidationError):
	pass


class EmptyTileSet(ValidationError):
	pass


class NoUsers(PowerSettingError):
	"""A team has no UEs, so its utility weights are undefined."""


class TileNotInTeam(PowerSettingError, IndexError):
	pass


class ZeroInterference(PowerSettingError):
	pass


class DomainError(PowerSettingError, ValueError):
	"""Closed-form expression evaluated outside its real domain."""


class TooLarge(PowerSettingError):
	"""Exhaustive enumeration would exceed the configured joint-profile budget."""


class AllZero(ValidationError):
	pass


class VerificationFailed(PowerSettingError):
	pass
