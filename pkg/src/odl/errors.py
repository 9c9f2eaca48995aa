"""Exception hierarchy.

Everything raised deliberately by the library derives from :class:`OdlError`.
:class:`ConfigError` and its subclasses map to CLI exit code 1, any other
:class:`OdlError` to exit code 2.
"""


class OdlError(Exception):
    """Base class for library errors."""


class ConfigError(OdlError, ValueError):
    """Invalid input, parameters or configuration."""

    def __init__(self, message, field=None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class SimulationError(OdlError, RuntimeError):
    """Failure while a simulation is running."""


# core engine
class EmptyPopulation(ConfigError):
    pass


class InvariantViolation(ConfigError):
    def __init__(self, message, agent=None):
        self.agent = agent
        if agent is not None:
            message = f"agent {agent}: {message}"
        super().__init__(message)


class OutOfSpace(InvariantViolation):
    pass


# forces / models
class InvalidUncertainty(InvariantViolation):
    pass


class NonPositiveVariance(InvariantViolation):
    pass


class LatitudeOrder(InvariantViolation):
    pass


class WeightMismatch(ConfigError):
    pass


class MultipleSenders(ConfigError):
    pass


class SenderCountNotTwo(ConfigError):
    pass


class IndividualBundle(ConfigError):
    pass


class DegenerateErrors(ConfigError):
    pass


# selection / topology
class TooFewAgents(ConfigError):
    pass


class InvalidParams(ConfigError):
    pass


# macro classification / estimation
class EmptyInput(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class DegenerateDenominator(ConfigError):
    pass


class IdenticalSources(ConfigError):
    pass


class InsufficientData(ConfigError):
    pass


class ZeroVariance(ConfigError):
    pass
