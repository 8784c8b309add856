"""Exception types raised across the package."""


class HybridEAError(Exception):
    """Base class for package errors."""


class DomainError(HybridEAError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidPopulationError(DomainError):
    pass


class ConfigError(DomainError):
    pass


class DegenerateDesignError(DomainError):
    """A design probability that must be positive is zero."""


class UnsupportedConfigurationError(HybridEAError):
    """An operator family cannot be enumerated exactly."""


class OracleOverflowError(HybridEAError):
    """The brute-force search space exceeds the configured limit."""


class UnreachableTargetError(HybridEAError):
    """Some state of a chain never reaches the target set."""


class StageError(HybridEAError, RuntimeError):
    """A problem hook failed inside a generation.

    Carries the stage name (``recombination``, ``mutation``, ``selection``)
    and the offspring position that was being produced.
    """

    def __init__(self, stage, position, cause):
        self.stage = stage
        self.position = position
        super().__init__(f"{stage} stage failed at position {position}: {cause!r}")
