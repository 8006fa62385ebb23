"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2,
NumericalContractError -> 3, SolverError (and subclasses) -> 4.
"""

__all__ = [
    "ConfigError",
    "NumericalContractError",
    "SolverError",
    "SingularSystemError",
    "DegenerateSteadyStateError",
    "SystemSizeError",
]


class ConfigError(Exception):
    """Malformed or inconsistent run configuration."""


class NumericalContractError(RuntimeError):
    """A numerical result violated a guaranteed bound (e.g. eigensystem
    residual); indicates a broken invariant, not bad user input."""


class SolverError(RuntimeError):
    """A linear or steady-state solve could not produce a valid answer."""


class SingularSystemError(SolverError):
    """The response system is singular (every decay rate is zero)."""


class DegenerateSteadyStateError(SolverError):
    """The Lindblad generator has a multi-dimensional null space, so no
    unique steady state exists."""


class SystemSizeError(ValueError):
    """The requested dense solve exceeds the supported system size."""
