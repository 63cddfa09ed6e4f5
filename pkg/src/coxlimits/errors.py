"""Exception hierarchy shared across the package.

``DatumError`` signals bad user input (CLI exit code 1 territory), while
``ComputationError`` subclasses signal that a budgeted numerical procedure
could not finish (CLI exit code 2).
"""


class CoxeterLimitsError(Exception):
    pass


class DatumError(CoxeterLimitsError, ValueError):
    """Invalid datum file or bond table."""


class ComputationError(CoxeterLimitsError):
    """A budgeted computation gave up before reaching its goal."""


class SliceLimitError(ComputationError):
    """Root enumeration exceeded the configured depth or size cap."""


class SpectrumError(ComputationError):
    """Eigenvalue pattern too close to a classification boundary to decide."""


class CanonicalBudgetError(ComputationError):
    """Canonical-generator closure did not stabilize within its budget."""


class ReductionError(ComputationError):
    """Fundamental-domain descent did not terminate within max_iter."""


class RankCapError(ComputationError):
    """Exhaustive subset enumeration refused: rank above the configured cap."""
