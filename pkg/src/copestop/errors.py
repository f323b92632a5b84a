"""Exception hierarchy shared by every copestop module."""

from typing import Any, List, Optional, Sequence, Tuple


class CopeStopError(Exception):
    """Base class for all copestop failures"""


class ParameterDomainError(CopeStopError, ValueError):
    """A rate, probability or constant lies outside its mathematical domain"""


class UnsupportedGainError(CopeStopError):
    """The closed-form threshold only exists for linear gain functions"""


class NumericFailureError(CopeStopError):
    """Quadrature or fixed-point iteration did not reach its tolerance"""

    def __init__(
        self,
        message: str,
        achieved: Optional[float] = None,
        iterations: Optional[int] = None,
    ):
        super().__init__(message)
        self.achieved = achieved
        self.iterations = iterations


class ClockRegressionError(CopeStopError):
    """An event was recorded before the counter's start time"""


class UndefinedElapsedError(CopeStopError):
    """A rate was requested over a non-positive elapsed interval"""


class TopologyError(CopeStopError):
    """Unknown neighbour, or a topology that cannot be built"""


class UnroutableError(CopeStopError):
    """Greedy geographic forwarding found no strictly closer neighbour"""


class ConsistencyError(CopeStopError):
    """A packet id could not be resolved"""


class ContractError(CopeStopError):
    """A caller violated an operation precondition"""


class MisdeliveryError(CopeStopError):
    """A coded packet reached a node that is not one of its next hops"""


class DecodeFailureError(CopeStopError):
    """The receiver lacks natives needed to cancel the XOR"""

    def __init__(self, message: str, missing: Sequence[int] = ()):
        super().__init__(message)
        self.missing = missing


class OracleScopeError(CopeStopError):
    """The exhaustive search was asked for more than it is allowed to enumerate"""


class ConfigValidationError(CopeStopError, ValueError):
    """One or more configuration keys are invalid"""

    def __init__(self, issues: List[Tuple[str, str]]):
        self.issues = issues
        lines = [f"  {key}: {reason}" for key, reason in issues]
        super().__init__("Invalid configuration:\n" + "\n".join(lines))


class MatrixCellError(CopeStopError):
    """A single scenario-matrix cell failed"""

    def __init__(self, cell: Any, cause: BaseException):
        self.cell = cell
        self.cause = cause
        super().__init__(f"Cell {cell} failed: {cause}")


class MatrixRunError(CopeStopError):
    """Some cells of a scenario matrix failed; completed records are kept"""

    def __init__(self, records: list, failures: List[MatrixCellError]):
        self.records = records
        self.failures = failures
        super().__init__(f"{len(failures)} of {len(records) + len(failures)} cells failed")
