"""
Exception hierarchy for the laboratory

Every error carries the process exit code the command line reports for it.
"""

from typing import Optional


class MaassLabError(Exception):
    """Base class for all laboratory errors"""

    exit_code = 1


class UsageError(MaassLabError):
    """Invalid command line or configuration"""

    exit_code = 2


class DomainError(MaassLabError, ValueError):
    """Argument outside the domain of an operation"""


class TransitionZoneError(DomainError):
    """Asymptotic expansion requested inside the turning-point zone"""


class HeightOutOfRangeError(DomainError):
    """Horocycle height outside the admissible range"""


class OddFormError(DomainError):
    """Only even forms are supported"""


class AccuracyNotAttainedError(MaassLabError):
    """A numerical refinement did not reach its tolerance"""


class QuadratureStallError(AccuracyNotAttainedError):
    """Adaptive quadrature stopped before meeting its tolerance"""


class MissingPrimeError(MaassLabError, KeyError):
    """A prime below the requested extent has no eigenvalue"""

    def __init__(self, prime: int):
        super().__init__(prime)
        self.prime = prime

    def __str__(self) -> str:
        return f"missing Hecke eigenvalue for prime {self.prime}"


class TableExtentError(MaassLabError):
    """Hecke table does not reach the index an evaluation needs"""

    def __init__(self, needed: int, extent: int):
        super().__init__(f"coefficient index {needed} needed, table extent is {extent}")
        self.needed = needed
        self.extent = extent


class CoefficientParseError(MaassLabError):
    """Malformed coefficient file"""

    def __init__(self, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


class InvariantViolationError(MaassLabError):
    """A hard invariant of a loaded or computed object failed"""


class NoRootInIntervalError(MaassLabError):
    """Spectral search found no eigenvalue in the interval"""


class IllConditionedSystemError(MaassLabError):
    """Collocation system too ill-conditioned to trust"""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class SpacingTooCoarseError(MaassLabError):
    """Sampling grid does not resolve the oscillation scale"""


class CertificateSoundnessError(MaassLabError):
    """A certified lower bound exceeded the direct count"""


class AssumptionRequiredError(MaassLabError):
    """Operation depends on a hypothesis the caller did not declare"""
