# this_file: src/robmetro/errors.py

"""
Exception hierarchy for robmetro.

Every error raised by the library derives from RobmetroError. The CLI maps
the three families below onto its exit codes:

- input problems (codes, domains, size caps) -> 2
- numerical invariant violations -> 3
- estimation failures -> 4
"""

from pathlib import Path


class RobmetroError(Exception):
    """Base class for all robmetro errors."""


class CodeError(RobmetroError, ValueError):
    """A binary linear code could not be built from its input."""


class RankDeficiencyError(CodeError):
    """Generator rows are linearly dependent over GF(2)."""


class CodeFileError(CodeError):
    """A code file is malformed.

    Attributes:
        path: The offending file, if known
        line: 1-based line number of the problem, if known
    """

    def __init__(self, message: str, path: Path | None = None, line: int | None = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class EnumeratorError(RobmetroError, ValueError):
    """A weight enumerator is not the enumerator of any linear code."""


class DomainError(RobmetroError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class SizeCapError(RobmetroError, ValueError):
    """A requested object exceeds the dense-simulation size cap."""


class DimensionError(RobmetroError, ValueError):
    """Operands have incompatible matrix dimensions."""


class ChannelKindError(RobmetroError, ValueError):
    """A generator was asked to act for a channel of another kind."""


class InvariantViolation(RobmetroError, ArithmeticError):
    """A numerical invariant (trace, Hermiticity, positivity) drifted out of tolerance."""


class StepSizeError(InvariantViolation):
    """The integrator step is too large for the generator being integrated."""


class DataFileError(RobmetroError, ValueError):
    """A trajectory, manifest or simulation file could not be read."""


class EstimationFailed(RobmetroError, RuntimeError):
    """The signal carries no recoverable oscillation, or the fit did not converge."""


USAGE_ERRORS: tuple[type[Exception], ...] = (
    CodeError,
    EnumeratorError,
    DomainError,
    SizeCapError,
    DimensionError,
    ChannelKindError,
    DataFileError,
)
