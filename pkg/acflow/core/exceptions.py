"""
Exception hierarchy for acflow.
Every failure mode of the solver maps to one class; the CLI maps them to exit codes.
"""

from typing import Optional


class AcflowError(Exception):
    """Base class for all acflow errors."""


class InvalidParameterError(AcflowError, ValueError):
    """A parameter is outside its admissible range."""


class ConfigError(AcflowError):
    """Run configuration failed validation."""

    def __init__(self, message: str, field_path: str = ""):
        self.field_path = field_path
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class MeshGenerationError(AcflowError):
    """Mesh generation failed (degenerate geometry)."""


class MeshParseError(AcflowError):
    """Malformed mesh file."""

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class MeshValidationError(AcflowError):
    """Mesh connectivity violates an invariant."""


class SpaceMismatchError(AcflowError):
    """Spaces or fields live on incompatible meshes or degrees."""


class NumericalError(AcflowError):
    """Base class for failures of the numerical pipeline."""


class FactorizationError(NumericalError):
    """Sparse factorization failed."""

    def __init__(self, message: str, pivot_info: Optional[dict] = None):
        self.pivot_info = pivot_info or {}
        details = ", ".join(f"{key}={value}" for key, value in self.pivot_info.items())
        super().__init__(f"{message} ({details})" if details else message)


class PointNotFoundError(NumericalError):
    """Evaluation point lies outside the mesh."""


class SourceEvaluationError(NumericalError):
    """A user source term could not be evaluated."""


class StepFailedError(NumericalError):
    """A linear solve inside a time step failed."""


class InvalidStateError(NumericalError):
    """Inputs contain NaN or violate a state invariant."""


class MaterialLawError(NumericalError):
    """Material reconstruction produced an inadmissible value."""


class NonpositiveDensityError(NumericalError):
    """Velocity recovery met a nonpositive density."""


class StepError(NumericalError):
    """A sub-step of the time marching failed; carries step index and stage."""

    def __init__(self, step_index: int, stage: str, cause: Exception):
        self.step_index = step_index
        self.stage = stage
        self.cause = cause
        super().__init__(f"step {step_index} failed in stage '{stage}': {cause}")
