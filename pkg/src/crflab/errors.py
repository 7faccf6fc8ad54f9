"""Shared exception hierarchy for crflab.

Every error carries the CLI exit code it maps to so commands can translate
failures without a lookup table.
"""

from __future__ import annotations


class CRFError(Exception):
    """Base exception for all crflab errors."""

    exit_code: int = 1


class ConfigError(CRFError):
    """Invalid run configuration (bad value, unknown key, unreadable file)."""

    exit_code = 2


class PresetValidationError(ConfigError):
    """Raised when a builtin or user preset YAML file fails validation."""


class FieldError(CRFError):
    """Base for invalid grid fields."""

    exit_code = 4


class NonFiniteFieldError(FieldError):
    """A field holds NaN or Inf samples where finite values are required."""


class HermiticityError(FieldError):
    """A (1,1)-form coefficient matrix is not Hermitian within tolerance."""


class DegenerateMetricError(FieldError):
    """A metric is singular or too ill-conditioned to invert."""


class PositivityLossError(FieldError):
    """A form expected to be positive definite has a non-positive eigenvalue."""

    def __init__(
        self,
        message: str,
        index: tuple[int, ...] | None = None,
        eigenvalue: float | None = None,
    ) -> None:
        super().__init__(message)
        self.index = index
        self.eigenvalue = eigenvalue


class ScenarioError(CRFError):
    """Background data violates a construction invariant."""

    exit_code = 2

    def __init__(self, message: str, kappa_max: float | None = None) -> None:
        super().__init__(message)
        self.kappa_max = kappa_max


class FlowBreakdownError(CRFError):
    """The time stepper could not advance (step size underflow)."""

    exit_code = 4


class SolverError(CRFError):
    """The Kähler-Einstein Newton solver failed to converge."""

    exit_code = 4

    def __init__(
        self, message: str, residual_history: list[float] | None = None
    ) -> None:
        super().__init__(message)
        self.residual_history = residual_history or []


class LemmaViolationError(CRFError):
    """A lemma check raised a violation flag."""

    exit_code = 3
