"""Shared parameter types and error classes for the interaction half-plane.

Every solver in this package works on the half-plane whose coordinates are
a one-body field strength ``x`` (space-like) and a two-body interaction
strength ``t`` (time-like, ``t >= 0``).  Spin-glass operations carry one
extra parameter, the external field combination ``beta_h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its target residual."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not certify the requested accuracy."""

    def __init__(self, message: str, error_estimate: float | None = None):
        super().__init__(message)
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class PlanePoint:
    """Point (x, t) of the half-plane, with t >= 0 and both coordinates finite."""

    x: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.t)):
            raise ValueError(f"plane point must be finite, got x={self.x}, t={self.t}")
        if self.t < 0:
            raise ValueError(f"interaction strength t must be >= 0, got t={self.t}")


@dataclass(frozen=True)
class SkParams:
    """Spin-glass parameters: cavity variance x >= 0, coupling t >= 0, field beta_h."""

    x: float
    t: float
    beta_h: float = 0.0

    def __post_init__(self):
        for name in ("x", "t", "beta_h"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.x < 0:
            raise ValueError(f"cavity variance x must be >= 0, got {self.x}")
        if self.t < 0:
            raise ValueError(f"coupling strength t must be >= 0, got {self.t}")
