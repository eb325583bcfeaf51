"""Exception types shared across the package."""

from __future__ import annotations


class ZenopathError(Exception):
    """Base class for all package-specific failures."""


class HermiticityError(ZenopathError):
    """Input matrix violates the Hermitian symmetry contract."""


class AmbiguousEigenspaceError(ZenopathError):
    """No unambiguous eigenvalue cluster could be selected or tracked."""


class GapClosedError(ZenopathError):
    """The tracked spectral gap fell below the usable threshold."""


class QuadratureError(ZenopathError):
    """Adaptive quadrature failed to converge within the refinement budget."""

    def __init__(self, message: str, partial: float | None = None):
        super().__init__(message)
        self.partial = partial


class StepUnderflowError(ZenopathError):
    """The ODE step controller could not meet the tolerance at any step size."""


class FilterError(ZenopathError):
    """Window synthesis or filter application violated its contract."""
