"""Spectral gap models and gap-power integrals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GapClosedError
from .quadrature import adaptive_simpson

GAP_KINDS = ("analytic-grover", "analytic-qlsp", "numeric-tracked", "constant")

# Step for central differences of Delta when no analytic derivative exists.
DELTA_FD_STEP = 1e-4


@dataclass(frozen=True)
class GapModel:
    """Lower-bound gap function Delta(s) for a tracked eigenvalue branch.

    ``minimizer_hints`` seed quadrature partitions at the gap minimum.
    ``decoupled_branches`` lists eigenvalue curves that are allowed inside
    the isolation window because they provably never couple to the tracked
    eigenspace (constant eigenvectors orthogonal to the reachable states).
    ``omega0`` is the tracked eigenvalue curve itself, when known.
    """

    delta: Callable[[float], float]
    delta_m: float
    kind: str
    delta_prime: Callable[[float], float] | None = None
    minimizer_hints: tuple[float, ...] = ()
    decoupled_branches: tuple[Callable[[float], float], ...] = ()
    omega0: Callable[[float], float] | None = None
    raw_samples: tuple[tuple[float, ...], tuple[float, ...]] | None = None

    def __post_init__(self):
        if self.kind not in GAP_KINDS:
            raise ValueError(f"unknown gap model kind {self.kind!r}")
        if not (self.delta_m > 0):
            raise GapClosedError(f"gap lower bound delta_m = {self.delta_m} must be positive")
        grid = np.linspace(0.0, 1.0, 1025)
        vals = np.array([float(self.delta(s)) for s in grid])
        if vals.min() < self.delta_m - 1e-12:
            raise GapClosedError(
                f"gap function dips to {vals.min():.6e} below delta_m = {self.delta_m:.6e}"
            )

    def delta_prime_at(self, s: float) -> float:
        if self.delta_prime is not None:
            return float(self.delta_prime(s))
        h = DELTA_FD_STEP
        lo, hi = max(0.0, s - h), min(1.0, s + h)
        return (float(self.delta(hi)) - float(self.delta(lo))) / (hi - lo)


def constant_gap(value: float) -> GapModel:
    return GapModel(
        delta=lambda s: value,
        delta_m=value,
        kind="constant",
        delta_prime=lambda s: 0.0,
    )


def gap_integral(gap: GapModel, p: float, rel_tol: float = 1e-8) -> float:
    """Integral of 1/Delta(s)^p over [0, 1] by seeded adaptive quadrature."""
    if p < 0:
        raise ValueError(f"power p = {p} must be nonnegative")
    res = adaptive_simpson(
        lambda s: 1.0 / float(gap.delta(s)) ** p,
        0.0,
        1.0,
        rel_tol=rel_tol,
        seeds=gap.minimizer_hints,
    )
    return res.value


def numeric_gap_model(path, omega0_at_0: float, grid_points: int = 257) -> GapModel:
    """Track the gap of a path numerically and return a safe interpolant.

    The tracked eigenvalue is followed by continuation from s = 0; at each
    grid node the distance from the tracked cluster to the rest of the
    spectrum is recorded. The interpolant is scaled by 0.99 so it stays a
    lower bound between nodes for smoothly varying spectra.
    """
    from .tracking import EigenspaceTracker  # local import to avoid a cycle

    if grid_points < 9:
        raise ValueError("grid_points must be at least 9")
    tracker = EigenspaceTracker(path, omega0_at_0)
    grid = np.linspace(0.0, 1.0, grid_points)
    gaps = np.empty(grid_points)
    omegas = np.empty(grid_points)
    for i, s in enumerate(grid):
        point = tracker.query(float(s))
        if not np.isfinite(point.isolation) or point.isolation < 1e-10:
            raise GapClosedError(
                f"tracked gap closed to {point.isolation:.3e} at s = {s}; "
                "the isolated-eigenvalue assumption does not hold"
            )
        gaps[i] = point.isolation
        omegas[i] = point.omega

    scaled = 0.99 * gaps
    delta_m = float(scaled.min())
    hint = float(grid[int(np.argmin(scaled))])

    def delta(s):
        return np.interp(s, grid, scaled)

    def omega0(s):
        return np.interp(s, grid, omegas)

    return GapModel(
        delta=delta,
        delta_m=delta_m,
        kind="numeric-tracked",
        delta_prime=None,
        minimizer_hints=(hint,),
        omega0=omega0,
        raw_samples=(tuple(float(x) for x in grid), tuple(float(x) for x in gaps)),
    )
