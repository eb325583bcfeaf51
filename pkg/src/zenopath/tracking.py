"""Eigenvalue continuation along a path and projector derivatives.

Eigenvalue order is not stable under eigh as s varies, so the tracked
eigenspace is followed by continuation: each query walks from the last
committed anchor in steps small enough that the Weyl bound (eigenvalue
motion is at most |ds| times sup ||H'||) keeps the cluster assignment
unambiguous. Queries fail loudly instead of guessing when a foreign
eigenvalue enters the window, unless the merge policy is "absorb".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousEigenspaceError
from .linalg import Projector, operator_norm
from .paths import HamiltonianPath

MERGE_POLICIES = ("error", "absorb")


@dataclass(frozen=True)
class TrackPoint:
    """Result of one tracked eigenspace query."""

    s: float
    omega: float
    projector: np.ndarray
    rank: int
    isolation: float


class EigenspaceTracker:
    """Follows one eigenvalue cluster of H(s) by continuation from s = 0.

    With merge_policy="absorb", a branch that approaches the tracked
    cluster too closely to separate is folded into it: the committed rank
    grows and stays grown (later queries enforce it as a minimum), which
    is exact for dynamics whenever the absorbed directions carry no state
    weight. With the default "error" policy such an approach raises.
    """

    def __init__(
        self,
        path: HamiltonianPath,
        omega0_at_0: float,
        base_tol: float = 1e-8,
        merge_policy: str = "error",
    ):
        if merge_policy not in MERGE_POLICIES:
            raise ValueError(f"merge_policy must be one of {MERGE_POLICIES}")
        self._path = path
        self._tol = base_tol
        self._absorb = merge_policy == "absorb"
        self._sup = path.sup_d1_norm
        self._anchor_s = 0.0
        self._anchor_omega = float(omega0_at_0)
        self._rank: int | None = None
        self._cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}
        self.eigh_count = 0
        # validate the starting point immediately so bad omega0 fails here
        self.query(0.0)

    def eigh(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        """Cached eigendecomposition of H(s)."""
        key = float(s)
        if key not in self._cache:
            if len(self._cache) > 64:
                self._cache.clear()
            self._cache[key] = np.linalg.eigh(self._path.matrix(key))
            self.eigh_count += 1
        return self._cache[key]

    def _try(self, s: float, predicted: float, anchor_dist: float, min_rank: int | None):
        """Select the cluster near ``predicted`` at s, or None if ambiguous."""
        w, v = self.eigh(s)
        i = int(np.argmin(np.abs(w - predicted)))
        window = self._tol
        move = anchor_dist * self._sup
        for _ in range(60):
            member = np.abs(w - w[i]) <= window
            if min_rank is not None and member.sum() < min_rank:
                window = max(2 * window, np.sort(np.abs(w - w[i]))[min_rank - 1] * 1.0000001)
                continue
            outside = np.abs(w[~member] - np.mean(w[member]))
            isolation = float(outside.min()) if len(outside) else np.inf
            if isolation > 2 * move + self._tol and isolation > 2 * window:
                return float(np.mean(w[member])), w, v, member, isolation
            if not self._absorb or not len(outside):
                return None
            window = max(2 * window, isolation * 1.0000001)
            if window > 0.5 * (w.max() - w.min() + self._tol):
                return None
        return None

    def query(self, s: float, commit: bool = True, min_rank: int | None = None) -> TrackPoint:
        """Track the cluster to ``s``, walking the anchor as needed."""
        if not (0.0 <= s <= 1.0):
            raise ValueError(f"s = {s} outside [0, 1]")
        if min_rank is None:
            min_rank = self._rank if self._absorb else None
        anchor_s, anchor_omega = self._anchor_s, self._anchor_omega
        target = float(s)
        for _ in range(100000):
            got = self._try(target, anchor_omega, abs(target - anchor_s), min_rank)
            if got is not None:
                if target == float(s):
                    break
                # intermediate success: advance the anchor, re-aim at s
                anchor_s, anchor_omega = target, got[0]
                target = float(s)
                continue
            if abs(target - anchor_s) < 1e-13:
                raise AmbiguousEigenspaceError(
                    f"eigenvalue tracking ambiguity at s = {target}: a foreign "
                    "eigenvalue sits inside the resolution window"
                )
            target = anchor_s + (target - anchor_s) / 2.0
        else:
            raise AmbiguousEigenspaceError(
                f"eigenvalue continuation toward s = {s} did not converge"
            )
        omega, w, v, member, isolation = got
        cols = v[:, member]
        projector = cols @ cols.conj().T
        rank = int(member.sum())
        if commit:
            self._anchor_s, self._anchor_omega = float(s), omega
            if self._rank is None or not self._absorb or rank > self._rank:
                self._rank = rank
        return TrackPoint(float(s), omega, projector, rank, isolation)

    def projector(self, s: float) -> Projector:
        point = self.query(s)
        return Projector(point.projector, rank=point.rank)


@dataclass(frozen=True)
class ProjectorDerivatives:
    """Finite-difference P'(s), P''(s) with Richardson extrapolation."""

    p1: np.ndarray
    p2: np.ndarray
    p1_error: float
    p2_error: float

    @property
    def p1_norm(self) -> float:
        return operator_norm(self.p1)

    @property
    def p2_norm(self) -> float:
        return operator_norm(self.p2)


def _stencil_p1(ps, h: float, s: float):
    """Second-order first derivative; one-sided at the interval ends."""
    if s - h < 0.0:
        return (-3.0 * ps(s) + 4.0 * ps(s + h) - ps(s + 2 * h)) / (2 * h)
    if s + h > 1.0:
        return (3.0 * ps(s) - 4.0 * ps(s - h) + ps(s - 2 * h)) / (2 * h)
    return (ps(s + h) - ps(s - h)) / (2 * h)


def _stencil_p2(ps, h: float, s: float):
    """Second-order second derivative; one-sided at the interval ends."""
    if s - h < 0.0:
        return (2.0 * ps(s) - 5.0 * ps(s + h) + 4.0 * ps(s + 2 * h) - ps(s + 3 * h)) / h**2
    if s + h > 1.0:
        return (2.0 * ps(s) - 5.0 * ps(s - h) + 4.0 * ps(s - 2 * h) - ps(s - 3 * h)) / h**2
    return (ps(s + h) - 2.0 * ps(s) + ps(s - h)) / h**2


def fd_projector_derivatives(
    path: HamiltonianPath,
    s: float,
    h: float = 1e-4,
    tracker: EigenspaceTracker | None = None,
    omega0_at_0: float = 0.0,
) -> ProjectorDerivatives:
    """Estimate P'(s) and P''(s) of the tracked eigenprojector by FD.

    Uses one Richardson level (h and h/2, both second order, extrapolated
    to fourth); the reported error is the distance between the two levels.
    Requires the gap at s to exceed 10 h ||H'|| so that every stencil
    point resolves the same cluster.
    """
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"s = {s} outside [0, 1]")
    if h <= 0:
        raise ValueError("h must be positive")
    if tracker is None:
        tracker = EigenspaceTracker(path, omega0_at_0)

    base = tracker.query(s, commit=False)
    if base.isolation <= 10.0 * h * path.sup_d1_norm:
        raise AmbiguousEigenspaceError(
            f"gap {base.isolation:.3e} at s = {s} is below 10 h ||H'|| = "
            f"{10.0 * h * path.sup_d1_norm:.3e}; shrink h"
        )

    def ps(x: float) -> np.ndarray:
        return tracker.query(float(np.clip(x, 0.0, 1.0)), commit=False).projector

    p1_h = _stencil_p1(ps, h, s)
    p1_h2 = _stencil_p1(ps, h / 2, s)
    p1 = (4.0 * p1_h2 - p1_h) / 3.0
    p2_h = _stencil_p2(ps, h, s)
    p2_h2 = _stencil_p2(ps, h / 2, s)
    p2 = (4.0 * p2_h2 - p2_h) / 3.0
    return ProjectorDerivatives(
        p1=p1,
        p2=p2,
        p1_error=operator_norm(p1 - p1_h2),
        p2_error=operator_norm(p2 - p2_h2),
    )
