"""Hamiltonian interpolation paths s -> H(s) on [0, 1]."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import HermitianOperator, operator_norm

# Dense evaluation is capped so that lazily constructed large problems
# (scaling sweeps run matrix-free) fail loudly instead of exhausting memory.
MAX_DENSE_DIM = 4096


@dataclass(frozen=True)
class HamiltonianPath:
    """Twice-differentiable path of Hermitian operators.

    ``evaluate``, ``d1`` and ``d2`` build dense operators on demand.
    ``d1_norm_of``/``d2_norm_of`` are optional analytic shortcuts for the
    pointwise derivative norms so that schedule constants can be computed
    without ever materialising a matrix.
    """

    evaluate: Callable[[float], HermitianOperator]
    d1: Callable[[float], HermitianOperator]
    d2: Callable[[float], HermitianOperator]
    sup_d1_norm: float
    sup_d2_norm: float
    sup_norm: float
    dim: int
    d1_norm_of: Callable[[float], float] | None = None
    d2_norm_of: Callable[[float], float] | None = None

    def d1_norm(self, s: float) -> float:
        if self.d1_norm_of is not None:
            return float(self.d1_norm_of(s))
        return operator_norm(self.d1(s).entries)

    def d2_norm(self, s: float) -> float:
        if self.d2_norm_of is not None:
            return float(self.d2_norm_of(s))
        return operator_norm(self.d2(s).entries)

    def matrix(self, s: float) -> np.ndarray:
        return self.evaluate(s).entries


def _guard_dim(dim: int):
    if dim > MAX_DENSE_DIM:
        raise ValueError(
            f"dense evaluation disabled for dimension {dim} > {MAX_DENSE_DIM}; "
            "use the analytic gap model and schedule constants instead"
        )


def linear_path(h0: HermitianOperator, h1: HermitianOperator) -> HamiltonianPath:
    """Linear interpolation H(s) = (1-s) H0 + s H1."""
    if h0.dim != h1.dim:
        raise ValueError(f"dimension mismatch: {h0.dim} vs {h1.dim}")
    diff = HermitianOperator(h1.entries - h0.entries)
    zero = HermitianOperator(np.zeros_like(h0.entries))
    d1n = diff.norm()
    supn = max(h0.norm(), h1.norm())

    def evaluate(s: float) -> HermitianOperator:
        return HermitianOperator((1.0 - s) * h0.entries + s * h1.entries)

    return HamiltonianPath(
        evaluate=evaluate,
        d1=lambda s: diff,
        d2=lambda s: zero,
        sup_d1_norm=d1n,
        sup_d2_norm=0.0,
        sup_norm=supn,
        dim=h0.dim,
        d1_norm_of=lambda s: d1n,
        d2_norm_of=lambda s: 0.0,
    )


def lazy_linear_path(
    builder0: Callable[[], np.ndarray],
    builder1: Callable[[], np.ndarray],
    dim: int,
    d1_norm: float,
    sup_norm: float,
) -> HamiltonianPath:
    """Linear path whose endpoint matrices are built only when evaluated.

    Used by problem families whose derivative norms are known in closed
    form; ``dim`` above MAX_DENSE_DIM keeps the path permanently lazy.
    """
    cache: dict[str, np.ndarray] = {}

    def _h0() -> np.ndarray:
        _guard_dim(dim)
        if "h0" not in cache:
            cache["h0"] = builder0()
        return cache["h0"]

    def _h1() -> np.ndarray:
        _guard_dim(dim)
        if "h1" not in cache:
            cache["h1"] = builder1()
        return cache["h1"]

    def evaluate(s: float) -> HermitianOperator:
        return HermitianOperator((1.0 - s) * _h0() + s * _h1())

    def d1(s: float) -> HermitianOperator:
        return HermitianOperator(_h1() - _h0())

    def d2(s: float) -> HermitianOperator:
        return HermitianOperator(np.zeros((dim, dim), dtype=complex))

    return HamiltonianPath(
        evaluate=evaluate,
        d1=d1,
        d2=d2,
        sup_d1_norm=d1_norm,
        sup_d2_norm=0.0,
        sup_norm=sup_norm,
        dim=dim,
        d1_norm_of=lambda s: d1_norm,
        d2_norm_of=lambda s: 0.0,
    )
