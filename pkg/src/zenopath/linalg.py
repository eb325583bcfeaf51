"""Dense Hermitian linear algebra: decompositions, projectors, dephasing.

Everything here is a pure function of its inputs; the wrapper types validate
their contracts on construction and are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousEigenspaceError, HermiticityError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8


def operator_norm(m: np.ndarray) -> float:
    """Spectral norm (largest singular value)."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(m, compute_uv=False).sum())


def _as_complex_matrix(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("dimension must be at least 1")
    return a


@dataclass(frozen=True)
class HermitianOperator:
    """Dense complex square matrix with a validated Hermiticity contract."""

    entries: np.ndarray

    def __post_init__(self):
        a = _as_complex_matrix(self.entries)
        defect = np.abs(a - a.conj().T).max()
        if defect > HERMITICITY_TOL:
            raise HermiticityError(
                f"matrix is not Hermitian: max |H - H^dag| = {defect:.3e} "
                f"exceeds {HERMITICITY_TOL:.0e}"
            )
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return operator_norm(self.entries)


@dataclass(frozen=True)
class SpectralInfo:
    """Eigendecomposition with eigenvalues grouped into degenerate clusters.

    ``clusters`` maps each cluster to (representative value, member indices);
    indices refer to columns of ``eigenvectors``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clusters: tuple[tuple[float, tuple[int, ...]], ...]
    cluster_tol: float

    @property
    def multiplicity_map(self) -> dict[float, int]:
        return {value: len(members) for value, members in self.clusters}

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _group_clusters(w: np.ndarray, tol: float) -> tuple[tuple[float, tuple[int, ...]], ...]:
    clusters = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            members = tuple(range(start, i))
            clusters.append((float(np.mean(w[start:i])), members))
            start = i
    return tuple(clusters)


def spectral_decompose(h: HermitianOperator, cluster_tol: float | None = None) -> SpectralInfo:
    """Eigendecomposition of a Hermitian operator with eigenvalue clustering.

    Eigenvalues within ``cluster_tol`` of each other (by the consecutive-gap
    criterion on the sorted list) are grouped into one degenerate cluster.
    The default tolerance is 1e-8 times the operator norm.
    """
    w, v = np.linalg.eigh(h.entries)
    if cluster_tol is None:
        scale = max(abs(w[0]), abs(w[-1]), 1e-300)
        cluster_tol = 1e-8 * scale
    return SpectralInfo(
        eigenvalues=w,
        eigenvectors=v,
        clusters=_group_clusters(w, cluster_tol),
        cluster_tol=float(cluster_tol),
    )


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    entries: np.ndarray

    def __post_init__(self):
        a = _as_complex_matrix(self.entries)
        defect = np.abs(a - a.conj().T).max()
        if defect > HERMITICITY_TOL:
            raise HermiticityError(f"density matrix not Hermitian: defect {defect:.3e}")
        tr = a.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1 beyond {TRACE_TOL:.0e}")
        wmin = float(np.linalg.eigvalsh(a)[0])
        if wmin < -POSITIVITY_TOL:
            raise ValueError(f"density matrix has eigenvalue {wmin:.3e} below -{POSITIVITY_TOL:.0e}")
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def pure(psi: np.ndarray) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("cannot form a state from the zero vector")
        v = v / n
        return DensityMatrix(np.outer(v, v.conj()))


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector with validated idempotence and integer rank."""

    entries: np.ndarray
    rank: int = field(default=-1)

    def __post_init__(self):
        a = _as_complex_matrix(self.entries)
        defect = np.abs(a - a.conj().T).max()
        if defect > HERMITICITY_TOL:
            raise HermiticityError(f"projector not Hermitian: defect {defect:.3e}")
        idem = operator_norm(a @ a - a)
        if idem > 1e-10:
            raise ValueError(f"projector not idempotent: ||P^2 - P|| = {idem:.3e}")
        r = self.rank
        tr = float(a.trace().real)
        if r < 0:
            r = int(round(tr))
        if abs(tr - r) > 1e-8:
            raise ValueError(f"projector trace {tr} differs from rank {r}")
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "rank", r)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def projector_onto(spec: SpectralInfo, omega0: float, tol: float) -> Projector:
    """Projector onto the unique eigenvalue cluster within ``tol`` of ``omega0``.

    Raises if no cluster or more than one cluster lies inside the tolerance,
    since either case means the target eigenspace is ambiguous.
    """
    hits = [(value, members) for value, members in spec.clusters if abs(value - omega0) <= tol]
    if not hits:
        nearest = min(abs(v - omega0) for v, _ in spec.clusters)
        raise AmbiguousEigenspaceError(
            f"no eigenvalue cluster within {tol:.3e} of {omega0} (nearest at distance {nearest:.3e})"
        )
    if len(hits) > 1:
        vals = [v for v, _ in hits]
        raise AmbiguousEigenspaceError(
            f"{len(hits)} eigenvalue clusters within {tol:.3e} of {omega0}: {vals}"
        )
    _, members = hits[0]
    v = spec.eigenvectors[:, list(members)]
    return Projector(v @ v.conj().T, rank=len(members))


def conjugate_evolution(rho: DensityMatrix, h: HermitianOperator, t: float) -> DensityMatrix:
    """Evolve rho -> exp(-iHt) rho exp(+iHt) through the eigenbasis of H."""
    w, v = np.linalg.eigh(h.entries)
    phases = np.exp(-1j * t * w)
    u = (v * phases) @ v.conj().T
    return DensityMatrix(u @ rho.entries @ u.conj().T)


def block_diagonal_part(rho: np.ndarray, p: np.ndarray) -> np.ndarray:
    """P rho P + (1-P) rho (1-P) without forming the complement explicitly."""
    a = p @ rho
    c = a @ p
    return c + rho - a - rho @ p + c


def ideal_dephase(rho: DensityMatrix, p: Projector) -> DensityMatrix:
    """Kill coherences between the tracked eigenspace and its complement."""
    if p.dim != rho.dim:
        raise ValueError(f"dimension mismatch: projector {p.dim}, state {rho.dim}")
    return DensityMatrix(block_diagonal_part(rho.entries, p.entries))


def trace_norm_diff_of_conjugations(a: np.ndarray, b: np.ndarray, rho: DensityMatrix) -> float:
    """Trace norm of A rho A^dag - B rho B^dag."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape or a.shape != rho.entries.shape:
        raise ValueError("A, B and rho must share one square dimension")
    d = a @ rho.entries @ a.conj().T - b @ rho.entries @ b.conj().T
    return trace_norm(d)


def random_hermitian(dim: int, rng: np.random.Generator, norm: float | None = None) -> np.ndarray:
    """Gaussian-entry Hermitian matrix, optionally rescaled to a target norm."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = (g + g.conj().T) / 2
    if norm is not None:
        cur = operator_norm(h)
        if cur > 0:
            h *= norm / cur
    return h


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
