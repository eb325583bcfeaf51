"""Built-in problem families: search-style paths and linear-system paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaps import GapModel
from .linalg import DensityMatrix, HermitianOperator, Projector
from .paths import HamiltonianPath, lazy_linear_path, linear_path

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class ProblemInstance:
    """A ready-to-run traversal problem bundling path, gap and states."""

    name: str
    path: HamiltonianPath
    gap: GapModel
    initial_state: DensityMatrix
    initial_vector: np.ndarray
    omega0_at_0: float
    merge_policy: str
    target_projector: Projector | None
    alpha: float


@dataclass(frozen=True)
class GroverProblem:
    """Unstructured search over N items with an M-dimensional marked space."""

    n: int
    m: int
    marked_indices: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"N = {self.n} must be at least 2")
        if not (1 <= self.m < self.n):
            raise ValueError(f"M = {self.m} must satisfy 1 <= M < N = {self.n}")
        marked = self.marked_indices or tuple(range(self.m))
        if len(set(marked)) != self.m or any(not (0 <= i < self.n) for i in marked):
            raise ValueError(f"marked_indices {marked} must be {self.m} distinct indices in range")
        object.__setattr__(self, "marked_indices", tuple(sorted(marked)))

    @property
    def delta_m(self) -> float:
        return float(np.sqrt(self.m / self.n))


def _grover_matrices(prob: GroverProblem) -> tuple[np.ndarray, np.ndarray]:
    n = prob.n
    u = np.full(n, 1.0 / np.sqrt(n), dtype=complex)
    h0 = np.eye(n, dtype=complex) - np.outer(u, u.conj())
    h1 = np.eye(n, dtype=complex)
    for i in prob.marked_indices:
        h1[i, i] = 0.0
    return h0, h1


def grover_path(prob: GroverProblem) -> tuple[HamiltonianPath, GapModel]:
    """Linear search path with its closed-form gap model.

    The gap is Delta(s) = sqrt(1 - 4 (1 - M/N) s (1-s)), minimal at
    s = 1/2 where it equals sqrt(M/N). For M > 1 the spectrum carries an
    (M-1)-fold branch at eigenvalue 1 - s whose eigenvectors are constant
    and orthogonal to the reachable states; it is declared decoupled so
    isolation checks and the tracker can discount it.
    """
    ratio = 1.0 - prob.m / prob.n
    # ||H1 - H0||: the marked block contributes a unit-norm direction when
    # M > 1; for M = 1 the norm comes from the 2x2 interaction block.
    d1_norm = float(np.sqrt(ratio)) if prob.m == 1 else 1.0

    path = lazy_linear_path(
        builder0=lambda: _grover_matrices(prob)[0],
        builder1=lambda: _grover_matrices(prob)[1],
        dim=prob.n,
        d1_norm=d1_norm,
        sup_norm=1.0,
    )

    def delta(s):
        return np.sqrt(1.0 - 4.0 * ratio * s * (1.0 - s))

    def delta_prime(s):
        return 2.0 * ratio * (2.0 * s - 1.0) / delta(s)

    def omega0(s):
        return 0.5 * (1.0 - delta(s))

    decoupled = ((lambda s: 1.0 - s),) if prob.m > 1 else ()
    gap = GapModel(
        delta=delta,
        delta_m=prob.delta_m,
        kind="analytic-grover",
        delta_prime=delta_prime,
        minimizer_hints=(0.5,),
        decoupled_branches=decoupled,
        omega0=omega0,
    )
    return path, gap


def grover_instance(n: int, m: int = 1, marked_indices: tuple[int, ...] = ()) -> ProblemInstance:
    prob = GroverProblem(n, m, marked_indices)
    path, gap = grover_path(prob)
    u = np.full(n, 1.0 / np.sqrt(n), dtype=complex)
    target = None
    if n <= 4096:
        pm = np.zeros((n, n), dtype=complex)
        for i in prob.marked_indices:
            pm[i, i] = 1.0
        target = Projector(pm, rank=m)
    return ProblemInstance(
        name=f"grover(N={n},M={m})",
        path=path,
        gap=gap,
        initial_state=DensityMatrix.pure(u),
        initial_vector=u,
        omega0_at_0=0.0,
        merge_policy="absorb" if m > 1 else "error",
        target_projector=target,
        alpha=1.0,
    )


@dataclass(frozen=True)
class QLSPProblem:
    """Prepared linear-system instance A x = b after rescaling/dilation.

    ``working`` is Hermitian with unit norm and smallest singular value
    1/kappa; ``b`` is normalised and lives in the working dimension.
    """

    a_raw: np.ndarray
    b_raw: np.ndarray
    working: np.ndarray
    b: np.ndarray
    kappa: float
    hermitized: bool
    dim_expanded: int


def qlsp_problem(a_raw, b, kappa: float | None = None) -> QLSPProblem:
    """Validate, rescale and (if non-Hermitian) dilate a linear system."""
    a = np.asarray(a_raw, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"A must be square, got shape {a.shape}")
    vec = np.asarray(b, dtype=complex).reshape(-1)
    if vec.shape[0] != a.shape[0]:
        raise ValueError(f"b has length {vec.shape[0]}, expected {a.shape[0]}")
    nb = np.linalg.norm(vec)
    if nb == 0:
        raise ValueError("b must be nonzero")
    vec = vec / nb

    sing = np.linalg.svd(a, compute_uv=False)
    smax, smin = float(sing[0]), float(sing[-1])
    if smin < 1e-12 * smax:
        raise ValueError(
            f"A is numerically singular: smallest singular value {smin:.3e} "
            f"below 1e-12 * ||A|| = {1e-12 * smax:.3e}"
        )
    measured_kappa = smax / smin
    if kappa is not None and abs(kappa - measured_kappa) > 0.01 * measured_kappa:
        raise ValueError(
            f"caller-supplied kappa {kappa} disagrees with measured {measured_kappa:.6g} "
            "by more than 1%"
        )

    scaled = a / smax
    hermitian = bool(np.abs(scaled - scaled.conj().T).max() <= 1e-12)
    if hermitian:
        working, bw, dim = scaled, vec, a.shape[0]
    else:
        n = a.shape[0]
        working = np.zeros((2 * n, 2 * n), dtype=complex)
        working[:n, n:] = scaled
        working[n:, :n] = scaled.conj().T
        bw = np.concatenate([vec, np.zeros(n, dtype=complex)])
        dim = 2 * n
    return QLSPProblem(
        a_raw=a,
        b_raw=vec,
        working=working,
        b=bw,
        kappa=measured_kappa,
        hermitized=not hermitian,
        dim_expanded=dim,
    )


def _qlsp_build(prob: QLSPProblem):
    n = prob.dim_expanded
    kappa = prob.kappa
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    bp = np.kron(plus, prob.b)
    q = np.eye(2 * n, dtype=complex) - np.outer(bp, bp.conj())
    a0 = np.kron(SIGMA_Z, np.eye(n, dtype=complex))
    a1 = np.kron(SIGMA_X, prob.working)

    def h_of(amat: np.ndarray) -> HermitianOperator:
        return HermitianOperator(np.kron(SIGMA_PLUS, amat @ q) + np.kron(SIGMA_MINUS, q @ amat))

    path = linear_path(h_of(a0), h_of(a1))

    x0 = np.linalg.solve(a0, bp)
    x0 = x0 / np.linalg.norm(x0)
    psi0 = np.kron(np.array([1.0, 0.0], dtype=complex), x0)
    x1 = np.linalg.solve(a1, bp)
    x1 = x1 / np.linalg.norm(x1)
    psi1 = np.kron(np.array([1.0, 0.0], dtype=complex), x1)
    target = Projector(np.outer(psi1, psi1.conj()), rank=1)

    delta_m = 1.0 / (2.0 * kappa) if kappa >= 2.0 else 1.0 / np.sqrt(kappa**2 + 1.0)

    def delta(s):
        return np.sqrt((1.0 - s) ** 2 + (s / kappa) ** 2)

    def delta_prime(s):
        return (-(1.0 - s) + s / kappa**2) / delta(s)

    gap = GapModel(
        delta=delta,
        delta_m=float(delta_m),
        kind="analytic-qlsp",
        delta_prime=delta_prime,
        minimizer_hints=(kappa**2 / (kappa**2 + 1.0),),
        omega0=lambda s: 0.0,
    )
    return path, gap, psi0, target


def qlsp_path(prob: QLSPProblem) -> tuple[HamiltonianPath, GapModel, DensityMatrix, Projector]:
    """Traversal path whose kernel carries the solution of A x = b.

    The working register is doubled twice: an ancilla qubit turns the
    interpolation A(s) = (1-s) sigma_z otimes 1 + s sigma_x otimes A into
    an invertible family, and an outer qubit makes the generator
    off-diagonal: H(s) = sigma_+ otimes (A(s) Q) + sigma_- otimes (Q A(s))
    with Q the complement of |+>|b>. The kernel of H(s) is spanned by
    |0> otimes x(s) with x(s) proportional to A(s)^{-1}|+>|b>, plus a
    spurious branch |1> otimes |+>|b> that never acquires weight.
    """
    path, gap, psi0, target = _qlsp_build(prob)
    return path, gap, DensityMatrix.pure(psi0), target


def qlsp_instance(a_raw, b, kappa: float | None = None, name: str | None = None) -> ProblemInstance:
    prob = qlsp_problem(a_raw, b, kappa)
    path, gap, psi0, target = _qlsp_build(prob)
    return ProblemInstance(
        name=name or f"qlsp(kappa={prob.kappa:.6g})",
        path=path,
        gap=gap,
        initial_state=DensityMatrix.pure(psi0),
        initial_vector=psi0,
        omega0_at_0=0.0,
        merge_policy="error",
        target_projector=target,
        alpha=max(1.0, path.sup_norm),
    )


def diag_qlsp_instance(kappa: float, dim: int = 2) -> ProblemInstance:
    """Diagonal benchmark system with singular values spanning [1/kappa, 1]."""
    if kappa < 1.0:
        raise ValueError(f"kappa = {kappa} must be at least 1")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    vals = np.geomspace(1.0, 1.0 / kappa, dim) if kappa > 1.0 else np.ones(dim)
    a = np.diag(vals.astype(complex))
    b = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    inst = qlsp_instance(a, b, name=f"qlsp(kappa={kappa:g},diag{dim})")
    return inst


def custom_instance(
    h0_entries,
    h1_entries,
    omega0_at_0: float | None = None,
    name: str = "custom",
    merge_policy: str = "error",
    grid_points: int = 257,
) -> ProblemInstance:
    """Traversal between two explicit Hamiltonians with a tracked gap.

    The tracked eigenvalue defaults to the smallest eigenvalue of H(0);
    the initial state is one eigenvector of that cluster and the target
    projector is the tracked eigenprojector at s = 1.
    """
    from .gaps import numeric_gap_model
    from .tracking import EigenspaceTracker

    h0 = HermitianOperator(np.asarray(h0_entries, dtype=complex))
    h1 = HermitianOperator(np.asarray(h1_entries, dtype=complex))
    path = linear_path(h0, h1)
    w0, v0 = np.linalg.eigh(h0.entries)
    if omega0_at_0 is None:
        omega0_at_0 = float(w0[0])
    member = int(np.argmin(np.abs(w0 - omega0_at_0)))
    psi0 = v0[:, member].astype(complex)

    gap = numeric_gap_model(path, omega0_at_0, grid_points=grid_points)
    tracker = EigenspaceTracker(path, omega0_at_0, merge_policy=merge_policy)
    target = tracker.projector(1.0)
    return ProblemInstance(
        name=name,
        path=path,
        gap=gap,
        initial_state=DensityMatrix.pure(psi0),
        initial_vector=psi0,
        omega0_at_0=float(omega0_at_0),
        merge_policy=merge_policy,
        target_projector=target,
        alpha=max(1.0, h0.norm(), h1.norm()),
    )


def random_instance(dim: int = 8, seed: int = 20260815) -> ProblemInstance:
    """Random dense Hermitian endpoints with a numerically tracked gap."""
    from .linalg import random_hermitian

    rng = np.random.Generator(np.random.SFC64(seed))
    h0 = random_hermitian(dim, rng, norm=1.0)
    h1 = random_hermitian(dim, rng, norm=1.0)
    return custom_instance(h0, h1, name=f"random(dim={dim},seed={seed})")
