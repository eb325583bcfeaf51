"""Stochastic trajectories and the marginalised dephasing ODE.

Trajectories realise the jump process directly: Poisson-distributed
dephasing events along s, each either an exact block-dephasing of a
density matrix (ideal-dephase sampler) or a unitary evolution for a
random time drawn to match the expected dephasing cost (gaussian
sampler). The marginal ODE evolves the ensemble average rho(s) under
rho' = lambda(s) (P rho P + Q rho Q - rho).

The default ODE method integrates in a co-moving frame: over one step the
projector pair is frozen, the dephasing generator is applied in closed
form (exact in lambda), and the frame rotation between P(s) and P(s+h)
enters through its commutator expansion. Its local error is controlled on
the tracked-subspace fidelity, the only observable in which step errors
accumulate; entrywise transients are slaved to the quasi-steady manifold
and self-correct. A textbook RK4 integrator with a rate-resolving step
ceiling is kept as a cross-validation option for moderate rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import StepUnderflowError, ZenopathError
from .gaps import GapModel
from .linalg import DensityMatrix, block_diagonal_part
from .parallel import map_indexed
from .paths import HamiltonianPath
from .schedules import T0, QueryCostModel, Schedule, block_encoding_call_count
from .tracking import EigenspaceTracker, MERGE_POLICIES

RNG_ALGORITHM = "sfc64"

TAU_KINDS = ("ideal-dephase", "gaussian")
GAUSSIAN_SIGMA_FACTOR = math.sqrt(math.pi / 2.0)


def make_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Per-trajectory substream: one 256-bit generator per seed xor index."""
    return np.random.Generator(np.random.SFC64(int(seed) ^ int(index)))


@dataclass(frozen=True)
class JumpSample:
    jump_points: np.ndarray
    rate_bound_used: float

    def __post_init__(self):
        pts = np.asarray(self.jump_points, dtype=float)
        if pts.size and (np.diff(pts) <= 0).any():
            raise ValueError("jump points must be strictly increasing")
        object.__setattr__(self, "jump_points", pts)


@dataclass(frozen=True)
class TauSampler:
    """Evolution-time sampler applied at each jump.

    kind "ideal-dephase" applies the exact dephasing channel to a density
    matrix and imputes the physical time t0/Delta per jump; "gaussian"
    draws tau ~ Normal(0, sigma^2) with sigma = (t0/Delta) sqrt(pi/2), so
    E|tau| = t0/Delta, and applies a genuine unitary to a state vector.
    The gaussian law is symmetric about zero; records carry that flag.
    calibration is the sigma * Delta product, constant across s.
    """

    kind: str = "ideal-dephase"
    calibration: float = T0 * GAUSSIAN_SIGMA_FACTOR

    def __post_init__(self):
        if self.kind not in TAU_KINDS:
            raise ValueError(f"sampler kind must be one of {TAU_KINDS}")
        if self.calibration <= 0:
            raise ValueError("calibration must be positive")

    @property
    def symmetric(self) -> bool:
        return True

    def sigma(self, delta_gap: float) -> float:
        return self.calibration / delta_gap


@dataclass(frozen=True)
class NoiseSpec:
    """Bounded-error imperfection of each jump's evolution unitary.

    Each jump applies an extra unitary defect V = exp(-i theta G) with
    ||V - 1|| = delta(s) exactly; G is a fresh random Hermitian direction
    per jump, or a caller-fixed one for reproducible worst-case probing.
    """

    delta: Callable[[float], float]
    direction: str = "random-hermitian"
    generator: np.ndarray | None = None

    def __post_init__(self):
        if self.direction not in ("random-hermitian", "fixed"):
            raise ValueError("direction must be 'random-hermitian' or 'fixed'")
        if self.direction == "fixed" and self.generator is None:
            raise ValueError("fixed direction needs an explicit generator matrix")


@dataclass(frozen=True)
class RunRecord:
    """One stochastic trajectory."""

    seed: int
    index: int
    jump_count: int
    total_evolution_time: float
    fidelity_trace: tuple[tuple[float, float], ...]
    final_fidelity: float
    sampler_kind: str
    cumulative_times: tuple[float, ...] = ()
    rng_algorithm: str = RNG_ALGORITHM
    tau_symmetric: bool = True
    call_count: int = 0
    deltas_used: tuple[float, ...] = ()
    renormalizations: tuple[float, ...] = ()
    final_state: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (-1e-9 <= self.final_fidelity <= 1.0 + 1e-9):
            raise ValueError(f"final fidelity {self.final_fidelity} outside [0, 1]")
        if self.total_evolution_time < 0:
            raise ValueError("total evolution time must be nonnegative")


def sample_poisson_jumps(sched: Schedule, rng_seed: int, index: int = 0) -> JumpSample:
    """Inhomogeneous Poisson jump points on (0, 1) by thinning.

    Homogeneous candidates at the schedule's certified rate bound are kept
    with probability lambda(s)/bound. A rate value above the bound means
    the schedule's own grid-checked supremum was wrong, and is an error.
    """
    bound = sched.rate_max
    if not np.isfinite(bound):
        raise ZenopathError("rate bound is not finite; cannot thin an unbounded rate")
    rng = make_rng(rng_seed, index)
    if bound <= 0.0:
        return JumpSample(np.empty(0), 0.0)
    count = int(rng.poisson(bound))
    candidates = np.sort(rng.random(count))
    if count == 0:
        return JumpSample(np.empty(0), bound)
    rates = np.asarray(sched.rate(candidates), dtype=float)
    if (rates > bound * (1.0 + 1e-12)).any():
        worst = candidates[int(np.argmax(rates))]
        raise ZenopathError(
            f"rate {rates.max():.6g} at s = {worst:.6g} exceeds the certified bound {bound:.6g}"
        )
    keep = rng.random(count) < rates / bound
    points = candidates[keep]
    points = points[(points > 0.0) & (points < 1.0)]
    return JumpSample(points, bound)


def _merge_checkpoints(jumps: np.ndarray, checkpoints) -> list[tuple[float, bool]]:
    """Ordered (s, is_jump) events: jump points plus fidelity checkpoints."""
    events = [(float(s), True) for s in jumps]
    for c in checkpoints:
        c = float(c)
        if 0.0 < c < 1.0:
            events.append((c, False))
    events.sort(key=lambda e: (e[0], not e[1]))
    return events


def run_trajectory(
    path: HamiltonianPath,
    gap: GapModel,
    sched: Schedule,
    sampler: TauSampler,
    psi0: np.ndarray,
    rng_seed: int,
    index: int = 0,
    checkpoints=(),
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
    noise: NoiseSpec | None = None,
    cost_model: QueryCostModel | None = None,
    keep_final_state: bool = False,
) -> RunRecord:
    """Realise one jump trajectory and record its fidelity trace.

    With a NoiseSpec this is the imperfect-evolution variant: each jump's
    unitary is followed by a defect of operator norm delta(s), the state
    is renormalised (magnitudes logged), and per-jump simulation call
    counts are accumulated when a cost model is supplied.
    """
    if merge_policy not in MERGE_POLICIES:
        raise ValueError(f"merge_policy must be one of {MERGE_POLICIES}")
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("psi0 must be normalised")
    jumps = sample_poisson_jumps(sched, rng_seed, index)
    # jump sampling consumed the head of the (seed, index) substream; use a
    # decorrelated child stream for in-trajectory draws so the record is a
    # function of (seed, index) alone
    tau_rng = make_rng(rng_seed ^ 0x5DEECE66D, index)

    tracker = EigenspaceTracker(path, omega0_at_0, merge_policy=merge_policy)
    dephase_mode = sampler.kind == "ideal-dephase"
    if dephase_mode:
        state = np.outer(psi0, psi0.conj())
    else:
        state = np.array(psi0, dtype=complex)

    def fidelity(s: float) -> float:
        p = tracker.query(s).projector
        if dephase_mode:
            return float(np.real(np.trace(p @ state)))
        return float(np.real(state.conj() @ (p @ state)))

    trace: list[tuple[float, float]] = [(0.0, fidelity(0.0))]
    times: list[float] = [0.0]
    total_time = 0.0
    calls = 0
    deltas_used: list[float] = []
    renorms: list[float] = []

    for s, is_jump in _merge_checkpoints(jumps.jump_points, checkpoints):
        if not is_jump:
            trace.append((s, fidelity(s)))
            times.append(total_time)
            continue
        dgap = float(gap.delta(s))
        if dephase_mode:
            p = tracker.query(s).projector
            state = block_diagonal_part(state, p)
            tau_abs = T0 / dgap
        else:
            w, v = tracker.eigh(s)
            tau = tau_rng.normal(0.0, sampler.sigma(dgap))
            state = (v * np.exp(-1j * tau * w)) @ (v.conj().T @ state)
            tau_abs = abs(tau)
        if noise is not None:
            d = float(noise.delta(s))
            if d < 0 or d >= 0.5:
                raise ZenopathError(f"noise level delta = {d} at s = {s} outside [0, 0.5)")
            if d > 0.0:
                if noise.direction == "fixed":
                    g = noise.generator
                else:
                    from .linalg import random_hermitian

                    g = random_hermitian(path.dim, tau_rng, norm=1.0)
                theta = 2.0 * math.asin(d / 2.0)
                gw, gv = np.linalg.eigh(g)
                # rescale so max |eig| = 1 and the defect norm is exactly delta
                gw = gw / max(abs(gw[0]), abs(gw[-1]))
                if dephase_mode:
                    u = (gv * np.exp(-1j * theta * gw)) @ gv.conj().T
                    state = u @ state @ u.conj().T
                else:
                    state = (gv * np.exp(-1j * theta * gw)) @ (gv.conj().T @ state)
                norm = np.linalg.norm(state) if not dephase_mode else np.real(np.trace(state))
                renorms.append(abs(1.0 - float(norm)))
                state = state / norm
            deltas_used.append(d)
            if cost_model is not None and d > 0.0:
                calls += block_encoding_call_count(cost_model.alpha, tau_abs, d)
        total_time += tau_abs
        trace.append((s, fidelity(s)))
        times.append(total_time)

    trace.append((1.0, fidelity(1.0)))
    times.append(total_time)
    final = None
    if keep_final_state:
        final = state.copy() if dephase_mode else np.outer(state, state.conj())
    return RunRecord(
        seed=int(rng_seed),
        index=int(index),
        jump_count=int(len(jumps.jump_points)),
        total_evolution_time=float(total_time),
        fidelity_trace=tuple(trace),
        final_fidelity=float(trace[-1][1]),
        sampler_kind=sampler.kind,
        cumulative_times=tuple(times),
        tau_symmetric=sampler.symmetric,
        call_count=int(calls),
        deltas_used=tuple(deltas_used),
        renormalizations=tuple(renorms),
        final_state=final,
    )


def run_noisy_trajectory(
    path: HamiltonianPath,
    gap: GapModel,
    sched: Schedule,
    sampler: TauSampler,
    noise: NoiseSpec,
    psi0: np.ndarray,
    rng_seed: int,
    index: int = 0,
    checkpoints=(),
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
    cost_model: QueryCostModel | None = None,
) -> RunRecord:
    """Imperfect-evolution trajectory; with delta = 0 it reproduces the
    noiseless record bit for bit on the same seed."""
    return run_trajectory(
        path,
        gap,
        sched,
        sampler,
        psi0,
        rng_seed,
        index=index,
        checkpoints=checkpoints,
        omega0_at_0=omega0_at_0,
        merge_policy=merge_policy,
        noise=noise,
        cost_model=cost_model,
    )


def run_ensemble(
    path: HamiltonianPath,
    gap: GapModel,
    sched: Schedule,
    sampler: TauSampler,
    psi0: np.ndarray,
    trajectories: int,
    rng_seed: int,
    checkpoints=(),
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
    noise: NoiseSpec | None = None,
    cost_model: QueryCostModel | None = None,
    max_workers: int | None = None,
    keep_final_state: bool = False,
) -> list[RunRecord]:
    """Independent trajectories on substreams seed xor index, in index order."""

    def one(i: int) -> RunRecord:
        return run_trajectory(
            path,
            gap,
            sched,
            sampler,
            psi0,
            rng_seed,
            index=i,
            checkpoints=checkpoints,
            omega0_at_0=omega0_at_0,
            merge_policy=merge_policy,
            noise=noise,
            cost_model=cost_model,
            keep_final_state=keep_final_state,
        )

    return map_indexed(one, range(trajectories), max_workers=max_workers)


@dataclass(frozen=True)
class EnsembleSummary:
    count: int
    mean_fidelity: float
    ci95: float
    mean_time: float
    ci95_time: float
    mean_jumps: float
    mean_calls: float = 0.0


def ensemble_statistics(records: list[RunRecord]) -> EnsembleSummary:
    """Sample statistics with normal-approximation 95% confidence radii."""
    if len(records) < 2:
        raise ValueError("need at least 2 records for ensemble statistics")
    records = sorted(records, key=lambda r: r.index)
    fids = np.array([r.final_fidelity for r in records])
    times = np.array([r.total_evolution_time for r in records])
    jumps = np.array([r.jump_count for r in records])
    calls = np.array([r.call_count for r in records])
    n = len(records)
    return EnsembleSummary(
        count=n,
        mean_fidelity=float(fids.mean()),
        ci95=float(1.96 * fids.std(ddof=1) / math.sqrt(n)),
        mean_time=float(times.mean()),
        ci95_time=float(1.96 * times.std(ddof=1) / math.sqrt(n)),
        mean_jumps=float(jumps.mean()),
        mean_calls=float(calls.mean()),
    )


def checkpoint_statistics(records: list[RunRecord], checkpoints) -> list[tuple[float, float, float]]:
    """Per-checkpoint (s, mean fidelity, stderr) across an ensemble."""
    out = []
    for c in checkpoints:
        vals = []
        for r in records:
            hits = [f for s, f in r.fidelity_trace if abs(s - c) < 1e-12]
            if hits:
                vals.append(hits[-1])
        arr = np.array(vals)
        out.append((float(c), float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(len(arr)))))
    return out


# ---------------------------------------------------------------------------
# marginal ODE


def _direct_rotation(pa: np.ndarray, pb: np.ndarray) -> np.ndarray:
    """Minimal unitary taking ran(Pa) to ran(Pb) and its complement along."""
    d = pa - pb
    m = np.eye(len(d)) - d @ d
    w, v = np.linalg.eigh(m)
    m_inv_sqrt = (v * (1.0 / np.sqrt(np.maximum(w, 1e-30)))) @ v.conj().T
    eye = np.eye(len(d))
    return ((pb @ pa) + (eye - pb) @ (eye - pa)) @ m_inv_sqrt


def _zeno_step(rho: np.ndarray, pa: np.ndarray, pb: np.ndarray, mu: float) -> np.ndarray:
    """One frozen-frame step of the dephasing flow from Pa to Pb.

    mu is the integrated rate over the step. The dephasing part is solved
    exactly (Duhamel kernels in exp(-mu)); the frame rotation G enters
    through its anti-Hermitian part to second order in the rotation angle.
    """
    g = _direct_rotation(pa, pb)
    kh = 0.5 * (g - g.conj().T)
    eta = math.exp(-mu)
    if mu > 1e-6:
        phi = (1.0 - eta) / mu
        psi = (mu - 1.0 + eta) / (mu * mu)
    else:
        phi = 1.0 - mu / 2.0 + mu * mu / 6.0
        psi = 0.5 - mu / 6.0
    b0 = block_diagonal_part(rho, pa)
    x = eta * rho + (1.0 - eta) * b0
    kr = kh @ rho - rho @ kh
    kb = kh @ b0 - b0 @ kh
    x = x - phi * kr + psi * (kh @ kb - kb @ kh)
    return g @ x @ g.conj().T


@dataclass(frozen=True)
class OdeResult:
    rho1: DensityMatrix
    fidelity_trace: tuple[tuple[float, float], ...]
    final_fidelity: float
    steps_accepted: int
    steps_rejected: int
    method: str
    final_rank: int
    cumulative_times: tuple[float, ...] = ()
    states: tuple[tuple[float, np.ndarray], ...] = field(default=(), repr=False)


ODE_METHODS = ("auto", "frozen-frame", "rk4")

ROTATION_GUARD = 0.2
MIN_STEP = 1e-9
DEFAULT_MAX_STEP = 0.05


def run_marginal_ode(
    path: HamiltonianPath,
    gap: GapModel,
    sched: Schedule,
    rho0: DensityMatrix,
    step_tol: float = 1e-5,
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
    method: str = "auto",
    checkpoints=(),
    max_step: float = DEFAULT_MAX_STEP,
    keep_states: bool = False,
) -> OdeResult:
    """Integrate rho' = lambda(s) (P rho P + Q rho Q - rho) over [0, 1].

    Local error is measured by step doubling on the tracked-subspace
    fidelity and kept below step_tol per unit s. Checkpoints are hit
    exactly (steps are clamped to them). ``keep_states`` retains the
    accepted (s, rho) sequence for diagnostic identities.
    """
    if method not in ODE_METHODS:
        raise ValueError(f"method must be one of {ODE_METHODS}")
    if method == "auto":
        method = "frozen-frame"
    tracker = EigenspaceTracker(path, omega0_at_0, merge_policy=merge_policy)
    rho = np.array(rho0.entries, dtype=complex)

    point = tracker.query(0.0)
    trace: list[tuple[float, float]] = [(0.0, float(np.real(np.trace(point.projector @ rho))))]
    times: list[float] = [0.0]
    states: list[tuple[float, np.ndarray]] = [(0.0, rho.copy())] if keep_states else []

    if sched.rate_max == 0.0:
        point = tracker.query(1.0)
        fid = float(np.real(np.trace(point.projector @ rho)))
        trace.append((1.0, fid))
        times.append(0.0)
        if keep_states:
            states.append((1.0, rho.copy()))
        return OdeResult(
            rho1=DensityMatrix((rho + rho.conj().T) / 2),
            fidelity_trace=tuple(trace),
            final_fidelity=fid,
            steps_accepted=0,
            steps_rejected=0,
            method=method,
            final_rank=point.rank,
            cumulative_times=tuple(times),
            states=tuple(states),
        )

    rate = sched.rate
    forced = sorted({float(c) for c in checkpoints if 0.0 < float(c) < 1.0} | {1.0})

    def mu_of(a: float, b: float) -> float:
        return (b - a) * (float(rate(a)) + 4.0 * float(rate((a + b) / 2.0)) + float(rate(b))) / 6.0

    def dt_of(a: float, b: float) -> float:
        m = (a + b) / 2.0
        vals = (
            float(rate(a)) / float(gap.delta(a))
            + 4.0 * float(rate(m)) / float(gap.delta(m))
            + float(rate(b)) / float(gap.delta(b))
        )
        return T0 * (b - a) * vals / 6.0

    def rk4_rhs(s: float, r: np.ndarray, p: np.ndarray) -> np.ndarray:
        return float(rate(s)) * (block_diagonal_part(r, p) - r)

    s = 0.0
    h = 1e-3
    phys_time = 0.0
    accepted = rejected = 0
    forced_idx = 0
    while s < 1.0 - 1e-14:
        while forced_idx < len(forced) and forced[forced_idx] <= s + 1e-14:
            forced_idx += 1
        h_to_node = (forced[forced_idx] if forced_idx < len(forced) else 1.0) - s
        h = min(h, h_to_node, max_step)
        if method == "rk4":
            h = min(h, 0.1 / max(float(rate(s)), 1e-12))

        pa = tracker.query(s, commit=False)
        pm = tracker.query(s + h / 2.0, commit=False)
        pb = tracker.query(s + h, commit=False)
        if not (pa.rank == pm.rank == pb.rank):
            need = max(pa.rank, pm.rank, pb.rank)
            pa = tracker.query(s, commit=False, min_rank=need)
            pm = tracker.query(s + h / 2.0, commit=False, min_rank=need)
            pb = tracker.query(s + h, commit=False, min_rank=need)
        if np.linalg.norm(pa.projector - pb.projector, 2) > ROTATION_GUARD:
            rejected += 1
            h *= 0.4
            continue

        if method == "frozen-frame":
            r1 = _zeno_step(rho, pa.projector, pb.projector, mu_of(s, s + h))
            r2 = _zeno_step(rho, pa.projector, pm.projector, mu_of(s, s + h / 2.0))
            r2 = _zeno_step(r2, pm.projector, pb.projector, mu_of(s + h / 2.0, s + h))
        else:
            r1 = _rk4_step(rk4_rhs, s, rho, h, pa.projector, pm.projector, pb.projector)
            quarter = tracker.query(s + h / 4.0, commit=False, min_rank=pa.rank)
            threeq = tracker.query(s + 3.0 * h / 4.0, commit=False, min_rank=pa.rank)
            r2 = _rk4_step(rk4_rhs, s, rho, h / 2.0, pa.projector, quarter.projector, pm.projector)
            r2 = _rk4_step(rk4_rhs, s + h / 2.0, r2, h / 2.0, pm.projector, threeq.projector, pb.projector)

        err = abs(float(np.real(np.trace(pb.projector @ (r1 - r2)))))
        tol = step_tol * h
        if err <= tol or h <= MIN_STEP:
            if h <= MIN_STEP and err > 10.0 * tol:
                raise StepUnderflowError(
                    f"step size underflow at s = {s}: local error {err:.3e} vs tolerance "
                    f"{tol:.3e}; increase step_tol or use an analytic-gap schedule"
                )
            rho = r2
            phys_time += dt_of(s, s + h)
            s += h
            accepted += 1
            committed = tracker.query(s, min_rank=pb.rank if merge_policy == "absorb" else None)
            trace.append((s, float(np.real(np.trace(committed.projector @ rho)))))
            times.append(phys_time)
            if keep_states:
                states.append((s, rho.copy()))
            growth = 4.0 if err == 0.0 else min(4.0, max(0.5, 0.8 * math.sqrt(tol / err)))
            h = max(h, 1e-8) * growth
        else:
            rejected += 1
            h *= max(0.2, 0.8 * math.sqrt(tol / err))

    final = tracker.query(1.0)
    rho = (rho + rho.conj().T) / 2.0
    fid = float(np.real(np.trace(final.projector @ rho)))
    return OdeResult(
        rho1=DensityMatrix(rho),
        fidelity_trace=tuple(trace),
        final_fidelity=fid,
        steps_accepted=accepted,
        steps_rejected=rejected,
        method=method,
        final_rank=final.rank,
        cumulative_times=tuple(times),
        states=tuple(states),
    )


def _rk4_step(rhs, s, rho, h, pa, pm, pb):
    k1 = rhs(s, rho, pa)
    k2 = rhs(s + h / 2.0, rho + h / 2.0 * k1, pm)
    k3 = rhs(s + h / 2.0, rho + h / 2.0 * k2, pm)
    k4 = rhs(s + h, rho + h * k3, pb)
    return rho + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
