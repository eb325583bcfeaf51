"""Inequality and consistency batteries over the built-in problem set.

Each suite runs a fixed battery of problems (search paths at several
sizes, diagonal linear systems at several condition numbers, and a random
dense path with a numerically tracked gap) and checks the certified
bounds, schedule contracts, filter contracts, and Monte Carlo / ODE
consistency with explicit margins. Suite keys are stable CLI tokens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    NoiseSpec,
    TauSampler,
    ensemble_statistics,
    checkpoint_statistics,
    make_rng,
    run_ensemble,
    run_marginal_ode,
)
from .errors import AmbiguousEigenspaceError, GapClosedError
from .filtering import apply_filter, chebyshev_window, design_window, lcu_cost
from .gaps import gap_integral
from .linalg import (
    DensityMatrix,
    haar_unitary,
    random_hermitian,
    trace_norm_diff_of_conjugations,
)
from .problems import (
    ProblemInstance,
    diag_qlsp_instance,
    grover_instance,
    grover_path,
    GroverProblem,
    random_instance,
)
from .schedules import (
    adaptive_rate,
    circuit_adaptive_params,
    circuit_constant_params,
    constant_rate,
    error_bound,
    expected_cost,
    query_cost_integral,
)
from .tracking import EigenspaceTracker, fd_projector_derivatives

DEFAULT_SEED = 20260815
GROVER_BATTERY = ((8, 1), (16, 1), (64, 1), (16, 4))
QLSP_BATTERY = (5.0, 10.0, 20.0, 50.0)
RANDOM_DIM = 8


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    margin: float
    detail: str


_battery_cache: dict[str, ProblemInstance] = {}


def battery(include_random: bool = True) -> list[ProblemInstance]:
    """The default verification problem set, cached per process."""
    out = []
    for n, m in GROVER_BATTERY:
        key = f"g{n}-{m}"
        if key not in _battery_cache:
            _battery_cache[key] = grover_instance(n, m)
        out.append(_battery_cache[key])
    for kappa in QLSP_BATTERY:
        key = f"q{kappa}"
        if key not in _battery_cache:
            _battery_cache[key] = diag_qlsp_instance(kappa)
        out.append(_battery_cache[key])
    if include_random:
        if "random" not in _battery_cache:
            _battery_cache["random"] = random_instance(RANDOM_DIM, DEFAULT_SEED)
        out.append(_battery_cache["random"])
    return out


def least_squares_fit(xs, ys) -> tuple[float, float, float]:
    """Ordinary least squares: (slope, intercept, r_squared)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 points for a fit")
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def _check(suite: str, name: str, margin: float, detail: str, tol: float = 0.0) -> CheckResult:
    return CheckResult(suite, name, bool(margin >= -tol), float(margin), detail)


# ---------------------------------------------------------------------------
# suite bodies


def suite_ode_error_bound(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """ODE infidelity is below the certified boundary-plus-integral bound."""
    out = []
    for inst in battery():
        sched = constant_rate(inst.path, inst.gap, 0.1)
        bound = error_bound(inst.path, sched, inst.gap)
        res = run_marginal_ode(
            inst.path,
            inst.gap,
            sched,
            inst.initial_state,
            omega0_at_0=inst.omega0_at_0,
            merge_policy=inst.merge_policy,
        )
        infid = 1.0 - res.final_fidelity
        out.append(
            _check(
                "lemma3",
                f"{inst.name} infidelity below certified bound",
                bound - infid,
                f"infidelity {infid:.3e} vs bound {bound:.3e}",
                tol=1e-12,
            )
        )
    return out


def suite_derivative_bounds(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Measured projector derivative norms against the gap bounds, 65-grid."""
    out = []
    for inst in battery():
        tracker = EigenspaceTracker(inst.path, inst.omega0_at_0, merge_policy=inst.merge_policy)
        worst1 = math.inf
        worst2 = math.inf
        checked = 0
        for s in np.linspace(0.0, 1.0, 65):
            try:
                der = fd_projector_derivatives(inst.path, float(s), tracker=tracker)
            except (AmbiguousEigenspaceError, GapClosedError):
                continue
            d = float(inst.gap.delta(s))
            b1 = 2.0 * inst.path.d1_norm(float(s)) / d
            b2 = 8.0 * inst.path.d1_norm(float(s)) ** 2 / d**2 + 2.0 * inst.path.d2_norm(float(s)) / d
            worst1 = min(worst1, b1 + der.p1_error + 1e-9 - der.p1_norm)
            worst2 = min(worst2, b2 + der.p2_error * 1.5 + 1e-6 * b2 - der.p2_norm)
            checked += 1
        out.append(
            _check(
                "lemma4",
                f"{inst.name} first-derivative norm below 2 ||H'||/gap",
                worst1,
                f"min slack {worst1:.3e} over {checked}/65 nodes",
            )
        )
        out.append(
            _check(
                "lemma4",
                f"{inst.name} second-derivative norm below gap bound",
                worst2,
                f"min slack {worst2:.3e} over {checked}/65 nodes",
            )
        )
        out.append(
            _check(
                "lemma4",
                f"{inst.name} grid coverage",
                checked - 50.0,
                f"{checked} of 65 nodes met the FD isolation precondition",
            )
        )
    return out


def _grover_gap(n: int) -> object:
    _, gap = grover_path(GroverProblem(n, 1))
    return gap


def suite_grover_gap_integrals(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Inverse-gap-power integrals scale as the predicted root-N powers."""
    out = []
    sizes = [2**k for k in (6, 8, 10, 12, 14)]
    logx = [0.5 * math.log(n) for n in sizes]
    for p in (1.5, 2.0):
        vals = [gap_integral(_grover_gap(n), p) for n in sizes]
        slope, _, r2 = least_squares_fit(logx, [math.log(v) for v in vals])
        out.append(
            _check(
                "lemma11",
                f"integral of gap^-{p:g} slope vs log sqrt(N) is {p - 1:g} +/- 0.1",
                0.1 - abs(slope - (p - 1.0)),
                f"slope {slope:.4f}, r2 {r2:.6f}",
            )
        )
    val = gap_integral(_grover_gap(10**4), 1.0)
    ratio = val / math.log(10**4)
    out.append(
        _check(
            "lemma11",
            "integral of 1/gap at N = 10^4 sits in the logarithmic regime",
            min(ratio - 0.1, 10.0 - ratio),
            f"value {val:.4f}, value/ln(N) = {ratio:.4f}",
        )
    )
    return out


def suite_qlsp_gap_integrals(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Same scaling battery in the condition number."""
    out = []
    kappas = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0]
    gaps = [diag_qlsp_instance(k).gap for k in kappas]
    logx = [math.log(k) for k in kappas]
    for p in (1.5, 2.0):
        vals = [gap_integral(g, p) for g in gaps]
        slope, _, r2 = least_squares_fit(logx, [math.log(v) for v in vals])
        out.append(
            _check(
                "lemma12",
                f"integral of gap^-{p:g} slope vs log kappa is {p - 1:g} +/- 0.1",
                0.1 - abs(slope - (p - 1.0)),
                f"slope {slope:.4f}, r2 {r2:.6f}",
            )
        )
    val = gap_integral(diag_qlsp_instance(10**4).gap, 1.0)
    ratio = val / math.log(10**4)
    out.append(
        _check(
            "lemma12",
            "integral of 1/gap at kappa = 10^4 sits in the logarithmic regime",
            min(ratio - 0.1, 10.0 - ratio),
            f"value {val:.4f}, value/ln(kappa) = {ratio:.4f}",
        )
    )
    return out


def suite_conjugation_continuity(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Trace-norm change of rho -> A rho A* under an operator perturbation."""
    rng = make_rng(seed)
    worst = math.inf
    worst_detail = ""
    for i in range(1000):
        dim = int(rng.integers(2, 9))
        u = haar_unitary(dim, rng)
        scale = np.diag(rng.uniform(0.2, 1.0, dim))
        a = u @ scale.astype(complex) @ haar_unitary(dim, rng)
        delta = float(rng.uniform(0.0, 0.5))
        e = random_hermitian(dim, rng, norm=1.0).astype(complex)
        e = (e + 1j * random_hermitian(dim, rng, norm=1.0)) if rng.random() < 0.5 else e
        en = np.linalg.norm(e, 2)
        e = e / en * delta if en > 0 else e
        b = a + e
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        rho_raw = np.outer(psi, psi.conj())
        mix = rng.uniform(0.0, 1.0)
        rho_raw = mix * rho_raw / np.real(np.trace(rho_raw)) + (1 - mix) * np.eye(dim) / dim
        rho = DensityMatrix(rho_raw)
        lhs = trace_norm_diff_of_conjugations(a, b, rho)
        a_norm = float(np.linalg.norm(a, 2))
        bound = 2.0 * delta * a_norm + delta**2
        slack = bound + 1e-9 - lhs
        if slack < worst:
            worst = slack
            worst_detail = f"dim {dim}, delta {delta:.4f}: lhs {lhs:.6f} vs bound {bound:.6f}"
    return [
        _check(
            "lemma15",
            "trace-norm difference of conjugations below 2 delta ||A|| + delta^2 (1000 triples)",
            worst,
            worst_detail,
        )
    ]


def suite_constant_schedule(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Constant-rate soundness: ODE infidelity <= eps across the battery."""
    out = []
    for inst in battery(include_random=False):
        for eps in (0.3, 0.1, 0.03):
            sched = constant_rate(inst.path, inst.gap, eps)
            res = run_marginal_ode(
                inst.path,
                inst.gap,
                sched,
                inst.initial_state,
                omega0_at_0=inst.omega0_at_0,
                merge_policy=inst.merge_policy,
            )
            infid = 1.0 - res.final_fidelity
            out.append(
                _check(
                    "theorem5",
                    f"{inst.name} eps={eps:g} constant-rate infidelity below target",
                    eps - infid,
                    f"infidelity {infid:.3e}, rate {float(sched.rate(0.0)):.4g}",
                )
            )
    return out


def suite_adaptive_schedule(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Adaptive-rate soundness across q and eps."""
    out = []
    for inst in battery(include_random=False):
        for q in (0.25, 0.5, 0.75):
            for eps in (0.3, 0.1, 0.03):
                sched = adaptive_rate(inst.path, inst.gap, eps, q)
                res = run_marginal_ode(
                    inst.path,
                    inst.gap,
                    sched,
                    inst.initial_state,
                    omega0_at_0=inst.omega0_at_0,
                    merge_policy=inst.merge_policy,
                )
                infid = 1.0 - res.final_fidelity
                out.append(
                    _check(
                        "theorem6",
                        f"{inst.name} q={q:g} eps={eps:g} adaptive infidelity below target",
                        eps - infid,
                        f"infidelity {infid:.3e}, peak rate {sched.rate_max:.4g}",
                    )
                )
    return out


def _prepare(inst: ProblemInstance, eps: float):
    sched = constant_rate(inst.path, inst.gap, eps)
    res = run_marginal_ode(
        inst.path,
        inst.gap,
        sched,
        inst.initial_state,
        omega0_at_0=inst.omega0_at_0,
        merge_policy=inst.merge_policy,
    )
    return sched, res


def suite_filtering(seed: int = DEFAULT_SEED, draws: int = 500) -> list[CheckResult]:
    """End-to-end filtering contract plus window sanity checks."""
    out = []
    rng = make_rng(seed ^ 0xF117E5)
    for inst in battery():
        _, res = _prepare(inst, 0.3)
        h1 = inst.path.evaluate(1.0)
        tracker = EigenspaceTracker(inst.path, inst.omega0_at_0, merge_policy=inst.merge_policy)
        omega0 = tracker.query(1.0).omega
        target = inst.target_projector
        for eps_f in (1e-4, 1e-6):
            win = design_window(inst.gap.delta_m, eps_f)
            rho_f, prob = apply_filter(h1, res.rho1, win, omega0)
            fid = float(np.real(np.trace(target.entries @ rho_f.entries)))
            out.append(
                _check(
                    "theorem8",
                    f"{inst.name} filtered at eps={eps_f:g}: infidelity below target",
                    eps_f - (1.0 - fid),
                    f"post-filter infidelity {1.0 - fid:.3e}, success prob {prob:.4f}, n {win.n}",
                    tol=1e-15,
                )
            )
        # positivity and trace monotonicity of the unnormalised channel
        win = design_window(inst.gap.delta_m, 1e-4)
        rho_f, prob = apply_filter(h1, res.rho1, win, omega0)
        raw = prob * rho_f.entries
        eigs = np.linalg.eigvalsh(raw)
        out.append(
            _check(
                "theorem8",
                f"{inst.name} filter channel positive and trace-nonincreasing",
                min(float(eigs.min()) + 1e-10, 1.0 + 1e-10 - float(np.real(np.trace(raw)))),
                f"min eigenvalue {eigs.min():.3e}, trace {np.real(np.trace(raw)):.6f}",
            )
        )
        # empirical success rate of the Bernoulli branch
        hits = sum(1 for _ in range(draws) if rng.random() < prob)
        stderr = math.sqrt(max(prob * (1.0 - prob), 1e-12) / draws)
        dev = abs(hits / draws - prob)
        out.append(
            _check(
                "theorem8",
                f"{inst.name} empirical success rate within 3 sigma",
                3.0 * stderr - dev + 1e-12,
                f"empirical {hits / draws:.4f} vs exact {prob:.4f} ({draws} draws)",
            )
        )
    for n in (4, 8, 16):
        delta = 0.3
        win = chebyshev_window(n, delta)
        grid = np.linspace(delta, math.pi, 4001)
        boxcar = np.full(2 * n + 1, 1.0 / (2 * n + 1))
        k = np.arange(1, n + 1)
        box_resp = boxcar[n] + 2.0 * (np.cos(np.outer(grid, k)) @ boxcar[n + 1:])
        box_ripple = float(np.abs(box_resp).max())
        out.append(
            _check(
                "theorem8",
                f"boxcar n={n} has larger stop-band ripple than the synthesised window",
                box_ripple - win.ripple,
                f"boxcar {box_ripple:.4e} vs window {win.ripple:.4e}",
            )
        )
    deltas = (0.05, 0.1, 0.2, 0.4)
    costs = [lcu_cost(design_window(d, 1e-6).n, 1.0) for d in deltas]
    slope, _, r2 = least_squares_fit(
        [math.log(1.0 / d) for d in deltas], [math.log(c) for c in costs]
    )
    out.append(
        _check(
            "theorem8",
            "filter cost grows linearly in inverse band width",
            0.1 - abs(slope - 1.0),
            f"slope {slope:.4f}, r2 {r2:.6f}",
        )
    )
    return out


def suite_circuit_constant(seed: int = DEFAULT_SEED, trajectories: int = 500) -> list[CheckResult]:
    """Imperfect-evolution constant-rate contract and its cost bound."""
    out = []
    for inst in battery():
        sched, cost, q_bound = circuit_constant_params(
            inst.path, inst.gap, 0.1, alpha=inst.alpha
        )
        q_quad = query_cost_integral(sched, inst.gap, cost)
        out.append(
            _check(
                "theorem16",
                f"{inst.name} closed-form call bound majorises the quadrature cost",
                q_bound - q_quad + 1e-6 * abs(q_bound),
                f"bound {q_bound:.6g} vs integral {q_quad:.6g}",
            )
        )
    inst = grover_instance(16, 1)
    sched, cost, _ = circuit_constant_params(inst.path, inst.gap, 0.1, alpha=inst.alpha)
    noise = NoiseSpec(delta=cost.delta)
    records = run_ensemble(
        inst.path,
        inst.gap,
        sched,
        TauSampler("ideal-dephase"),
        inst.initial_vector,
        trajectories,
        seed,
        omega0_at_0=inst.omega0_at_0,
        merge_policy=inst.merge_policy,
        noise=noise,
        cost_model=cost,
    )
    stats = ensemble_statistics(records)
    out.append(
        _check(
            "theorem16",
            f"{inst.name} noisy ensemble infidelity below eps=0.1",
            0.1 - (1.0 - stats.mean_fidelity),
            f"mean infidelity {1.0 - stats.mean_fidelity:.4f} +/- {stats.ci95:.4f} "
            f"({trajectories} trajectories, delta {float(cost.delta(0.0)):.3e})",
        )
    )
    return out


def suite_circuit_adaptive(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Imperfect-evolution adaptive-rate cost bound and its scaling."""
    out = []
    for inst in battery():
        sched, cost, q_bound = circuit_adaptive_params(
            inst.path, inst.gap, 0.1, q=0.75, alpha=inst.alpha
        )
        q_quad = query_cost_integral(sched, inst.gap, cost)
        out.append(
            _check(
                "theorem17",
                f"{inst.name} closed-form call bound majorises the quadrature cost",
                q_bound - q_quad,
                f"bound {q_bound:.6g} vs integral {q_quad:.6g}",
            )
        )
    kappas = [8.0, 16.0, 32.0, 64.0, 128.0]
    insts = [diag_qlsp_instance(k) for k in kappas]
    # hypothesis constants are family-level: share the largest C
    c_fam = max(
        adaptive_rate(i.path, i.gap, 0.1, 0.75).constants["C"] for i in insts
    )
    bounds = []
    for inst in insts:
        _, _, qb = circuit_adaptive_params(
            inst.path, inst.gap, 0.1, q=0.75, alpha=inst.alpha, c_override=c_fam
        )
        bounds.append(qb)
    slope, _, r2 = least_squares_fit(
        [math.log(k) for k in kappas], [math.log(b) for b in bounds]
    )
    out.append(
        _check(
            "theorem17",
            "call bound scales linearly in kappa at fixed eps",
            0.15 - abs(slope - 1.0),
            f"slope {slope:.4f}, r2 {r2:.6f}, shared C {c_fam:.4g}",
        )
    )
    return out


def suite_mc_vs_ode(seed: int = DEFAULT_SEED, trajectories: int = 500) -> list[CheckResult]:
    """Trajectory-ensemble mean fidelity against the marginal ODE."""
    out = []
    checkpoints = (0.25, 0.5, 0.75)
    problems = [grover_instance(8, 1), diag_qlsp_instance(5.0)]
    for inst in problems:
        sched = constant_rate(inst.path, inst.gap, 0.1)
        ode = run_marginal_ode(
            inst.path,
            inst.gap,
            sched,
            inst.initial_state,
            omega0_at_0=inst.omega0_at_0,
            merge_policy=inst.merge_policy,
            checkpoints=checkpoints,
        )
        ode_at = {}
        for s, f in ode.fidelity_trace:
            ode_at[round(s, 12)] = f
        records = run_ensemble(
            inst.path,
            inst.gap,
            sched,
            TauSampler("ideal-dephase"),
            inst.initial_vector,
            trajectories,
            seed,
            checkpoints=checkpoints,
            omega0_at_0=inst.omega0_at_0,
            merge_policy=inst.merge_policy,
        )
        cps = checkpoint_statistics(records, checkpoints + (1.0,))
        for s, mean, stderr in cps:
            ref = ode_at[round(s, 12)] if s < 1.0 else ode.final_fidelity
            dev = abs(mean - ref)
            out.append(
                _check(
                    "mc-vs-ode",
                    f"{inst.name} ensemble fidelity at s={s:g} within 3 sigma of ODE",
                    3.0 * max(stderr, 1e-12) - dev,
                    f"ensemble {mean:.5f} +/- {stderr:.5f} vs ODE {ref:.5f}",
                )
            )
        stats = ensemble_statistics(records)
        _, t_phys = expected_cost(sched, inst.gap)
        dev = abs(stats.mean_time - t_phys)
        stderr_t = stats.ci95_time / 1.96
        out.append(
            _check(
                "mc-vs-ode",
                f"{inst.name} mean physical time within 3 sigma of the cost integral",
                3.0 * stderr_t - dev,
                f"ensemble {stats.mean_time:.3f} +/- {stderr_t:.3f} vs integral {t_phys:.3f}",
            )
        )
    return out


SUITES = {
    "lemma3": suite_ode_error_bound,
    "lemma4": suite_derivative_bounds,
    "lemma11": suite_grover_gap_integrals,
    "lemma12": suite_qlsp_gap_integrals,
    "lemma15": suite_conjugation_continuity,
    "theorem5": suite_constant_schedule,
    "theorem6": suite_adaptive_schedule,
    "theorem8": suite_filtering,
    "theorem16": suite_circuit_constant,
    "theorem17": suite_circuit_adaptive,
    "mc-vs-ode": suite_mc_vs_ode,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed)
