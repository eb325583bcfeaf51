"""Poisson rate schedules, their constants, and time/query cost models.

Two schedule families are supported: a constant rate lambda = B/eps built
from endpoint and integrated derivative bounds, and an adaptive rate
lambda(s) = C / (eps Delta(s)^q Delta_m^(1-q)) that concentrates effort
where the gap is small. The circuit-model variants double the rate and
attach a per-jump simulation error budget delta(s) plus a closed-form
upper bound on the total number of block-encoding calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaps import GapModel, gap_integral
from .paths import HamiltonianPath
from .quadrature import adaptive_simpson

T0 = 2.32132
SIM_C = 4.0 / (math.sqrt(2.0 * math.pi) * math.exp(1.0 / 13.0))

SUP_GRID_POINTS = 1025
SUP_INFLATION = 1.001
RATE_BOUND_INFLATION = 1.01
FD_GRID_POINTS = 65

DERIVATIVE_SOURCES = ("lemma4-bound", "fd-measured")


def _const_fn(value: float) -> Callable:
    def f(s):
        s = np.asarray(s, dtype=float)
        out = np.full(s.shape, value)
        return out if out.shape else float(out)

    return f


@dataclass(frozen=True)
class Schedule:
    """Jump rate lambda(s) with provenance and derived constants."""

    rate: Callable[[float], float]
    kind: str
    epsilon: float
    q: float | None
    constants: dict[str, float]
    rate_prime: Callable[[float], float]
    rate_max: float
    derivative_source: str = "lemma4-bound"

    def tabulate(self, points: int = SUP_GRID_POINTS) -> list[tuple[float, float]]:
        grid = np.linspace(0.0, 1.0, points)
        return [(float(s), float(self.rate(s))) for s in grid]


@dataclass(frozen=True)
class QueryCostModel:
    """Constants entering the circuit-model call count per jump."""

    alpha: float
    delta: Callable[[float], float]
    t0: float = T0
    c: float = SIM_C


def _check_eps(eps: float):
    if not (0.0 < eps < 1.0):
        raise ValueError(f"epsilon = {eps} must lie in (0, 1)")


def _check_source(derivative_source: str):
    if derivative_source not in DERIVATIVE_SOURCES:
        raise ValueError(f"derivative_source must be one of {DERIVATIVE_SOURCES}")


def _fd_norm_grid(path: HamiltonianPath, omega0_at_0: float, merge_policy: str):
    """Measured ||P'|| and ||P''|| (plus FD error margins) on a uniform grid."""
    from .tracking import EigenspaceTracker, fd_projector_derivatives

    tracker = EigenspaceTracker(path, omega0_at_0, merge_policy=merge_policy)
    nodes = np.linspace(0.0, 1.0, FD_GRID_POINTS)
    p1 = np.empty(FD_GRID_POINTS)
    p2 = np.empty(FD_GRID_POINTS)
    for i, s in enumerate(nodes):
        tracker.query(float(s))
        der = fd_projector_derivatives(path, float(s), tracker=tracker)
        p1[i] = der.p1_norm + der.p1_error
        p2[i] = der.p2_norm + der.p2_error
    return nodes, p1, p2


def _simpson_on_grid(nodes: np.ndarray, values: np.ndarray) -> float:
    n = len(nodes)
    if n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of nodes")
    h = nodes[1] - nodes[0]
    weights = np.ones(n)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(h / 3.0 * (weights * values).sum())


def _constant_numerator(
    path: HamiltonianPath,
    gap: GapModel,
    derivative_source: str,
    omega0_at_0: float,
    merge_policy: str,
) -> float:
    """The Lemma-style numerator B such that infidelity <= B / lambda."""
    if derivative_source == "lemma4-bound":
        end = path.d1_norm(0.0) / float(gap.delta(0.0)) + path.d1_norm(1.0) / float(gap.delta(1.0))
        integ = adaptive_simpson(
            lambda s: 4.0 * path.d1_norm(s) ** 2 / float(gap.delta(s)) ** 2
            + path.d2_norm(s) / float(gap.delta(s)),
            0.0,
            1.0,
            rel_tol=1e-9,
            seeds=gap.minimizer_hints,
        ).value
        return 2.0 * (end + integ)
    nodes, p1, p2 = _fd_norm_grid(path, omega0_at_0, merge_policy)
    return float(p1[0] + p1[-1] + _simpson_on_grid(nodes, p2))


def constant_rate(
    path: HamiltonianPath,
    gap: GapModel,
    eps: float,
    derivative_source: str = "lemma4-bound",
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
) -> Schedule:
    """Constant schedule lambda = B / eps guaranteeing infidelity <= eps."""
    _check_eps(eps)
    _check_source(derivative_source)
    b = _constant_numerator(path, gap, derivative_source, omega0_at_0, merge_policy)
    rate = b / eps
    return Schedule(
        rate=_const_fn(rate),
        kind="constant",
        epsilon=eps,
        q=None,
        constants={"B": b},
        rate_prime=_const_fn(0.0),
        rate_max=rate * RATE_BOUND_INFLATION,
        derivative_source=derivative_source,
    )


def adaptive_rate(
    path: HamiltonianPath,
    gap: GapModel,
    eps: float,
    q: float,
    c_override: float | None = None,
) -> Schedule:
    """Gap-tracking schedule lambda(s) = C / (eps Delta^q Delta_m^(1-q)).

    ``c_override`` substitutes a family-level constant for the
    instance-level sup; scaling sweeps pass the largest instance-level C
    of the swept family so that all instances share one hypothesis
    constant (any per-instance C only grows toward it, so the schedule
    stays sound).
    """
    _check_eps(eps)
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q = {q} must lie in [0, 1]")
    dm = gap.delta_m
    b1 = dm**q * gap_integral(gap, 1.0 + q)
    b2 = dm ** (1.0 - q) * gap_integral(gap, 2.0 - q)

    if c_override is not None:
        if c_override <= 0:
            raise ValueError(f"c_override = {c_override} must be positive")
        c = float(c_override)
    else:
        grid = np.linspace(0.0, 1.0, SUP_GRID_POINTS)
        expr = np.array(
            [
                2.0 * path.d1_norm(s)
                + 4.0 * path.d1_norm(s) ** 2 * b2
                + path.d2_norm(s)
                + q * abs(gap.delta_prime_at(s)) * path.d1_norm(s) * b2
                for s in grid
            ]
        )
        c = 2.0 * float(expr.max()) * SUP_INFLATION

    def rate(s):
        return c / (eps * np.asarray(gap.delta(s), dtype=float) ** q * dm ** (1.0 - q))

    def rate_prime(s):
        return -q * rate(s) * gap.delta_prime_at(s) / float(gap.delta(s))

    probe_grid = np.linspace(0.0, 1.0, SUP_GRID_POINTS)
    probe = (
        np.concatenate([probe_grid, np.array(gap.minimizer_hints)])
        if gap.minimizer_hints
        else probe_grid
    )
    rmax = float(max(rate(float(s)) for s in probe)) * RATE_BOUND_INFLATION
    return Schedule(
        rate=rate,
        kind="adaptive",
        epsilon=eps,
        q=q,
        constants={"C": c, "B1": b1, "B2": b2},
        rate_prime=rate_prime,
        rate_max=rmax,
    )


def expected_cost(sched: Schedule, gap: GapModel) -> tuple[float, float]:
    """(T_schedule, T_physical): the rate/gap integral, bare and times t0."""
    if sched.rate_max == 0.0:
        return 0.0, 0.0
    t_sched = adaptive_simpson(
        lambda s: float(sched.rate(s)) / float(gap.delta(s)),
        0.0,
        1.0,
        rel_tol=1e-9,
        seeds=gap.minimizer_hints,
    ).value
    return t_sched, T0 * t_sched


def error_bound(
    path: HamiltonianPath,
    sched: Schedule,
    gap: GapModel,
    derivative_source: str = "lemma4-bound",
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
) -> float:
    """Certified infidelity bound for running ``sched`` along ``path``.

    Evaluates endpoint boundary terms plus the integral of the curvature
    and rate-variation terms, with projector derivative norms taken either
    from the analytic gap bounds or from finite-difference measurement.
    """
    _check_source(derivative_source)
    if sched.rate_max == 0.0:
        return 0.0

    if derivative_source == "lemma4-bound":

        def p1n(s):
            return 2.0 * path.d1_norm(s) / float(gap.delta(s))

        def p2n(s):
            d = float(gap.delta(s))
            return 8.0 * path.d1_norm(s) ** 2 / d**2 + 2.0 * path.d2_norm(s) / d

        boundary = p1n(0.0) / float(sched.rate(0.0)) + p1n(1.0) / float(sched.rate(1.0))
        integ = adaptive_simpson(
            lambda s: p2n(s) / float(sched.rate(s))
            + abs(float(sched.rate_prime(s))) / float(sched.rate(s)) ** 2 * p1n(s),
            0.0,
            1.0,
            rel_tol=1e-9,
            seeds=gap.minimizer_hints,
        ).value
        return boundary + integ

    nodes, p1, p2 = _fd_norm_grid(path, omega0_at_0, merge_policy)
    rates = np.array([float(sched.rate(s)) for s in nodes])
    rate_primes = np.array([float(sched.rate_prime(s)) for s in nodes])
    boundary = p1[0] / rates[0] + p1[-1] / rates[-1]
    integrand = p2 / rates + np.abs(rate_primes) / rates**2 * p1
    return float(boundary + _simpson_on_grid(nodes, integrand))


def block_encoding_call_count(alpha: float, t: float, delta: float) -> int:
    """Oracle calls needed to simulate exp(-iHt) to operator error delta."""
    if delta <= 0:
        raise ValueError(f"delta = {delta} must be positive")
    if alpha <= 0:
        raise ValueError(f"alpha = {alpha} must be positive")
    inner = (math.e / 2.0) * alpha * abs(t) + math.log(2.0 * SIM_C / delta)
    return 3 * max(0, math.ceil(inner))


def query_cost_integral(sched: Schedule, gap: GapModel, cost: QueryCostModel) -> float:
    """Expected total call count 3 int (e a t0 / 2D + ln(2c/delta) + 1) lambda ds."""
    if sched.rate_max == 0.0:
        return 0.0
    return adaptive_simpson(
        lambda s: 3.0
        * (
            math.e * cost.alpha * cost.t0 / (2.0 * float(gap.delta(s)))
            + math.log(2.0 * cost.c / float(cost.delta(s)))
            + 1.0
        )
        * float(sched.rate(s)),
        0.0,
        1.0,
        rel_tol=1e-9,
        seeds=gap.minimizer_hints,
    ).value


def circuit_constant_params(
    path: HamiltonianPath,
    gap: GapModel,
    eps: float,
    derivative_source: str = "lemma4-bound",
    omega0_at_0: float = 0.0,
    merge_policy: str = "error",
    alpha: float | None = None,
) -> tuple[Schedule, QueryCostModel, float]:
    """Constant-rate parameters for the imperfect-evolution algorithm.

    The rate doubles the noiseless one (lambda = 2B/eps), the per-jump
    simulation budget is delta = 4 eps / (27 lambda), and the returned
    bound majorises the expected call-count integral. The log(lambda)
    term is clamped at zero for rates below 1; ``constants`` records
    when the clamp was active.
    """
    _check_eps(eps)
    _check_source(derivative_source)
    if alpha is None:
        alpha = max(1.0, path.sup_norm)
    b = _constant_numerator(path, gap, derivative_source, omega0_at_0, merge_policy)
    rate = 2.0 * b / eps
    if rate == 0.0:
        sched = Schedule(
            rate=_const_fn(0.0),
            kind="constant",
            epsilon=eps,
            q=None,
            constants={"B": 0.0, "log_rate_clamped": 0.0},
            rate_prime=_const_fn(0.0),
            rate_max=0.0,
            derivative_source=derivative_source,
        )
        return sched, QueryCostModel(alpha=alpha, delta=_const_fn(0.5)), 0.0

    delta_const = 4.0 * eps / (27.0 * rate)
    i1 = gap_integral(gap, 1.0)
    log_rate = math.log(rate)
    clamped = log_rate < 0.0
    q_bound = rate * (
        1.5 * math.e * alpha * T0 * i1
        + 3.0 * math.log(27.0 * SIM_C / (2.0 * eps))
        + 3.0 * (max(log_rate, 0.0) + 1.0)
    )
    sched = Schedule(
        rate=_const_fn(rate),
        kind="constant",
        epsilon=eps,
        q=None,
        constants={"B": b, "I1": i1, "log_rate_clamped": 1.0 if clamped else 0.0},
        rate_prime=_const_fn(0.0),
        rate_max=rate * RATE_BOUND_INFLATION,
        derivative_source=derivative_source,
    )
    return sched, QueryCostModel(alpha=alpha, delta=_const_fn(delta_const)), q_bound


def circuit_adaptive_params(
    path: HamiltonianPath,
    gap: GapModel,
    eps: float,
    q: float,
    alpha: float | None = None,
    c_override: float | None = None,
) -> tuple[Schedule, QueryCostModel, float]:
    """Adaptive-rate parameters for the imperfect-evolution algorithm.

    lambda(s) doubles the noiseless adaptive rate, delta(s) = 2 eps /
    (15 lambda(s)) varies with it, and the returned closed-form bound
    majorises the call-count integral (tightest for 1/2 < q < 1).
    ``c_override`` shares a family-level C across a sweep, as in
    adaptive_rate.
    """
    _check_eps(eps)
    if not (0.0 < q <= 1.0):
        raise ValueError(f"q = {q} must lie in (0, 1]")
    if alpha is None:
        alpha = max(1.0, path.sup_norm)
    base = adaptive_rate(path, gap, eps, q, c_override=c_override)
    c = base.constants["C"]
    b1 = base.constants["B1"]
    b2 = base.constants["B2"]
    dm = gap.delta_m
    b3 = dm ** (2.0 * q - 1.0) * gap_integral(gap, 2.0 * q)

    def rate(s):
        return 2.0 * base.rate(s)

    def rate_prime(s):
        return 2.0 * base.rate_prime(s)

    def delta(s):
        return 2.0 * eps / (15.0 * rate(s))

    q_bound = (
        12.0 * c * math.log(1.0 / eps)
        + 3.0 * math.e * alpha * T0 * c * b1
        + 6.0 * math.log(15.0 * SIM_C) * c
        + 12.0 * c**2 * b3
    ) / (eps * dm)
    sched = Schedule(
        rate=rate,
        kind="adaptive",
        epsilon=eps,
        q=q,
        constants={"C": c, "B1": b1, "B2": b2, "B3": b3},
        rate_prime=rate_prime,
        rate_max=2.0 * base.rate_max,
    )
    return sched, QueryCostModel(alpha=alpha, delta=delta), q_bound
