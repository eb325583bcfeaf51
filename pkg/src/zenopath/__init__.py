"""Classical simulator for Poisson-dephasing eigenpath traversal.

Evolves a density matrix along an interpolated Hamiltonian family by
projective dephasing at Poisson-distributed points, either trajectory by
trajectory (Monte Carlo) or through the jump-averaged marginal ODE, with
rate schedules, certified error bounds, spectral-window eigenstate
filtering, and oracle-call cost accounting.
"""

from .engine import (
    EnsembleSummary,
    JumpSample,
    NoiseSpec,
    OdeResult,
    RunRecord,
    TauSampler,
    checkpoint_statistics,
    ensemble_statistics,
    make_rng,
    run_ensemble,
    run_marginal_ode,
    run_noisy_trajectory,
    run_trajectory,
    sample_poisson_jumps,
)
from .errors import (
    AmbiguousEigenspaceError,
    FilterError,
    GapClosedError,
    HermiticityError,
    QuadratureError,
    StepUnderflowError,
    ZenopathError,
)
from .filtering import (
    FilterWindow,
    WindowSizeResult,
    apply_filter,
    chebyshev_window,
    design_window,
    filter_until_success,
    lcu_cost,
    window_size,
)
from .gaps import GapModel, constant_gap, gap_integral, numeric_gap_model
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    Projector,
    SpectralInfo,
    block_diagonal_part,
    conjugate_evolution,
    haar_unitary,
    ideal_dephase,
    operator_norm,
    projector_onto,
    random_hermitian,
    spectral_decompose,
    trace_norm,
    trace_norm_diff_of_conjugations,
)
from .paths import HamiltonianPath, lazy_linear_path, linear_path
from .problems import (
    GroverProblem,
    ProblemInstance,
    QLSPProblem,
    custom_instance,
    diag_qlsp_instance,
    grover_instance,
    grover_path,
    qlsp_instance,
    qlsp_path,
    qlsp_problem,
    random_instance,
)
from .quadrature import QuadratureResult, adaptive_simpson
from .schedules import (
    SIM_C,
    T0,
    QueryCostModel,
    Schedule,
    adaptive_rate,
    block_encoding_call_count,
    circuit_adaptive_params,
    circuit_constant_params,
    constant_rate,
    error_bound,
    expected_cost,
    query_cost_integral,
)
from .tracking import EigenspaceTracker, TrackPoint, fd_projector_derivatives
from .verify import SUITES, CheckResult, run_suite

__all__ = [
    "AmbiguousEigenspaceError",
    "CheckResult",
    "DensityMatrix",
    "EigenspaceTracker",
    "EnsembleSummary",
    "FilterError",
    "FilterWindow",
    "GapClosedError",
    "GapModel",
    "GroverProblem",
    "HamiltonianPath",
    "HermitianOperator",
    "HermiticityError",
    "JumpSample",
    "NoiseSpec",
    "OdeResult",
    "ProblemInstance",
    "Projector",
    "QLSPProblem",
    "QuadratureError",
    "QuadratureResult",
    "QueryCostModel",
    "RunRecord",
    "SIM_C",
    "SUITES",
    "Schedule",
    "SpectralInfo",
    "StepUnderflowError",
    "T0",
    "TauSampler",
    "TrackPoint",
    "WindowSizeResult",
    "ZenopathError",
    "adaptive_rate",
    "adaptive_simpson",
    "apply_filter",
    "block_diagonal_part",
    "block_encoding_call_count",
    "chebyshev_window",
    "checkpoint_statistics",
    "circuit_adaptive_params",
    "circuit_constant_params",
    "conjugate_evolution",
    "constant_gap",
    "constant_rate",
    "custom_instance",
    "design_window",
    "diag_qlsp_instance",
    "ensemble_statistics",
    "error_bound",
    "expected_cost",
    "fd_projector_derivatives",
    "filter_until_success",
    "gap_integral",
    "grover_instance",
    "grover_path",
    "haar_unitary",
    "ideal_dephase",
    "lazy_linear_path",
    "lcu_cost",
    "linear_path",
    "make_rng",
    "numeric_gap_model",
    "operator_norm",
    "projector_onto",
    "qlsp_instance",
    "qlsp_path",
    "qlsp_problem",
    "query_cost_integral",
    "random_hermitian",
    "random_instance",
    "run_ensemble",
    "run_marginal_ode",
    "run_noisy_trajectory",
    "run_suite",
    "run_trajectory",
    "sample_poisson_jumps",
    "spectral_decompose",
    "trace_norm",
    "trace_norm_diff_of_conjugations",
    "window_size",
]
