import numpy as np
import pytest

from zenopath.errors import AmbiguousEigenspaceError, HermiticityError
from zenopath.linalg import (
    DensityMatrix,
    HermitianOperator,
    Projector,
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


def test_operator_norm_matches_largest_singular_value(rng):
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    assert operator_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False)[0])


def test_trace_norm_of_hermitian_is_sum_of_abs_eigenvalues():
    h = np.diag([3.0, -2.0, 0.5])
    assert trace_norm(h) == pytest.approx(5.5)


def test_hermitian_operator_rejects_asymmetric_matrix():
    with pytest.raises(HermiticityError):
        HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_operator_rejects_non_square():
    with pytest.raises(ValueError):
        HermitianOperator(np.zeros((2, 3)))


def test_spectral_decompose_groups_degenerate_cluster():
    h = HermitianOperator(np.diag([0.0, 1.0, 1.0, 1.0]))
    spec = spectral_decompose(h)
    assert spec.multiplicity_map == {0.0: 1, 1.0: 3}
    assert np.allclose(spec.reconstruct(), h.entries)


def test_spectral_decompose_cluster_tol_merges_near_degeneracy():
    h = HermitianOperator(np.diag([0.0, 1.0, 1.0 + 1e-9]))
    spec = spectral_decompose(h, cluster_tol=1e-6)
    assert len(spec.clusters) == 2
    spec_fine = spectral_decompose(h, cluster_tol=1e-12)
    assert len(spec_fine.clusters) == 3


def test_density_matrix_validates_trace_and_positivity():
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))
    DensityMatrix(np.diag([0.5, 0.5]))


def test_density_matrix_pure_normalises():
    rho = DensityMatrix.pure(np.array([2.0, 0.0]))
    assert rho.entries[0, 0] == pytest.approx(1.0)


def test_projector_validates_idempotence_and_rank():
    p = Projector(np.diag([1.0, 1.0, 0.0]))
    assert p.rank == 2
    with pytest.raises(ValueError):
        Projector(np.diag([0.5, 0.0]))
    with pytest.raises(ValueError):
        Projector(np.diag([1.0, 0.0]), rank=2)


def test_projector_onto_selects_unique_cluster():
    spec = spectral_decompose(HermitianOperator(np.diag([0.0, 0.3, 1.0, 1.0])))
    p = projector_onto(spec, 1.0, tol=1e-6)
    assert p.rank == 2
    with pytest.raises(AmbiguousEigenspaceError):
        projector_onto(spec, 0.15, tol=1e-6)
    with pytest.raises(AmbiguousEigenspaceError):
        projector_onto(spec, 0.5, tol=0.8)


def test_conjugate_evolution_preserves_spectrum_and_diagonal_commutes():
    h = HermitianOperator(np.diag([0.0, 1.0]))
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    out = conjugate_evolution(rho, h, t=3.7)
    assert np.allclose(out.entries, rho.entries)
    rho2 = DensityMatrix(np.full((2, 2), 0.5, dtype=complex))
    out2 = conjugate_evolution(rho2, h, t=np.pi)
    assert out2.entries[0, 1] == pytest.approx(-0.5)


def test_block_diagonal_part_kills_cross_terms():
    p = np.diag([1.0, 0.0]).astype(complex)
    rho = np.array([[0.5, 0.4], [0.4, 0.5]], dtype=complex)
    out = block_diagonal_part(rho, p)
    assert np.allclose(out, np.diag([0.5, 0.5]))


def test_ideal_dephase_is_idempotent_and_trace_preserving(rng):
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rho = DensityMatrix.pure(psi)
    p = Projector(np.diag([1.0, 1.0, 0.0, 0.0]))
    d1 = ideal_dephase(rho, p)
    d2 = ideal_dephase(d1, p)
    assert np.trace(d1.entries) == pytest.approx(1.0)
    assert np.allclose(d1.entries, d2.entries, atol=1e-14)
    with pytest.raises(ValueError):
        ideal_dephase(rho, Projector(np.diag([1.0, 0.0])))


def test_dephase_preserves_tracked_weight(rng):
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rho = DensityMatrix.pure(psi)
    p = Projector(np.diag([1.0, 0.0, 1.0, 0.0]))
    before = np.real(np.trace(p.entries @ rho.entries))
    after = np.real(np.trace(p.entries @ ideal_dephase(rho, p).entries))
    assert after == pytest.approx(before)


def test_conjugation_difference_bound_single_case(rng):
    # ||A rho A* - B rho B*||_1 <= 2 delta ||A|| + delta^2 with ||A - B|| <= delta
    dim = 4
    a = haar_unitary(dim, rng)
    defect = random_hermitian(dim, rng, norm=1.0)
    delta = 0.2
    b = a + delta * (defect @ a)
    d = operator_norm(a - b)
    rho = DensityMatrix.pure(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))
    lhs = trace_norm_diff_of_conjugations(a, b, rho)
    assert lhs <= 2 * d * operator_norm(a) + d**2 + 1e-12


def test_random_hermitian_norm_and_symmetry(rng):
    h = random_hermitian(6, rng, norm=0.7)
    assert np.allclose(h, h.conj().T)
    assert operator_norm(h) == pytest.approx(0.7)


def test_haar_unitary_is_unitary(rng):
    u = haar_unitary(5, rng)
    assert np.allclose(u @ u.conj().T, np.eye(5), atol=1e-12)
