"""Invariant checks driven by randomised inputs."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zenopath.engine import make_rng
from zenopath.filtering import chebyshev_window
from zenopath.linalg import (
    DensityMatrix,
    Projector,
    haar_unitary,
    ideal_dephase,
    operator_norm,
    random_hermitian,
    trace_norm_diff_of_conjugations,
)
from zenopath.quadrature import adaptive_simpson

dims = st.integers(min_value=2, max_value=6)
seeds = st.integers(min_value=0, max_value=2**31 - 1)


def _pure_state(dim: int, seed: int) -> DensityMatrix:
    rng = make_rng(seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityMatrix.pure(psi)


def _projector(dim: int, rank: int, seed: int) -> Projector:
    rng = make_rng(seed ^ 0xA5A5)
    u = haar_unitary(dim, rng)
    cols = u[:, :rank]
    return Projector(cols @ cols.conj().T, rank=rank)


class TestDephaseChannel:
    @given(dim=dims, seed=seeds, data=st.data())
    def test_idempotent_trace_preserving_positive(self, dim, seed, data):
        rank = data.draw(st.integers(min_value=1, max_value=dim - 1))
        rho = _pure_state(dim, seed)
        p = _projector(dim, rank, seed)
        out = ideal_dephase(rho, p)
        again = ideal_dephase(out, p)
        assert np.trace(out.entries).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(out.entries, again.entries, atol=1e-12)
        assert np.linalg.eigvalsh(out.entries).min() > -1e-10

    @given(dim=dims, seed=seeds, data=st.data())
    def test_tracked_weight_is_invariant(self, dim, seed, data):
        rank = data.draw(st.integers(min_value=1, max_value=dim - 1))
        rho = _pure_state(dim, seed)
        p = _projector(dim, rank, seed)
        before = np.trace(p.entries @ rho.entries).real
        after = np.trace(p.entries @ ideal_dephase(rho, p).entries).real
        assert after == pytest.approx(before, abs=1e-12)

    @given(dim=dims, seed=seeds, data=st.data())
    def test_pinching_never_increases_purity(self, dim, seed, data):
        rank = data.draw(st.integers(min_value=1, max_value=dim - 1))
        rho = _pure_state(dim, seed)
        p = _projector(dim, rank, seed)
        out = ideal_dephase(rho, p)
        assert np.trace(out.entries @ out.entries).real <= 1.0 + 1e-12


class TestConjugationContinuity:
    @given(dim=dims, seed=seeds, delta=st.floats(min_value=1e-4, max_value=0.5))
    def test_trace_norm_difference_bound(self, dim, seed, delta):
        # ||A rho A* - B rho B*||_1 <= 2 delta ||A|| + delta^2 for ||A-B|| <= delta
        rng = make_rng(seed)
        a = haar_unitary(dim, rng)
        direction = random_hermitian(dim, rng, norm=1.0)
        b = a + delta * direction
        d = operator_norm(a - b)
        rho = _pure_state(dim, seed ^ 1)
        lhs = trace_norm_diff_of_conjugations(a, b, rho)
        assert lhs <= 2.0 * d * operator_norm(a) + d * d + 1e-10


class TestWindows:
    @given(
        n=st.integers(min_value=1, max_value=60),
        delta=st.floats(min_value=0.05, max_value=1.4),
    )
    def test_response_bounded_by_one_everywhere(self, n, delta):
        win = chebyshev_window(n, delta)
        grid = np.linspace(-math.pi, math.pi, 801)
        assert np.abs(win.response(grid)).max() <= 1.0 + 1e-9

    @given(
        n=st.integers(min_value=1, max_value=60),
        delta=st.floats(min_value=0.05, max_value=1.4),
    )
    def test_stopband_within_declared_ripple(self, n, delta):
        # declared ripple may undershoot the realised one by float rounding
        # only; the module admits 1e-9 relative plus 1e-15 absolute
        win = chebyshev_window(n, delta)
        grid = np.linspace(delta, math.pi, 801)
        assert np.abs(win.response(grid)).max() <= win.ripple * (1.0 + 1e-9) + 1e-15

    @given(
        n=st.integers(min_value=1, max_value=60),
        delta=st.floats(min_value=0.05, max_value=1.4),
    )
    def test_coefficients_form_a_distribution(self, n, delta):
        w = chebyshev_window(n, delta).coefficients
        assert (w >= 0).all()
        assert w.sum() == pytest.approx(1.0, abs=1e-12)


class TestQuadrature:
    @given(
        coeffs=st.lists(
            st.floats(min_value=-5.0, max_value=5.0), min_size=1, max_size=4
        ),
        b=st.floats(min_value=0.1, max_value=3.0),
    )
    def test_cubics_integrate_exactly(self, coeffs, b):
        poly = np.polynomial.Polynomial(coeffs)
        res = adaptive_simpson(poly, 0.0, b)
        exact = poly.integ()(b) - poly.integ()(0.0)
        assert res.value == pytest.approx(exact, abs=1e-9 * max(1.0, abs(exact)))

    @given(seed=seeds)
    def test_additivity_over_subintervals(self, seed):
        rng = make_rng(seed)
        c = rng.uniform(0.2, 0.8)

        def f(x):
            return math.exp(-3.0 * x) * math.cos(5.0 * x)

        whole = adaptive_simpson(f, 0.0, 1.0, rel_tol=1e-11).value
        parts = (
            adaptive_simpson(f, 0.0, c, rel_tol=1e-11).value
            + adaptive_simpson(f, c, 1.0, rel_tol=1e-11).value
        )
        assert whole == pytest.approx(parts, abs=1e-9)


class TestRngStreams:
    @given(seed=seeds, index=st.integers(min_value=0, max_value=2**20))
    def test_substream_equals_xored_root_stream(self, seed, index):
        a = make_rng(seed, index).random(4)
        b = make_rng(seed ^ index, 0).random(4)
        assert np.array_equal(a, b)

    @given(seed=seeds)
    def test_neighbouring_substreams_differ(self, seed):
        a = make_rng(seed, 0).random(8)
        b = make_rng(seed, 1).random(8)
        assert not np.array_equal(a, b)
