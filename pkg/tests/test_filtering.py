import math

import numpy as np
import pytest

from zenopath.errors import FilterError
from zenopath.filtering import (
    RETRY_CAP,
    FilterWindow,
    apply_filter,
    cheb_T,
    chebyshev_window,
    design_window,
    filter_until_success,
    lcu_cost,
    window_size,
)
from zenopath.linalg import DensityMatrix, HermitianOperator


class TestChebyshev:
    def test_matches_numpy_inside_unit_interval(self):
        x = np.linspace(-1, 1, 101)
        for k in (0, 1, 3, 8):
            ref = np.polynomial.chebyshev.Chebyshev.basis(k)(x)
            assert np.allclose(cheb_T(k, x), ref, atol=1e-12)

    def test_cosh_branch_continues_smoothly(self):
        x = np.array([1.0 - 1e-12, 1.0 + 1e-12, 2.0, -2.0])
        vals = cheb_T(5, x)
        assert vals[0] == pytest.approx(vals[1], abs=1e-8)
        assert vals[2] == pytest.approx(np.cosh(5 * np.arccosh(2.0)))
        # odd degree preserves sign
        assert vals[3] == pytest.approx(-vals[2])


class TestWindowSize:
    def test_frozen_design_point(self):
        res = window_size(0.1, 1e-8)
        assert res.n == 99
        assert res.exact == pytest.approx(98.8696795437022, rel=1e-12)
        assert res.bound == pytest.approx(99.03487552536127, rel=1e-12)
        # the un-rounded requirement never exceeds the closed-form rule
        assert res.exact <= res.bound

    def test_size_shrinks_with_wider_band(self):
        assert window_size(0.2, 1e-8).n < window_size(0.1, 1e-8).n
        assert window_size(0.1, 1e-4).n < window_size(0.1, 1e-8).n

    def test_acts_as_integer(self):
        assert list(range(window_size(0.5, 0.1).n)) == list(range(window_size(0.5, 0.1)))

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            window_size(0.0, 1e-4)
        with pytest.raises(ValueError):
            window_size(math.pi / 2, 1e-4)
        with pytest.raises(ValueError):
            window_size(0.1, 0.0)
        with pytest.raises(ValueError):
            window_size(0.1, 1.0)


class TestWindowSynthesis:
    def test_frozen_ripple(self):
        win = chebyshev_window(99, 0.1)
        assert win.ripple == pytest.approx(9.993601748164635e-05, rel=1e-12)
        # analytic value is 1 / T_2n(sec(delta/2))
        z0 = 1.0 / math.cos(0.05)
        assert win.ripple == pytest.approx(1.0 / float(cheb_T(198, np.array([z0]))[0]), rel=1e-9)

    def test_doubling_identity(self):
        # T_4n = 2 T_2n^2 - 1 turns ripple r at width n into r^2/(2 - r^2)
        r = chebyshev_window(99, 0.1).ripple
        r2 = chebyshev_window(198, 0.1).ripple
        assert r2 == pytest.approx(r * r / (2.0 - r * r), rel=1e-5)

    def test_coefficients_are_a_unit_probability_window(self):
        win = chebyshev_window(25, 0.3)
        w = win.coefficients
        assert w.shape == (51,)
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert (w >= 0.0).all()
        assert np.allclose(w, w[::-1], atol=1e-15)

    def test_response_normalised_at_zero_and_small_in_stopband(self):
        win = chebyshev_window(40, 0.25)
        assert float(win.response(0.0)[0]) == pytest.approx(1.0, abs=1e-9)
        grid = np.linspace(0.25, math.pi, 4001)
        assert np.abs(win.response(grid)).max() <= win.ripple * (1.0 + 1e-9)

    def test_pass_band_amplitude_never_exceeds_one(self):
        win = chebyshev_window(40, 0.25)
        grid = np.linspace(-0.25, 0.25, 1001)
        assert np.abs(win.response(grid)).max() <= 1.0 + 1e-9

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            chebyshev_window(0, 0.1)
        with pytest.raises(ValueError):
            chebyshev_window(5, 2.0)

    def test_window_dataclass_validation(self):
        with pytest.raises(ValueError):
            FilterWindow(n=1, coefficients=np.array([0.5, 0.5]), delta_band=0.1,
                         epsilon_target=1e-4, ripple=1e-2)
        with pytest.raises(ValueError):
            FilterWindow(n=1, coefficients=np.array([0.2, 0.2, 0.2]), delta_band=0.1,
                         epsilon_target=1e-4, ripple=1e-2)
        with pytest.raises(ValueError):
            FilterWindow(n=1, coefficients=np.array([0.5, 0.25, 0.25]), delta_band=0.1,
                         epsilon_target=1e-4, ripple=1e-2)


class TestDesignWindow:
    def test_meets_ripple_target(self):
        for delta, eps in ((0.1, 1e-8), (0.5, 1e-6), (1.0, 1e-3)):
            win = design_window(delta, eps)
            assert win.ripple <= math.sqrt(eps) * (1.0 + 1e-6)
            assert win.epsilon_target == eps

    def test_grows_half_width_when_design_rule_is_optimistic(self):
        # at delta = 0.5 the closed-form size of 15 realises ripple above
        # sqrt(eps); one extra unit fixes it
        assert window_size(0.5, 1e-6).n == 15
        assert design_window(0.5, 1e-6).n == 16


class TestApplyFilter:
    def test_two_level_success_probability(self):
        h = HermitianOperator(np.diag([0.0, 1.0]))
        rho = DensityMatrix(np.diag([0.6, 0.4]))
        win = design_window(0.5, 1e-6)
        out, success = apply_filter(h, rho, win, 0.0)
        # success = 0.6 * A(0)^2 + 0.4 * A(1)^2 with A(0) = 1, |A(1)| <= ripple
        assert 0.6 <= success <= 0.6 + 0.4 * win.ripple**2 * (1 + 1e-9)
        assert out.entries[0, 0].real == pytest.approx(1.0, abs=1e-6)

    def test_preserves_target_eigenstate(self):
        h = HermitianOperator(np.diag([0.3, 1.5]))
        rho = DensityMatrix.pure(np.array([1.0, 0.0]))
        win = design_window(0.4, 1e-4)
        out, success = apply_filter(h, rho, win, 0.3)
        assert success == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(out.entries, rho.entries, atol=1e-9)

    def test_spectrum_outside_period_rejected(self):
        h = HermitianOperator(np.diag([0.0, 4.0]))
        rho = DensityMatrix(np.diag([0.5, 0.5]))
        win = design_window(0.4, 1e-4)
        with pytest.raises(FilterError):
            apply_filter(h, rho, win, 0.0)

    def test_annihilated_state_rejected(self):
        # state fully off-band: success <= ripple^2 = 1e-14, under the
        # 1e-12 annihilation threshold
        h = HermitianOperator(np.diag([0.0, 1.5]))
        rho = DensityMatrix.pure(np.array([0.0, 1.0]))
        win = design_window(0.3, 1e-14)
        with pytest.raises(FilterError):
            apply_filter(h, rho, win, 0.0)

    def test_mixed_state_purifies_toward_band(self):
        h = HermitianOperator(np.diag([0.0, 0.9, 1.4]))
        rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
        win = design_window(0.5, 1e-8)
        out, success = apply_filter(h, rho, win, 0.0)
        assert success == pytest.approx(0.5, abs=1e-7)
        assert out.entries[0, 0].real == pytest.approx(1.0, abs=1e-7)


class TestRepeatUntilSuccess:
    def test_repeat_count_is_geometric(self):
        h = HermitianOperator(np.diag([0.0, 1.0]))
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        win = design_window(0.5, 1e-6)
        reps = np.array(
            [filter_until_success(h, rho, win, 0.0, seed)[1] for seed in range(2000)]
        )
        p = 0.3
        sigma = math.sqrt((1 - p) / p**2 / 2000)
        assert reps.mean() == pytest.approx(1 / p, abs=3 * sigma)
        assert reps.min() >= 1

    def test_cost_accounting(self):
        h = HermitianOperator(np.diag([0.0, 1.0]))
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        win = design_window(0.5, 1e-6)
        rho_f, repeats, cost = filter_until_success(h, rho, win, 0.0, 99, preparation_cost=10.0)
        assert cost == pytest.approx(repeats * (lcu_cost(win.n, 1.0) + 10.0))
        assert rho_f.entries[0, 0].real == pytest.approx(1.0, abs=1e-5)

    def test_seed_determinism(self):
        h = HermitianOperator(np.diag([0.0, 1.0]))
        rho = DensityMatrix(np.diag([0.3, 0.7]))
        win = design_window(0.5, 1e-6)
        a = filter_until_success(h, rho, win, 0.0, 123)
        b = filter_until_success(h, rho, win, 0.0, 123)
        assert a[1] == b[1] and a[2] == b[2]

    def test_retry_cap(self):
        # success probability ~2.4e-7 makes a run of 1000 failures certain
        # for practical seeds
        h = HermitianOperator(np.diag([0.0, 1.0]))
        eps_weight = 1e-12
        rho = DensityMatrix(np.diag([eps_weight, 1.0 - eps_weight]))
        win = design_window(0.5, 1e-6)
        with pytest.raises(FilterError, match=str(RETRY_CAP)):
            filter_until_success(h, rho, win, 0.0, 0)


class TestLcuCost:
    def test_formula(self):
        assert lcu_cost(1, 1.0) == 3.0
        assert lcu_cost(10, 2.0) == 50.0

    def test_validation(self):
        with pytest.raises(ValueError):
            lcu_cost(0, 1.0)
        with pytest.raises(ValueError):
            lcu_cost(5, 0.0)
