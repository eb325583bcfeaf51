import numpy as np
import pytest

from zenopath.linalg import HermitianOperator
from zenopath.paths import MAX_DENSE_DIM, lazy_linear_path, linear_path


def _pair():
    h0 = HermitianOperator(np.diag([0.0, 1.0, 2.0]))
    h1 = HermitianOperator(np.array([[1.0, 0.5, 0.0], [0.5, 0.0, 0.0], [0.0, 0.0, 1.0]]))
    return h0, h1


def test_linear_path_interpolates_endpoints_and_midpoint():
    h0, h1 = _pair()
    path = linear_path(h0, h1)
    assert np.allclose(path.matrix(0.0), h0.entries)
    assert np.allclose(path.matrix(1.0), h1.entries)
    assert np.allclose(path.matrix(0.5), (h0.entries + h1.entries) / 2)


def test_linear_path_derivatives_are_constant():
    h0, h1 = _pair()
    path = linear_path(h0, h1)
    diff = h1.entries - h0.entries
    for s in (0.0, 0.3, 1.0):
        assert np.allclose(path.d1(s).entries, diff)
        assert np.allclose(path.d2(s).entries, 0.0)
        assert path.d1_norm(s) == pytest.approx(np.linalg.norm(diff, 2))
        assert path.d2_norm(s) == 0.0
    assert path.sup_d1_norm == pytest.approx(np.linalg.norm(diff, 2))
    assert path.sup_d2_norm == 0.0


def test_linear_path_sup_norm_covers_all_s():
    h0, h1 = _pair()
    path = linear_path(h0, h1)
    worst = max(np.linalg.norm(path.matrix(s), 2) for s in np.linspace(0, 1, 41))
    assert path.sup_norm >= worst - 1e-12


def test_linear_path_rejects_dimension_mismatch():
    h0 = HermitianOperator(np.zeros((2, 2)))
    h1 = HermitianOperator(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        linear_path(h0, h1)


def test_lazy_path_matches_dense_path():
    h0, h1 = _pair()
    dense = linear_path(h0, h1)
    lazy = lazy_linear_path(
        lambda: h0.entries,
        lambda: h1.entries,
        dim=3,
        d1_norm=dense.sup_d1_norm,
        sup_norm=dense.sup_norm,
    )
    for s in (0.0, 0.25, 0.8, 1.0):
        assert np.allclose(lazy.matrix(s), dense.matrix(s))
    assert np.allclose(lazy.d1(0.5).entries, dense.d1(0.5).entries)


def test_lazy_path_builds_endpoints_once():
    calls = {"h0": 0, "h1": 0}

    def b0():
        calls["h0"] += 1
        return np.zeros((2, 2))

    def b1():
        calls["h1"] += 1
        return np.eye(2)

    path = lazy_linear_path(b0, b1, dim=2, d1_norm=1.0, sup_norm=1.0)
    for s in (0.1, 0.2, 0.3):
        path.matrix(s)
    assert calls == {"h0": 1, "h1": 1}


def test_lazy_path_refuses_dense_evaluation_above_cap():
    dim = MAX_DENSE_DIM + 1
    path = lazy_linear_path(
        lambda: np.zeros((dim, dim)),
        lambda: np.eye(dim),
        dim=dim,
        d1_norm=1.0,
        sup_norm=1.0,
    )
    # norm shortcuts still work without touching matrices
    assert path.d1_norm(0.5) == 1.0
    with pytest.raises(ValueError):
        path.matrix(0.5)
