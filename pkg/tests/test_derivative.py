import numpy as np
import pytest

from normgeom import MatrixError, dplus, dplus_band
from normgeom.oracles import fd_derivative
from normgeom.matcore import random_cmat


def test_dplus_examples():
    assert dplus(np.eye(2), np.eye(2)).value == pytest.approx(1.0, abs=1e-14)
    assert dplus(np.diag([2.0, 1.0]), np.diag([0.0, 5.0])).value == pytest.approx(0.0, abs=1e-14)
    assert dplus(np.eye(2), np.diag([1.0, -1.0])).value == pytest.approx(1.0, abs=1e-14)


def test_dplus_seeded_instance_matches_finite_differences():
    rng = np.random.default_rng(11)
    A = random_cmat(rng, 6, 8)
    X = random_cmat(rng, 6, 8)
    A /= np.linalg.norm(A, 2)
    X /= np.linalg.norm(X, 2)
    # forward difference quotient at t = 1e-7 from the oracle
    assert dplus(A, X).value == pytest.approx(-0.05422102322683031, abs=1e-5)


def test_dplus_band_examples():
    A, X = np.diag([2.0, 1.0]), np.diag([0.0, 5.0])
    assert dplus_band(A, X, 0.5).value == pytest.approx(0.0, abs=1e-14)
    assert dplus_band(A, X, 3.5).value == pytest.approx(2.5, abs=1e-14)
    assert dplus_band(A, X, 0.5).band_used == 0.5


def test_band_below_gap_equals_dplus(rng):
    A = random_cmat(rng, 4, 5)
    X = random_cmat(rng, 4, 5)
    s = np.linalg.svd(A, compute_uv=False)
    gap = s[0] ** 2 - s[1] ** 2
    assert dplus_band(A, X, 0.5 * gap).value == pytest.approx(dplus(A, X).value, abs=1e-10)


def test_witness(rng):
    A = random_cmat(rng, 5, 5)
    X = random_cmat(rng, 5, 5)
    r = dplus(A, X)
    phi = r.witness
    assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-10)
    val = (np.vdot(A @ phi, X @ phi)).real / np.linalg.norm(A, 2)
    assert val == pytest.approx(r.value, rel=1e-8)
    assert r.band_used == 0.0


def test_errors():
    with pytest.raises(MatrixError):
        dplus(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(MatrixError):
        dplus(np.eye(2), np.eye(3))
    with pytest.raises(MatrixError):
        dplus_band(np.eye(2), np.eye(2), -1.0)


def test_fd_examples(rng):
    assert fd_derivative(np.eye(2), np.eye(2), [1e-4])[0] == pytest.approx(1.0, abs=1e-11)
    assert fd_derivative(np.eye(2), np.diag([1.0, -1.0]), [1e-4])[0] == pytest.approx(1.0, abs=1e-11)
    A, X = random_cmat(rng, 4, 4), random_cmat(rng, 4, 4)
    q = fd_derivative(A, X, [1e-1, 1e-2, 1e-3, 1e-4])
    assert all(a >= b - 1e-12 for a, b in zip(q, q[1:]))
    with pytest.raises(ValueError):
        fd_derivative(A, X, [1e-3, 0.0])
