import numpy as np
import pytest

from normgeom import (DensityCert, MatrixError, best_approx, conv_zero_test,
                      joint_w0_sample, tuple_cert_search, tuple_max_space,
                      tuple_norm)
from normgeom.matcore import random_cmat
from normgeom.tuples import OpTuple, as_tuple

from helpers import planted_tuple

I2 = np.eye(2)
D1M1 = np.diag([1.0, -1.0])
D31 = np.diag([3.0, 1.0])


def test_optuple_validation():
    with pytest.raises(MatrixError):
        as_tuple([np.eye(2), np.eye(3)])
    with pytest.raises(MatrixError):
        as_tuple([])
    T = as_tuple(np.eye(2))
    assert isinstance(T, OpTuple) and T.d == 1 and T.shape == (2, 2)
    assert as_tuple(T) is T


def test_tuple_norm_examples(rng):
    assert tuple_norm([I2, I2]) == pytest.approx(np.sqrt(2), abs=1e-15)
    assert tuple_norm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]) == pytest.approx(1.0)
    M = random_cmat(rng, 3, 4)
    assert tuple_norm([M]) == pytest.approx(np.linalg.norm(M, 2), rel=1e-14)


def test_tuple_max_space_examples():
    ms = tuple_max_space([np.diag([2.0, 1.0])])
    assert ms.k == 1 and abs(abs(ms.basis[0, 0]) - 1) < 1e-15
    assert tuple_max_space([I2, I2]).k == 2
    assert tuple_max_space([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]).k == 2
    with pytest.raises(MatrixError):
        tuple_max_space([np.zeros((2, 2))])


def test_joint_w0_sample_examples(rng):
    s = joint_w0_sample([I2], [I2], 200, 0)
    assert np.allclose(s.points, 1)
    s = joint_w0_sample([D1M1], [I2], 5000, 1)
    assert np.allclose(s.points.imag, 0)
    assert s.points.real.min() < -0.95 and s.points.real.max() > 0.95
    assert np.all(np.abs(s.points.real) <= 1 + 1e-12)
    s = joint_w0_sample([np.diag([2.0, 1.0])], [np.diag([0.0, 5.0])], 50, 2)
    assert np.allclose(s.points, 0)
    with pytest.raises(MatrixError):
        joint_w0_sample([I2], [I2, I2], 5, 0)


def test_joint_w0_sample_recomputable(rng):
    A = [random_cmat(rng, 3, 3) for _ in range(2)]
    X = [random_cmat(rng, 3, 3) for _ in range(2)]
    s = joint_w0_sample(A, X, 100, 3)
    assert np.max(np.abs(s.recompute(A, X) - s.points)) <= 1e-9
    s2 = joint_w0_sample(A, X, 100, 3)
    assert np.array_equal(s.points, s2.points)


def test_conv_zero_test_examples():
    v, eta = conv_zero_test([I2], [I2])
    assert v is False and eta[0] == pytest.approx(-1.0, abs=1e-6)
    v, cert = conv_zero_test([D1M1], [I2])
    assert v is True and isinstance(cert, DensityCert)


def test_conv_zero_test_seeded_instance():
    rng = np.random.default_rng(16)
    M = np.vstack([random_cmat(rng, 4, 4) for _ in range(2)])
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    s[:3] = s[0]
    M = (U * s) @ Vh / s[0]
    A = [M[:4], M[4:]]
    X = [random_cmat(rng, 4, 4) / 2 for _ in range(2)]
    # grid minimum of ||A + lam X|| equals ||A|| to rounding
    assert conv_zero_test(A, X)[0] is True


def test_conv_zero_test_errors():
    with pytest.raises(MatrixError):
        conv_zero_test([I2], [np.eye(3)])
    with pytest.raises(MatrixError):
        conv_zero_test([np.zeros((2, 2))], [I2])
    with pytest.raises(MatrixError):
        conv_zero_test([I2] * 9, [I2] * 9)
    with pytest.warns(RuntimeWarning):
        conv_zero_test([I2] * 4, [D1M1] * 4)


def test_tuple_cert_search_examples(rng):
    cert, floor = tuple_cert_search([D1M1], [I2])
    assert np.allclose(cert.ambient, I2 / 2)
    cert, floor = tuple_cert_search([I2], [I2])
    assert cert is None and floor == pytest.approx(1.0)
    for d in (1, 2, 3):
        A, X, _ = planted_tuple(rng, d, 4, 3)
        cert, floor = tuple_cert_search(A, X)
        assert cert is not None and floor <= 1e-7
        cert.check(1e-9)


def test_best_approx_examples():
    r = best_approx([D1M1], [I2])
    assert r.dist == pytest.approx(1.0, abs=1e-8)
    assert abs(r.lambda_star[0]) <= 1e-8 and r.certified
    r = best_approx([D31], [I2])
    assert r.dist == pytest.approx(1.0, abs=1e-8)
    assert r.lambda_star[0] == pytest.approx(-2.0, abs=1e-8) and r.certified
    assert r.dist == pytest.approx(tuple_norm(r.residual_tuple), abs=1e-10)


def test_best_approx_seeded_instance():
    rng = np.random.default_rng(15)
    A = [random_cmat(rng, 3, 3) / 2 for _ in range(2)]
    X = [random_cmat(rng, 3, 3) / 2 for _ in range(2)]
    r = best_approx(A, X)
    # tuple_oracle minimum on a 13-point polar product grid plus refinement
    assert r.dist == pytest.approx(1.5101974724290566, abs=1e-3)
    assert r.certified
    assert conv_zero_test(r.residual_tuple, X, tol=1e-6)[0]


def test_best_approx_errors():
    with pytest.raises(MatrixError):
        best_approx([I2], [np.zeros((2, 2))])
    with pytest.raises(ValueError):
        best_approx([I2], [I2], method="newton")


def test_polyak_variant_makes_progress():
    r = best_approx([D31], [I2], method="polyak", max_iters=2000)
    assert r.dist == pytest.approx(1.0, abs=1e-2)


def test_partially_zero_direction():
    # X_2 = 0: lambda_2 is irrelevant and stays at 0
    A = [D31, np.eye(2)]
    X = [np.eye(2), np.zeros((2, 2))]
    r = best_approx(A, X)
    assert r.lambda_star[1] == 0
    assert r.dist == pytest.approx(np.sqrt(2.0), abs=1e-8)
