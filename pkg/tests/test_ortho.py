import numpy as np
import pytest

from normgeom import (MatrixError, cert_from_coeff, eps_ortho_pair,
                      eps_ortho_subspace, functional, max_space,
                      numrange_boundary, numrange_dist0, numrange_support,
                      restricted_norm)
from normgeom.matcore import random_cmat
from normgeom.oracles import ortho_pair_oracle
from normgeom.ortho import numrange_point_vector, project_density

from helpers import normalized, with_top_multiplicity

E11 = np.diag([1.0, 0.0])
E22 = np.diag([0.0, 1.0])


def test_numrange_support_examples():
    assert numrange_support([[1]], 0.0)[0] == pytest.approx(1.0)
    assert numrange_support([[1]], np.pi)[0] == pytest.approx(-1.0)
    assert numrange_support(np.diag([2.0, 3.0]), 0.0)[0] == pytest.approx(3.0)
    with pytest.raises(MatrixError):
        numrange_support(np.ones((2, 3)), 0.0)


def test_numrange_dist0_examples():
    assert numrange_dist0(np.eye(2))[0] == pytest.approx(1.0, abs=1e-12)
    assert numrange_dist0(np.diag([2.0, 3.0]))[0] == pytest.approx(2.0, abs=1e-12)
    # sampled points of W([[0,2],[0,0]]) fill the unit disc; 0 is attained at e1
    assert numrange_dist0(np.array([[0, 2], [0, 0]]))[0] == pytest.approx(0.0, abs=1e-12)


def _dense_support(M, thetas):
    H = np.exp(-1j * thetas)[:, None, None] * M[None]
    return np.linalg.eigvalsh(0.5 * (H + np.conj(np.swapaxes(H, 1, 2))))[:, -1]


def test_numrange_dist0_against_dense_directions(rng):
    thetas = np.linspace(0, 2 * np.pi, 20001)
    for _ in range(10):
        M = random_cmat(rng, 4, 4) + (2 + 2j) * np.eye(4)
        d, _ = numrange_dist0(M)
        sup = _dense_support(M, thetas)
        t0 = thetas[np.argmin(sup)]
        sup = np.minimum(sup.min(), _dense_support(M, np.linspace(t0 - 1e-3, t0 + 1e-3, 20001)))
        assert d == pytest.approx(max(0.0, -sup.min()), abs=1e-8)


def test_point_vector_reaches_nearest_point(rng):
    for _ in range(20):
        M = random_cmat(rng, 3, 3) + rng.uniform(-2, 2) * np.eye(3)
        d, theta = numrange_dist0(M)
        v = numrange_point_vector(M, theta_star=theta)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        assert abs(v.conj() @ M @ v) == pytest.approx(d, abs=1e-8)


def test_numrange_boundary_invariants(rng):
    M = random_cmat(rng, 4, 4)
    b = numrange_boundary(M, 90)
    assert len(b.samples) == 90
    pts = b.points
    for i in range(90):
        v = b.vectors[i]
        assert abs(v.conj() @ M @ v - pts[i]) <= 1e-9
        proj = (np.exp(-1j * b.thetas[i]) * pts).real
        assert b.supports[i] >= proj.max() - 1e-9


def test_eps_ortho_pair_examples():
    r = eps_ortho_pair(E11, E22, 0)
    assert r.verdict and r.witness_kind == "vector"
    assert np.allclose(np.abs(r.witness), [1, 0])
    r = eps_ortho_pair(np.eye(2), np.eye(2), 0.5)
    assert not r.verdict and r.witness_kind == "theta"
    assert r.margin == pytest.approx(-0.5, abs=1e-12)


def test_eps_ortho_pair_errors():
    with pytest.raises(ValueError, match=r"eps must lie in \[0,1\)"):
        eps_ortho_pair(np.eye(2), np.eye(2), 1.2)
    with pytest.raises(ValueError):
        eps_ortho_pair(np.eye(2), np.eye(2), -0.1)
    with pytest.raises(MatrixError):
        eps_ortho_pair(np.zeros((2, 2)), np.eye(2), 0.1)
    with pytest.raises(MatrixError):
        eps_ortho_pair(np.eye(2), np.eye(3), 0.1)


def test_eps_ortho_pair_witness_invariant(rng):
    for _ in range(20):
        A = with_top_multiplicity(random_cmat(rng, 4, 4), 2)
        B = random_cmat(rng, 4, 4)
        r = eps_ortho_pair(A, B, 0.5)
        if not r.verdict:
            continue
        phi = r.witness
        a, b = np.linalg.norm(A, 2), np.linalg.norm(B, 2)
        assert np.linalg.norm(phi) == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.norm(A.conj().T @ A @ phi - a * a * phi) <= 1e-7 * a * a
        assert abs(np.vdot(phi, A.conj().T @ B @ phi)) <= 0.5 * a * b + r.tol


def test_eps_ortho_pair_matches_oracle(rng):
    for _ in range(50):
        A, B = normalized(rng, 5, 5), normalized(rng, 5, 5)
        for eps in (0.0, 0.1, 0.5):
            r = eps_ortho_pair(A, B, eps)
            v, _, _ = ortho_pair_oracle(A, B, eps)
            if abs(r.margin) > 1e-4:
                assert r.verdict == v


def test_boundary_flag():
    r = eps_ortho_pair(E11, E22, 0.0)
    assert r.boundary and r.verdict


def test_restricted_norm_examples():
    A = np.eye(2)
    f = functional(A, cert_from_coeff(max_space(A), np.eye(2) / 2))
    assert restricted_norm(f, [np.diag([1.0, -1.0])]) == pytest.approx(0.0, abs=1e-14)
    assert restricted_norm(f, [A]) == pytest.approx(1.0, abs=1e-12)


def test_restricted_norm_matches_dense_grid():
    rng = np.random.default_rng(13)
    A = random_cmat(rng, 4, 4)
    U, s, Vh = np.linalg.svd(A)
    s[1] = s[0]
    A = (U * s) @ Vh
    W = [random_cmat(rng, 4, 4) for _ in range(2)]
    V = Vh.conj().T[:, :2]
    Z = random_cmat(rng, 2, 2)
    C = Z @ Z.conj().T
    C /= np.trace(C).real
    ms = max_space(A)
    P = V @ C @ V.conj().T
    f = functional(A, cert_from_coeff(ms, ms.basis.conj().T @ P @ ms.basis))
    # maximum over a 100489-point grid of unit coefficient vectors
    assert restricted_norm(f, W) == pytest.approx(0.456573062981127, abs=1e-3)


def test_restricted_norm_rejects_dependent_basis(rng):
    A = random_cmat(rng, 3, 3)
    ms = max_space(A)
    f = functional(A, cert_from_coeff(ms, np.eye(ms.k) / ms.k))
    X = random_cmat(rng, 3, 3)
    with pytest.raises(MatrixError, match="dependent"):
        restricted_norm(f, [X, 2 * X])
    with pytest.raises(MatrixError):
        restricted_norm(f, [])
    with pytest.raises(MatrixError):
        restricted_norm(f, [np.eye(2)])


def test_eps_ortho_subspace_examples():
    r = eps_ortho_subspace(E11, [E22], 0.0)
    assert r.verdict and r.witness_kind == "certificate"
    assert np.allclose(r.witness.ambient, E11)
    r = eps_ortho_subspace(np.eye(2), [np.eye(2)], 0.5)
    assert not r.verdict and r.witness_kind == "direction"


def test_eps_ortho_subspace_seeded_instance():
    rng = np.random.default_rng(14)
    A = random_cmat(rng, 4, 4)
    U, s, Vh = np.linalg.svd(A)
    s[1] = s[0]
    A = (U * s) @ Vh / s[0]
    W = [random_cmat(rng, 4, 4) * 0.5 for _ in range(2)]
    # coefficient-grid oracle verdicts for eps = 0 and eps = 0.25
    assert eps_ortho_subspace(A, W, 0.0).verdict is False
    r = eps_ortho_subspace(A, W, 0.25)
    assert r.verdict is True
    r.witness.check()


def test_false_subspace_witness_violates(rng):
    A = normalized(rng, 4, 4)
    W = [random_cmat(rng, 4, 4), random_cmat(rng, 4, 4)]
    r = eps_ortho_subspace(A, W, 0.0)
    assert not r.verdict
    w = r.witness
    a = np.linalg.norm(A, 2)
    t = 10.0 ** -np.arange(2, 8)
    h = [np.linalg.norm(A + s * w, 2) ** 2 - a * a for s in t]
    assert min(h) < 0


def test_project_density(rng):
    Z = random_cmat(rng, 4, 4)
    P = project_density(Z + Z.conj().T)
    w = np.linalg.eigvalsh(P)
    assert w[0] >= -1e-14 and np.trace(P).real == pytest.approx(1.0)
    D = np.diag([0.5, 0.3, 0.2, 0.0])
    assert np.allclose(project_density(D), D)
