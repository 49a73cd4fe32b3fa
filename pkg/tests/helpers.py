"""Random instance generators shared by the test modules."""

import numpy as np

from normgeom.matcore import random_cmat, random_unitary

#: pass/fail lines collected by the acceptance suite
ACCEPTANCE_LINES = []


def normalized(rng, rows, cols, lo=0.5, hi=2.0):
    M = random_cmat(rng, rows, cols)
    return M * (rng.uniform(lo, hi) / np.linalg.norm(M, 2))


def with_top_multiplicity(A, k):
    """Copy of A whose top k singular values coincide (norm preserved)."""
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    s = s.copy()
    s[:k] = s[0]
    return (U * s) @ Vh


def degenerate_tuple(rng, d, n, k):
    """d square n x n entries, block column of norm 1 with top multiplicity k."""
    M = np.vstack([random_cmat(rng, n, n) for _ in range(d)])
    M = with_top_multiplicity(M, k)
    M = M / np.linalg.norm(M, 2)
    return [M[j * n:(j + 1) * n] for j in range(d)]


def random_density(rng, k, floor=0.0):
    Z = random_cmat(rng, k, k)
    P = Z @ Z.conj().T + floor * np.eye(k)
    return P / np.trace(P).real


def kill_component(X, Y, g):
    """Shift X along Y so that the linear functional g vanishes."""
    return X - g(X) / g(Y) * Y


def planted_tuple(rng, d, n, k):
    """Tuple pair (A, X) with tr(A_j^H X_j P0) = 0 for a full-rank P0 on MaxSpace."""
    A = degenerate_tuple(rng, d, n, k)
    M = np.vstack(A)
    _, _, Vh = np.linalg.svd(M)
    Q = Vh.conj().T[:, :k]
    P0 = random_density(rng, k, floor=0.2)
    X = []
    for Aj in A:
        def g(Z, Aj=Aj):
            return np.trace(Q.conj().T @ Aj.conj().T @ Z @ Q @ P0)
        Y = Aj @ Q @ P0 @ Q.conj().T
        Xj = kill_component(random_cmat(rng, n, n), Y, g)
        X.append(Xj / np.linalg.norm(Xj, 2))
    return A, X, Q @ P0 @ Q.conj().T


def planted_subspace(rng, n, k, m):
    """A (n x n, top multiplicity k) and m basis matrices with tr(A^H X P0) = 0."""
    A = with_top_multiplicity(random_cmat(rng, n, n), k)
    A = A / np.linalg.norm(A, 2)
    _, _, Vh = np.linalg.svd(A)
    Q = Vh.conj().T[:, :k]
    P0 = Q @ random_density(rng, k, floor=0.2) @ Q.conj().T

    def g(Z):
        return np.trace(A.conj().T @ Z @ P0)

    Y = A @ P0
    W = []
    for _ in range(m):
        X = kill_component(random_cmat(rng, n, n), Y, g)
        W.append(X / np.linalg.norm(X, 2))
    return A, W


def sample_subspace(rng, W, n, radius):
    """n random elements of span(W) with log-uniform norms up to `radius`."""
    m = len(W)
    C = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    C /= np.linalg.norm(C, axis=1, keepdims=True)
    Y = np.einsum("nj,jab->nab", C, np.stack(W))
    Y /= np.linalg.norm(Y, 2, axis=(1, 2))[:, None, None]
    r = radius * 10.0 ** rng.uniform(-5.0, 0.0, n)
    return Y * r[:, None, None]


def definitional_defects(A, ws, eps):
    """h(w) = ||A + w||^2 - ||A||^2 + 2 eps ||A|| ||w|| for a stack of w."""
    a = np.linalg.norm(A, 2)
    return (np.linalg.norm(A[None] + ws, 2, axis=(1, 2)) ** 2 - a * a
            + 2 * eps * a * np.linalg.norm(ws, 2, axis=(1, 2)))


__all__ = ["normalized", "with_top_multiplicity", "degenerate_tuple", "random_density",
           "planted_tuple", "planted_subspace", "sample_subspace", "definitional_defects",
           "random_cmat", "random_unitary"]
