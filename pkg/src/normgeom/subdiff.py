"""Subdifferential certificates of the operator norm at a matrix.

Every element of the subdifferential of ``||.||`` at ``A != 0`` has the form
``X -> tr(A^H X P) / ||A||`` with ``P`` a density matrix supported on the
maximizing subspace of ``A^H A``.  Certificates store ``P`` in the
coordinates of that subspace (a ``k x k`` density matrix), so the support
condition ``A^H A P = ||A||^2 P`` holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .derivative import dplus
from .matcore import MatrixError, MaxSpace, as_cmat, frozen, lambda_max, max_space

__all__ = [
    "DensityCert",
    "SubdiffFunctional",
    "cert_from_vector",
    "cert_from_coeff",
    "mix",
    "decompose",
    "functional",
    "evaluate",
    "support_max",
    "support_gap",
    "correct_to_kernel",
]


@dataclass(frozen=True)
class DensityCert:
    """A density matrix ``basis @ coeff @ basis^H`` on a maximizing subspace."""

    space: MaxSpace
    coeff: np.ndarray

    @property
    def ambient(self):
        """P in the coordinates of the domain of A."""
        Q = self.space.basis
        return Q @ self.coeff @ Q.conj().T

    def check(self, tol=1e-10):
        """Raise :class:`MatrixError` unless coeff is Hermitian PSD with trace one."""
        C = self.coeff
        if np.max(np.abs(C - C.conj().T)) > tol:
            raise MatrixError("certificate is not Hermitian")
        if np.linalg.eigvalsh(0.5 * (C + C.conj().T))[0] < -tol:
            raise MatrixError("certificate is not positive semidefinite")
        if abs(np.trace(C).real - 1.0) > tol or abs(np.trace(C).imag) > tol:
            raise MatrixError("certificate trace is not one")


def cert_from_coeff(space, coeff, tol=1e-10):
    """Wrap a ``k x k`` density matrix as a certificate on `space`."""
    coeff = as_cmat(coeff, "coeff")
    if coeff.shape != (space.k, space.k):
        raise MatrixError(f"coeff must be {space.k}x{space.k}, got {coeff.shape}")
    cert = DensityCert(space, frozen(coeff))
    cert.check(tol)
    return cert


def cert_from_vector(space, phi, tol=1e-8):
    """Rank-one certificate ``phi phi^H`` for a unit vector of the maximizing subspace."""
    phi = np.asarray(phi, dtype=np.complex128).ravel()
    Q = space.basis
    if phi.shape[0] != Q.shape[0]:
        raise MatrixError(f"vector has length {phi.shape[0]}, expected {Q.shape[0]}")
    if abs(np.linalg.norm(phi) - 1.0) > tol:
        raise MatrixError("phi must be a unit vector")
    c = Q.conj().T @ phi
    if np.linalg.norm(phi - Q @ c) > tol:
        raise MatrixError("phi does not lie in the maximizing subspace of A^H A")
    c = c / np.linalg.norm(c)
    return DensityCert(space, frozen(np.outer(c, c.conj())))


def mix(certs, weights):
    """Convex combination of certificates sharing one maximizing subspace."""
    certs = list(certs)
    w = np.asarray(weights, dtype=float)
    if len(certs) == 0 or w.shape != (len(certs),):
        raise MatrixError("need one weight per certificate")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise MatrixError("weights must be nonnegative and sum to one")
    space = certs[0].space
    for c in certs[1:]:
        if c.space is not space and not (
                c.space.basis.shape == space.basis.shape
                and np.array_equal(c.space.basis, space.basis)):
            raise MatrixError("certificates live on different subspaces")
    coeff = sum(wi * c.coeff for wi, c in zip(w, certs))
    return DensityCert(space, frozen(coeff))


def decompose(cert):
    """Split a certificate into rank-one certificates and convex weights.

    Uses the eigendecomposition of the coefficient matrix, giving at most
    ``k`` terms.
    """
    w, V = np.linalg.eigh(0.5 * (cert.coeff + cert.coeff.conj().T))
    w = np.clip(w, 0.0, None)
    keep = w > 0
    w = w[keep] / w[keep].sum()
    parts = [DensityCert(cert.space, frozen(np.outer(v, v.conj())))
             for v in V[:, keep].T]
    return parts, w


@dataclass(frozen=True)
class SubdiffFunctional:
    """The functional ``X -> tr(A^H X P) / ||A||`` induced by a certificate."""

    a: np.ndarray
    norm_a: float
    cert: DensityCert

    def __call__(self, X):
        return evaluate(self, X)


def functional(A, cert):
    A = as_cmat(A, "A")
    return SubdiffFunctional(frozen(A), cert.space.norm, cert)


def evaluate(f, X):
    """``tr(A^H X P) / ||A||`` computed in maximizing-subspace coordinates."""
    X = as_cmat(X, "X")
    if X.shape != f.a.shape:
        raise MatrixError(f"shape mismatch: A is {f.a.shape}, X is {X.shape}")
    Q = f.cert.space.basis
    C = Q.conj().T @ (f.a.conj().T @ X) @ Q
    return complex(np.sum(C * f.cert.coeff.T)) / f.norm_a


def support_max(A, X, space=None):
    """Maximum of ``Re f_P(X)`` over all certificates, with a maximizer.

    Over density matrices the maximum of ``tr(H P)`` is ``lambda_max(H)``,
    attained at the rank-one projector on a top eigenvector.
    """
    A = as_cmat(A, "A")
    X = as_cmat(X, "X")
    if space is None:
        space = max_space(A)
    Q = space.basis
    C = Q.conj().T @ (A.conj().T @ X) @ Q
    _, v = lambda_max(C)
    cert = DensityCert(space, frozen(np.outer(v, v.conj())))
    return evaluate(functional(A, cert), X).real, cert


def support_gap(A, X):
    """``dplus(A, X)`` minus the largest ``Re f_P(X)``; zero up to rounding."""
    A = as_cmat(A, "A")
    X = as_cmat(X, "X")
    if A.shape != X.shape:
        raise MatrixError(f"shape mismatch: A is {A.shape}, X is {X.shape}")
    d = dplus(A, X).value
    best, _ = support_max(A, X)
    return d - best


def _herm_basis(k):
    """Real orthonormal basis of k x k Hermitian matrices (Frobenius)."""
    out = []
    for a in range(k):
        E = np.zeros((k, k), dtype=np.complex128)
        E[a, a] = 1.0
        out.append(E)
    for a in range(k):
        for b in range(a + 1, k):
            E = np.zeros((k, k), dtype=np.complex128)
            E[a, b] = E[b, a] = 1.0 / np.sqrt(2.0)
            out.append(E)
            F = np.zeros((k, k), dtype=np.complex128)
            F[a, b] = 1j / np.sqrt(2.0)
            F[b, a] = -1j / np.sqrt(2.0)
            out.append(F)
    return np.stack(out)


def correct_to_kernel(G, P):
    """Least-norm Hermitian correction making ``tr(G_j P) = 0`` and ``tr P = 1``.

    Returns None if the corrected matrix leaves the PSD cone.
    """
    k = P.shape[0]
    E = _herm_basis(k)
    T = np.einsum("jab,nba->jn", G, E)
    M = np.vstack([T.real, T.imag, np.trace(E, axis1=1, axis2=2).real[None, :]])
    r = np.einsum("jab,ba->j", G, P)
    rhs = -np.concatenate([r.real, r.imag, [np.trace(P).real - 1.0]])
    delta, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    Pn = P + np.tensordot(delta, E, axes=1)
    Pn = 0.5 * (Pn + Pn.conj().T)
    if np.linalg.eigvalsh(Pn)[0] < -1e-12:
        return None
    return Pn
