"""Dense complex matrices and the spectral primitives built on them.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; the
helpers here validate, adjoin, compress and diagonalise them.  The spectral
projector of ``A^* A`` onto an interval ``[||A||^2 - delta, ||A||^2]`` is
realised as an orthonormal basis of eigenvectors (:class:`SpectralBand`), and
its limit as ``delta -> 0`` as :class:`MaxSpace`, the subspace on which ``A``
attains its norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MatrixError",
    "as_cmat",
    "frozen",
    "adjoint",
    "opnorm",
    "herm_part",
    "compress",
    "eig_h",
    "lambda_max",
    "SpectralBand",
    "MaxSpace",
    "spectral_band",
    "max_space",
    "right_singular_system",
    "unit",
    "random_unitary",
    "random_cmat",
]

#: absolute slack (times ||A||^2) used when deciding band membership
BAND_SLACK = 1e-12
HERMITIAN_TOL = 1e-10
ORTHONORMAL_TOL = 1e-8


class MatrixError(ValueError):
    """Raised for malformed, mismatched or otherwise invalid matrix input."""


def as_cmat(M, name="matrix"):
    """Return `M` as a finite two-dimensional complex128 array.

    A copy is made only when the input is not already a complex128 array.
    Scalars and vectors are rejected; use ``np.atleast_2d`` explicitly if that
    is what you mean.
    """
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise MatrixError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise MatrixError(f"{name} must have positive dimensions, got {arr.shape}")
    arr = np.asarray(arr, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise MatrixError(f"{name} has non-finite entries")
    return arr


def frozen(arr):
    """Return a read-only copy of `arr`."""
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def unit(v):
    """Normalise a vector; raises on the zero vector."""
    v = np.asarray(v, dtype=np.complex128)
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise MatrixError("cannot normalise the zero vector")
    return v / nrm


def adjoint(M):
    """Conjugate transpose of `M`."""
    return as_cmat(M).conj().T


def opnorm(M):
    """Operator (spectral) norm: the largest singular value of `M`."""
    M = as_cmat(M)
    return float(np.linalg.svd(M, compute_uv=False)[0])


def _require_square(M, name="matrix"):
    if M.shape[0] != M.shape[1]:
        raise MatrixError(f"{name} must be square, got shape {M.shape}")


def herm_part(M):
    """Hermitian part ``(M + M^H) / 2`` of a square matrix."""
    M = as_cmat(M)
    _require_square(M)
    return 0.5 * (M + M.conj().T)


def _check_orthonormal(Q, tol=ORTHONORMAL_TOL):
    k = Q.shape[1]
    err = np.max(np.abs(Q.conj().T @ Q - np.eye(k)))
    if err > tol:
        raise MatrixError(f"columns are not orthonormal (max deviation {err:.3e})")


def compress(M, Q):
    """Compression ``Q^H M Q`` of a square `M` onto the range of `Q`.

    `Q` must have orthonormal columns (checked to 1e-8) and as many rows as
    `M` has columns.
    """
    M = as_cmat(M)
    Q = as_cmat(Q, "Q")
    _require_square(M)
    if Q.shape[0] != M.shape[0]:
        raise MatrixError(
            f"dimension mismatch: matrix is {M.shape}, basis has {Q.shape[0]} rows")
    _check_orthonormal(Q)
    return Q.conj().T @ M @ Q


def eig_h(H):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns
    -------
    values : ndarray of float, descending
    vectors : ndarray, orthonormal eigenvectors as columns
    """
    H = as_cmat(H)
    _require_square(H)
    asym = float(np.max(np.abs(H - H.conj().T)))
    scale = max(1.0, float(np.max(np.abs(H))))
    if asym > HERMITIAN_TOL * scale:
        raise MatrixError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    return w[::-1].copy(), V[:, ::-1].copy()


def lambda_max(H):
    """Largest eigenvalue and a unit eigenvector of a Hermitian matrix."""
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    return float(w[-1]), V[:, -1]


def right_singular_system(A):
    """Eigenvalues (descending) and eigenvectors of ``A^H A`` via an SVD of A.

    Using the SVD avoids squaring the condition number; columns of `A` beyond
    its row count contribute zero eigenvalues.
    """
    A = as_cmat(A)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    n = A.shape[1]
    ev = np.zeros(n)
    ev[: s.size] = s**2
    return ev, Vh.conj().T


@dataclass(frozen=True)
class SpectralBand:
    """Eigenvectors of ``A^H A`` with eigenvalue in ``[lower, norm_sq]``."""

    basis: np.ndarray
    lower: float
    norm_sq: float
    delta: float
    values: np.ndarray

    @property
    def k(self):
        return self.basis.shape[1]


@dataclass(frozen=True)
class MaxSpace:
    """Orthonormal basis of ``{phi : A^H A phi = ||A||^2 phi}``.

    Membership is decided with relative tolerance `rel_tol` on the
    eigenvalues of ``A^H A``.
    """

    basis: np.ndarray
    norm: float
    rel_tol: float = 1e-9

    @property
    def k(self):
        return self.basis.shape[1]

    @property
    def dim(self):
        return self.basis.shape[0]


def spectral_band(A, delta):
    """Basis of the spectral subspace of ``A^H A`` on ``[||A||^2 - delta, ||A||^2]``.

    The boundary is inclusive with an absolute slack of ``1e-12 ||A||^2``.
    """
    A = as_cmat(A, "A")
    if not delta > 0:
        raise MatrixError(f"delta must be positive, got {delta}")
    ev, V = right_singular_system(A)
    norm_sq = float(ev[0])
    if norm_sq == 0.0:
        raise MatrixError("A must be non-zero")
    lower = norm_sq - delta
    keep = ev >= lower - BAND_SLACK * norm_sq
    return SpectralBand(frozen(V[:, keep]), lower, norm_sq, float(delta),
                        frozen(ev[keep]))


def max_space(A, rel_tol=1e-9):
    """Top eigenspace of ``A^H A``: where ``||A phi|| = ||A||`` for unit phi."""
    A = as_cmat(A, "A")
    ev, V = right_singular_system(A)
    norm_sq = float(ev[0])
    if norm_sq == 0.0:
        raise MatrixError("A must be non-zero")
    keep = ev >= (1.0 - rel_tol) * norm_sq
    return MaxSpace(frozen(V[:, keep]), float(np.sqrt(norm_sq)), float(rel_tol))


# ---------------------------------------------------------------- random input

def random_cmat(rng, rows, cols, scale=1.0):
    """Complex Gaussian matrix with i.i.d. entries of variance `scale`**2."""
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return scale * (re + 1j * im) / np.sqrt(2.0)


def random_unitary(rng, n):
    """Haar-distributed unitary matrix (QR of a Ginibre matrix, phase fixed)."""
    Z = random_cmat(rng, n, n)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))
