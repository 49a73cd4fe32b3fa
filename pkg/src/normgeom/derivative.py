"""Right-hand derivative of the operator norm.

For ``A != 0`` the one-sided derivative ``lim_{t->0+} (||A + tX|| - ||A||)/t``
equals ``(1/||A||) inf_delta sup Re <X phi, A phi>`` where the sup runs over
unit vectors in the spectral band of ``A^H A`` of width ``delta``.  For
matrices the infimum is attained once the band collapses to the maximizing
subspace, and the sup becomes the top eigenvalue of the compressed Hermitian
part of ``A^H X``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import (MatrixError, as_cmat, frozen, lambda_max, max_space,
                      spectral_band)

__all__ = ["DirectionalDerivative", "dplus", "dplus_band"]


@dataclass(frozen=True)
class DirectionalDerivative:
    """Derivative value with the unit vector that attains it.

    ``band_used`` is the band width delta, or 0.0 when the maximizing
    subspace itself was used.
    """

    value: float
    witness: np.ndarray
    band_used: float


def _check_pair(A, X):
    A = as_cmat(A, "A")
    X = as_cmat(X, "X")
    if A.shape != X.shape:
        raise MatrixError(f"shape mismatch: A is {A.shape}, X is {X.shape}")
    return A, X


def _sup_on(A, X, basis, norm):
    C = basis.conj().T @ (A.conj().T @ X) @ basis
    lam, v = lambda_max(C)
    return lam / norm, basis @ v


def dplus(A, X, rel_tol=1e-9):
    """Right-hand derivative of ``||.||`` at `A` in direction `X`.

    Computed on the maximizing subspace of ``A^H A``; the witness is a unit
    vector there with ``Re <X phi, A phi> / ||A||`` equal to the value.
    """
    A, X = _check_pair(A, X)
    ms = max_space(A, rel_tol)
    value, phi = _sup_on(A, X, ms.basis, ms.norm)
    return DirectionalDerivative(value, frozen(phi), 0.0)


def dplus_band(A, X, delta):
    """The band form: sup of ``Re <X phi, A phi> / ||A||`` over the delta-band.

    Nondecreasing in `delta`; equals :func:`dplus` once `delta` is below the
    spectral gap of ``A^H A``.
    """
    A, X = _check_pair(A, X)
    band = spectral_band(A, delta)
    value, phi = _sup_on(A, X, band.basis, float(np.sqrt(band.norm_sq)))
    return DirectionalDerivative(value, frozen(phi), float(delta))
