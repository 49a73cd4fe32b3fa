"""Operator tuples A = (A_1, ..., A_d) acting from C^n into the direct sum.

The tuple norm is ``sqrt(lambda_max(sum_j A_j^H A_j))`` and the maximizing
subspace is the top eigenspace of that sum.  ``A`` is Birkhoff-James
orthogonal to the subspace ``C^d X = {(lam_1 X_1, ..., lam_d X_d)}`` exactly
when the convex hull of the joint maximal numerical range

    W0(A, X) = {(<X_j phi, A_j phi>)_j : phi unit in the maximizing subspace}

contains 0, and exactly when a density matrix ``P`` on the maximizing
subspace has ``tr(A_j^H X_j P) = 0`` for every j.  :func:`conv_zero_test`
decides the first condition through support directions, and
:func:`tuple_cert_search` the second by Frank-Wolfe.  :func:`best_approx`
computes ``min_lam ||A + lam X||``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .matcore import MatrixError, as_cmat, frozen, max_space, opnorm
from .subdiff import DensityCert, correct_to_kernel

__all__ = [
    "OpTuple",
    "as_tuple",
    "JointRangeSample",
    "BestApprox",
    "tuple_norm",
    "tuple_max_space",
    "joint_w0_sample",
    "conv_zero_test",
    "tuple_cert_search",
    "best_approx",
    "MAX_D",
]

#: largest tuple length accepted by the dual search over eta
MAX_D = 8


@dataclass(frozen=True)
class OpTuple:
    """An ordered tuple of equal-shaped complex matrices."""

    entries: tuple

    def __post_init__(self):
        if len(self.entries) == 0:
            raise MatrixError("a tuple needs at least one entry")
        shape = self.entries[0].shape
        for j, E in enumerate(self.entries):
            if E.shape != shape:
                raise MatrixError(f"entry {j} has shape {E.shape}, expected {shape}")

    @property
    def d(self):
        return len(self.entries)

    @property
    def shape(self):
        return self.entries[0].shape

    def stack(self):
        return np.stack(self.entries)

    def __len__(self):
        return self.d

    def __getitem__(self, j):
        return self.entries[j]

    def __iter__(self):
        return iter(self.entries)


def as_tuple(A, name="tuple"):
    """Coerce an OpTuple, a sequence of matrices or a 3-d array to :class:`OpTuple`."""
    if isinstance(A, OpTuple):
        return A
    if isinstance(A, np.ndarray) and A.ndim == 2:
        A = [A]
    try:
        items = list(A)
    except TypeError:
        raise MatrixError(f"{name} must be a sequence of matrices") from None
    return OpTuple(tuple(frozen(as_cmat(E, f"{name}[{j}]")) for j, E in enumerate(items)))


def _pair(A, X):
    A = as_tuple(A, "A")
    X = as_tuple(X, "X")
    if A.d != X.d or A.shape != X.shape:
        raise MatrixError(
            f"tuple shapes differ: A is {A.d} x {A.shape}, X is {X.d} x {X.shape}")
    return A, X


def tuple_norm(A):
    """``||A|| = sup_phi (sum_j ||A_j phi||^2)^{1/2}``, the norm of the block column."""
    return opnorm(np.vstack(as_tuple(A).entries))


def tuple_max_space(A, rel_tol=1e-9):
    """Top eigenspace of ``sum_j A_j^H A_j`` (same tolerance rule as :func:`max_space`)."""
    return max_space(np.vstack(as_tuple(A).entries), rel_tol)


def _compressed(A, X, ms):
    """``G_j = Q^H A_j^H X_j Q`` stacked as (d, k, k)."""
    Q = ms.basis
    G = np.einsum("jba,jbc->jac", A.stack().conj(), X.stack())
    return np.einsum("ai,jab,bc->jic", Q.conj(), G, Q)


@dataclass(frozen=True)
class JointRangeSample:
    """Points of W0(A, X), row ``i`` computed from the unit vector ``phis[i]``."""

    points: np.ndarray
    phis: np.ndarray

    def recompute(self, A, X):
        A, X = _pair(A, X)
        AX = np.einsum("jba,jbc->jac", A.stack().conj(), X.stack())
        return np.einsum("na,jab,nb->nj", self.phis.conj(), AX, self.phis)


def joint_w0_sample(A, X, n_samples=1000, seed=0):
    """Sample W0(A, X) with phi uniform on the unit sphere of the maximizing subspace."""
    A, X = _pair(A, X)
    ms = tuple_max_space(A)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n_samples, ms.k)) + 1j * rng.standard_normal((n_samples, ms.k))
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    G = _compressed(A, X, ms)
    pts = np.einsum("na,jab,nb->nj", Z.conj(), G, Z)
    return JointRangeSample(frozen(pts), frozen(Z @ ms.basis.T))


# ------------------------------------------------------------ dual test

def _lmax_and_grad(G, x, d):
    """``lambda_max(herm(sum eta_j G_j))`` and its subgradient in real coordinates."""
    eta = x[:d] + 1j * x[d:]
    H = np.tensordot(eta, G, axes=1)
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    v = V[:, -1]
    s = np.einsum("a,jab,b->j", v.conj(), G, v)
    return float(w[-1]), np.concatenate([s.real, -s.imag])


def _dual_min(G, eta_grid, refine_iters, seed, stop_below=-np.inf):
    """Minimise the support objective over unit eta in C^d.

    Returns as soon as the sampled minimum is below `stop_below`.
    """
    d = G.shape[0]
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((eta_grid, 2 * d))
    Z = np.vstack([np.eye(2 * d), -np.eye(2 * d), Z])
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    eta = Z[:, :d] + 1j * Z[:, d:]
    H = np.einsum("nj,jab->nab", eta, G)
    vals = np.linalg.eigvalsh(0.5 * (H + np.conj(np.swapaxes(H, 1, 2))))[:, -1]
    order = np.argsort(vals)[:10]
    best_v, best_x = float(vals[order[0]]), Z[order[0]].copy()
    if best_v < stop_below:
        return best_v, best_x[:d] + 1j * best_x[d:]
    for i in order:
        # projected subgradient on the sphere, diminishing steps
        x = Z[i].copy()
        for it in range(refine_iters):
            f, g = _lmax_and_grad(G, x, d)
            if f < best_v:
                best_v, best_x = f, x.copy()
            g = g - (g @ x) * x
            gn = np.linalg.norm(g)
            if gn < 1e-15:
                break
            x = x - (0.5 / np.sqrt(it + 1.0)) * g / gn
            x /= np.linalg.norm(x)
    res = minimize(lambda y: _lmax_and_grad(G, y / np.linalg.norm(y), d)[0], best_x,
                   method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000 * d})
    if res.fun < best_v:
        best_v, best_x = float(res.fun), res.x / np.linalg.norm(res.x)
    return best_v, best_x[:d] + 1j * best_x[d:]


def _check_d(d):
    if d > MAX_D:
        raise MatrixError(f"tuple length {d} exceeds the supported maximum {MAX_D}")
    if d > 3:
        warnings.warn("the eta search is sized for d <= 3; certification is weaker "
                      "for longer tuples", RuntimeWarning, stacklevel=3)


def conv_zero_test(A, X, eta_grid=2000, refine_iters=200, tol=1e-6, rel_tol=1e-9,
                   seed=0, cert_iters=5000):
    """Does the convex hull of W0(A, X) contain 0?

    Equivalent to ``lambda_max(Q^H herm(sum_j eta_j A_j^H X_j) Q) >= 0`` for
    every unit ``eta`` in C^d, which is how it is decided: sphere samples,
    then (unless a sample already separates) local descent from the ten
    worst.  The objective is convex and
    positively homogeneous in ``eta``, so a negative value anywhere on the
    sphere means 0 is strictly separated from the hull.

    Returns
    -------
    verdict : bool
    witness : ndarray or DensityCert or None
        A separating ``eta`` (``lambda_max < -tol``) when the verdict is
        false; otherwise the certificate found by :func:`tuple_cert_search`,
        or None if Frank-Wolfe did not reach its tolerance.
    """
    A, X = _pair(A, X)
    _check_d(A.d)
    ms = tuple_max_space(A, rel_tol)
    G = _compressed(A, X, ms)
    value, eta = _dual_min(G, eta_grid, refine_iters, seed, stop_below=-tol)
    if value < -tol:
        return False, frozen(eta)
    cert, _ = _fw_search(G, ms, cert_iters, 1e-7)
    return True, cert


# -------------------------------------------------------- primal search

def _residuals(G, P):
    return np.einsum("jab,ba->j", G, P)


def _fw_search(G, ms, max_iters, tol):
    """Frank-Wolfe on ``sum_j |tr(G_j P)|^2`` over density matrices."""
    k = G.shape[1]
    P = np.eye(k, dtype=np.complex128) / k
    a = _residuals(G, P)
    tol2 = tol * tol
    for it in range(max_iters):
        f = float(np.vdot(a, a).real)
        if f <= 1e-4 * tol2:
            break
        grad = np.einsum("j,jab->ab", np.conj(a), G)
        grad = grad + grad.conj().T
        w, V = np.linalg.eigh(grad)
        v = V[:, 0]
        S = np.outer(v, v.conj())
        dvec = _residuals(G, S) - a
        dd = float(np.vdot(dvec, dvec).real)
        gap = -float(np.vdot(a, dvec).real)
        if dd == 0.0 or gap <= 0.0:
            break
        gamma = min(1.0, gap / dd)
        P = (1.0 - gamma) * P + gamma * S
        a = a + gamma * dvec
        if it % 50 == 49 and f <= 1e-2:
            Pn = correct_to_kernel(G, P)
            if Pn is not None:
                P, a = Pn, _residuals(G, Pn)
                break
    P = 0.5 * (P + P.conj().T)
    P = P / np.trace(P).real
    floor = float(np.linalg.norm(_residuals(G, P)))
    if floor > tol:
        Pn = correct_to_kernel(G, P)
        if Pn is not None and np.linalg.norm(_residuals(G, Pn)) < floor:
            P = Pn / np.trace(Pn).real
            floor = float(np.linalg.norm(_residuals(G, P)))
    if floor <= tol:
        return DensityCert(ms, frozen(P)), floor
    return None, floor


def tuple_cert_search(A, X, max_iters=5000, tol=1e-7):
    """Density matrix P on the maximizing subspace with ``tr(A_j^H X_j P) = 0``.

    Frank-Wolfe on the squared residual (the linear step is the bottom
    eigenvector of the gradient); nearly feasible iterates are finished with
    a least-norm affine correction when that keeps ``P`` positive.

    Returns
    -------
    cert : DensityCert or None
        None when the residual floor stays above `tol`.
    floor : float
        ``(sum_j |tr(G_j P)|^2)^{1/2}`` at the returned (or best) ``P``.
    """
    A, X = _pair(A, X)
    ms = tuple_max_space(A)
    G = _compressed(A, X, ms)
    return _fw_search(G, ms, max_iters, tol)


# --------------------------------------------------- best approximation

@dataclass(frozen=True)
class BestApprox:
    """Minimiser of ``||A + lam X||`` with its residual tuple.

    ``gap`` is the optimality-gap bound reported by the solver (inf when
    none is available).
    """

    lambda_star: np.ndarray
    dist: float
    residual_tuple: OpTuple
    certified: bool
    iterations: int = 0
    gap: float = np.inf


def _objective(As, Xs):
    """``lam -> (||A + lam X||, subgradient in (Re lam, Im lam))``."""
    d = As.shape[0]

    def fg(x):
        lam = x[:d] + 1j * x[d:]
        R = As + lam[:, None, None] * Xs
        S = np.einsum("jba,jbc->ac", R.conj(), R)
        w, V = np.linalg.eigh(0.5 * (S + S.conj().T))
        g = float(np.sqrt(max(w[-1], 0.0)))
        if g == 0.0:
            return 0.0, np.zeros(2 * d)
        phi = V[:, -1]
        s = np.einsum("a,jba,jbc,c->j", phi.conj(), R.conj(), Xs, phi)
        return g, np.concatenate([s.real, -s.imag]) / g

    return fg


def _ellipsoid(fg, x0, radius, active, max_iters, gtol=1e-15):
    """Deep-cut ellipsoid method on the active real coordinates."""
    idx = np.flatnonzero(active)
    n = idx.size
    x = x0.copy()
    fx, gx = fg(x)
    best_x, best_f = x.copy(), fx
    Pm = np.diag(radius[idx] ** 2)
    gap = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        g = gx[idx]
        Pg = Pm @ g
        q = float(g @ Pg)
        if q <= 0.0:
            gap = 0.0
            break
        sq = np.sqrt(q)
        gap = min(gap, fx - best_f + sq)
        if sq <= gtol * max(1.0, best_f):
            break
        alpha = min(max((fx - best_f) / sq, 0.0), 0.5)
        b = Pg / sq
        x = x.copy()
        x[idx] = x[idx] - (1.0 + n * alpha) / (n + 1.0) * b
        Pm = (n * n * (1.0 - alpha * alpha) / (n * n - 1.0)) * (
            Pm - (2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha))) * np.outer(b, b))
        Pm = 0.5 * (Pm + Pm.T)
        fx, gx = fg(x)
        if fx < best_f:
            best_f, best_x = fx, x.copy()
    return best_x, best_f, it, gap


def _polyak(fg, x0, active, max_iters, radius):
    """Subgradient steps of Polyak type with a diminishing target slack."""
    x = x0.copy()
    fx, gx = fg(x)
    best_x, best_f = x.copy(), fx
    slack = 0.1 * max(fx, 1e-300)
    it = 0
    for it in range(1, max_iters + 1):
        g = np.where(active, gx, 0.0)
        g2 = float(g @ g)
        if g2 == 0.0:
            break
        target = best_f - slack / np.sqrt(it)
        x = x - (fx - target) / g2 * g
        x = np.clip(x, -radius, radius)
        fx, gx = fg(x)
        if fx < best_f:
            best_f, best_x = fx, x.copy()
    return best_x, best_f, it, np.inf


def best_approx(A, X, tol=1e-6, max_iters=3000, method="ellipsoid", certify=True):
    """Best approximation of ``A`` from ``C^d X``: minimise ``||A + lam X||``.

    Parameters
    ----------
    method : {"ellipsoid", "polyak"}
        Both use the subgradient with components ``Re s_j / g`` and
        ``-Im s_j / g``, ``s_j = phi^H (A_j + lam_j X_j)^H X_j phi``, taken
        at a top eigenvector phi.  The ellipsoid method converges linearly
        in the 2d real coordinates; Polyak steps are kept for comparison.
    certify : bool
        Run :func:`conv_zero_test` on the residual at the optimum.

    Notes
    -----
    The sign convention is ``A + lam X``; the minimiser of ``||A - mu X||``
    is ``mu = -lam``.  No uniqueness is claimed.
    """
    A, X = _pair(A, X)
    As, Xs = A.stack(), X.stack()
    d = A.d
    xn = np.array([opnorm(x) for x in Xs])
    if np.all(xn == 0.0):
        raise MatrixError("X must not be the zero tuple")
    a = tuple_norm(A)
    # ||A + lam X|| >= |lam_j| ||X_j|| - ||A||, so a minimiser has
    # |lam_j| <= 2 ||A|| / ||X_j||
    box = np.where(xn > 0, 2.0 * max(a, 1e-300) / np.maximum(xn, 1e-300), 0.0)
    active = np.concatenate([xn > 0, xn > 0])
    radius = np.sqrt(np.sum(box ** 2)) * np.ones(2 * d)
    fg = _objective(As, Xs)
    x0 = np.zeros(2 * d)
    if a == 0.0:
        x, f, it, gap = x0, 0.0, 0, 0.0
    elif method == "ellipsoid":
        x, f, it, gap = _ellipsoid(fg, x0, radius, active, max_iters)
    elif method == "polyak":
        x, f, it, gap = _polyak(fg, x0, active, max_iters, np.concatenate([box, box]))
    else:
        raise ValueError(f"unknown method {method!r}")
    lam = x[:d] + 1j * x[d:]
    R = as_tuple(list(As + lam[:, None, None] * Xs), "residual")
    dist = tuple_norm(R)
    certified = False
    if certify and dist > 0:
        certified, _ = conv_zero_test(R, X, tol=tol)
    elif dist == 0:
        certified = True
    return BestApprox(frozen(lam), dist, R, bool(certified), it, float(gap))
