"""Brute-force reference implementations of the defining inequalities.

Nothing here imports the formula-based modules: every oracle works directly
from the definitions (finite differences of the norm, the eps-Birkhoff
inequality over a grid of scalars or subspace elements, and grid
minimisation of a tuple norm).  Grids are polar with log-spaced magnitudes
because violations of the defining inequalities live at small scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

__all__ = [
    "GridSpec",
    "fd_derivative",
    "ortho_pair_oracle",
    "ortho_subspace_oracle",
    "tuple_oracle",
    "spectral_norm",
    "tuple_norm_direct",
]

_TINY = 1e-300
_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    """Polar grid: `points_per_axis` log-spaced magnitudes on
    ``[1e-4 radius, radius]`` and ``2 (points_per_axis - 1)`` angles.

    Passing ``radius=None`` lets each oracle pick its analytic bound.  The
    grid for ``2 p - 1`` points per axis contains the grid for ``p``.
    """

    radius: float | None = None
    points_per_axis: int = 41
    seed: int = 0

    def __post_init__(self):
        p = self.points_per_axis
        if p < 3 or p % 2 == 0:
            raise ValueError("points_per_axis must be an odd integer >= 3")
        if self.radius is not None and not self.radius > 0:
            raise ValueError("radius must be positive")

    def refined(self):
        return GridSpec(self.radius, 2 * self.points_per_axis - 1, self.seed)

    def polar(self, radius):
        p = self.points_per_axis
        mags = np.logspace(np.log10(1e-4 * radius), np.log10(radius), p)
        na = 2 * (p - 1)
        ang = 2.0 * np.pi * np.arange(na) / na
        pts = (mags[:, None] * np.exp(1j * ang)[None, :]).ravel()
        return np.concatenate([[0.0 + 0.0j], pts])


def spectral_norm(M):
    return float(np.linalg.norm(np.asarray(M, dtype=complex), 2))


def tuple_norm_direct(As):
    """Norm of a tuple as an operator into the direct sum: ||vstack(As)||."""
    return spectral_norm(np.vstack([np.asarray(a, dtype=complex) for a in As]))


def _batch_normsq(Y):
    """Squared spectral norms of a stack, from the Gram matrices."""
    Yh = np.conj(np.swapaxes(Y, 1, 2))
    G = np.matmul(Y, Yh) if Y.shape[1] < Y.shape[2] else np.matmul(Yh, Y)
    return np.clip(np.linalg.eigvalsh(G)[:, -1], 0.0, None)


def _batch_norms(Y):
    return np.linalg.norm(Y, ord=2, axis=(1, 2))


def _check_eps(eps):
    if not (0.0 <= eps < 1.0):
        raise ValueError("eps must lie in [0,1)")


def fd_derivative(A, X, t_list):
    """Forward difference quotients ``(||A + tX|| - ||A||) / t``.

    By convexity of the norm the quotients decrease with t.
    """
    A = np.asarray(A, dtype=complex)
    X = np.asarray(X, dtype=complex)
    t = np.asarray(t_list, dtype=float)
    if np.any(t <= 0):
        raise ValueError("step sizes must be positive")
    a = spectral_norm(A)
    if a == 0:
        raise ValueError("A must be non-zero")
    Y = A[None] + t[:, None, None] * X[None]
    return ((_batch_norms(Y) - a) / t).tolist()


def _h_values(normsq_sum, a, eps, wnorm):
    return normsq_sum - a * a + 2.0 * eps * a * wnorm


def ortho_pair_oracle(A, B, eps, grid=None):
    """Grid test of ``||A + lam B||^2 >= ||A||^2 - 2 eps ||A|| |lam| ||B||``.

    Returns
    -------
    verdict : bool
        True when the grid minimum of the defect is ``>= -1e-7 ||A||^2``.
    worst_lambda : complex
    worst_value : float
    """
    _check_eps(eps)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    grid = grid or GridSpec()
    a = spectral_norm(A)
    b = spectral_norm(B)
    radius = grid.radius or 4.0 * a / max(b, _TINY)
    lam = grid.polar(radius)
    Y = A[None] + lam[:, None, None] * B[None]
    h = _h_values(_batch_normsq(Y), a, eps, np.abs(lam) * b)
    i = int(np.argmin(h))
    return bool(h[i] >= -1e-7 * a * a), complex(lam[i]), float(h[i])


def ortho_subspace_oracle(A, W_basis, eps, grid=None, supplements=20000, polish=True):
    """Grid test of ``||A + w||^2 >= ||A||^2 - 2 eps ||A|| ||w||`` on a subspace.

    The basis is first made orthonormal in the Frobenius inner product, so
    that ``||w|| >= |c| / sqrt(rank)``; the coefficients then range over a
    product of polar grids (one per coordinate, radius ``4 ||A|| sqrt(r)``)
    plus `supplements` random points with log-uniform magnitude.  With
    `polish`, Nelder-Mead on the defect is then started from the ten points
    with the most negative ``h(w) / ||w||``, which finds violations confined
    to thin cones that the product grid straddles.  Refinement monotonicity
    is guaranteed for the grid stage (``polish=False``); the polish can only
    lower the reported minimum further.

    Returns
    -------
    verdict : bool
    worst_w : ndarray
    worst_value : float
    """
    _check_eps(eps)
    A = np.asarray(A, dtype=complex)
    Xs = np.stack([np.asarray(X, dtype=complex) for X in W_basis])
    m = Xs.shape[0]
    grid = grid or GridSpec(points_per_axis=11 if m > 1 else 41)
    V, _ = np.linalg.qr(Xs.reshape(m, -1).T)
    Ys = V.T.reshape(Xs.shape)
    a = spectral_norm(A)
    r = min(A.shape)
    radius = grid.radius or 4.0 * a * np.sqrt(r)
    axis = grid.polar(radius)
    mesh = np.meshgrid(*([axis] * m), indexing="ij")
    C = np.stack([g.ravel() for g in mesh], axis=1)
    rng = np.random.default_rng(grid.seed)
    if supplements:
        Z = rng.standard_normal((supplements, m)) + 1j * rng.standard_normal((supplements, m))
        Z /= np.linalg.norm(Z, axis=1, keepdims=True)
        mag = radius * 10.0 ** rng.uniform(-4.0, 0.0, supplements)
        C = np.vstack([C, Z * mag[:, None]])
    best_h, best_w = np.inf, None
    slopes, starts = [], []
    for start in range(0, C.shape[0], 20000):
        Cb = C[start:start + 20000]
        W = np.einsum("nj,jab->nab", Cb, Ys)
        wn = _batch_norms(W)
        h = _h_values(_batch_normsq(A[None] + W), a, eps, wn)
        i = int(np.argmin(h))
        if h[i] < best_h:
            best_h, best_w = float(h[i]), W[i]
        sl = np.where(wn > 0, h / np.where(wn > 0, wn, 1.0), np.inf)
        top = np.argsort(sl)[:10]
        slopes.append(sl[top])
        starts.append(Cb[top])
    if polish:
        sl = np.concatenate(slopes)
        Cs = np.vstack(starts)[np.argsort(sl)[:10]]

        def h_of(x):
            w = np.tensordot(x[:m] + 1j * x[m:], Ys, axes=1)
            nsq = _batch_normsq(np.stack([A + w, w]))
            return float(nsq[0] - a * a + 2 * eps * a * np.sqrt(nsq[1]))

        for c in Cs:
            res = minimize(h_of, np.concatenate([c.real, c.imag]), method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-11 * a * a,
                                    "maxiter": 400 * m})
            if res.fun < best_h:
                best_h = float(res.fun)
                best_w = np.tensordot(res.x[:m] + 1j * res.x[m:], Ys, axes=1)
    return bool(best_h >= -1e-7 * a * a), best_w, best_h


def _tuple_objective(As, Xs):
    """Vectorised ``lam -> ||A + lam X||`` through the Gram matrix."""
    S0 = np.einsum("jba,jbc->ac", As.conj(), As)
    C = np.einsum("jba,jbc->jac", As.conj(), Xs)
    SX = np.einsum("jba,jbc->jac", Xs.conj(), Xs)

    def f(L):
        L = np.atleast_2d(L)
        S = (S0[None]
             + np.einsum("nj,jac->nac", L, C)
             + np.einsum("nj,jca->nac", L.conj(), C.conj())
             + np.einsum("nj,jac->nac", np.abs(L) ** 2, SX))
        S = 0.5 * (S + np.conj(np.swapaxes(S, 1, 2)))
        ev = np.linalg.eigvalsh(S)[:, -1]
        return np.sqrt(np.clip(ev, 0.0, None))

    return f


def _golden_min(fun, lo, hi, iters=60):
    a, b = lo, hi
    c = b - _PHI * (b - a)
    d = a + _PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _PHI * (b - a)
            fd = fun(d)
    return (c, fc) if fc <= fd else (d, fd)


def tuple_oracle(A, X, grid=None, polish=True):
    """Grid minimum of ``||A + lam X||`` over ``lam`` in ``C^d``.

    Each coordinate ranges over a polar grid of radius ``2 ||A|| / ||X_j||``
    (outside it the norm exceeds ``||A||``); the best grid point is refined
    by three passes of golden-section search on each real coordinate, then a
    Nelder-Mead polish.

    Returns
    -------
    min_norm : float
    argmin_lambda : ndarray of complex, shape (d,)
    """
    As = np.stack([np.asarray(a, dtype=complex) for a in A])
    Xs = np.stack([np.asarray(x, dtype=complex) for x in X])
    if As.shape != Xs.shape:
        raise ValueError("tuple shapes differ")
    d = As.shape[0]
    if grid is None:
        grid = GridSpec(points_per_axis={1: 41, 2: 9}.get(d, 5))
    f = _tuple_objective(As, Xs)
    a = float(f(np.zeros(d))[0])
    xn = np.array([spectral_norm(x) for x in Xs])
    radii = np.where(xn > 0, 2.0 * a / np.maximum(xn, _TINY), 0.0)
    if grid.radius is not None:
        radii = np.where(xn > 0, grid.radius, 0.0)
    axes = [grid.polar(r) if r > 0 else np.zeros(1, dtype=complex) for r in radii]
    # enumerate the product grid in chunks over the first coordinate
    best, best_l = np.inf, np.zeros(d, dtype=complex)
    rest = np.meshgrid(*axes[1:], indexing="ij") if d > 1 else []
    rest = np.stack([g.ravel() for g in rest], axis=1) if d > 1 else np.zeros((1, 0))
    for l0 in axes[0]:
        L = np.hstack([np.full((rest.shape[0], 1), l0), rest])
        vals = f(L)
        i = int(np.argmin(vals))
        if vals[i] < best:
            best, best_l = float(vals[i]), L[i].copy()

    x = np.concatenate([best_l.real, best_l.imag])
    active = np.concatenate([radii > 0, radii > 0])
    width = np.concatenate([radii, radii]) / (grid.points_per_axis - 1)

    def g(x):
        return float(f(x[:d] + 1j * x[d:])[0])

    fx = g(x)
    for _ in range(3):
        for i in np.flatnonzero(active):
            def line(t, i=i):
                y = x.copy()
                y[i] = t
                return g(y)
            t, ft = _golden_min(line, x[i] - width[i], x[i] + width[i])
            if ft < fx:
                x[i], fx = t, ft
    if polish and np.any(active):
        res = minimize(g, x, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-14, "maxiter": 4000 * d})
        if res.fun < fx:
            x, fx = res.x, float(res.fun)
    return fx, x[:d] + 1j * x[d:]
