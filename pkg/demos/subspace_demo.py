"""Orthogonality to a subspace and the density certificate that proves it.

A density matrix P on the maximizing subspace of A with tr(X^H A P) = 0 for
every basis element X shows that A is Birkhoff orthogonal to the whole span.
The script plants such a P, recovers a certificate, and re-checks the
defining inequality on random elements of the subspace.
"""

import numpy as np

from normgeom import eps_ortho_subspace, opnorm
from normgeom.matcore import random_cmat

rng = np.random.default_rng(11)
n, k = 5, 2
U, s, Vh = np.linalg.svd(random_cmat(rng, n, n))
s[:k] = s[0]
A = (U * s) @ Vh / s[0]
Q = Vh.conj().T[:, :k]
Z = random_cmat(rng, k, k)
P0 = Q @ (Z @ Z.conj().T + 0.2 * np.eye(k)) @ Q.conj().T
P0 /= np.trace(P0).real

W = []
for _ in range(2):
    X = random_cmat(rng, n, n)
    Y = A @ P0
    X = X - np.trace(A.conj().T @ X @ P0) / np.trace(A.conj().T @ Y @ P0) * Y
    W.append(X)

r = eps_ortho_subspace(A, W, 0.0)
print(f"verdict {r.verdict}, margin {r.margin:.2e}, witness kind {r.witness_kind}")
P = r.witness.ambient
print("eigenvalues of P:", np.round(np.linalg.eigvalsh(P), 6))
for j, X in enumerate(W):
    print(f"|tr(X_{j}^H A P)| = {abs(np.trace(X.conj().T @ A @ P)):.2e}")

C = rng.standard_normal((5000, 2)) + 1j * rng.standard_normal((5000, 2))
C *= (10.0 ** rng.uniform(-4, 0, 5000))[:, None]
ws = np.einsum("nj,jab->nab", C, np.stack(W))
worst = (np.linalg.norm(A[None] + ws, 2, axis=(1, 2)) - opnorm(A)).min()
print(f"min over 5000 samples of ||A + w|| - ||A||: {worst:+.3e}")

W_bad = [W[0], random_cmat(rng, n, n)]
r = eps_ortho_subspace(A, W_bad, 0.0)
print(f"\nafter replacing one basis element: verdict {r.verdict}, margin {r.margin:+.3e}")
for eps in (0.05, 0.2, 0.5):
    print(f"  eps = {eps}: verdict {eps_ortho_subspace(A, W_bad, eps).verdict}")
