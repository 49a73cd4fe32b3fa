"""eps-Birkhoff orthogonality of a pair, decided three ways.

The compressed numerical range of A^H B on the maximizing subspace of A
decides the question; the brute-force oracle scans the defining inequality
over a grid of scalars.  The margin shrinks to zero exactly at the smallest
eps for which the pair is orthogonal.
"""

import numpy as np

from normgeom import eps_ortho_pair, max_space, numrange_boundary, numrange_dist0
from normgeom.matcore import random_cmat
from normgeom.oracles import ortho_pair_oracle

rng = np.random.default_rng(5)
U, s, Vh = np.linalg.svd(random_cmat(rng, 4, 4))
s[:2] = s[0]
A = (U * s) @ Vh / s[0]
B = A + random_cmat(rng, 4, 4) / 4

Q = max_space(A).basis
M = Q.conj().T @ A.conj().T @ B @ Q
dist, _ = numrange_dist0(M)
print(f"distance from 0 to the compressed numerical range: {dist:.6f}")
eps_star = dist / (np.linalg.norm(A, 2) * np.linalg.norm(B, 2))
print(f"smallest eps giving orthogonality: {eps_star:.6f}\n")

print(" eps    verdict   margin      oracle   oracle min")
for eps in (0.0, 0.5 * eps_star, 0.99 * eps_star, 1.01 * eps_star, 0.9):
    eps = min(eps, 0.99)
    r = eps_ortho_pair(A, B, eps)
    ov, _, h = ortho_pair_oracle(A, B, eps)
    print(f"{eps:6.4f}  {str(r.verdict):7s}  {r.margin:+.3e}  {str(ov):7s}  {h:+.3e}")

b = numrange_boundary(M, grid=12)
print("\nsupport values of the numerical range at 12 angles:")
print(np.round(b.supports, 4))
