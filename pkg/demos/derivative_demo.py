"""One-sided derivative of the operator norm at a matrix with a repeated top singular value.

Where the top singular value is simple the norm is differentiable; once it is
repeated the derivative depends on the direction in a non-linear way.  This
script compares the closed form against finite differences.
"""

import numpy as np

from normgeom import dplus, dplus_band, max_space, opnorm
from normgeom.matcore import random_cmat
from normgeom.oracles import fd_derivative

rng = np.random.default_rng(3)
U, s, Vh = np.linalg.svd(random_cmat(rng, 4, 5), full_matrices=False)
s[:2] = s[0]
A = (U * s) @ Vh
print(f"||A|| = {opnorm(A):.6f}, maximizing subspace dimension {max_space(A).k}")

for label, X in [("random X", random_cmat(rng, 4, 5)), ("X = -A", -A), ("X = A", A)]:
    d = dplus(A, X)
    fd = fd_derivative(A, X, [1e-3, 1e-5, 1e-7])
    print(f"{label:9s} dplus = {d.value:+.8f}   finite differences "
          + "  ".join(f"{q:+.8f}" for q in fd))

X = random_cmat(rng, 4, 5)
print("\nwidening the spectral band can only raise the value:")
a2 = opnorm(A) ** 2
print("  squared singular values:", np.round(np.linalg.svd(A, compute_uv=False) ** 2, 3))
for frac in (1e-6, 0.3, 0.6, 1.0):
    delta = frac * a2
    print(f"  delta = {delta:<8.4g} dplus_band = {dplus_band(A, X, delta).value:+.6f}")

# D+(A; X) + D+(A; -X) > 0 shows the norm is not differentiable at A
gap = dplus(A, X).value + dplus(A, -X).value
print(f"\nD+(A;X) + D+(A;-X) = {gap:.6f} (zero would mean differentiable in direction X)")
