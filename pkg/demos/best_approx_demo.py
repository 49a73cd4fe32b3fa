"""Distance from a tuple of matrices to the span of another tuple.

The minimizer lam* is certified by checking that the residual A + lam* X is
Birkhoff orthogonal to every coordinate direction, which means 0 lies in the
convex hull of the joint maximal numerical range.
"""

import numpy as np

from normgeom import best_approx, conv_zero_test, joint_w0_sample, tuple_max_space, tuple_norm
from normgeom.matcore import random_cmat
from normgeom.oracles import tuple_oracle

r = best_approx([np.diag([3.0, 1.0])], [np.eye(2)])
print(f"diag(3,1) against I: dist {r.dist:.10f} at lambda {r.lambda_star[0]:.10f}, "
      f"certified {r.certified}")

rng = np.random.default_rng(2)
A = [random_cmat(rng, 3, 3) for _ in range(2)]
X = [random_cmat(rng, 3, 3) for _ in range(2)]
print(f"\nrandom pair of 3x3 tuples, ||A|| = {tuple_norm(A):.6f}")
for method in ("ellipsoid", "polyak"):
    r = best_approx(A, X, method=method)
    print(f"  {method:9s} dist {r.dist:.8f}  iterations {r.iterations:4d}  "
          f"certified {r.certified}")
mn, _ = tuple_oracle(A, X)
print(f"  grid oracle dist {mn:.8f}")

r = best_approx(A, X)
R = r.residual_tuple
v, _ = conv_zero_test(R, X)
pts = joint_w0_sample(R, X, 2000).points
print(f"\nresidual: maximizing subspace dimension {tuple_max_space(R).k}, "
      f"0 in conv W0 -> {v}")
print(f"largest |point| in a 2000-sample of W0: {np.abs(pts).max():.2e}")
