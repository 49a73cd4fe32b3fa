"""Operator-norm geometry for complex matrices.

Right-hand derivatives of the spectral norm, density-matrix descriptions of
its subdifferential, eps-Birkhoff orthogonality to a matrix or a subspace,
and best approximation of operator tuples, each with a brute-force oracle in
:mod:`normgeom.oracles`.
"""

from .matcore import (MatrixError, MaxSpace, SpectralBand, adjoint, as_cmat,
                      compress, eig_h, herm_part, max_space, opnorm,
                      spectral_band)
from .derivative import DirectionalDerivative, dplus, dplus_band
from .subdiff import (DensityCert, SubdiffFunctional, cert_from_coeff,
                      cert_from_vector, decompose, evaluate, functional, mix,
                      support_gap, support_max)
from .ortho import (NumRangeBoundary, OrthoReport, eps_ortho_pair,
                    eps_ortho_subspace, numrange_boundary, numrange_dist0,
                    numrange_support, restricted_norm)
from .tuples import (BestApprox, JointRangeSample, OpTuple, as_tuple,
                     best_approx, conv_zero_test, joint_w0_sample,
                     tuple_cert_search, tuple_max_space, tuple_norm)

__version__ = "0.1.0"

__all__ = [
    "MatrixError", "MaxSpace", "SpectralBand", "adjoint", "as_cmat", "compress",
    "eig_h", "herm_part", "max_space", "opnorm", "spectral_band",
    "DirectionalDerivative", "dplus", "dplus_band",
    "DensityCert", "SubdiffFunctional", "cert_from_coeff", "cert_from_vector",
    "decompose", "evaluate", "functional", "mix", "support_gap", "support_max",
    "NumRangeBoundary", "OrthoReport", "eps_ortho_pair", "eps_ortho_subspace",
    "numrange_boundary", "numrange_dist0", "numrange_support", "restricted_norm",
    "BestApprox", "JointRangeSample", "OpTuple", "as_tuple", "best_approx",
    "conv_zero_test", "joint_w0_sample", "tuple_cert_search", "tuple_max_space",
    "tuple_norm",
]
