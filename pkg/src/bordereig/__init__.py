"""Eigenvalue deflation for bordered matrices.

A matrix ``A = [[B, C], [R, D]]`` whose leading block ``B`` has a known
eigendecomposition inherits every eigenvalue of ``B`` whose eigenvector is
orthogonal to all border columns, and every degenerate eigenvalue whose
multiplicity exceeds the number of borders.  This package detects those
shared eigenvalues, builds the reduced characteristic polynomial for the
rest, lifts eigenvectors, and constructs matrices with closed-form spectra.
"""

from .constructor import (GrowthStep, GrowthTrace, arrowhead_polynomial, arrowhead_quartic,
                          extend_preserving, grow_analytic)
from .deflation import (SURPLUS, VANISHING, BorderCoefficients, BorderedView, DeflationReport,
                        EigenPair, SharedEigenvalue, almost_hermitian_factors, compute_mu,
                        decompose_border, deflate, detect_shared, detg_polynomial, detg_value,
                        lift_eigenvector, partition, reduced_polynomial_single)
from .eigen import (Cluster, EigenDecomposition, cluster_degenerate, eigen_oracle,
                    eigvals_oracle, sort_spectrum, validate_decomposition)
from .errors import *  # noqa: F401,F403
from .polyroots import (MultisetMatch, Polynomial, char_poly, deflate_known_root,
                        faddeev_leverrier, match_multisets, roots, roots_closed_form,
                        roots_iterative)

__version__ = "0.1.0"
