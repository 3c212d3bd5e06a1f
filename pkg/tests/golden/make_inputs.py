"""Regenerate the golden input matrices (run from this directory)."""

import numpy as np

from bordereig.instances import planted_zero_coefficients, random_hermitian
from bordereig.matrixio import write_matrix

rng = np.random.default_rng(2024)
write_matrix("three.cmat", [[1, 0, 1], [0, 2, 0], [1, 0, 3]])
write_matrix("identity4.cmat", np.eye(4))
write_matrix("hermitian6.cmat", random_hermitian(rng, 6))
a, values, u, planted = planted_zero_coefficients(rng, 7, 3)
write_matrix("planted8.cmat", a)
g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
write_matrix("general5.cmat", g)
write_matrix("general5_ct.cmat", g.conj().T)
write_matrix("general5_perm.cmat", g[np.ix_([3, 0, 4, 1, 2], [3, 0, 4, 1, 2])])
write_matrix("general5_shift.cmat", g + 1e-3)
