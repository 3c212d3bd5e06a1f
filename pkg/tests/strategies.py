"""Hypothesis strategies shared by the property tests."""

import numpy as np
from hypothesis import strategies as st

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)
seeds = st.integers(0, 2**32 - 1)


@st.composite
def complex_matrices(draw, n_min=1, n_max=6, square=True):
    n = draw(st.integers(n_min, n_max))
    m = n if square else draw(st.integers(n_min, n_max))
    vals = draw(st.lists(complexes, min_size=n * m, max_size=n * m))
    return np.array(vals, dtype=np.complex128).reshape(n, m)


@st.composite
def permutations(draw, n):
    return np.array(draw(st.permutations(list(range(n)))))
