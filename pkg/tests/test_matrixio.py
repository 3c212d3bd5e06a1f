import numpy as np
import pytest
from hypothesis import given, strategies as st

from bordereig.errors import MatrixFormatError
from bordereig.instances import random_growth_steps
from bordereig.constructor import grow_analytic
from bordereig.eigen import EigenDecomposition
from bordereig.matrixio import (format_complex, format_trace, parse_complex, parse_matrix,
                                parse_trace, serialize_matrix)

doubles = st.floats(allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("text, value", [
    ("3", 3), ("-2.5", -2.5), ("1e-3", 1e-3), ("2i", 2j), ("-0.5i", -0.5j),
    ("1+2i", 1 + 2j), ("1-2i", 1 - 2j), ("-1.5e2+3E-1i", -150 + 0.3j), (".5-.25i", 0.5 - 0.25j),
])
def test_parse_literals(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "i", "1+i", "1 + 2i", "nan", "inf", "2j", "1+2", "--1", "1e"])
def test_reject_bad_literals(text):
    with pytest.raises(MatrixFormatError):
        parse_complex(text)


def test_format_literals():
    assert format_complex(3) == "3"
    assert format_complex(-0.0) == "0"
    assert format_complex(complex(-0.0, -0.0)) == "0"
    assert format_complex(2j) == "2i"
    assert format_complex(1 - 2j) == "1-2i"
    assert format_complex(0.1 + 0.2j) == "0.10000000000000001+0.20000000000000001i"


def test_parse_matrix_with_comments():
    text = "# a comment\n\ncmat 2 3\n1 2i 3-1i\n  # inner comment\n4 5 6\n"
    m = parse_matrix(text)
    assert m.shape == (2, 3) and m[0, 2] == 3 - 1j and m[1, 0] == 4
    # entries may wrap across lines freely
    assert np.array_equal(parse_matrix("cmat 2 2\n1 2 3\n4"), [[1, 2], [3, 4]])


@pytest.mark.parametrize("text", [
    "", "1 2\n", "cmat 2\n1 2", "cmat 2 2\n1 2 3", "cmat 1 1\n1 2", "cmat 0 1\n",
    "cmat 1 1\nx", "matrix 1 1\n1",
])
def test_reject_bad_files(text):
    with pytest.raises(MatrixFormatError):
        parse_matrix(text)


def test_serialize_is_canonical():
    text = "# comment\ncmat 2 2\n1.0   -0\n0+1i 2.50\n"
    canon = serialize_matrix(parse_matrix(text))
    assert canon == "cmat 2 2\n1 0\n1i 2.5\n"
    assert serialize_matrix(parse_matrix(canon)) == canon


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_round_trip_is_exact(rows, cols, data):
    vals = data.draw(st.lists(st.builds(complex, doubles, doubles),
                              min_size=rows * cols, max_size=rows * cols))
    m = np.array(vals, dtype=np.complex128).reshape(rows, cols)
    back = parse_matrix(serialize_matrix(m))
    assert np.array_equal(back, m)
    assert serialize_matrix(back) == serialize_matrix(m)


def test_trace_round_trip(rng):
    eig = EigenDecomposition.from_diagonal([1, 2, 3, 4])
    trace = grow_analytic(np.diag([1.0, 2, 3, 4]), eig, random_growth_steps(rng, 4, 3))
    text = format_trace(trace)
    lines = text.splitlines()
    assert lines[3].startswith("step 1: indices=")
    for key in ("indices=", "alphas=", "corner=", "roots=", "residual="):
        assert key in lines[3]
    rec = parse_trace(text)
    assert rec["seed_order"] == 4 and rec["final_order"] == 7
    assert [s["step"] for s in rec["steps"]] == [1, 2, 3]
    assert [i - 1 for i in rec["steps"][0]["indices"]] == list(trace.steps[0].indices)
    assert rec["steps"][2]["roots"] == list(trace.steps[2].roots)
    assert rec["spectrum"] == list(trace.analytic_spectrum)
    with pytest.raises(MatrixFormatError):
        parse_trace("step 1: indices=1\n")
    with pytest.raises(MatrixFormatError):
        parse_trace("what is this\n")
