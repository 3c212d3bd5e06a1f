"""Plain-text matrix files and growth-trace files.

A matrix file starts with ``cmat <rows> <cols>`` followed by ``rows * cols``
whitespace-separated complex literals (``a``, ``a+bi``, ``a-bi`` or ``bi``).
Lines whose first non-blank character is ``#`` are comments.  Numbers are
written with 17 significant digits, so reading back is exact.
"""

import hashlib
import re

import numpy as np

from .errors import MatrixFormatError

__all__ = [
    "format_real", "format_complex", "parse_complex", "parse_matrix",
    "serialize_matrix", "read_matrix", "write_matrix", "digest",
    "format_trace", "parse_trace", "TraceRecord",
]

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"([+-]?{_NUM})")
_IMAG = re.compile(rf"([+-]?{_NUM})i")
_BOTH = re.compile(rf"([+-]?{_NUM})([+-]{_NUM})i")


def format_real(x):
    x = float(x)
    if x == 0:
        x = 0.0  # drop the sign of -0
    return "%.17g" % x


def format_complex(z):
    z = complex(z)
    re_, im = z.real, z.imag
    if im == 0:
        return format_real(re_)
    if re_ == 0:
        return format_real(im) + "i"
    s = format_real(im)
    return format_real(re_) + (s if s.startswith("-") else "+" + s) + "i"


def parse_complex(token):
    """Parse one complex literal; raises :class:`MatrixFormatError`."""
    t = token.strip()
    for pat, build in ((_REAL, lambda m: complex(float(m[1]), 0.0)),
                       (_IMAG, lambda m: complex(0.0, float(m[1]))),
                       (_BOTH, lambda m: complex(float(m[1]), float(m[2])))):
        m = pat.fullmatch(t)
        if m:
            return build(m)
    raise MatrixFormatError(f"not a complex literal: {token!r}")


def parse_matrix(text):
    tokens = []
    header = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 3 or parts[0] != "cmat" or not all(p.isdigit() for p in parts[1:]):
                raise MatrixFormatError(f"line {lineno}: expected 'cmat <rows> <cols>'")
            header = (int(parts[1]), int(parts[2]))
            if header[0] < 1 or header[1] < 1:
                raise MatrixFormatError(f"line {lineno}: dimensions must be positive")
            continue
        for tok in stripped.split():
            try:
                tokens.append(parse_complex(tok))
            except MatrixFormatError as exc:
                raise MatrixFormatError(f"line {lineno}: {exc}") from None
    if header is None:
        raise MatrixFormatError("missing 'cmat' header")
    rows, cols = header
    if len(tokens) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries, found {len(tokens)}")
    return np.array(tokens, dtype=np.complex128).reshape(rows, cols)


def serialize_matrix(m):
    """Canonical text form: header, then one line per row."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise MatrixFormatError(f"expected a 2-D matrix, got shape {a.shape}")
    lines = [f"cmat {a.shape[0]} {a.shape[1]}"]
    lines += [" ".join(format_complex(z) for z in row) for row in a]
    return "\n".join(lines) + "\n"


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, m):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_matrix(m))


def digest(m):
    """sha256 of the canonical serialization."""
    return hashlib.sha256(serialize_matrix(m).encode("ascii")).hexdigest()


def _join(values):
    return ",".join(format_complex(v) for v in values)


def format_trace(trace):
    """Line-oriented trace text.  Step numbers and indices are 1-based."""
    lines = [
        "# growth trace",
        f"seed_order {trace.seed_order}",
        f"final_order {trace.order}",
    ]
    for n, s in enumerate(trace.steps, 1):
        idx = ",".join(str(i + 1) for i in s.indices)
        lines.append(
            f"step {n}: indices={idx} alphas={_join(s.alphas)} "
            f"corner={format_complex(s.corner)} roots={_join(s.roots)} "
            f"residual={format_real(s.residual)} carried={_join(s.carried)}")
    lines.append(f"spectrum={_join(trace.analytic_spectrum)}")
    return "\n".join(lines) + "\n"


class TraceRecord(dict):
    """Parsed trace: ``seed_order``, ``final_order``, ``steps`` and ``spectrum``."""


_STEP = re.compile(r"step (\d+): (.*)")


def _split_values(text):
    return [parse_complex(t) for t in text.split(",")] if text else []


def parse_trace(text):
    rec = TraceRecord(steps=[], spectrum=None)
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _STEP.fullmatch(line)
        if m:
            fields = dict(kv.split("=", 1) for kv in m[2].split())
            try:
                rec["steps"].append({
                    "step": int(m[1]),
                    "indices": [int(i) for i in fields["indices"].split(",")],
                    "alphas": _split_values(fields["alphas"]),
                    "corner": parse_complex(fields["corner"]),
                    "roots": _split_values(fields["roots"]),
                    "residual": float(fields["residual"]),
                    "carried": _split_values(fields.get("carried", "")),
                })
            except (KeyError, ValueError) as exc:
                raise MatrixFormatError(f"line {lineno}: malformed step ({exc})") from None
        elif line.startswith("spectrum="):
            rec["spectrum"] = _split_values(line[len("spectrum="):])
        elif line.split()[0] in ("seed_order", "final_order") and len(line.split()) == 2:
            key, val = line.split()
            rec[key] = int(val)
        else:
            raise MatrixFormatError(f"line {lineno}: unrecognised trace line")
    return rec
