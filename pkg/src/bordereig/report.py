"""Deterministic tab-delimited reports for the command-line tool.

Every section is introduced by a ``[name]`` line followed by a tab-separated
header row.  Floats use 17 significant digits and ``-0`` is printed as
``0``, so identical inputs give byte-identical reports.
"""

from dataclasses import dataclass

import numpy as np

from .eigen import eigen_oracle, sort_spectrum
from .matrixio import digest, format_complex, format_real
from .polyroots import match_multisets

__all__ = [
    "OracleVerdict", "oracle_verdict", "render_deflation", "render_lift",
    "render_spectrum", "render_comparison", "render_generation", "ORACLE_RTOL",
]

#: oracle agreement threshold, relative to ``max(1, max |eigenvalue|)``
ORACLE_RTOL = 1e-8


@dataclass(frozen=True)
class OracleVerdict:
    ok: bool
    max_distance: float
    tolerance: float
    oracle_values: tuple
    ambiguous: bool = False


def _scale(values):
    return max([abs(complex(v)) for v in values] + [1.0])


def oracle_verdict(a, claimed, rtol=ORACLE_RTOL, oracle_values=None):
    """Compare ``claimed`` eigenvalues of ``a`` with the reference solver."""
    if oracle_values is None:
        oracle_values = eigen_oracle(a).values
    ref = sort_spectrum(oracle_values)
    tol = rtol * _scale(ref)
    m = match_multisets(claimed, ref, tol)
    return OracleVerdict(m.ok, m.max_distance, tol, tuple(ref), m.ambiguous)


def _row(*cells):
    return "\t".join(str(c) for c in cells)


def _vec(v):
    return ",".join(format_complex(z) for z in v)


def _yes(flag):
    return "yes" if flag else "no"


def _oracle_lines(verdict):
    return [
        "[oracle]",
        _row("tolerance", format_real(verdict.tolerance)),
        _row("max_distance", format_real(verdict.max_distance)),
        _row("spectrum", _vec(verdict.oracle_values)),
        _row("verdict", "match" if verdict.ok else "mismatch"),
    ]


def render_deflation(a, report, split, tol, verdict=None):
    view = report.view
    lines = [
        _row("report", "deflate"),
        _row("input_sha256", digest(a)),
        _row("order", view.m),
        _row("split", split),
        _row("borders", view.n_border),
        _row("tolerance", format_real(tol)),
        _row("path", report.path),
        _row("hermitian", _yes(report.hermitian)),
        _row("almost_hermitian", _yes(report.almost_hermitian is not None)),
        _row("approximate", _yes(report.approximate)),
        "[border_coefficients]",
        _row("border", "index", "eigenvalue", "alpha", "relative", "reconstruction_residual"),
    ]
    coeffs = report.coefficients
    if coeffs is not None:
        rel = coeffs.relative()
        for ell in range(coeffs.n_border):
            for k in range(view.n):
                lines.append(_row(ell + 1, k + 1, format_complex(report.eig.values[k]),
                                  format_complex(coeffs.alpha[ell, k]),
                                  format_real(rel[ell, k]),
                                  format_real(coeffs.reconstruction_residual[ell])))
    lines += ["[shared_eigenvalues]", _row("value", "multiplicity", "provenance", "residual")]
    for s in report.shared:
        res = max((p.residual for p in report.lifted if p.value == s.value), default=float("nan"))
        lines.append(_row(format_complex(s.value), s.multiplicity, s.provenance, format_real(res)))
    poly = report.residual_poly
    lines += ["[residual_polynomial]", _row("degree", poly.degree), _row("power", "coefficient")]
    lines += [_row(i, format_complex(c)) for i, c in enumerate(poly.coeffs)]
    lines += ["[residual_roots]", _row("root", "polynomial_residual", "sigma_min")]
    for r, s in zip(report.residual_roots, report.root_residuals):
        lines.append(_row(format_complex(r), format_real(poly.relative_residual(r)), format_real(s)))
    lines += ["[lifted_eigenvectors]", _row("value", "origin", "residual", "vector")]
    for p in report.lifted + report.new_pairs:
        lines.append(_row(format_complex(p.value), p.origin, format_real(p.residual), _vec(p.vector)))
    lines += [
        "[summary]",
        _row("shared_count", report.shared_count),
        _row("vanishing_coefficient", report.count("vanishing-coefficient")),
        _row("degeneracy_surplus", report.count("degeneracy-surplus")),
        _row("residual_degree", poly.degree),
        _row("max_residual", format_real(report.spectrum_residual)),
    ]
    if verdict is not None:
        lines += _oracle_lines(verdict)
    return "\n".join(lines) + "\n"


def render_lift(a, value, pairs, tol):
    lines = [
        _row("report", "lift"),
        _row("input_sha256", digest(a)),
        _row("eigenvalue", format_complex(value)),
        _row("tolerance", format_real(tol)),
        "[lifted_eigenvectors]",
        _row("value", "origin", "residual", "norm", "vector"),
    ]
    for p in pairs:
        lines.append(_row(format_complex(p.value), p.origin, format_real(p.residual),
                          format_real(np.linalg.norm(p.vector)), _vec(p.vector)))
    lines += ["[summary]", _row("count", len(pairs)),
              _row("max_residual", format_real(max((p.residual for p in pairs), default=0.0)))]
    return "\n".join(lines) + "\n"


def render_spectrum(a, decomp):
    lines = [
        _row("report", "verify"),
        _row("input_sha256", digest(a)),
        _row("order", a.shape[0]),
        _row("reliable", _yes(decomp.reliable)),
        "[spectrum]",
        _row("index", "eigenvalue", "residual"),
    ]
    res = np.linalg.norm(a @ decomp.vectors - decomp.vectors * decomp.values, axis=0)
    for i, (v, r) in enumerate(zip(decomp.values, res), 1):
        lines.append(_row(i, format_complex(v), format_real(r)))
    return lines


def render_comparison(b, relation, match, tol):
    return [
        "[comparison]",
        _row("against_sha256", digest(b)),
        _row("relation", relation),
        _row("tolerance", format_real(tol)),
        _row("max_distance", format_real(match.max_distance)),
        _row("verdict", "match" if match.ok else "mismatch"),
    ]


def render_generation(trace, out_path, trace_path, verdict):
    lines = [
        _row("report", "generate"),
        _row("seed_order", trace.seed_order),
        _row("final_order", trace.order),
        _row("steps", len(trace.steps)),
        _row("output_sha256", digest(trace.final_matrix)),
        _row("matrix_file", out_path),
        _row("trace_file", trace_path),
        _row("max_step_residual", format_real(trace.max_residual)),
        _row("hermitian_exact", _yes(np.array_equal(trace.final_matrix,
                                                     trace.final_matrix.conj().T))),
    ]
    lines += _oracle_lines(verdict)
    return "\n".join(lines) + "\n"
