"""``bordereig`` command-line tool.

Exit codes: 0 success, 1 parse or usage error, 2 verification failure,
3 numerical non-convergence.
"""

import argparse
import sys

import numpy as np

from . import report as rpt
from .constructor import grow_analytic
from .deflation import deflate, partition
from .eigen import EigenDecomposition, eigen_oracle
from .errors import (BorderEigError, ConvergenceError, GrowthError, MatrixFormatError,
                     NotHermitianError)
from .instances import random_growth_steps
from .linalg import is_hermitian
from .matrixio import format_trace, parse_complex, read_matrix, write_matrix
from .polyroots import match_multisets

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CONVERGENCE = 0, 1, 2, 3

#: generated spectra must match the reference solver to this relative distance
GENERATE_RTOL = 1e-7
#: largest acceptable per-step residual of a growth trace
STEP_RESIDUAL_MAX = 1e-8
#: lifted eigenvectors must satisfy |A x - lam x| <= LIFT_RTOL * |A|_F
LIFT_RTOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fail(code, message):
    print(f"bordereig: {message}", file=sys.stderr)
    return code


def _read(path):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _split(a, n):
    if a.shape[0] != a.shape[1]:
        raise UsageError(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    if not 1 <= n < a.shape[0]:
        raise UsageError(f"--split must satisfy 1 <= N < {a.shape[0]}, got {n}")
    return partition(a, n)


def cmd_deflate(args):
    a = _read(args.input)
    view = _split(a, args.split)
    rep = deflate(view, tol=args.tol, soft_tol=args.soft_tol,
                  transpose_fallback=args.transpose_fallback)
    verdict = rpt.oracle_verdict(a, rep.spectrum()) if args.oracle else None
    sys.stdout.write(rpt.render_deflation(a, rep, args.split, args.tol, verdict))
    if args.figure:
        from .plotting import plot_deflation
        plot_deflation(rep, args.figure, verdict.oracle_values if verdict else None)
    if verdict is not None and not verdict.ok:
        return _fail(EXIT_VERIFY, f"spectrum differs from the reference solver by "
                                  f"{verdict.max_distance:.3g}")
    return EXIT_OK


def _parse_values(text, what):
    try:
        return [parse_complex(t) for t in text.split(",")]
    except MatrixFormatError:
        raise UsageError(f"cannot parse {what} {text!r}") from None


def parse_steps(spec):
    """``idx,idx:alpha,alpha:corner`` steps separated by ``;`` (1-based indices)."""
    steps = []
    for n, chunk in enumerate(s for s in spec.split(";") if s.strip()):
        parts = chunk.strip().split(":")
        if len(parts) != 3:
            raise UsageError(f"step {n + 1}: expected 'indices:alphas:corner', got {chunk!r}")
        try:
            idx = [int(t) - 1 for t in parts[0].split(",")]
        except ValueError:
            raise UsageError(f"step {n + 1}: bad indices {parts[0]!r}") from None
        if any(i < 0 for i in idx):
            raise UsageError(f"step {n + 1}: indices are 1-based")
        alphas = _parse_values(parts[1], "alphas")
        corner = _parse_values(parts[2], "corner")
        if len(corner) != 1:
            raise UsageError(f"step {n + 1}: one corner value expected")
        steps.append((idx, alphas, corner[0]))
    if not steps:
        raise UsageError("--steps is empty")
    return steps


def cmd_generate(args):
    if args.seed_matrix:
        seed = _read(args.seed_matrix)
        if seed.shape[0] != seed.shape[1] or not is_hermitian(seed, rtol=1e-12):
            raise UsageError("seed matrix must be square and Hermitian")
        eig = eigen_oracle(seed)
    else:
        diag = _parse_values(args.seed_diag, "--seed-diag")
        if any(v.imag != 0 for v in diag):
            raise UsageError("--seed-diag entries must be real")
        seed = np.diag(np.array(diag, dtype=np.complex128))
        eig = EigenDecomposition.from_diagonal([v.real for v in diag])
    if args.steps.startswith("random:"):
        try:
            count = int(args.steps[len("random:"):])
        except ValueError:
            raise UsageError(f"bad step count in {args.steps!r}") from None
        steps = random_growth_steps(np.random.default_rng(args.rng_seed), seed.shape[0], count)
    else:
        steps = parse_steps(args.steps)
    try:
        trace = grow_analytic(seed, eig, steps)
    except (GrowthError, NotHermitianError) as exc:
        raise UsageError(str(exc)) from None
    write_matrix(args.out, trace.final_matrix)
    with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_trace(trace))
    verdict = rpt.oracle_verdict(trace.final_matrix, trace.analytic_spectrum, GENERATE_RTOL)
    sys.stdout.write(rpt.render_generation(trace, args.out, args.trace, verdict))
    if args.figure:
        from .plotting import plot_growth
        plot_growth(trace, args.figure)
    if not verdict.ok:
        return _fail(EXIT_VERIFY, f"analytic spectrum differs from the reference solver "
                                  f"by {verdict.max_distance:.3g}")
    if trace.max_residual > STEP_RESIDUAL_MAX:
        return _fail(EXIT_VERIFY, f"step residual {trace.max_residual:.3g} too large")
    return EXIT_OK


def _parse_eigenvalue(text):
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"--eigenvalue expects 're,im', got {text!r}") from None
    if len(vals) == 1:
        return complex(vals[0], 0.0)
    if len(vals) != 2:
        raise UsageError(f"--eigenvalue expects 're,im', got {text!r}")
    return complex(*vals)


def cmd_lift(args):
    a = _read(args.input)
    target = _parse_eigenvalue(args.eigenvalue)
    view = _split(a, args.split)
    rep = deflate(view)
    pairs = [p for p in rep.lifted if abs(p.value - target) <= args.tol]
    if not pairs:
        return _fail(EXIT_VERIFY, "no shared eigenvalue within tolerance")
    sys.stdout.write(rpt.render_lift(a, target, pairs, args.tol))
    bound = LIFT_RTOL * float(np.linalg.norm(a))
    worst = max(p.residual for p in pairs)
    if worst > bound:
        return _fail(EXIT_VERIFY, f"lifted residual {worst:.3g} exceeds {bound:.3g}")
    return EXIT_OK


def cmd_verify(args):
    a = _read(args.input)
    if a.shape[0] != a.shape[1]:
        raise UsageError(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    decomp = eigen_oracle(a)
    lines = rpt.render_spectrum(a, decomp)
    code = EXIT_OK
    if args.against:
        b = _read(args.against)
        if b.shape[0] != b.shape[1]:
            raise UsageError(f"matrix is {b.shape[0]}x{b.shape[1]}, not square")
        other = eigen_oracle(b).values
        tol = args.tol * max([abs(complex(v)) for v in decomp.values] + [1.0])
        relation = "same"
        match = match_multisets(decomp.values, other, tol)
        if not match.ok:
            conj = match_multisets(np.conj(decomp.values), other, tol)
            if conj.ok:
                relation, match = "conjugate", conj
        lines += rpt.render_comparison(b, relation, match, tol)
        if not match.ok:
            code = EXIT_VERIFY
    sys.stdout.write("\n".join(lines) + "\n")
    if args.figure:
        from .plotting import plot_spectra
        series = {"input": decomp.values}
        if args.against:
            series["against"] = other
        plot_spectra(series, args.figure, title="spectrum")
    if code != EXIT_OK:
        return _fail(code, f"spectra differ by {match.max_distance:.3g}")
    return code


def build_parser():
    p = _Parser(prog="bordereig", description="Eigenvalue deflation for bordered matrices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("deflate", help="split the spectrum into shared and residual parts")
    d.add_argument("--input", required=True)
    d.add_argument("--split", required=True, type=int, help="order N of the leading block B")
    d.add_argument("--tol", type=float, default=1e-10)
    d.add_argument("--soft-tol", type=float, default=None)
    d.add_argument("--oracle", action="store_true", help="compare with the reference solver")
    d.add_argument("--transpose-fallback", action="store_true",
                   help="look for row-side constraints when no column coefficient vanishes")
    d.add_argument("--figure", help="write a spectrum plot to this file")
    d.set_defaults(func=cmd_deflate)

    g = sub.add_parser("generate", help="grow a Hermitian matrix with a known spectrum")
    seed = g.add_mutually_exclusive_group(required=True)
    seed.add_argument("--seed-matrix")
    seed.add_argument("--seed-diag", help='comma-separated diagonal, e.g. "1,2,3,4"')
    g.add_argument("--steps", required=True,
                   help="'i,j,k:a1,a2,a3:corner;...' with 1-based indices, or random:K")
    g.add_argument("--out", required=True)
    g.add_argument("--trace", required=True)
    g.add_argument("--rng-seed", type=int, default=0, help="seed for random:K steps")
    g.add_argument("--figure", help="write a growth plot to this file")
    g.set_defaults(func=cmd_generate)

    li = sub.add_parser("lift", help="eigenvectors of A for a shared eigenvalue")
    li.add_argument("--input", required=True)
    li.add_argument("--split", required=True, type=int)
    li.add_argument("--eigenvalue", required=True, help='"re,im"')
    li.add_argument("--tol", type=float, default=1e-8)
    li.set_defaults(func=cmd_lift)

    v = sub.add_parser("verify", help="reference spectrum, optionally compared to another matrix")
    v.add_argument("--input", required=True)
    v.add_argument("--against")
    v.add_argument("--tol", type=float, default=1e-8, help="relative matching tolerance")
    v.add_argument("--figure", help="write a spectrum plot to this file")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except MatrixFormatError as exc:
        return _fail(EXIT_USAGE, f"matrix file: {exc}")
    except ConvergenceError as exc:
        return _fail(EXIT_CONVERGENCE, f"no convergence: {exc}")
    except BorderEigError as exc:
        return _fail(EXIT_VERIFY, str(exc))


if __name__ == "__main__":
    sys.exit(main())
