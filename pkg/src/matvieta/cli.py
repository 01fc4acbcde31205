"""Command-line interface.

Exit codes: 0 success, 1 identity violation, 2 input error, 3 generation
failure, 4 mathematical precondition failure, 5 partial result.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import (
    EigenFailure,
    FormatError,
    NotIndependent,
    NotInvertible,
    QdUndefined,
    RetryExhausted,
)
from .io import (
    Instance,
    dumps,
    encode_matrix,
    instance_to_json,
    read_block_matrix,
    read_instance,
    solvent_set_to_json,
    verify_report_to_json,
)
from .numeric import Field, Tolerance
from .quasidet import quasideterminant, recover_via_quasidet
from .solvents import FROM_SOLVENTS, FROM_SPECTRUM, enumerate_solvents, random_instance
from .vieta import (
    MatrixPolynomial,
    check_extras,
    check_vieta,
    is_independent,
    recover_coefficients,
    solution_residuals,
)

EXIT_OK, EXIT_IDENTITY, EXIT_INPUT, EXIT_GEN, EXIT_MATH, EXIT_PARTIAL = range(6)


def _tol(args, field: Field) -> Tolerance:
    base = Tolerance()
    tol = Tolerance(
        base.rel if args.tol_rel is None else args.tol_rel,
        base.abs if args.tol_abs is None else args.tol_abs,
    )
    return tol.for_field(field)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(z) -> str:
    if isinstance(z, complex):
        if z.imag == 0:
            return f"{z.real:.12g}"
        return f"{z.real:.12g}{z.imag:+.12g}j"
    return str(z)


def _matrix_text(M) -> str:
    return "\n".join("  [" + ", ".join(_fmt(x) for x in r) + "]" for r in M.rows)


def _instance_text(inst: Instance) -> str:
    lines = [f"instance: scalar={inst.field.value} n={inst.n} k={inst.k} seed={inst.seed}"]
    for i, X in enumerate(inst.solutions or (), 1):
        lines += [f"X_{i} =", _matrix_text(X)]
    if inst.coefficients is not None:
        for j, A in enumerate(inst.coefficients.coeffs, 1):
            lines += [f"A_{j} =", _matrix_text(A)]
    return "\n".join(lines) + "\n"


def _write_instance(inst: Instance, args):
    if args.out:
        _emit(dumps(instance_to_json(inst)), args.out)
        if args.format == "text":
            sys.stdout.write(_instance_text(inst))
    else:
        sys.stdout.write(_instance_text(inst) if args.format == "text" else dumps(instance_to_json(inst)))


# -- subcommands ----------------------------------------------------------
def cmd_gen(args) -> int:
    if args.n < 1 or args.k < 1:
        print("error: --n and --k must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    field = Field(args.scalar)
    try:
        X, P = random_instance(args.seed, args.n, args.k, args.mode, field, tol=_tol(args, field))
    except RetryExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write_instance(Instance(field, args.n, args.k, X, P, args.seed, args.mode), args)
    return EXIT_OK


def cmd_recover(args) -> int:
    inst = read_instance(args.input)
    if inst.solutions is None:
        raise FormatError("recover needs an instance with solutions")
    tol = _tol(args, inst.field)
    X = inst.solutions
    if not is_independent(X, tol).independent:
        print("error: solutions are not independent (block Vandermonde determinant vanishes)",
              file=sys.stderr)
        return EXIT_MATH
    try:
        if args.method == "linear":
            P = recover_coefficients(X, tol)
        else:
            i = args.row if args.row is not None else 1
            if not 1 <= i <= inst.n:
                raise FormatError(f"--row must lie in 1..{inst.n}")
            P = MatrixPolynomial(tuple(recover_via_quasidet(X, j, i, tol) for j in range(1, inst.n + 1)))
    except NotIndependent as exc:
        print(f"error: not independent: {exc}", file=sys.stderr)
        return EXIT_MATH
    except QdUndefined as exc:
        print(f"error: quasideterminant formula undefined here: {exc}", file=sys.stderr)
        return EXIT_MATH
    except NotInvertible as exc:
        print(f"error: quasideterminant not invertible: {exc}", file=sys.stderr)
        return EXIT_MATH
    inst.coefficients = P
    _write_instance(inst, args)
    return EXIT_OK


def cmd_solvents(args) -> int:
    inst = read_instance(args.input)
    if inst.coefficients is None:
        raise FormatError("solvents needs an instance with coefficients")
    P = inst.coefficients.to_complex()
    try:
        S = enumerate_solvents(P, residual_rel=args.residual_rel)
    except EigenFailure as exc:
        print(f"error: eigen-solver failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    doc = solvent_set_to_json(S, inst.n, inst.k)
    if args.format == "text" and not args.out:
        lines = [f"{len(S)} solvents (generic count {doc['generic_count']}), "
                 f"{len(S.skipped)} subsets skipped"]
        for s in S.solvents:
            lines += [f"X from eigenpairs {list(s.indices)}  residual {s.residual:.3e}",
                      _matrix_text(s.X)]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        _emit(dumps(doc), args.out)
    if S.degenerate:
        print("warning: eigenvalues are not pairwise distinct; solvent list may be partial",
              file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(args.input)
    if inst.solutions is None or inst.coefficients is None:
        raise FormatError("verify needs both solutions and coefficients")
    tol = _tol(args, inst.field)
    X, P = inst.solutions, inst.coefficients
    indep = is_independent(X, tol)
    residuals = solution_residuals(X, P, tol)
    reports = list(check_vieta(X, P, tol, strict=False)) + list(check_extras(X, P, tol, strict=False))
    ok = all(c.ok for c in residuals) and all(r.passed for r in reports if not r.skipped)
    doc = verify_report_to_json(__version__, inst.field, inst.n, inst.k, tol, indep,
                                residuals, reports, ok)
    if args.out:
        _emit(dumps(doc), args.out)
    if args.format == "text":
        lines = [f"scalar={inst.field.value} n={inst.n} k={inst.k} "
                 f"tol(rel={tol.rel:g}, abs={tol.abs:g})",
                 f"independent: {indep.independent} (det {_fmt(indep.det)})"]
        for c in residuals:
            lines.append(f"residual X_{c.index}: {c.residual:.3e} (bound {c.bound:.3e}) "
                         f"{'ok' if c.ok else 'FAIL'}")
        for r in reports:
            if r.skipped:
                lines.append(f"{r.identity}: {r.note}")
            else:
                lines.append(f"{r.identity}: {'pass' if r.passed else 'FAIL'}  lhs={_fmt(r.lhs)} "
                             f"rhs={_fmt(r.rhs)} rel_err={r.rel_err:.3e}")
        lines.append("ALL PASS" if ok else "FAILED")
        sys.stdout.write("\n".join(lines) + "\n")
    elif not args.out:
        sys.stdout.write(dumps(doc))
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_quasidet(args) -> int:
    A = read_block_matrix(args.input)
    tol = _tol(args, A.field)
    p = _label(args.p, A.row_labels)
    q = _label(args.q, A.col_labels)
    try:
        Q = quasideterminant(A, p, q, tol)
    except QdUndefined as exc:
        print(f"error: {exc}; offending inner index {list(exc.index)}", file=sys.stderr)
        return EXIT_MATH
    except IndexError as exc:
        raise FormatError(str(exc)) from None
    if args.format == "text":
        sys.stdout.write(f"|A|_({p},{q}) =\n{_matrix_text(Q)}\n")
    else:
        _emit(dumps({"p": p, "q": q, "scalar": A.field.value, "value": encode_matrix(Q)}), args.out)
    return EXIT_OK


def _label(raw: str, labels: tuple):
    # Labels in files may be ints or strings; match either spelling.
    for lab in labels:
        if str(lab) == raw:
            return lab
    raise FormatError(f"label {raw!r} not among {list(labels)}")


# -- parser ---------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rel", type=float, default=None, help="relative tolerance (complex only)")
    common.add_argument("--tol-abs", type=float, default=None, help="absolute tolerance (complex only)")
    common.add_argument("--out", default=None, help="write the JSON result here")
    common.add_argument("--format", choices=["json", "text"], default="json")

    parser = argparse.ArgumentParser(prog="matvieta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"matvieta {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a seeded instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--scalar", choices=[f.value for f in Field], default="complex")
    g.add_argument("--mode", choices=[FROM_SOLVENTS, FROM_SPECTRUM], default=FROM_SOLVENTS)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("recover", parents=[common], help="recover coefficients from solutions")
    r.add_argument("input")
    r.add_argument("--method", choices=["linear", "quasidet"], default="linear")
    r.add_argument("--row", type=int, default=None, help="row label i for --method quasidet")
    r.set_defaults(func=cmd_recover)

    s = sub.add_parser("solvents", parents=[common], help="enumerate all solvents")
    s.add_argument("input")
    s.add_argument("--residual-rel", type=float, default=1e-7)
    s.set_defaults(func=cmd_solvents)

    v = sub.add_parser("verify", parents=[common], help="check the trace/determinant identities")
    v.add_argument("input")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quasidet", parents=[common], help="evaluate one quasideterminant")
    q.add_argument("input")
    q.add_argument("-p", "--p", default="1", help="row label")
    q.add_argument("-q", "--q", default="1", help="column label")
    q.set_defaults(func=cmd_quasidet)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
