"""Command-line interface.

Subcommands:

    det     evaluate the commutator determinant of a problem file
    phases  write the invariant-phase report of a problem file
    verify  run the seeded identity suite and emit its report
    sample  generate a random problem file from a seed

Exit codes: 0 success, 1 input error, 2 identity violation.  Reports are
append-only: an existing --out path is never overwritten.  Wall time goes
to stderr so that report bytes depend only on the inputs.
"""

from __future__ import annotations

import argparse
import os
import sys
import time


from . import __version__
from .determinant import MassPairInput, det3_closed, det4_closed, det_direct
from .phases import (
    expand_phases,
    jr_matrices,
    n3_phase_table,
    phase_table,
    reconstruct_J,
)
from .problem_io import ProblemFileError, load_problem, render_problem
from .sampling import SeededRng, haar_unitary, random_spectrum
from .verify import run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2

#: default closed-vs-direct agreement tolerances for `det --method both`
DET_BOTH_REL = {3: 1e-10, 4: 1e-9}


class _Parser(argparse.ArgumentParser):
    """argparse that exits with the input-error code instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt_complex(z):
    return f"{z.real:.17e} {z.imag:+.17e}j"


def _emit(text, out_path):
    """Print to stdout, or write to a fresh file when out_path is given."""
    if out_path is None:
        sys.stdout.write(text)
        return
    if os.path.exists(out_path):
        raise FileExistsError(
            f"refusing to overwrite existing report '{out_path}' (reports are append-only)"
        )
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_det(args):
    try:
        inp = load_problem(args.file)
    except (ProblemFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    method = args.method
    closed_fn = {3: det3_closed, 4: det4_closed}.get(inp.n)
    if method in ("closed", "both") and closed_fn is None:
        print(
            f"error: no closed form for n={inp.n}; closed evaluation supports n in {{3, 4}}",
            file=sys.stderr,
        )
        return EXIT_INPUT

    lines = [f"n: {inp.n}"]
    if method in ("direct", "both"):
        d = det_direct(inp)
        lines.append(f"det_direct: {_fmt_complex(d)}")
    if method in ("closed", "both"):
        c = closed_fn(inp)
        lines.append(f"det_closed: {_fmt_complex(c)}")
    code = EXIT_OK
    if method == "both":
        tol_rel = args.tol_rel if args.tol_rel is not None else DET_BOTH_REL[inp.n]
        tol_abs = args.tol_abs if args.tol_abs is not None else 0.0
        disc = abs(c - d)
        bound = tol_rel * max(1.0, abs(d)) + tol_abs
        lines.append(f"discrepancy: {disc:.17e}")
        lines.append(f"bound: {bound:.17e}")
        if disc > bound:
            lines.append("agreement: FAIL")
            code = EXIT_VIOLATION
        else:
            lines.append("agreement: pass")
    print("\n".join(lines))
    return code


def _phase_report_text(v):
    lines = []
    lines.append("invariant-phase report")
    lines.append(f"tool_version: {__version__}")
    lines.append(f"n: {v.n}")
    table = phase_table(v)
    lines.append("")
    lines.append("canonical phases (rows alpha<beta, columns j<k):")
    pairs = table.canonical_pairs()
    for rp in pairs:
        for cp in pairs:
            key = (rp[0], rp[1], cp[0], cp[1])
            lines.append(
                f"  ({rp[0]}{rp[1]};{cp[0]}{cp[1]})  im {table.im[key]:+.17e}  "
                f"re {table.re[key]:+.17e}"
            )
    if v.n == 3:
        rep = n3_phase_table(v)
        lines.append("")
        lines.append(f"base phase (12;12): {rep.base:+.17e}")
        if rep.indeterminate:
            lines.append("sign table: indeterminate (base phase is zero)")
        else:
            lines.append("sign table (phase = sign * base):")
            for (rp, cp), sign in rep.signs.items():
                lines.append(
                    f"  ({rp[0]}{rp[1]};{cp[0]}{cp[1]})  sign {sign:+d}  "
                    f"residual {rep.residuals[(rp, cp)]:.17e}"
                )
            lines.append(f"sign pattern matches expected: {rep.matches_expected()}")
        lines.append(f"max sign-table residual: {rep.max_residual:.17e}")
    else:
        jr = jr_matrices(v)
        lines.append("")
        lines.append("adjacent-index J (im) and R (re), entries (a, a+1; j, j+1):")
        for i in range(3):
            jrow = "  ".join(f"{jr.j_mat[i, j]:+.17e}" for j in range(3))
            lines.append(f"  J[{i + 1},:] {jrow}")
        for i in range(3):
            rrow = "  ".join(f"{jr.r_mat[i, j]:+.17e}" for j in range(3))
            lines.append(f"  R[{i + 1},:] {rrow}")
        expanded = expand_phases(jr)
        worst = 0.0
        for rp in pairs:
            for cp in pairs:
                worst = max(
                    worst,
                    abs(
                        expanded.im_value(rp[0], rp[1], cp[0], cp[1])
                        - table.im_value(rp[0], rp[1], cp[0], cp[1])
                    ),
                )
        lines.append("")
        lines.append(f"expansion check (36 phases from J): max residual {worst:.17e}")
        recon = reconstruct_J(v)
        lines.append("")
        lines.append("band reconstruction of J from (J11, J22, J33):")
        sv = "  ".join(f"{s:.17e}" for s in recon.singular_values)
        lines.append(f"  singular values: {sv}")
        lines.append(f"  gate ratio (smin/smax): {recon.gate_ratio:.17e}")
        if recon.degenerate:
            lines.append("  status: degenerate (gate failed; no solve attempted)")
        else:
            lines.append(f"  status: solved, max |reconstructed - direct| = {recon.max_error:.17e}")
    return "\n".join(lines) + "\n"


def _cmd_phases(args):
    try:
        inp = load_problem(args.file)
    except (ProblemFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if inp.n not in (3, 4):
        print(f"error: phase reports support n in {{3, 4}}, got n={inp.n}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(_phase_report_text(inp.v), args.out)
    except (FileExistsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def _cmd_verify(args):
    started = time.monotonic()
    try:
        report = run_suite(
            args.n, args.trials, args.seed, tol_rel=args.tol_rel, tol_abs=args.tol_abs
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    elapsed = time.monotonic() - started
    try:
        _emit(report.render(), args.out)
    except (FileExistsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wall_time_s: {elapsed:.3f}", file=sys.stderr)
    return EXIT_OK if report.passed() else EXIT_VIOLATION


def _cmd_sample(args):
    rng = SeededRng(args.seed)
    try:
        v = haar_unitary(args.n, rng)
        a = random_spectrum(args.n, rng)
        b = random_spectrum(args.n, rng)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render_problem(MassPairInput(a=a, b=b, v=v))
    try:
        _emit(text, args.out)
    except (FileExistsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser():
    parser = _Parser(
        prog="jarlskog",
        description="Commutator determinants and invariant phases of mixing matrices.",
    )
    parser.add_argument("--version", action="version", version=f"jarlskog {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_det = sub.add_parser("det", help="evaluate the commutator determinant of a problem file")
    p_det.add_argument("file", help="problem file (JSON)")
    p_det.add_argument(
        "--method", choices=("direct", "closed", "both"), default="both",
        help="evaluation route (default: both)",
    )
    p_det.add_argument("--tol-rel", type=float, default=None,
                       help="relative agreement tolerance for --method both")
    p_det.add_argument("--tol-abs", type=float, default=None,
                       help="absolute agreement tolerance for --method both")
    p_det.set_defaults(func=_cmd_det)

    p_ph = sub.add_parser("phases", help="write the invariant-phase report of a problem file")
    p_ph.add_argument("file", help="problem file (JSON)")
    p_ph.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_ph.set_defaults(func=_cmd_phases)

    p_ver = sub.add_parser("verify", help="run the seeded identity suite")
    p_ver.add_argument("--n", type=int, default=4, help="dimension, 3 or 4 (default: 4)")
    p_ver.add_argument("--trials", type=int, default=1000, help="ensemble size (default: 1000)")
    p_ver.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p_ver.add_argument("--tol-rel", type=float, default=None,
                       help="override the closed-vs-direct relative tolerance")
    p_ver.add_argument("--tol-abs", type=float, default=None,
                       help="override the parity absolute floor")
    p_ver.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_ver.set_defaults(func=_cmd_verify)

    p_s = sub.add_parser("sample", help="generate a seeded random problem file")
    p_s.add_argument("--n", type=int, default=4, help="dimension, 2..8 (default: 4)")
    p_s.add_argument("--seed", type=int, default=0, help="seed (default: 0)")
    p_s.add_argument("--out", default=None, help="write the file here instead of stdout")
    p_s.set_defaults(func=_cmd_sample)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
