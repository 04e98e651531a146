"""Command-line front end.

    sfmkit decompose  --input measure.json --output dec.json
    sfmkit dilate     --input measure.json --output dil.json [--eps 0.1]
    sfmkit verify     --dilation dil.json --measure measure.json
    sfmkit equiv      d1.json d2.json [--output U.json]
    sfmkit phase-demo --N 8 --M 16 --preset all-ones --z 0.5 1 2 --output-dir out/
    sfmkit random     --N 4 --M 3 --seed 7 --output measure.json

Exit codes: 0 success, 1 verification or equivalence failed, 2 bad input,
3 numerical failure.  ``SFMKIT_TOL`` overrides the default tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .decomposition import decompose, strictify, verify_decomposition
from .dilation import build_dilation, equivalent, verify_dilation
from .linalg import DEFAULT_TOL, SymmetryError
from .measure import geometric_alpha, random_sfm, scaling_weights, symmetric_split_sfm
from .phase import (ArcPartition, block_psd, c_matrix, check_c_matrix, coherent_vector,
                    find_negative_probability, phase_sfm, probabilities, probability_diagnostics,
                    probe_states)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_SEED = 20240101


class CommandError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def default_tol() -> float:
    raw = os.environ.get("SFMKIT_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise CommandError(f"SFMKIT_TOL is not a number: {raw!r}", EXIT_INPUT) from None


def _alpha(args):
    if args.alpha is None:
        return None
    try:
        return geometric_alpha(args.alpha)
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_INPUT) from None


def _emit(doc, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(io.dumps(doc))
    else:
        io.dump(doc, path)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def cmd_decompose(args) -> int:
    E = io.measure_from_doc(io.load(args.input))
    alpha = _alpha(args)
    dec = decompose(E, alpha=alpha, tol=args.tol)
    report = verify_decomposition(E, dec, args.tol)
    _emit(io.decomposition_to_doc(dec), args.output)
    out = sys.stderr if args.output in (None, "-") else sys.stdout
    A, B = symmetric_split_sfm(E)
    for name, part in (("real", A), ("imaginary", B)):
        _, delta = scaling_weights(part, alpha)
        print(f"{name} part: delta = {_fmt(delta)}", file=out)
    for name, s, row in zip(("real", "imaginary"), dec.scalings, dec.mu):
        print(f"{name} part: d = [{', '.join(_fmt(x) for x in s.weights)}]", file=out)
        print(f"{name} part: mu = [{', '.join(_fmt(x) for x in row)}]", file=out)
    for label, f in zip(E.labels, E.forms):
        A_j = 0.5 * (f + f.conj().T)
        B_j = 0.5j * (f.conj().T - f)
        ev_a = ", ".join(_fmt(x) for x in np.linalg.eigvalsh(A_j)[::-1])
        ev_b = ", ".join(_fmt(x) for x in np.linalg.eigvalsh(B_j)[::-1])
        print(f"atom {label}: eig(Re) = [{ev_a}]  eig(Im) = [{ev_b}]", file=out)
    for line in report.lines():
        print(line, file=out)
    if not report.passed:
        raise CommandError(f"decomposition failed verification (residual {report.residual:.3e})",
                           EXIT_NUMERIC)
    return EXIT_OK


def cmd_dilate(args) -> int:
    E = io.measure_from_doc(io.load(args.input))
    alpha = _alpha(args)
    if args.eps is not None:
        if args.eps <= 0:
            raise CommandError("--eps must be positive", EXIT_INPUT)
        dec = strictify(E, None, args.eps, alpha=alpha, tol=args.tol)
    else:
        dec = decompose(E, alpha=alpha, tol=args.tol)
    dil = build_dilation(dec, alpha=alpha, tol=args.tol)
    report = verify_dilation(dil, E, args.tol)
    _emit(io.dilation_to_doc(dil), args.output)
    out = sys.stderr if args.output in (None, "-") else sys.stdout
    for line in report.lines():
        print(line, file=out)
    if not report.passed:
        raise CommandError("built dilation failed verification", EXIT_NUMERIC)
    return EXIT_OK


def cmd_verify(args) -> int:
    dil = io.dilation_from_doc(io.load(args.dilation))
    E = io.measure_from_doc(io.load(args.measure))
    if dil.dim != E.dim or dil.labels != E.labels:
        raise CommandError("dilation and measure differ in dimension or atom labels", EXIT_INPUT)
    report = verify_dilation(dil, E, args.tol)
    for line in report.lines():
        print(line)
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_equiv(args) -> int:
    d1 = io.dilation_from_doc(io.load(args.first), "first")
    d2 = io.dilation_from_doc(io.load(args.second), "second")
    if d1.dim != d2.dim or d1.labels != d2.labels:
        raise CommandError("dilations differ in dimension or atom labels", EXIT_INPUT)
    flag, U = equivalent(d1, d2, args.tol)
    print("equivalent" if flag else "not equivalent")
    if args.output is not None:
        _emit(io.unitary_to_doc(flag, U, d1.labels), args.output)
    return EXIT_OK if flag else EXIT_FAIL


def cmd_phase_demo(args) -> int:
    if args.N < 1 or args.M < 1:
        raise CommandError("N and M must be at least 1", EXIT_INPUT)
    if args.c_file is not None:
        c = io.c_matrix_from_doc(io.load(args.c_file))
        if c.shape[0] != args.N:
            raise CommandError(f"c-file has size {c.shape[0]}, expected N = {args.N}", EXIT_INPUT)
    else:
        try:
            c = c_matrix(args.preset, args.N, args.r)
        except ValueError as exc:
            raise CommandError(str(exc), EXIT_INPUT) from None
    try:
        c = check_c_matrix(c)
    except ValueError as exc:
        raise CommandError(str(exc), EXIT_INPUT) from None
    offset = -np.pi / args.M if args.offset is None else args.offset
    part = ArcPartition.uniform(args.M, offset)
    E = phase_sfm(c, part)
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    io.dump(io.measure_to_doc(E), outdir / "measure.json")
    lam, ok = block_psd(c, args.block)
    print(f"c leading {args.block or args.N}x{args.block or args.N} block: "
          f"min eigenvalue {_fmt(lam)} ({'PSD' if ok else 'not PSD'})")
    for i, z in enumerate(args.z):
        psi = coherent_vector(z, args.N)
        p = probabilities(E, psi)
        path = outdir / f"probabilities_z{i}.csv"
        io.write_probability_csv(path, E.labels, p)
        diag = probability_diagnostics(p)
        peak = E.labels[int(np.argmax(p.real))]
        print(f"z = {z}: total {_fmt(diag['total'].real)}, min {_fmt(diag['min_real'])}, "
              f"max |im| {diag['max_imag']:.2e}, peak {peak} -> {path.name}")
    rng = np.random.default_rng(args.seed)
    value, j, _ = find_negative_probability(E, probe_states(args.N, rng, n_random=200))
    if value < -1e-12:
        print(f"negative value found: {_fmt(value)} at atom {E.labels[j]}")
    else:
        print(f"no negative value found (minimum {_fmt(value)})")
    return EXIT_OK


def cmd_random(args) -> int:
    rng = np.random.default_rng(args.seed)
    E = random_sfm(rng, args.N, args.M, args.kind)
    _emit(io.measure_to_doc(E), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfmkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alpha=False):
        p.add_argument("--tol", type=float, default=None, help="verification tolerance")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if alpha:
            p.add_argument("--alpha", type=float, default=None,
                           help="geometric ratio r for alpha_m = r^(m+1) (default 0.5)")

    p = sub.add_parser("decompose", help="four-part positive decomposition of a measure")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    common(p, alpha=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("dilate", help="build a spectral W-dilation of a measure")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--eps", type=float, default=None, help="strictify with this epsilon")
    common(p, alpha=True)
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("verify", help="check a dilation against a measure")
    p.add_argument("--dilation", required=True)
    p.add_argument("--measure", "--input", dest="measure", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equiv", help="test two dilations for unitary equivalence")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--output", default=None)
    common(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("phase-demo", help="phase-shift covariant SFM and probabilities")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--M", type=int, default=16)
    p.add_argument("--preset", default="all-ones")
    p.add_argument("--r", type=float, default=0.5, help="ratio for the toeplitz preset")
    p.add_argument("--c-file", default=None)
    p.add_argument("--z", type=complex, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--offset", type=float, default=None,
                   help="start angle of arc0 (default -pi/M: arcs centred on k 2pi/M)")
    p.add_argument("--block", type=int, default=None, help="size of the PSD-checked block")
    p.add_argument("--output-dir", "--output", dest="output_dir", default=".")
    common(p)
    p.set_defaults(func=cmd_phase_demo)

    p = sub.add_parser("random", help="seeded random measure document")
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--kind", choices=["general", "symmetric", "positive"], default="general")
    p.add_argument("--output", default=None)
    common(p)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.tol is None:
            args.tol = default_tol()
        return args.func(args)
    except CommandError as exc:
        print(f"sfmkit: {exc}", file=sys.stderr)
        return exc.code
    except io.InputError as exc:
        print(f"sfmkit: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SymmetryError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"sfmkit: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
