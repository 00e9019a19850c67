"""Command-line front end.

Subcommands: verify, coeffs, slice, holonomy, check, annihilate,
dump-matrix.  Every run emits a JSON manifest (subcommand, flags, tool
version, output files with sha256 digests): written next to the primary
output when files are produced, otherwise printed as the final stdout
line.  Output files are written atomically (temp file + rename).

Exit codes: 0 success / identity holds; 1 mathematical counterexample
or singular system; 2 usage error; 3 numerical degeneracy.

Vector arguments are 16 comma-separated numbers; plain integers and
p/q fractions stay exact, decimal notation routes to the float backend
unless --exact coerces it to rationals.  SEDLAB_THREADS > 1 parallelizes
batch verification (results are merged in sample order).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .algebra import (CDElement, _install_corrupted_table, cd_multiply,
                      element, format_element, format_scalar, norm_sq,
                      parse_scalar)
from .coeffs import (SingularSystemError, corrected_pairs, make_test_pair,
                     published_pairs, solve_coefficients)
from .holonomy import (DegenerateFiberError, FiberAngleUndefinedError,
                       TransportConfig, fit_summary_dict, run_great_circle,
                       trace_csv_text)
from .invariants import (NotZeroDivisorError, SingularityMismatchError,
                         ZeroElementError, check_factorization, d1,
                         d2_geometric, find_annihilator, is_zero_divisor)
from .operators import det_float, format_matrix, left_mult_matrix, \
    right_mult_matrix
from .rng import SplitMix64

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

CORRUPT_TABLE_ENV = "SEDLAB_CORRUPT_MULT_TABLE"
THREADS_ENV = "SEDLAB_THREADS"


def atomic_write_text(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".sedlab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def emit_manifest(args, outputs: list) -> None:
    flags = {k: (v if isinstance(v, (int, float, bool, str, type(None)))
                 else str(v))
             for k, v in vars(args).items() if k != "func"}
    manifest = {
        "subcommand": args.subcommand,
        "flags": flags,
        "tool_version": __version__,
        "outputs": [{"path": p, "sha256": _sha256(p)} for p in outputs],
    }
    text = json.dumps(manifest, sort_keys=True)
    if outputs:
        atomic_write_text(outputs[0] + ".manifest.json", text + "\n")
    else:
        print(text)


def parse_vector(text: str, exact: bool) -> CDElement:
    parts = text.split(",")
    if len(parts) != 16:
        raise ValueError(f"expected 16 comma-separated values, got {len(parts)}")
    return element(4, tuple(parse_scalar(p, exact) for p in parts))


# --- verify -----------------------------------------------------------------

def _verify_sample(task):
    seed_word, coeff_range, corrupt = task
    if corrupt:
        _install_corrupted_table(4)
    rng = SplitMix64(seed_word)
    v = element(4, [rng.rational(coeff_range) for _ in range(16)])
    return check_factorization(v, exact=True)


def cmd_verify(args) -> int:
    corrupt = bool(os.environ.get(CORRUPT_TABLE_ENV))
    if corrupt:
        _install_corrupted_table(4)
    master = SplitMix64(args.seed)
    tasks = [(master.u64(), args.coeff_range, corrupt)
             for _ in range(args.samples)]
    threads = int(os.environ.get(THREADS_ENV, "1") or "1")
    if threads > 1:
        from multiprocessing import Pool
        with Pool(threads) as pool:
            reports = pool.map(_verify_sample, tasks)
    else:
        reports = [_verify_sample(t) for t in tasks]

    lines = [json.dumps(r.to_json_dict(), sort_keys=True) for r in reports]
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    n_ok = sum(1 for r in reports if r.holds)
    print(f"report: {args.out}")
    print(f"holds: {n_ok}/{len(reports)}")
    emit_manifest(args, [args.out])
    if n_ok != len(reports):
        first_bad = next(r for r in reports if not r.holds)
        print(f"counterexample: {format_element(first_bad.v)}")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# --- coeffs -----------------------------------------------------------------

def _load_pairs_file(path: str) -> list:
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            left, _, right = line.partition(";")
            from .algebra import parse_element
            pairs.append(make_test_pair(parse_element(left, exact=True),
                                        parse_element(right, exact=True)))
    return pairs


def cmd_coeffs(args) -> int:
    if args.paper_pairs:
        pairs = published_pairs()
    elif args.pairs:
        pairs = _load_pairs_file(args.pairs)
    else:
        pairs = corrected_pairs()
    try:
        sol = solve_coefficients(pairs)
    except SingularSystemError as err:
        print(f"rank {err.rank} of 6")
        print(str(err))
        emit_manifest(args, [])
        return EXIT_COUNTEREXAMPLE
    print(" ".join(format_scalar(c) for c in sol))
    names = ("a^4", "a^2*b^2", "a^2*c^2", "b^4", "b^2*c^2", "c^4")
    terms = [f"{format_scalar(c)}*{n}" for c, n in zip(sol, names) if c != 0]
    print("G(a,b,c) = " + (" + ".join(terms) if terms else "0"))
    emit_manifest(args, [])
    return EXIT_OK


# --- slice ------------------------------------------------------------------

def cmd_slice(args) -> int:
    from .slice_model import (SliceParams, build_isosurface, colors_csv_text,
                              contour_csv_text, field_dump_text, obj_text,
                              plane_csv_text, sample_plane_z0, sample_volume)
    params = SliceParams(c=args.c, range_=args.range, grid=args.grid,
                         eps=args.eps)
    outputs = []
    stem, ext = os.path.splitext(args.out)
    if args.dim == 2:
        pf = sample_plane_z0(params)
        atomic_write_text(args.out, plane_csv_text(pf))
        contour_path = f"{stem}_contour.csv"
        atomic_write_text(contour_path, contour_csv_text(pf))
        outputs += [args.out, contour_path]
        print(f"field: {args.out}")
        print(f"contour: {contour_path} ({len(pf.segments)} segments)")
    else:
        mesh = build_isosurface(params)
        atomic_write_text(args.out, obj_text(mesh))
        colors_path = f"{stem}_colors.csv"
        atomic_write_text(colors_path, colors_csv_text(mesh))
        outputs += [args.out, colors_path]
        print(f"mesh: {args.out} ({len(mesh.vertices)} vertices, "
              f"{len(mesh.triangles)} triangles)")
        print(f"colors: {colors_path}")
        if args.field_dump:
            atomic_write_text(args.field_dump,
                              field_dump_text(sample_volume(params)))
            outputs.append(args.field_dump)
            print(f"field dump: {args.field_dump}")
    emit_manifest(args, outputs)
    return EXIT_OK


# --- holonomy ---------------------------------------------------------------

def cmd_holonomy(args) -> int:
    fiber = None
    if args.v2:
        vals = [float(x) for x in args.v2.split(",")]
        if len(vals) != 8:
            raise ValueError("--v2 needs 8 comma-separated components")
        v = np.array(vals)
        v[0] = 0.0
        n = float(np.linalg.norm(v))
        if n < 1e-12:
            raise DegenerateFiberError("initial fiber has no usable direction")
        fiber = v / n
    steps_list = ([int(s) for s in args.sweep.split(",")] if args.sweep
                  else [args.steps])
    stem, ext = os.path.splitext(args.out)
    outputs = []
    for n in steps_list:
        trace = run_great_circle(TransportConfig(num_steps=n, seed=args.seed,
                                                 initial_fiber=fiber))
        path = args.out if len(steps_list) == 1 else f"{stem}_{n}{ext or '.csv'}"
        atomic_write_text(path, trace_csv_text(trace))
        outputs.append(path)
        print(json.dumps(fit_summary_dict(trace), sort_keys=True))
    emit_manifest(args, outputs)
    return EXIT_OK


# --- check / annihilate / dump-matrix ---------------------------------------

def cmd_check(args) -> int:
    v = parse_vector(args.vector, args.exact)
    a = d1(v)
    dd2 = d2_geometric(v)
    if v.is_exact():
        from .operators import det_exact
        delta = det_exact(left_mult_matrix(v))
        fmt = format_scalar
    else:
        delta = det_float(left_mult_matrix(v))
        fmt = repr
    verdict = is_zero_divisor(v, args.tol)
    print(f"D1 = {fmt(a)}")
    print(f"D2 = {fmt(dd2)}")
    print(f"Delta = {fmt(delta)}")
    print(f"zero-divisor: {'true' if verdict else 'false'}")
    emit_manifest(args, [])
    return EXIT_OK


def cmd_annihilate(args) -> int:
    v = parse_vector(args.vector, args.exact)
    w, kdim = find_annihilator(v)
    vf = element(4, tuple(float(c) for c in v.coeffs))
    residual = float(np.sqrt(float(norm_sq(cd_multiply(vf, w)))))
    print(f"w = {format_element(w)}")
    print(f"|v*w| = {residual!r}")
    print(f"kernel dimension = {kdim}")
    emit_manifest(args, [])
    return EXIT_OK


def cmd_dump_matrix(args) -> int:
    v = parse_vector(args.vector, args.exact)
    m = right_mult_matrix(v) if args.right else left_mult_matrix(v)
    text = format_matrix(m)
    if args.out:
        atomic_write_text(args.out, text)
        print(f"matrix: {args.out}")
        emit_manifest(args, [args.out])
    else:
        sys.stdout.write(text)
        emit_manifest(args, [])
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sedlab",
        description="Sedenion zero-divisor laboratory: determinant "
                    "factorization checks, slice level sets, frame transport.")
    p.add_argument("--version", action="version", version=f"sedlab {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    q = sub.add_parser("verify", help="batch-check det M(v) = D1^4 D2^2")
    q.add_argument("--samples", type=int, default=1000)
    q.add_argument("--seed", type=int, default=42)
    q.add_argument("--coeff-range", type=int, default=3, dest="coeff_range")
    q.add_argument("--out", default="verify_report.jsonl")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("coeffs", help="solve the 6x6 monomial system")
    q.add_argument("--pairs", help="file with six 'elem;elem' lines")
    q.add_argument("--paper-pairs", action="store_true", dest="paper_pairs",
                   help="use the historically printed (singular) pair set")
    q.set_defaults(func=cmd_coeffs)

    q = sub.add_parser("slice", help="sample the cyclic slice; contours/mesh")
    q.add_argument("--dim", type=int, choices=(2, 3), required=True)
    q.add_argument("--grid", type=int, default=81)
    q.add_argument("--range", type=float, default=1.0)
    q.add_argument("--c", type=float, default=0.5)
    q.add_argument("--eps", type=float, default=0.01)
    q.add_argument("--out", required=True)
    q.add_argument("--field-dump", dest="field_dump")
    q.set_defaults(func=cmd_slice)

    q = sub.add_parser("holonomy", help="transport a frame around the base loop")
    q.add_argument("--steps", type=int, default=400)
    q.add_argument("--seed", type=int, default=42)
    q.add_argument("--sweep", help="comma list of step counts")
    q.add_argument("--v2", help="initial fiber, 8 comma floats (else seeded)")
    q.add_argument("--out", default="trace.csv")
    q.set_defaults(func=cmd_holonomy)

    q = sub.add_parser("check", help="invariants and verdict for one element")
    q.add_argument("vector")
    q.add_argument("--exact", action="store_true")
    q.add_argument("--tol", type=float, default=1e-10)
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("annihilate", help="find w with v*w = 0")
    q.add_argument("vector")
    q.add_argument("--exact", action="store_true")
    q.set_defaults(func=cmd_annihilate)

    q = sub.add_parser("dump-matrix", help="print or save M(v)")
    q.add_argument("vector")
    q.add_argument("--right", action="store_true")
    q.add_argument("--exact", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_dump_matrix)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DegenerateFiberError, FiberAngleUndefinedError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (NotZeroDivisorError, ZeroElementError,
            SingularityMismatchError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
