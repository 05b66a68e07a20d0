"""Command line front end.

Exit codes: 0 affirmative, 1 negative verdict, 2 input error, 3 numerical
failure.
"""

import argparse
import sys

from .exceptions import InputError, NumericalError, PHJordanError
from .io import read_family, read_matrix
from .numfield import DEFAULT_TOL, TolerancePolicy
from .report import _c, analyze, dumps, summary
from .sweep import AffineFamily, BUILTIN_FAMILIES, builtin_family, run_sweep

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("tolerances")
    g.add_argument("--eig-tol", type=float, default=DEFAULT_TOL.eig_cluster_tol)
    g.add_argument("--rank-tol", type=float, default=DEFAULT_TOL.rank_tol)
    g.add_argument("--residual-tol", type=float, default=DEFAULT_TOL.residual_tol)
    g.add_argument("--realness-tol", type=float, default=DEFAULT_TOL.realness_tol)
    p.add_argument("--output", "-o", help="write the structured report (JSON) to this path")
    p.add_argument("--json", action="store_true", help="print the structured report to stdout")
    p.add_argument("--quiet", "-q", action="store_true", help="suppress the human-readable summary")
    p.add_argument("--seed", type=int, default=0, help="seed for the intertwiner sampling")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(
        prog="phjordan",
        description="Pseudo-Hermiticity analysis of possibly nondiagonalizable operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("analyze", "full analysis report"),
        ("jordan", "Jordan decomposition ledger"),
        ("metric", "canonical metric and its inertia"),
        ("kramers", "antilinear symmetry squaring to -1"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("file", help="matrix file (JSON with n and [re, im] entries)")
    sp = sub.add_parser("sweep", parents=[common], help="one-parameter sweep")
    sp.add_argument(
        "--family",
        required=True,
        help=f"built-in family ({', '.join(sorted(BUILTIN_FAMILIES))}) or template file",
    )
    sp.add_argument("--from", dest="t0", type=float, required=True)
    sp.add_argument("--to", dest="t1", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--E", dest="E", type=float, default=1.0, help="heff diagonal entry")
    sp.add_argument("--r", dest="r", type=float, default=1.0, help="heff coupling r")
    return parser


def _tol(args):
    return TolerancePolicy(
        eig_cluster_tol=args.eig_tol,
        rank_tol=args.rank_tol,
        residual_tol=args.residual_tol,
        realness_tol=args.realness_tol,
    )


def _emit(args, report, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))
            fh.write("\n")
    if args.json:
        print(dumps(report))
    if not args.quiet and text:
        print(text)


SECTIONS = {
    "jordan": ("input", "tolerances", "jordan"),
    "metric": ("input", "tolerances", "jordan", "classification", "verdict", "metric", "definiteness"),
    "kramers": ("input", "tolerances", "jordan", "classification", "kramers", "symplectic"),
}


def _run_matrix_command(args, tol):
    H = read_matrix(args.file)
    _, report = analyze(H, tol, seed=args.seed, sections=SECTIONS.get(args.command))
    _emit(args, report, summary(report))
    if args.command == "analyze":
        return EXIT_OK if report["verdict"]["oracle"] else EXIT_NEGATIVE
    if args.command == "metric":
        return EXIT_OK if report["metric"] is not None else EXIT_NEGATIVE
    if args.command == "kramers":
        return EXIT_OK if report["kramers"]["T_exists"] else EXIT_NEGATIVE
    return EXIT_OK


def _fmt_blocks(blocks):
    if blocks is None:
        return "-"
    return ";".join(f"{z.real:.6g}{z.imag:+.6g}i:{p}" for z, p in blocks)


def sweep_report(result, tol):
    return {
        "family": result.family,
        "tolerances": tol.to_dict(),
        "records": [
            {
                "parameter": r.parameter,
                "eigenvalues": [_c(z) for z in r.eigenvalues],
                "min_gap": r.min_gap,
                "blocks": None if r.blocks is None else [{"eigenvalue": _c(z), "p": p} for z, p in r.blocks],
                "block_multiset": None if r.block_multiset is None else list(r.block_multiset),
                "condition_i": r.condition_i,
                "inertia": None if r.inertia is None else list(r.inertia),
                "spectral_type": r.spectral_type,
                "ill_conditioned": r.ill_conditioned,
                "error": r.error,
            }
            for r in result.records
        ],
        "transitions": [
            {
                "parameter": tr.parameter,
                "lower": tr.lower,
                "upper": tr.upper,
                "grid_point": tr.index is not None,
                "before": None if tr.before is None else list(tr.before),
                "at": None if tr.at is None else list(tr.at),
                "after": None if tr.after is None else list(tr.after),
            }
            for tr in result.transitions
        ],
        "spectral_changes": [
            {"lower": a, "upper": b, "before": x, "after": y} for a, b, x, y in result.spectral_changes
        ],
    }


def sweep_table(result):
    """Tab-delimited records followed by a transition summary."""
    rows = ["parameter\tmin_gap\tblocks\tcondition_i\tinertia\tspectral_type\till_conditioned"]
    for r in result.records:
        rows.append(
            "\t".join(
                [
                    f"{r.parameter:.12g}",
                    f"{r.min_gap:.6e}",
                    _fmt_blocks(r.blocks) if r.error is None else f"error:{r.error}",
                    str(r.condition_i),
                    "-" if r.inertia is None else f"{r.inertia[0]},{r.inertia[1]}",
                    str(r.spectral_type),
                    str(r.ill_conditioned),
                ]
            )
        )
    rows.append(f"# transitions: {len(result.transitions)}")
    for tr in result.transitions:
        if tr.index is not None:
            rows.append(f"# at {tr.lower:.12g}: {list(tr.before)} -> {list(tr.at)} -> {list(tr.after)}")
        else:
            rows.append(f"# between {tr.lower:.12g} and {tr.upper:.12g}: {tr.before} -> {tr.after}")
    return "\n".join(rows)


def _run_sweep(args, tol):
    if args.family in BUILTIN_FAMILIES:
        params = {"E": args.E, "r": args.r} if args.family == "heff" else {}
        family = builtin_family(args.family, **params)
    else:
        base, direction = read_family(args.family)
        family = AffineFamily(args.family, base, direction)
    result = run_sweep(family, args.t0, args.t1, args.steps, tol)
    _emit(args, sweep_report(result, tol), sweep_table(result))
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = _tol(args)
        if args.command == "sweep":
            return _run_sweep(args, tol)
        return _run_matrix_command(args, tol)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PHJordanError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
