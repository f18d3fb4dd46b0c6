"""Command-line interface.

Exit codes: 0 success / PASS, 1 internal numerical failure, 2 invalid input,
3 generation failure, 4 verification FAIL. Errors are printed to stdout as
a JSON object ``{"error": <name>, "message": ...}``.
"""
import argparse
import sys
from pathlib import Path

import numpy as np

from cspair import __version__
from cspair.canonical import generate, is_isomorphic
from cspair.decompose import decompose
from cspair.errors import CondBoundUnreachable, CspairError, InputError, NotAComplexStructure
from cspair.fileio import (
    canonical_to_dict,
    dumps,
    load_json,
    pair_from_dict,
    pair_to_dict,
    report_from_dict,
    report_to_dict,
    sidecar_path,
    spec_from_dict,
    truth_to_dict,
)
from cspair.matlin import DEFAULT_TOL, TolerancePolicy
from cspair.pairalg import generators, validate_pair
from cspair.verify import verify_report

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_GENERATION = 3
EXIT_VERIFY_FAIL = 4


def _source(path):
    return sys.stdin if path == "-" else path


def _tolerance(args):
    return TolerancePolicy(
        rank_rel=args.rank_rel,
        root_rel=args.root_rel,
        residual_rel=args.residual_rel,
        cluster_rel=args.cluster_rel,
    )


def _load_pair(path, tol):
    J1, J2 = pair_from_dict(load_json(_source(path)))
    return validate_pair(J1, J2, tol)


def cmd_decompose(args, out):
    tol = _tolerance(args)
    pair = _load_pair(args.pair, tol)
    report = decompose(generators(pair, tol), tol)
    out.write(dumps(report_to_dict(report)))
    return EXIT_OK


def cmd_generate(args, out):
    tol = _tolerance(args)
    spec = spec_from_dict(load_json(_source(args.spec)), seed=args.seed, cond_bound=args.cond_bound)
    generated = generate(spec, tol)
    pair_text = dumps(pair_to_dict(generated.pair.J1, generated.pair.J2))
    truth_text = dumps(truth_to_dict(spec, generated))
    if args.out is None:
        out.write(pair_text)
        return EXIT_OK
    target = Path(args.out)
    target.write_text(pair_text)
    sidecar = sidecar_path(target)
    sidecar.write_text(truth_text)
    out.write(dumps({"pair": str(target), "truth": str(sidecar), "dim": generated.pair.dim}))
    return EXIT_OK


def cmd_isotest(args, out):
    tol = _tolerance(args)
    reports = [decompose(generators(_load_pair(p, tol), tol), tol) for p in (args.file_a, args.file_b)]
    verdict = {
        "isomorphic": is_isomorphic(reports[0], reports[1], tol),
        "invariantsA": report_to_dict(reports[0])["invariants"],
        "invariantsB": report_to_dict(reports[1])["invariants"],
    }
    out.write(dumps(verdict))
    return EXIT_OK


def cmd_verify(args, out):
    tol = _tolerance(args)
    pair = _load_pair(args.pair, tol)
    report = report_from_dict(load_json(_source(args.report)))
    summary = verify_report(pair, report, tol)
    out.write(dumps(summary.to_dict()))
    return EXIT_OK if summary.passed else EXIT_VERIFY_FAIL


def cmd_canonical(args, out):
    spec = spec_from_dict(load_json(_source(args.spec)))
    out.write(dumps(canonical_to_dict(list(spec.invariants))))
    return EXIT_OK


def build_parser():
    tol_flags = argparse.ArgumentParser(add_help=False)
    tol_flags.add_argument("--rank-rel", type=float, default=DEFAULT_TOL.rank_rel)
    tol_flags.add_argument("--root-rel", type=float, default=DEFAULT_TOL.root_rel)
    tol_flags.add_argument("--residual-rel", type=float, default=DEFAULT_TOL.residual_rel)
    tol_flags.add_argument("--cluster-rel", type=float, default=DEFAULT_TOL.cluster_rel)

    parser = argparse.ArgumentParser(
        prog="cspair", description="Decompose pairs of real complex structures."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[tol_flags], help="decompose a pair file")
    p.add_argument("pair", help="pair file (JSON) or - for stdin")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", parents=[tol_flags], help="generate a pair with given invariants")
    p.add_argument("spec", help="generation spec (JSON) or - for stdin")
    p.add_argument("--out", "-o", help="pair file to write; a .truth.json sidecar goes next to it")
    p.add_argument("--seed", type=int, default=None, help="overrides the seed in SPEC")
    p.add_argument("--cond-bound", type=float, default=None, help="overrides cond_bound in SPEC")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("isotest", parents=[tol_flags], help="test two pair files for isomorphism")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.set_defaults(func=cmd_isotest)

    p = sub.add_parser("verify", parents=[tol_flags], help="check a report against its pair")
    p.add_argument("pair")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("canonical", help="emit canonical models for an invariant list")
    p.add_argument("spec", help="JSON with an 'invariants' list, or - for stdin")
    p.set_defaults(func=cmd_canonical)
    return parser


def _error(out, exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotAComplexStructure):
        payload.update(which=exc.which, residual=exc.residual, bound=exc.bound)
    out.write(dumps(payload))


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "rank_rel"):
            _tolerance(args)
        return args.func(args, out)
    except InputError as exc:
        _error(out, exc)
        return EXIT_INPUT
    except ValueError as exc:  # bad tolerance flags
        _error(out, exc)
        return EXIT_INPUT
    except CondBoundUnreachable as exc:
        _error(out, exc)
        return EXIT_GENERATION
    except (CspairError, ArithmeticError, np.linalg.LinAlgError) as exc:
        _error(out, exc)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
