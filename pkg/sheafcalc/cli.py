"""
Command-line front end.

Usage:
    sheafcalc [--json] [--field q|f<p>] [--seed N] COMMAND ...

JSON arguments are given inline, as ``@path`` to read a file, or as ``-`` to
read standard input. Results go to stdout; logs go to stderr.
"""
import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

from . import config, service
from .errors import SheafCalcError, ValidationError
from .utils import setup_logging
from .verify import SUITES, run_verify

logger = logging.getLogger("sheafcalc")


def load_json_argument(text: str) -> Any:
    """Parse an inline JSON argument, an ``@file`` reference or ``-`` for stdin."""
    try:
        if text == "-":
            return json.load(sys.stdin)
        if text.startswith("@"):
            with open(text[1:], "r", encoding="utf-8") as handle:
                return json.load(handle)
        return json.loads(text)
    except OSError as e:
        raise ValidationError(f"cannot read {text[1:]!r}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON argument: {e.msg}", {"position": e.pos}) from e


def parse_word(text: str) -> List[int]:
    """A multidegree given as a JSON array or as comma separated integers."""
    if text.strip().startswith("["):
        value = load_json_argument(text)
        if not isinstance(value, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in value):
            raise ValidationError(f"cannot read {text!r} as a list of integers")
        return value
    try:
        return [int(x) for x in text.split(",")]
    except (TypeError, ValueError) as e:
        raise ValidationError(f"cannot read {text!r} as a list of integers") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheafcalc",
        description="Exact computations with vector bundles and torsion-free sheaves on "
                    "cycles of projective lines and the cuspidal cubic.",
    )
    parser.add_argument("--json", action="store_true", help="Print results as JSON")
    parser.add_argument("--field", default=None,
                        help=f"Base field: q or f<p> (default: {config.DEFAULT_FIELD})")
    parser.add_argument("--seed", type=int, default=None,
                        help=f"Seed for randomized procedures (default: {config.DEFAULT_SEED})")
    parser.add_argument("--log-level", default="WARNING", help="Logging level (default: WARNING)")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("birkhoff", help="Birkhoff factorization of a Laurent matrix")
    cmd.add_argument("matrix", help="Array of rows of {exponent: coefficient} maps")

    for name, text in (("describe", "Charge, normalization and canonical form of a descriptor"),
                       ("triple", "Gluing matrices of a band or string"),
                       ("dual", "Dual of a band or string"),
                       ("fm", "Fourier-Mukai image of a torsion module on E_1")):
        cmd = commands.add_parser(name, help=text)
        cmd.add_argument("descriptor", help="Descriptor JSON")

    cmd = commands.add_parser("cohomology", help="h0 and h1 by formula, oracle or both")
    cmd.add_argument("descriptor", help="Descriptor or triple JSON")
    method = cmd.add_mutually_exclusive_group()
    method.add_argument("--formula", dest="method", action="store_const", const="formula")
    method.add_argument("--oracle", dest="method", action="store_const", const="oracle")
    method.add_argument("--both", dest="method", action="store_const", const="both")
    cmd.set_defaults(method="both")

    for name, text in (("tensor", "Decompose the tensor product of two bands"),
                       ("hom", "dim Hom(A, B)"),
                       ("isomorphic", "Decide whether A and B are isomorphic")):
        cmd = commands.add_parser(name, help=text)
        cmd.add_argument("first", help="Descriptor or triple JSON")
        cmd.add_argument("second", help="Descriptor or triple JSON")

    cmd = commands.add_parser("pullback", help="Inverse image along the degree r covering")
    cmd.add_argument("descriptor", help="Band descriptor JSON")
    cmd.add_argument("r", type=int, help="Covering degree")

    cmd = commands.add_parser("pushforward", help="Direct image of a line bundle along a covering")
    cmd.add_argument("word", help="Multidegree on the cover, e.g. 1,0 or [1,0]")
    cmd.add_argument("n", type=int, help="Length of the target cycle")
    cmd.add_argument("--lambda", dest="lam", default="1", help="Line bundle parameter (default: 1)")
    cmd.add_argument("--m", type=int, default=1, help="Unipotent rank (default: 1)")
    cmd.add_argument("--decompose", action="store_true", help="Split periodic words instead of failing")

    cmd = commands.add_parser("stable-seq", help="Multidegree word of the stable bundle on E_1")
    cmd.add_argument("r", type=int)
    cmd.add_argument("d", type=int)
    cmd.add_argument("--lambda", dest="lam", default="1")
    cmd.add_argument("--certify", action="store_true", help="Check End = k with the oracle")

    cmd = commands.add_parser("cusp-matrix", help="Simple vector bundle on the cuspidal cubic")
    cmd.add_argument("r", type=int)
    cmd.add_argument("d", type=int)
    cmd.add_argument("--lambda", dest="lam", default="0")

    cmd = commands.add_parser("cusp-tf", help="Simple torsion-free, not locally free sheaf on the cuspidal cubic")
    cmd.add_argument("r", type=int)
    cmd.add_argument("d", type=int)

    cmd = commands.add_parser("verify", help="Run the oracle cross-check suites")
    cmd.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    cmd.add_argument("--report", default=None, help="Write the case table to a .csv or .xlsx file")
    return parser


def dispatch(args: argparse.Namespace) -> Dict[str, Any]:
    field = args.field
    command = args.command
    if command == "birkhoff":
        return service.birkhoff(load_json_argument(args.matrix), field)
    if command == "describe":
        return service.describe(load_json_argument(args.descriptor), field)
    if command == "triple":
        return service.triple(load_json_argument(args.descriptor), field)
    if command == "cohomology":
        return service.cohomology(load_json_argument(args.descriptor), field, args.method)
    if command == "tensor":
        return service.tensor(load_json_argument(args.first), load_json_argument(args.second), field)
    if command == "dual":
        return service.dualize(load_json_argument(args.descriptor), field)
    if command == "pullback":
        return service.pullback(load_json_argument(args.descriptor), args.r, field)
    if command == "pushforward":
        return service.pushforward(parse_word(args.word), args.n, args.lam, args.m, field, args.decompose)
    if command == "stable-seq":
        return service.stable_seq(args.r, args.d, field, args.lam, args.certify)
    if command == "cusp-matrix":
        return service.cusp_matrix(args.r, args.d, args.lam, field)
    if command == "cusp-tf":
        return service.cusp_tf(args.r, args.d, field, args.seed)
    if command == "hom":
        return service.hom(load_json_argument(args.first), load_json_argument(args.second), field)
    if command == "isomorphic":
        return service.isomorphic(load_json_argument(args.first), load_json_argument(args.second), field,
                                  args.seed)
    if command == "fm":
        return service.fm(load_json_argument(args.descriptor), field)
    raise ValidationError(f"unknown command {command!r}")


def render_text(data: Dict[str, Any]) -> str:
    lines = []
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, separators=(", ", ": "))
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(data: Dict[str, Any], as_json: bool) -> None:
    print(json.dumps(data, indent=2) if as_json else render_text(data))


def run_verify_command(args: argparse.Namespace) -> int:
    report = run_verify(args.suite, args.field, args.seed)
    if args.report:
        report.write(args.report)
    if args.json:
        emit(report.to_json(), True)
    else:
        print(report.summary.to_string(index=False))
        failed = report.cases[~report.cases["match"]]
        if not failed.empty:
            print()
            print(failed.to_string(index=False))
    return 0 if report.mismatches == 0 else 1


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``sheafcalc`` command.

    Returns:
        0 on success, 1 on invalid input or verify mismatches, 2 when a
        randomized procedure was inconclusive
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level)
    logger.info(f"Running command {args.command}")
    try:
        if args.command == "verify":
            return run_verify_command(args)
        emit(dispatch(args), args.json)
        return 0
    except SheafCalcError as e:
        if args.json:
            print(json.dumps({"error": e.to_dict()}, indent=2))
        else:
            print(f"error [{e.code}]: {e.message}", file=sys.stderr)
            if e.context:
                print(json.dumps(e.context), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
