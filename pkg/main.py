"""
Stone Workbench Command Line
Finite algebras over GF(p), their pearls and spectra, profinite towers and
sheaves of modules, driven from the shell.

    python main.py pearl "GF(2)[x]/(x^2+x+1) (x) GF(2)[x]/(x^2+x+1)"
    python main.py factor -p 2 "x^3+1" --json
    python main.py tower cantor -d 3 complement --top 0,5 --dot
    python main.py check all --seed 7
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from commands import (
    CommandResult,
    TOWER_KINDS,
    check_command,
    dual_set_command,
    dual_spec_command,
    factor_command,
    factor_count_command,
    pearl_command,
    pi0_command,
    quotient_command,
    sheaf_demo_command,
    tower_command,
)
from checks import SUITES
from config import VERSION, override_config
from errors import InvalidInput, WorkbenchError
from serialization import dumps

logger = logging.getLogger("stone_workbench")


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1, leaving 2 for domain errors"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _common_flags() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the verb
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print the JSON envelope")
    common.add_argument("--dot", action="store_true", default=argparse.SUPPRESS,
                        help="print a Graphviz drawing where the command has one")
    common.add_argument("--dim-cap", type=int, default=argparse.SUPPRESS, help="largest algebra dimension built")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized commands")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS,
                        help="log to stderr (-v info, -vv debug)")
    return common


def build_parser() -> WorkbenchArgumentParser:
    common = _common_flags()
    parser = WorkbenchArgumentParser(prog="stone-workbench", description=__doc__.split("\n\n")[0],
                                     parents=[common])
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    verbs = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("pearl", "pearl A° of an algebra"),
                            ("pi0", "connected components of Spec A"),
                            ("q", "Stone quotient Q(A)")):
        sub = verbs.add_parser(name, help=help_text, parents=[common])
        sub.add_argument("expr", help="algebra expression")

    dual = verbs.add_parser("dual", help="finite Stone duality", parents=[common])
    dual_verbs = dual.add_subparsers(dest="dual_command", required=True)
    dual_set = dual_verbs.add_parser("set", help="GF(p)^S for a set of n points", parents=[common])
    dual_set.add_argument("n", type=int)
    dual_set.add_argument("-p", "--prime", type=int, required=True)
    dual_set.add_argument("--map", type=int_list, help="target index of every point, e.g. 0,0,1")
    dual_set.add_argument("--target", type=int, help="size of the target set (default: largest index + 1)")
    dual_spec = dual_verbs.add_parser("spec", help="points of a p-Boolean algebra", parents=[common])
    dual_spec.add_argument("expr")

    for name, help_text in (("factor-count", "number of distinct irreducible factors"),
                            ("factor", "factor a squarefree monic polynomial")):
        sub = verbs.add_parser(name, help=help_text, parents=[common])
        sub.add_argument("-p", "--prime", type=int, required=True)
        sub.add_argument("poly", help="polynomial in x, e.g. x^3+x+1")

    tower = verbs.add_parser("tower", help="profinite towers of finite sets", parents=[common])
    tower.add_argument("kind", choices=sorted(TOWER_KINDS))
    tower.add_argument("-d", "--depth", type=int, required=True)
    actions = tower.add_subparsers(dest="action")
    complement = actions.add_parser("complement", help="open complement of a closed subtower", parents=[common])
    complement.add_argument("--top", type=int_list, required=True, help="deepest-level points of the closed subtower")
    clopen = actions.add_parser("clopen", help="idempotent of a family of cylinders", parents=[common])
    clopen.add_argument("-p", "--prime", type=int, default=2)
    clopen.add_argument("--level", type=int, default=0)
    clopen.add_argument("--base", type=int_list, required=True, help="points at --level carrying cylinders")
    algebra = actions.add_parser("algebra", help="transition or restriction map of level algebras",
                                 parents=[common])
    algebra.add_argument("-p", "--prime", type=int, default=2)
    algebra.add_argument("--level", type=int, default=0)
    algebra.add_argument("--top", type=int_list, help="restrict to the closed subtower through these points")

    sheaf = verbs.add_parser("sheaf", help="sheaves of modules on finite sets", parents=[common])
    sheaf_verbs = sheaf.add_subparsers(dest="sheaf_command", required=True)
    demo = sheaf_verbs.add_parser("demo", help="a random module, its sheaf and M (x) M", parents=[common])
    demo.add_argument("-p", "--prime", type=int, default=2)
    demo.add_argument("--dims", type=int_list, default=[1, 2, 0], help="stalk dimensions, e.g. 1,2,0")

    check = verbs.add_parser("check", help="run property suites", parents=[common])
    check.add_argument("suites", nargs="*", help=f"suite names or all (default): {', '.join(SUITES)}")
    return parser


def dispatch(args: argparse.Namespace) -> CommandResult:
    seed = getattr(args, "seed", None)
    if args.command == "pearl":
        return pearl_command(args.expr)
    if args.command == "pi0":
        return pi0_command(args.expr)
    if args.command == "q":
        return quotient_command(args.expr)
    if args.command == "dual":
        if args.dual_command == "set":
            return dual_set_command(args.n, args.prime, args.map, args.target)
        return dual_spec_command(args.expr)
    if args.command == "factor-count":
        return factor_count_command(args.prime, args.poly)
    if args.command == "factor":
        return factor_command(args.prime, args.poly)
    if args.command == "tower":
        return tower_command(args.kind, args.depth, args.action, p=getattr(args, "prime", 2),
                             top=getattr(args, "top", None), level=getattr(args, "level", 0),
                             base=getattr(args, "base", None))
    if args.command == "sheaf":
        return sheaf_demo_command(args.prime, args.dims, seed)
    if args.command == "check":
        return check_command(args.suites, seed)
    raise InvalidInput(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return the process exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json, as_dot = getattr(args, "json", False), getattr(args, "dot", False)
    verbosity = getattr(args, "verbose", 0)
    level = logging.WARNING if not verbosity else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        with override_config(dim_cap=getattr(args, "dim_cap", None), seed=getattr(args, "seed", None)):
            result = dispatch(args)
    except WorkbenchError as e:
        logger.debug("command failed", exc_info=True)
        print(f"❌ Error [{e.code}]: {e.message}", file=sys.stderr)
        if as_json:
            print(json.dumps({"command": args.command, "error": e.to_dict(), "version": VERSION}, indent=2))
        return e.exit_code
    except ValueError as e:
        # pydantic rejects out-of-range --dim-cap / --seed
        print(f"❌ Error: {e}", file=sys.stderr)
        return 1

    if as_dot:
        if result.dot is None:
            parser.error(f"--dot is not available for {result.command}")
        sys.stdout.write(result.dot)
    elif as_json:
        print(dumps(result.envelope()))
    else:
        print(result.text)
    return 0 if result.ok else 2


if __name__ == "__main__":
    sys.exit(main())
