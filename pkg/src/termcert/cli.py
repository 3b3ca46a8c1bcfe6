"""``verify`` command line.

Exit codes: 0 certified / success, 1 rejected, 2 unsupported, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from enum import IntEnum
from pathlib import Path

from . import cpf, xsd
from .checker import Ko, Ok, Unsupported, check_certificate


class Exit(IntEnum):
    CERTIFIED = 0
    REJECTED = 1
    UNSUPPORTED = 2
    INPUT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "unsupported"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(Exit.INPUT_ERROR, f"{self.prog}: error: {message}\n")


def cmd_check(args: argparse.Namespace) -> int:
    if args.trs is not None:
        print("INPUT ERROR: --trs is not supported; the certificate must embed its system")
        return Exit.INPUT_ERROR
    try:
        data = Path(args.file).read_bytes()
    except OSError as e:
        print(f"INPUT ERROR: cannot read {args.file}: {e.strerror}")
        return Exit.INPUT_ERROR
    try:
        cert = cpf.parse_cpf(data)
    except cpf.Unsupported as e:
        print(f"UNSUPPORTED: {cpf.render_xpath(e.path)}: {e.element}")
        return Exit.UNSUPPORTED
    except cpf.ParseError as e:
        print(f"INPUT ERROR: {e}")
        return Exit.INPUT_ERROR

    trace: list[str] | None = [] if args.verbose else None
    result = check_certificate(cert, jobs=args.jobs, trace=trace)
    if trace is not None:
        for line in trace:
            print(line)
    print(result)
    if isinstance(result, Ko) and result.detail:
        print(f"  {result.detail}", file=sys.stderr)
    if isinstance(result, Ok):
        return Exit.CERTIFIED
    if isinstance(result, Unsupported):
        return Exit.UNSUPPORTED
    return Exit.REJECTED


def cmd_xsd2types(args: argparse.Namespace) -> int:
    try:
        data = Path(args.file).read_bytes()
    except OSError as e:
        print(f"{args.file}: {e.strerror}", file=sys.stderr)
        return Exit.INPUT_ERROR
    try:
        ir = xsd.lower(xsd.parse_xsd(data))
    except cpf.Unsupported as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return Exit.UNSUPPORTED
    except cpf.ParseError as e:
        print(f"malformed: {e}", file=sys.stderr)
        return Exit.INPUT_ERROR
    text = xsd.emit_ir(ir)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return Exit.CERTIFIED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="verify", description="Termination certificate verifier.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="verify a CPF certificate")
    check.add_argument("file", metavar="FILE.cpf")
    check.add_argument("--verbose", action="store_true", help="print every proof node and side condition")
    check.add_argument("--jobs", type=int, default=1, metavar="N",
                       help="check sibling SCC subproofs with N threads")
    check.add_argument("--trs", help=argparse.SUPPRESS)
    check.set_defaults(func=cmd_check)

    types = sub.add_parser("xsd2types", help="order the types of an XSD subset")
    types.add_argument("file", metavar="FILE.xsd")
    types.add_argument("-o", dest="output", metavar="OUT", help="write the IR here instead of stdout")
    types.set_defaults(func=cmd_xsd2types)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("--jobs must be at least 1", file=sys.stderr)
        return Exit.INPUT_ERROR
    return int(args.func(args))


if __name__ == "__main__":
    sys.exit(main())
