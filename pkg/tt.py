#!/usr/bin/env python3
"""
Type-theory kernel CLI: check .tt files, normalize, decide conversion, infer types.

Exit codes: 0 ok/equal, 1 type error, 2 parse error, 3 incompatible conv types, 4 not-equal.
"""

import argparse
import logging
import sys
from pathlib import Path

from tt_kernel import (GlobalEnv, KernelError, ParseError, Span, TypingContext, check_decls, compare,
                       elaborate, normalize, parse_file, parse_term, pretty, quote_type, sort_of)

SOURCE_ENCODING = 'utf-8'
RECURSION_LIMIT = 20000

EXIT_OK = 0
EXIT_TYPE_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_INCOMPATIBLE = 3
EXIT_NOT_EQUAL = 4

logger = logging.getLogger('tt')


class Diagnostic(Exception):
    """A kernel error tagged with the file (or `<expr>`) it came from."""

    def __init__(self, label: str, error: KernelError):
        super().__init__(f"{label}: {error}")
        self.label = label
        self.error = error

    @property
    def exit_code(self) -> int:
        return EXIT_PARSE_ERROR if isinstance(self.error, ParseError) else EXIT_TYPE_ERROR

    def render(self) -> str:
        where = f"{self.label}:{self.error.span}" if self.error.span else self.label
        return f"{where}: error: {self.error.message}"


# ============================================================================
# Loading
# ============================================================================

def load_files(paths, globals: GlobalEnv = None) -> GlobalEnv:
    """Check files in order into one global environment."""
    globals = globals if globals is not None else GlobalEnv()
    for path in paths:
        try:
            text = Path(path).read_text(encoding=SOURCE_ENCODING)
        except OSError as e:
            raise Diagnostic(str(path), ParseError(f"cannot read file: {e.strerror or e}", Span(1, 1))) from None
        try:
            globals = check_decls(parse_file(text), globals)
        except KernelError as e:
            raise Diagnostic(str(path), e) from None
        logger.debug("loaded %s (%d declarations in scope)", path, len(globals))
    return globals


def elaborate_expr(label: str, text: str, globals: GlobalEnv):
    try:
        return elaborate(globals, parse_term(text))
    except KernelError as e:
        raise Diagnostic(label, e) from None


# ============================================================================
# Commands
# ============================================================================

def cmd_check(args):
    globals = load_files(args.files)
    if not args.quiet:
        print(f"ok: {len(globals)} declarations")
    return EXIT_OK


def cmd_nf(args):
    globals = load_files(args.file)
    try:
        normal, _ = normalize(globals, parse_term(args.expr[0]))
    except KernelError as e:
        raise Diagnostic('<expr>', e) from None
    print(pretty(normal, annotated=args.annotated))
    return EXIT_OK


def cmd_conv(args):
    globals = load_files(args.file)
    left = elaborate_expr('<expr1>', args.expr[0], globals)
    right = elaborate_expr('<expr2>', args.expr[1], globals)

    equal = compare(globals, left, right)
    if equal is None:
        scope = TypingContext.empty(globals).scope
        print(f"error: incompatible types {pretty(quote_type(scope, left[1]))} "
              f"and {pretty(quote_type(scope, right[1]))}", file=sys.stderr)
        return EXIT_INCOMPATIBLE

    if equal:
        print("equal")
        return EXIT_OK
    print("not-equal")
    return EXIT_NOT_EQUAL


def cmd_infer(args):
    globals = load_files(args.file)
    _, ty = elaborate_expr('<expr>', args.expr[0], globals)
    scope = TypingContext.empty(globals).scope
    print(pretty(quote_type(scope, ty), annotated=args.annotated))
    print(f"sort: {sort_of(scope, ty)}")
    return EXIT_OK


# ============================================================================
# Argument parsing
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--quiet', '-q', action='store_true')
    common.add_argument('--verbose', '-v', action='store_true')

    parser = argparse.ArgumentParser(description='Dependent type theory kernel')
    subs = parser.add_subparsers(dest='command')

    p = subs.add_parser('check', parents=[common]); p.add_argument('files', nargs='+')

    p = subs.add_parser('nf', parents=[common])
    p.add_argument('--file', '-f', action='append', default=[])
    p.add_argument('--expr', '-e', action='append', required=True)
    p.add_argument('--annotated', action='store_true')

    p = subs.add_parser('conv', parents=[common])
    p.add_argument('--file', '-f', action='append', default=[])
    p.add_argument('--expr', '-e', action='append', required=True)

    p = subs.add_parser('infer', parents=[common])
    p.add_argument('--file', '-f', action='append', default=[])
    p.add_argument('--expr', '-e', action='append', required=True)
    p.add_argument('--annotated', action='store_true')
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    commands = {'check': cmd_check, 'nf': cmd_nf, 'conv': cmd_conv, 'infer': cmd_infer}
    if args.command not in commands:
        parser.print_help()
        return EXIT_PARSE_ERROR

    wanted = 2 if args.command == 'conv' else 1
    if args.command != 'check' and len(args.expr) != wanted:
        parser.error(f"{args.command} takes exactly {wanted} -e expression(s)")

    logging.basicConfig(stream=sys.stderr, format='%(name)s: %(message)s')
    logging.getLogger('tt_kernel').setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    logger.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), RECURSION_LIMIT))

    try:
        return commands[args.command](args)
    except Diagnostic as d:
        print(d.render(), file=sys.stderr)
        return d.exit_code


if __name__ == '__main__':
    sys.exit(main())
