"""Surface syntax: raw named terms and declarations, parsed with lark.

    def NAME : TERM := TERM .
    axiom NAME : TERM .

    TERM ::= fun (x : TERM) => TERM | (x : TERM) -> TERM | TERM -> TERM
           | TERM TERM | U <nat> | Prop | NAME | ( TERM )

Comments run from `--` to the end of the line.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken
from lark.lexer import PatternStr

from .errors import ParseError, Span

GRAMMAR_PATH = Path(__file__).parent / 'grammar.lark'

_TERMINAL_LABELS = {'NAME': 'identifier', 'INT': 'number', '$END': 'end of input'}


# =============================================================================
# Raw syntax
# =============================================================================

@dataclass(frozen=True)
class RVar:
    name: str
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class RUniv:
    level: int
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class RProp:
    """`Prop`, the same universe as `U 0`."""
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def level(self) -> int:
        return 0


@dataclass(frozen=True)
class RPi:
    name: str
    dom: 'RawTerm'
    cod: 'RawTerm'
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class RArrow:
    dom: 'RawTerm'
    cod: 'RawTerm'
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class RLam:
    name: str
    annot: 'RawTerm'
    body: 'RawTerm'
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class RApp:
    fn: 'RawTerm'
    arg: 'RawTerm'
    span: Optional[Span] = field(default=None, compare=False)


RawTerm = Union[RVar, RUniv, RProp, RPi, RArrow, RLam, RApp]


@dataclass(frozen=True)
class RawDecl:
    kind: str  # 'definition' or 'axiom'
    name: str
    type: RawTerm
    body: Optional[RawTerm] = None
    span: Optional[Span] = field(default=None, compare=False)


# =============================================================================
# Parse tree -> raw syntax
# =============================================================================

def _token_span(tok: Token) -> Span:
    return Span(tok.line, tok.column)


def _meta_span(meta, fallback: Optional[Span] = None) -> Optional[Span]:
    if getattr(meta, 'empty', True):
        return fallback
    return Span(meta.line, meta.column)


@v_args(meta=True)
class _ToRaw(Transformer):

    def file(self, meta, children):
        return list(children)

    def term_only(self, meta, children):
        return children[0]

    def definition(self, meta, children):
        name, ty, body = children
        return RawDecl('definition', str(name), ty, body, _meta_span(meta, _token_span(name)))

    def axiom(self, meta, children):
        name, ty = children
        return RawDecl('axiom', str(name), ty, None, _meta_span(meta, _token_span(name)))

    def binder(self, meta, children):
        name, annot = children
        return str(name), annot, _meta_span(meta, _token_span(name))

    def lam(self, meta, children):
        (name, annot, bspan), body = children
        return RLam(name, annot, body, _meta_span(meta, bspan))

    def pi(self, meta, children):
        (name, dom, bspan), cod = children
        return RPi(name, dom, cod, _meta_span(meta, bspan))

    def arrow(self, meta, children):
        dom, cod = children
        return RArrow(dom, cod, _meta_span(meta, dom.span))

    def application(self, meta, children):
        fn, arg = children
        return RApp(fn, arg, _meta_span(meta, fn.span))

    def var(self, meta, children):
        return RVar(str(children[0]), _token_span(children[0]))

    def univ(self, meta, children):
        keyword, level = children
        return RUniv(int(level), _token_span(keyword))

    def prop(self, meta, children):
        return RProp(_token_span(children[0]))


_PARSER = Lark(GRAMMAR_PATH.read_text(encoding='utf-8'), start=['file', 'term_only'],
               parser='lalr', lexer='basic', propagate_positions=True)


# =============================================================================
# Error reporting
# =============================================================================

def _end_span(text: str) -> Span:
    """Position just after the last non-blank character."""
    body = text.rstrip()
    if not body:
        return Span(1, 1)
    line = body.count('\n') + 1
    column = len(body) - (body.rfind('\n') + 1) + 1
    return Span(line, column)


def _terminal_label(name: str) -> str:
    if name in _TERMINAL_LABELS:
        return _TERMINAL_LABELS[name]
    try:
        pattern = _PARSER.get_terminal(name).pattern
    except KeyError:
        return name
    if isinstance(pattern, PatternStr):
        return repr(pattern.value)
    return name.lower()


def _to_parse_error(err: UnexpectedInput, text: str) -> ParseError:
    if isinstance(err, UnexpectedCharacters):
        return ParseError(f"unexpected character {err.char!r}", Span(err.line, err.column))

    expected = sorted(_terminal_label(n) for n in (getattr(err, 'expected', None) or ()))
    hint = f"; expected one of: {', '.join(expected)}" if expected else ""

    token = getattr(err, 'token', None)
    line = getattr(err, 'line', None)
    if (isinstance(err, UnexpectedToken) and token is not None and token.type != '$END'
            and isinstance(line, int) and line >= 1):
        return ParseError(f"unexpected {str(token)!r}{hint}", Span(line, err.column))
    return ParseError(f"unexpected end of input{hint}", _end_span(text))


# =============================================================================
# Entry points
# =============================================================================

def parse_file(text: str) -> List[RawDecl]:
    """Parse a whole .tt file into declarations; duplicate names are rejected."""
    try:
        tree = _PARSER.parse(text, start='file')
    except UnexpectedInput as err:
        raise _to_parse_error(err, text) from None
    decls = _ToRaw().transform(tree)

    seen = {}
    for decl in decls:
        if decl.name in seen:
            raise ParseError(f"duplicate declaration '{decl.name}' (first declared at {seen[decl.name]})",
                             decl.span)
        seen[decl.name] = decl.span
    return decls


def parse_term(text: str) -> RawTerm:
    try:
        tree = _PARSER.parse(text, start='term_only')
    except UnexpectedInput as err:
        raise _to_parse_error(err, text) from None
    return _ToRaw().transform(tree)
