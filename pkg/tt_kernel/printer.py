"""Printing core terms, as surface syntax or in the annotated prefix form.

Annotated form mirrors the core grammar node for node:
`(app K L f a)`, `(lam K L b)`, `(pi K L)`, `v<i>`, `U<n>`, `0`, constant names.
"""

from typing import AbstractSet, Sequence, Set

from .errors import InternalError
from .syntax import App, Const, Irrel, Lam, Pi, Term, Univ, Var, mentions_var

PREC_TERM = 0
PREC_APP = 1
PREC_ATOM = 2


def pretty(t: Term, names: Sequence[str] = (), annotated: bool = False) -> str:
    """Print t; names lists the context slots outermost-first."""
    if annotated:
        return _annotated(t)
    return _surface(t, list(names), PREC_TERM, False, _constant_names(t))


def _constant_names(t: Term) -> Set[str]:
    found = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Const):
            found.add(s.name)
        elif isinstance(s, Pi):
            stack.extend((s.dom, s.cod))
        elif isinstance(s, Lam):
            stack.extend((s.dom, s.cod, s.body))
        elif isinstance(s, App):
            stack.extend((s.dom, s.cod, s.fn, s.arg))
    return found


def _annotated(t: Term) -> str:
    if isinstance(t, Var):
        return f"v{t.index}"
    if isinstance(t, Univ):
        return f"U{t.level}"
    if isinstance(t, Irrel):
        return "0"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Pi):
        return f"(pi {_annotated(t.dom)} {_annotated(t.cod)})"
    if isinstance(t, Lam):
        return f"(lam {_annotated(t.dom)} {_annotated(t.cod)} {_annotated(t.body)})"
    if isinstance(t, App):
        return f"(app {_annotated(t.dom)} {_annotated(t.cod)} {_annotated(t.fn)} {_annotated(t.arg)})"
    raise InternalError(f"pretty: not a core term: {t!r}")


def _fresh(names: Sequence[str], avoid: AbstractSet[str]) -> str:
    k = len(names)
    while f"x{k}" in names or f"x{k}" in avoid:
        k += 1
    return f"x{k}"


def _paren(s: str, level: int, prec: int) -> str:
    return f"({s})" if level < prec else s


def _surface(t: Term, names: list, prec: int, type_pos: bool, avoid: AbstractSet[str]) -> str:
    """avoid holds the constants of the whole term; binders never shadow them."""
    if isinstance(t, Var):
        if not 0 <= t.index < len(names):
            raise InternalError(f"pretty: Var {t.index} outside a context of {len(names)} names")
        return names[len(names) - 1 - t.index]
    if isinstance(t, Univ):
        if t.level == 0 and type_pos:
            return "Prop"
        return _paren(f"U {t.level}", PREC_APP, prec)
    if isinstance(t, Irrel):
        return "0"
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Pi):
        x = _fresh(names, avoid)
        cod = _surface(t.cod, names + [x], PREC_TERM, True, avoid)
        if mentions_var(t.cod, 0):
            s = f"({x} : {_surface(t.dom, names, PREC_TERM, True, avoid)}) -> {cod}"
        else:
            s = f"{_surface(t.dom, names, PREC_APP, True, avoid)} -> {cod}"
        return _paren(s, PREC_TERM, prec)
    if isinstance(t, Lam):
        x = _fresh(names, avoid)
        dom = _surface(t.dom, names, PREC_TERM, True, avoid)
        s = f"fun ({x} : {dom}) => {_surface(t.body, names + [x], PREC_TERM, False, avoid)}"
        return _paren(s, PREC_TERM, prec)
    if isinstance(t, App):
        s = f"{_surface(t.fn, names, PREC_APP, False, avoid)} {_surface(t.arg, names, PREC_ATOM, False, avoid)}"
        return _paren(s, PREC_APP, prec)
    raise InternalError(f"pretty: not a core term: {t!r}")
