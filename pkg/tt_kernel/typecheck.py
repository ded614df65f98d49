"""Bidirectional elaboration of raw terms into annotated core terms.

Universe rules: `U n : U (n+1)`; a Pi lives in the larger of its domain's and
codomain's universes, except that a Pi whose codomain lives in `U 0` lives in `U 0`
whatever its domain (impredicativity). `U i` is a subtype of `U j` for i <= j
(cumulativity). Conversion and subtyping are delegated to `nbe`.
"""

import logging
from dataclasses import dataclass, field
from typing import ClassVar, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .errors import InternalError, TypeCheckError
from .nbe import (Closure, Env, Scope, Value, VPi, VU, conv, conv_type, eval_term, quote,
                  quote_type, reflect_fresh, sort_of, subtype)
from .parser import RApp, RArrow, RawDecl, RawTerm, RLam, RPi, RProp, RUniv, RVar
from .printer import pretty
from .syntax import App, Const, Irrel, Lam, Pi, Term, Univ, Var

logger = logging.getLogger(__name__)


# =============================================================================
# Global environment
# =============================================================================

@dataclass(frozen=True, eq=False)
class Axiom:
    name: str
    type_core: Term
    type_value: Value
    sort: int
    kind: ClassVar[str] = 'axiom'


@dataclass(frozen=True, eq=False)
class Definition:
    name: str
    type_core: Term
    type_value: Value
    body_core: Term
    body_value: Value
    sort: int
    kind: ClassVar[str] = 'definition'


Decl = Union[Axiom, Definition]


class GlobalEnv:
    """Declarations in checking order. `add` returns a new environment."""

    def __init__(self, decls: Optional[Dict[str, Decl]] = None):
        self._decls: Dict[str, Decl] = dict(decls or {})

    def __contains__(self, name: str) -> bool:
        return name in self._decls

    def __len__(self) -> int:
        return len(self._decls)

    def __iter__(self) -> Iterator[str]:
        return iter(self._decls)

    def get(self, name: str) -> Optional[Decl]:
        return self._decls.get(name)

    def lookup(self, name: str) -> Decl:
        decl = self._decls.get(name)
        if decl is None:
            raise InternalError(f"unbound constant '{name}' in a checked environment")
        return decl

    def decls(self) -> List[Decl]:
        return list(self._decls.values())

    def add(self, decl: Decl) -> 'GlobalEnv':
        if decl.name in self._decls:
            raise InternalError(f"constant '{decl.name}' declared twice")
        decls = dict(self._decls)
        decls[decl.name] = decl
        return GlobalEnv(decls)


# =============================================================================
# Typing context
# =============================================================================

@dataclass(frozen=True, eq=False)
class CtxEntry:
    name: Optional[str]  # None for the binder of a non-dependent arrow
    type_core: Term
    type_value: Value
    sort: int


@dataclass(frozen=True, eq=False)
class TypingContext:
    """Telescope of local declarations with its id_env and nbe scope kept alongside."""
    globals: GlobalEnv
    entries: Tuple[CtxEntry, ...] = ()
    env: Env = ()
    scope: Scope = field(default=None)

    def __post_init__(self):
        if self.scope is None:
            types = tuple(e.type_value for e in self.entries)
            object.__setattr__(self, 'scope', Scope(types, self.globals))

    @classmethod
    def empty(cls, globals: GlobalEnv) -> 'TypingContext':
        return cls(globals)

    @property
    def depth(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> List[str]:
        """Printable name per slot, outermost first; arrow binders get a fresh `x<k>`."""
        taken = {e.name for e in self.entries if e.name is not None}
        names = []
        for k, entry in enumerate(self.entries):
            if entry.name is None:
                while f"x{k}" in taken:
                    k += 1
                taken.add(f"x{k}")
                names.append(f"x{k}")
            else:
                names.append(entry.name)
        return names

    def extend(self, name: Optional[str], type_core: Term, type_value: Value) -> 'TypingContext':
        entry = CtxEntry(name, type_core, type_value, sort_of(self.scope, type_value))
        x = reflect_fresh(self.scope, type_value)
        return TypingContext(self.globals, self.entries + (entry,), (x,) + self.env,
                             self.scope.extend(type_value))

    def lookup(self, name: str) -> Optional[Tuple[int, CtxEntry]]:
        """Innermost binding of name as (de Bruijn index, entry)."""
        for index, entry in enumerate(reversed(self.entries)):
            if entry.name == name:
                return index, entry
        return None

    def entry_at(self, index: int) -> CtxEntry:
        if not 0 <= index < self.depth:
            raise TypeCheckError(f"variable v{index} is out of scope (context has {self.depth} entries)")
        return self.entries[self.depth - 1 - index]

    def show(self, ty: Value) -> str:
        return pretty(quote_type(self.scope, ty), self.names)


# =============================================================================
# Elaboration
# =============================================================================

def _evaluate(ctx: TypingContext, t: Term) -> Value:
    return eval_term(ctx.env, t, ctx.globals)


def _fits_universe(ctx: TypingContext, core: Term, inferred: Value, expected: Value) -> bool:
    """A type fits U n when its minimal sort does, whatever level it was declared at."""
    if not (isinstance(inferred, VU) and isinstance(expected, VU)):
        return False
    return sort_of(ctx.scope, _evaluate(ctx, core)) <= expected.level


def infer_universe(ctx: TypingContext, raw: RawTerm) -> Tuple[Term, int]:
    """Elaborate raw as a type; returns the core term and its minimal universe level.

    The level agrees with `sort_of`, so a type defined to be a proposition counts
    as one here too.
    """
    core, ty = infer(ctx, raw)
    if not isinstance(ty, VU):
        raise TypeCheckError(f"expected a type, but this term has type {ctx.show(ty)}", raw.span)
    return core, sort_of(ctx.scope, _evaluate(ctx, core))


def infer(ctx: TypingContext, raw: RawTerm) -> Tuple[Term, Value]:
    if isinstance(raw, RVar):
        found = ctx.lookup(raw.name)
        if found is not None:
            index, entry = found
            return Var(index), entry.type_value
        decl = ctx.globals.get(raw.name)
        if decl is not None:
            return Const(raw.name), decl.type_value
        raise TypeCheckError(f"unbound name '{raw.name}'", raw.span)

    if isinstance(raw, (RUniv, RProp)):
        return Univ(raw.level), VU(raw.level + 1)

    if isinstance(raw, (RPi, RArrow)):
        dom, i = infer_universe(ctx, raw.dom)
        name = raw.name if isinstance(raw, RPi) else None
        inner = ctx.extend(name, dom, _evaluate(ctx, dom))
        cod, j = infer_universe(inner, raw.cod)
        return Pi(dom, cod), VU(0 if j == 0 else max(i, j))

    if isinstance(raw, RApp):
        if isinstance(raw.fn, RLam):
            fn, fn_ty = _infer_lambda_head(ctx, raw.fn)
        else:
            fn, fn_ty = infer(ctx, raw.fn)
        if not isinstance(fn_ty, VPi):
            raise TypeCheckError(f"cannot apply a term of type {ctx.show(fn_ty)}: it is not a function",
                                 raw.fn.span)
        arg = check(ctx, raw.arg, fn_ty.dom)
        x = reflect_fresh(ctx.scope, fn_ty.dom)
        core = App(quote_type(ctx.scope, fn_ty.dom),
                   quote_type(ctx.scope.extend(fn_ty.dom), fn_ty.cod.instantiate(x)),
                   fn, arg)
        return core, fn_ty.cod.instantiate(_evaluate(ctx, arg))

    if isinstance(raw, RLam):
        raise TypeCheckError("cannot infer a lambda; use it where its type is known, "
                             "for example as a definition body or an argument", raw.span)

    raise InternalError(f"infer: not a raw term: {raw!r}")


def _infer_lambda_head(ctx: TypingContext, lam: RLam) -> Tuple[Term, Value]:
    """Type of an annotated lambda in head position, e.g. `(fun (x : A) => b) a`."""
    dom, _ = infer_universe(ctx, lam.annot)
    dom_value = _evaluate(ctx, dom)
    inner = ctx.extend(lam.name, dom, dom_value)
    if isinstance(lam.body, RLam):
        body, body_ty = _infer_lambda_head(inner, lam.body)
    else:
        body, body_ty = infer(inner, lam.body)
    cod = quote_type(inner.scope, body_ty)
    core = Lam(quote_type(ctx.scope, dom_value), cod, body)
    return core, VPi(dom_value, Closure(ctx.env, cod, ctx.globals))


def check(ctx: TypingContext, raw: RawTerm, expected: Value) -> Term:
    if isinstance(raw, RLam):
        if not isinstance(expected, VPi):
            raise TypeCheckError(f"a lambda cannot have type {ctx.show(expected)}", raw.span)
        annot, _ = infer_universe(ctx, raw.annot)
        if not conv_type(ctx.scope, _evaluate(ctx, annot), expected.dom):
            raise TypeCheckError(f"binder annotation {pretty(annot, ctx.names)} does not match "
                                 f"the expected domain {ctx.show(expected.dom)}", raw.annot.span)
        dom = quote_type(ctx.scope, expected.dom)
        inner = ctx.extend(raw.name, dom, expected.dom)
        cod = expected.cod.instantiate(inner.env[0])
        body = check(inner, raw.body, cod)
        return Lam(dom, quote_type(inner.scope, cod), body)

    core, ty = infer(ctx, raw)
    if not subtype(ctx.scope, ty, expected) and not _fits_universe(ctx, core, ty, expected):
        raise TypeCheckError(f"type mismatch: expected {ctx.show(expected)}, got {ctx.show(ty)}", raw.span)
    return core


def check_decl(globals: GlobalEnv, decl: RawDecl) -> GlobalEnv:
    """Check one declaration against the earlier ones and add it."""
    if decl.name in globals:
        raise TypeCheckError(f"'{decl.name}' is already declared", decl.span, decl=decl.name)
    ctx = TypingContext.empty(globals)
    try:
        ty, _ = infer_universe(ctx, decl.type)
        ty_value = _evaluate(ctx, ty)
        sort = sort_of(ctx.scope, ty_value)
        if decl.kind == 'axiom':
            new = Axiom(decl.name, ty, ty_value, sort)
        else:
            body = check(ctx, decl.body, ty_value)
            new = Definition(decl.name, ty, ty_value, body, _evaluate(ctx, body), sort)
    except TypeCheckError as err:
        raise TypeCheckError(f"in declaration '{decl.name}': {err.message}", err.span,
                             decl=decl.name) from None
    logger.debug("checked %s %s (sort %d)", decl.kind, decl.name, sort)
    return globals.add(new)


def check_decls(decls: Iterable[RawDecl], globals: Optional[GlobalEnv] = None) -> GlobalEnv:
    globals = globals if globals is not None else GlobalEnv()
    for decl in decls:
        globals = check_decl(globals, decl)
    return globals


def elaborate(globals: GlobalEnv, raw: RawTerm) -> Tuple[Term, Value]:
    """Infer raw in the empty local context."""
    return infer(TypingContext.empty(globals), raw)


def compare(globals: GlobalEnv, left: Tuple[Term, Value], right: Tuple[Term, Value]) -> Optional[bool]:
    """Judgmental equality of two elaborated closed terms, at the smaller of their types.

    None when neither type is a subtype of the other.
    """
    (core1, ty1), (core2, ty2) = left, right
    scope = TypingContext.empty(globals).scope
    if subtype(scope, ty1, ty2):
        ty = ty1
    elif subtype(scope, ty2, ty1):
        ty = ty2
    else:
        return None
    return conv(scope, ty, eval_term((), core1, globals), eval_term((), core2, globals))


def normalize(globals: GlobalEnv, raw: RawTerm) -> Tuple[Term, Value]:
    """Elaborate raw and return its normal form with its type."""
    ctx = TypingContext.empty(globals)
    core, ty = infer(ctx, raw)
    logger.debug("normalizing %s", pretty(core, annotated=True))
    return quote(ctx.scope, ty, _evaluate(ctx, core)), ty


# =============================================================================
# Re-checking annotated core terms
# =============================================================================

def _core_universe(ctx: TypingContext, t: Term) -> int:
    ty = infer_core(ctx, t)
    if not isinstance(ty, VU):
        raise TypeCheckError(f"core term {pretty(t, annotated=True)} is not a type")
    return sort_of(ctx.scope, _evaluate(ctx, t))


def infer_core(ctx: TypingContext, t: Term) -> Value:
    if isinstance(t, Var):
        return ctx.entry_at(t.index).type_value
    if isinstance(t, Univ):
        return VU(t.level + 1)
    if isinstance(t, Const):
        decl = ctx.globals.get(t.name)
        if decl is None:
            raise TypeCheckError(f"unbound constant '{t.name}'")
        return decl.type_value
    if isinstance(t, Pi):
        i = _core_universe(ctx, t.dom)
        j = _core_universe(ctx.extend(None, t.dom, _evaluate(ctx, t.dom)), t.cod)
        return VU(0 if j == 0 else max(i, j))
    if isinstance(t, (Lam, App)):
        _core_universe(ctx, t.dom)
        dom = _evaluate(ctx, t.dom)
        inner = ctx.extend(None, t.dom, dom)
        _core_universe(inner, t.cod)
        pi = VPi(dom, Closure(ctx.env, t.cod, ctx.globals))
        if isinstance(t, Lam):
            check_core(inner, t.body, _evaluate(inner, t.cod))
            return pi
        check_core(ctx, t.fn, pi)
        check_core(ctx, t.arg, dom)
        return pi.cod.instantiate(_evaluate(ctx, t.arg))
    if isinstance(t, Irrel):
        raise TypeCheckError("the proof constant 0 has no inferable type")
    raise InternalError(f"infer_core: not a core term: {t!r}")


def check_core(ctx: TypingContext, t: Term, ty: Value) -> None:
    if isinstance(t, Irrel):
        if sort_of(ctx.scope, ty) != 0:
            raise TypeCheckError(f"0 is only a proof of a proposition, not of {ctx.show(ty)}")
        return
    inferred = infer_core(ctx, t)
    if not subtype(ctx.scope, inferred, ty) and not _fits_universe(ctx, t, inferred, ty):
        raise TypeCheckError(f"core type mismatch: expected {ctx.show(ty)}, got {ctx.show(inferred)}")
