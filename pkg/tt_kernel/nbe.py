"""Normalization by evaluation.

Core terms evaluate into a semantic domain (`Value`); type-directed `quote` reads
values back into annotated normal forms, and `reflect_fresh` embeds fresh variables.
Conversion is decided by comparing read-back normal forms, no reduction relation
involved. Elements of a type whose sort is 0 all collapse to the single point
`VIrrel`, which quotes to the constant `Irrel`.

De Bruijn *levels* name free variables inside values, so a value built at one depth
stays valid at every deeper one; `quote` turns levels back into indices with
depth - 1 - level.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional, Tuple, Union

from .errors import InternalError
from .syntax import App, Const, Irrel, Lam, Pi, Term, Univ, Var, term_equal

if TYPE_CHECKING:
    from .typecheck import GlobalEnv, TypingContext

logger = logging.getLogger(__name__)


# =============================================================================
# Semantic domain
# =============================================================================

@dataclass(frozen=True)
class VU:
    level: int


@dataclass(frozen=True)
class VPi:
    dom: 'Value'
    cod: 'Closure'


@dataclass(frozen=True)
class VLam:
    cl: 'Closure'


@dataclass(frozen=True)
class VIrrel:
    pass


@dataclass(frozen=True)
class HVar:
    level: int


@dataclass(frozen=True)
class HConst:
    name: str


@dataclass(frozen=True)
class SpineEntry:
    """One application: the argument and the Pi type it was applied at, which may
    be larger than the head's own type by cumulativity."""
    arg: 'Value'
    dom: 'Value'
    cod: 'Closure'


@dataclass(frozen=True)
class VNe:
    head: Union[HVar, HConst]
    spine: Tuple[SpineEntry, ...] = ()


Value = Union[VU, VPi, VLam, VIrrel, VNe]
Env = Tuple[Value, ...]  # position i is the value of Var i


@dataclass(frozen=True, eq=False)
class Closure:
    env: Env
    body: Term
    globals: Any

    def instantiate(self, arg: Value) -> Value:
        return eval_term((arg,) + self.env, self.body, self.globals)


@dataclass(frozen=True)
class Scope:
    """Type value of every free variable, indexed by level, plus the globals."""
    types: Tuple[Value, ...]
    globals: Any

    @property
    def depth(self) -> int:
        return len(self.types)

    def extend(self, ty: Value) -> 'Scope':
        return Scope(self.types + (ty,), self.globals)


# =============================================================================
# Evaluation
# =============================================================================

def eval_term(env: Env, t: Term, globals: 'GlobalEnv') -> Value:
    if isinstance(t, Var):
        if not 0 <= t.index < len(env):
            raise InternalError(f"eval: Var {t.index} out of scope (env length {len(env)})")
        return env[t.index]
    if isinstance(t, Univ):
        return VU(t.level)
    if isinstance(t, Pi):
        return VPi(eval_term(env, t.dom, globals), Closure(env, t.cod, globals))
    if isinstance(t, Lam):
        return VLam(Closure(env, t.body, globals))
    if isinstance(t, App):
        return apply_val(eval_term(env, t.fn, globals), eval_term(env, t.arg, globals),
                         eval_term(env, t.dom, globals), Closure(env, t.cod, globals))
    if isinstance(t, Irrel):
        return VIrrel()
    if isinstance(t, Const):
        decl = globals.lookup(t.name)
        if decl.kind == 'definition':
            return decl.body_value
        if decl.sort == 0:
            return VIrrel()
        return VNe(HConst(t.name))
    raise InternalError(f"eval: not a core term: {t!r}")


def apply_val(fn: Value, arg: Value, dom: Value, cod: Closure) -> Value:
    if isinstance(fn, VLam):
        return fn.cl.instantiate(arg)
    if isinstance(fn, VNe):
        return VNe(fn.head, fn.spine + (SpineEntry(arg, dom, cod),))
    if isinstance(fn, VIrrel):
        # a proof of a Pi-proposition applied is again a proof
        return VIrrel()
    raise InternalError(f"apply: not a function value: {fn!r}")


# =============================================================================
# Sorts and reflection
# =============================================================================

def head_type(scope: Scope, head: Union[HVar, HConst]) -> Value:
    if isinstance(head, HVar):
        if not 0 <= head.level < scope.depth:
            raise InternalError(f"free variable level {head.level} outside scope of depth {scope.depth}")
        return scope.types[head.level]
    return scope.globals.lookup(head.name).type_value


def _peel(ty: Value) -> VPi:
    if not isinstance(ty, VPi):
        raise InternalError(f"neutral applied at a non-Pi head type: {ty!r}")
    return ty


def neutral_type(scope: Scope, ne: VNe) -> Value:
    """Type of a neutral: the head's own type, instantiated along the spine.

    The Pi recorded in a spine entry may be a cumulative supertype of the head's
    type, so it is never used to type the neutral.
    """
    ty = head_type(scope, ne.head)
    for entry in ne.spine:
        ty = _peel(ty).cod.instantiate(entry.arg)
    return ty


def sort_of(scope: Scope, ty: Value) -> int:
    """Minimal universe level of a type value."""
    if isinstance(ty, VU):
        return ty.level + 1
    if isinstance(ty, VPi):
        x = reflect_fresh(scope, ty.dom)
        j = sort_of(scope.extend(ty.dom), ty.cod.instantiate(x))
        if j == 0:
            return 0
        return max(sort_of(scope, ty.dom), j)
    if isinstance(ty, VNe):
        universe = neutral_type(scope, ty)
        if not isinstance(universe, VU):
            raise InternalError(f"neutral type classified by a non-universe: {universe!r}")
        return universe.level
    raise InternalError(f"sort_of: not a type value: {ty!r}")


def reflect_fresh(scope: Scope, ty: Value) -> Value:
    """The variable at level scope.depth, as a value of type ty."""
    if sort_of(scope, ty) == 0:
        return VIrrel()
    return VNe(HVar(scope.depth))


# =============================================================================
# Read-back
# =============================================================================

def quote(scope: Scope, ty: Value, v: Value) -> Term:
    if sort_of(scope, ty) == 0:
        return Irrel()
    if isinstance(ty, VPi):
        # always eta-expand
        x = reflect_fresh(scope, ty.dom)
        inner = scope.extend(ty.dom)
        cod = ty.cod.instantiate(x)
        return Lam(quote_type(scope, ty.dom), quote_type(inner, cod),
                   quote(inner, cod, apply_val(v, x, ty.dom, ty.cod)))
    if isinstance(ty, VU):
        return quote_type(scope, v)
    if isinstance(ty, VNe):
        if not isinstance(v, VNe):
            raise InternalError(f"quote: element of a neutral type is not neutral: {v!r}")
        return quote_neutral(scope, v)
    raise InternalError(f"quote: not a type value: {ty!r}")


def quote_type(scope: Scope, ty: Value) -> Term:
    if isinstance(ty, VU):
        return Univ(ty.level)
    if isinstance(ty, VPi):
        x = reflect_fresh(scope, ty.dom)
        return Pi(quote_type(scope, ty.dom), quote_type(scope.extend(ty.dom), ty.cod.instantiate(x)))
    if isinstance(ty, VNe):
        return quote_neutral(scope, ty)
    raise InternalError(f"quote_type: not a type value: {ty!r}")


def quote_neutral(scope: Scope, ne: VNe) -> Term:
    if isinstance(ne.head, HVar):
        if not 0 <= ne.head.level < scope.depth:
            raise InternalError(f"quote: level {ne.head.level} escapes scope of depth {scope.depth}")
        term = Var(scope.depth - 1 - ne.head.level)
    else:
        term = Const(ne.head.name)
    # annotations come from the head's type, so every route to a neutral quotes the same
    ty = head_type(scope, ne.head)
    for entry in ne.spine:
        pi = _peel(ty)
        x = reflect_fresh(scope, pi.dom)
        term = App(quote_type(scope, pi.dom),
                   quote_type(scope.extend(pi.dom), pi.cod.instantiate(x)),
                   term,
                   quote(scope, pi.dom, entry.arg))
        ty = pi.cod.instantiate(entry.arg)
    return term


# =============================================================================
# Normal forms and conversion
# =============================================================================

def id_env(ctx: 'TypingContext') -> Env:
    """Fresh variables for every slot of ctx (VIrrel at propositions), Var-indexed."""
    scope = Scope((), ctx.globals)
    values = []
    for entry in ctx.entries:
        values.append(reflect_fresh(scope, entry.type_value))
        scope = scope.extend(entry.type_value)
    return tuple(reversed(values))


def nf(ctx: 'TypingContext', t: Term, ty: Term, globals: 'GlobalEnv') -> Term:
    env = id_env(ctx)
    return quote(ctx.scope, eval_term(env, ty, globals), eval_term(env, t, globals))


def reify_type(ctx: 'TypingContext', ty: Term) -> Term:
    return quote_type(ctx.scope, eval_term(id_env(ctx), ty, ctx.globals))


def conv(scope: Scope, ty: Value, a: Value, b: Value) -> bool:
    left, right = quote(scope, ty, a), quote(scope, ty, b)
    if term_equal(left, right):
        return True
    logger.debug("not convertible at depth %d: %r / %r", scope.depth, left, right)
    return False


def conv_type(scope: Scope, a: Value, b: Value) -> bool:
    return term_equal(quote_type(scope, a), quote_type(scope, b))


def subtype(scope: Scope, a: Value, b: Value) -> bool:
    """Cumulative subtyping: universes by level, Pi invariant in the domain."""
    if isinstance(a, VU) and isinstance(b, VU):
        return a.level <= b.level
    if isinstance(a, VPi) and isinstance(b, VPi):
        if not conv_type(scope, a.dom, b.dom):
            return False
        x = reflect_fresh(scope, a.dom)
        return subtype(scope.extend(a.dom), a.cod.instantiate(x), b.cod.instantiate(x))
    return conv_type(scope, a, b)


def pi_components(scope: Scope, ty: Value) -> Optional[Tuple[Term, Term]]:
    """Normal domain and codomain codes of a Pi type, None otherwise."""
    if not isinstance(ty, VPi):
        return None
    code = quote_type(scope, ty)
    return code.dom, code.cod
