"""Core syntax: fully annotated terms over de Bruijn indices, and syntactic substitutions.

Grammar of core terms:

    K, L, k ::= Var i | Univ n | App K L k k | Lam K L k | Pi K L | Irrel | Const name

In Pi/Lam/App the codomain annotation L, and the body of Lam, sit under one extra
binder: their Var 0 is the bound variable. Substitutions are meta-level operations,
applied eagerly; terms never contain them.
"""

from dataclasses import dataclass
from typing import List, Tuple, Union

from .errors import InternalError


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Univ:
    level: int


@dataclass(frozen=True)
class Pi:
    dom: 'Term'
    cod: 'Term'


@dataclass(frozen=True)
class Lam:
    dom: 'Term'
    cod: 'Term'
    body: 'Term'


@dataclass(frozen=True)
class App:
    dom: 'Term'
    cod: 'Term'
    fn: 'Term'
    arg: 'Term'


@dataclass(frozen=True)
class Irrel:
    """The constant 0: the canonical proof of any proposition."""


@dataclass(frozen=True)
class Const:
    name: str


# Type aliases
Term = Union[Var, Univ, Pi, Lam, App, Irrel, Const]
Level = int


def term_equal(a: Term, b: Term) -> bool:
    """Node-for-node equality, annotations and levels included."""
    stack: List[Tuple[Term, Term]] = [(a, b)]
    while stack:
        x, y = stack.pop()
        if type(x) is not type(y):
            return False
        if isinstance(x, Var):
            if x.index != y.index:
                return False
        elif isinstance(x, Univ):
            if x.level != y.level:
                return False
        elif isinstance(x, Const):
            if x.name != y.name:
                return False
        elif isinstance(x, Pi):
            stack.append((x.dom, y.dom))
            stack.append((x.cod, y.cod))
        elif isinstance(x, Lam):
            stack.append((x.dom, y.dom))
            stack.append((x.cod, y.cod))
            stack.append((x.body, y.body))
        elif isinstance(x, App):
            stack.append((x.dom, y.dom))
            stack.append((x.cod, y.cod))
            stack.append((x.fn, y.fn))
            stack.append((x.arg, y.arg))
        elif not isinstance(x, Irrel):
            return False
    return True


def rename(t: Term, cutoff: int, amount: int) -> Term:
    """Shift every free index >= cutoff by amount."""
    if isinstance(t, Var):
        return Var(t.index + amount) if t.index >= cutoff else t
    if isinstance(t, (Univ, Irrel, Const)):
        return t
    if isinstance(t, Pi):
        return Pi(rename(t.dom, cutoff, amount), rename(t.cod, cutoff + 1, amount))
    if isinstance(t, Lam):
        return Lam(rename(t.dom, cutoff, amount),
                   rename(t.cod, cutoff + 1, amount),
                   rename(t.body, cutoff + 1, amount))
    if isinstance(t, App):
        return App(rename(t.dom, cutoff, amount),
                   rename(t.cod, cutoff + 1, amount),
                   rename(t.fn, cutoff, amount),
                   rename(t.arg, cutoff, amount))
    raise InternalError(f"rename: not a core term: {t!r}")


def is_well_scoped(t: Term, depth: int) -> bool:
    """True iff every free index of t is below depth."""
    if isinstance(t, Var):
        return 0 <= t.index < depth
    if isinstance(t, (Univ, Irrel, Const)):
        return True
    if isinstance(t, Pi):
        return is_well_scoped(t.dom, depth) and is_well_scoped(t.cod, depth + 1)
    if isinstance(t, Lam):
        return (is_well_scoped(t.dom, depth) and is_well_scoped(t.cod, depth + 1)
                and is_well_scoped(t.body, depth + 1))
    if isinstance(t, App):
        return (is_well_scoped(t.dom, depth) and is_well_scoped(t.cod, depth + 1)
                and is_well_scoped(t.fn, depth) and is_well_scoped(t.arg, depth))
    return False


def mentions_var(t: Term, index: int) -> bool:
    """True iff Var index (relative to t's root) occurs free in t."""
    if isinstance(t, Var):
        return t.index == index
    if isinstance(t, (Univ, Irrel, Const)):
        return False
    if isinstance(t, Pi):
        return mentions_var(t.dom, index) or mentions_var(t.cod, index + 1)
    if isinstance(t, Lam):
        return (mentions_var(t.dom, index) or mentions_var(t.cod, index + 1)
                or mentions_var(t.body, index + 1))
    if isinstance(t, App):
        return (mentions_var(t.dom, index) or mentions_var(t.cod, index + 1)
                or mentions_var(t.fn, index) or mentions_var(t.arg, index))
    return False


# =============================================================================
# Syntactic substitutions
# =============================================================================

@dataclass(frozen=True)
class SyntacticSubst:
    """Entry i replaces Var i; every entry lives in a context of length source_len."""
    entries: Tuple[Term, ...]
    source_len: int

    def __len__(self):
        return len(self.entries)


def id_subst(n: int) -> SyntacticSubst:
    return SyntacticSubst(tuple(Var(i) for i in range(n)), n)


def weaken_subst(n: int) -> SyntacticSubst:
    """p_S from a context of length n+1 to its prefix of length n."""
    return SyntacticSubst(tuple(Var(i + 1) for i in range(n)), n + 1)


def extend_subst(s: SyntacticSubst, t: Term) -> SyntacticSubst:
    """(s, t): t replaces Var 0, s handles the rest."""
    return SyntacticSubst((t,) + s.entries, s.source_len)


def lift_subst(s: SyntacticSubst) -> SyntacticSubst:
    """s pushed under one binder: (s p, q)."""
    shifted = tuple(rename(e, 0, 1) for e in s.entries)
    return SyntacticSubst((Var(0),) + shifted, s.source_len + 1)


def single_subst(t: Term, n: int) -> SyntacticSubst:
    """[t] over a context of length n."""
    return extend_subst(id_subst(n), t)


def subst_apply(t: Term, s: SyntacticSubst) -> Term:
    if isinstance(t, Var):
        if t.index < len(s.entries):
            return s.entries[t.index]
        # past the substituted prefix: keep the variable, re-based onto the target context
        return Var(t.index - len(s.entries) + s.source_len)
    if isinstance(t, (Univ, Irrel, Const)):
        return t
    if isinstance(t, Pi):
        up = lift_subst(s)
        return Pi(subst_apply(t.dom, s), subst_apply(t.cod, up))
    if isinstance(t, Lam):
        up = lift_subst(s)
        return Lam(subst_apply(t.dom, s), subst_apply(t.cod, up), subst_apply(t.body, up))
    if isinstance(t, App):
        return App(subst_apply(t.dom, s), subst_apply(t.cod, lift_subst(s)),
                   subst_apply(t.fn, s), subst_apply(t.arg, s))
    raise InternalError(f"subst_apply: not a core term: {t!r}")


def subst_compose(a: SyntacticSubst, b: SyntacticSubst) -> SyntacticSubst:
    """a then b: applying the result equals applying a, then b."""
    return SyntacticSubst(tuple(subst_apply(e, b) for e in a.entries), b.source_len)


def subst_equal(a: SyntacticSubst, b: SyntacticSubst) -> bool:
    return (a.source_len == b.source_len and len(a.entries) == len(b.entries)
            and all(term_equal(x, y) for x, y in zip(a.entries, b.entries)))
