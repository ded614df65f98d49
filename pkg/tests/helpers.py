"""Fixture builders shared by the test modules."""

import random
from pathlib import Path

from tt_kernel.syntax import App, Const, Irrel, Lam, Pi, SyntacticSubst, Term, Univ, Var
from tt_kernel.parser import parse_file
from tt_kernel.typecheck import GlobalEnv, check_decls

TESTS_DIR = Path(__file__).parent
GOLDEN_DIR = TESTS_DIR / 'golden'
CORPUS_DIR = TESTS_DIR / 'corpus'
ILL_TYPED_DIR = TESTS_DIR / 'negative' / 'ill_typed'
MALFORMED_DIR = TESTS_DIR / 'negative' / 'malformed'


def get_globals(text: str) -> GlobalEnv:
    """Check a source snippet into a fresh global environment."""
    return check_decls(parse_file(text))


def get_corpus_text() -> str:
    return "\n".join(p.read_text(encoding='utf-8') for p in sorted(CORPUS_DIR.glob('*.tt')))


def random_term(rng: random.Random, depth: int, size: int = 6) -> Term:
    """A random core term, well scoped in a context of length depth (not necessarily typed)."""
    leaves = ['univ', 'const', 'irrel'] + (['var'] * 3 if depth else [])
    if size <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + ['pi', 'lam', 'app', 'app'])
    if kind == 'var':
        return Var(rng.randrange(depth))
    if kind == 'univ':
        return Univ(rng.randrange(3))
    if kind == 'const':
        return Const(rng.choice(['A', 'B', 'f']))
    if kind == 'irrel':
        return Irrel()
    if kind == 'pi':
        return Pi(random_term(rng, depth, size - 1), random_term(rng, depth + 1, size - 1))
    if kind == 'lam':
        return Lam(random_term(rng, depth, size - 2), random_term(rng, depth + 1, size - 2),
                   random_term(rng, depth + 1, size - 1))
    return App(random_term(rng, depth, size - 2), random_term(rng, depth + 1, size - 2),
               random_term(rng, depth, size - 1), random_term(rng, depth, size - 1))


def random_subst(rng: random.Random, target: int, source: int, size: int = 3) -> SyntacticSubst:
    """target entries, each a term over a context of length source."""
    return SyntacticSubst(tuple(random_term(rng, source, size) for _ in range(target)), source)


NAT_SOURCE = """
def Nat : U 2 := (X : U 1) -> (X -> X) -> X -> X.
def zero : Nat := fun (X : U 1) => fun (f : X -> X) => fun (x : X) => x.
def succ : Nat -> Nat :=
  fun (n : Nat) => fun (X : U 1) => fun (f : X -> X) => fun (x : X) => f (n X f x).
def add : Nat -> Nat -> Nat :=
  fun (m : Nat) => fun (n : Nat) => fun (X : U 1) => fun (f : X -> X) => fun (x : X) => m X f (n X f x).
def mul : Nat -> Nat -> Nat :=
  fun (m : Nat) => fun (n : Nat) => fun (X : U 1) => fun (f : X -> X) => m X (n X f).
def two : Nat := succ (succ zero).
"""


def numeral_text(n: int) -> str:
    """`succ (... (succ zero))`, an inferable spelling of n."""
    return "succ (" * n + "zero" + ")" * n


def church_literal(n: int) -> str:
    """The lambda spelling of n; needs an expected type."""
    return ("fun (X : U 1) => fun (f : X -> X) => fun (x : X) => "
            + "f (" * n + "x" + ")" * n)


def random_nat_expr(rng: random.Random, size: int = 3, leaves=(), limit: int = 30):
    """A random arithmetic expression over NAT_SOURCE and its value, at most limit.

    leaves adds (name, value) pairs for numerals bound in the context.
    """
    while True:
        text, value = _nat_expr(rng, size, [('zero', 0), ('two', 2), ('succ zero', 1)] + list(leaves))
        if value <= limit:
            return text, value


def _nat_expr(rng, size, leaves):
    if size <= 0 or rng.random() < 0.3:
        return rng.choice(leaves)
    op = rng.choice(['succ', 'add', 'mul'])
    if op == 'succ':
        text, value = _nat_expr(rng, size - 1, leaves)
        return f"succ ({text})", value + 1
    left, lv = _nat_expr(rng, size - 1, leaves)
    right, rv = _nat_expr(rng, size - 1, leaves)
    return f"{op} ({left}) ({right})", lv + rv if op == 'add' else lv * rv
