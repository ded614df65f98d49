#!/usr/bin/env python3
"""Tests for tt_kernel/typecheck.py: elaboration, declarations and the core re-check.

Run with: python -m pytest tests/test_typecheck.py -v
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from tt_kernel.errors import InternalError, TypeCheckError
from tt_kernel.nbe import VIrrel, VU, eval_term, quote_type, sort_of
from tt_kernel.parser import parse_file, parse_term
from tt_kernel.syntax import App, Const, Irrel, Lam, Pi, Univ, Var
from tt_kernel.typecheck import (Axiom, Definition, GlobalEnv, TypingContext, check, check_core,
                                 check_decl, check_decls, compare, elaborate, infer, infer_core,
                                 infer_universe, normalize)
from tests.helpers import get_corpus_text, get_globals


def get_matrix_globals():
    return get_globals("""
        axiom P : Prop.
        axiom Q : Prop.
        axiom A : U 1.
        axiom B : U 1.
    """)


# =============================================================================
# Tests: global environment and contexts
# =============================================================================

class TestEnvironments:
    """Tests for GlobalEnv and TypingContext."""

    def test_declarations_in_order(self):
        g = get_globals("axiom A : U 1. axiom a : A. def b : A := a.")
        assert list(g) == ['A', 'a', 'b']
        assert isinstance(g.lookup('a'), Axiom)
        assert isinstance(g.lookup('b'), Definition)
        assert g.lookup('b').kind == 'definition'

    def test_add_returns_new_env(self):
        """Environments are persistent."""
        g = GlobalEnv()
        g2 = check_decl(g, parse_file("axiom A : U 1.")[0])
        assert 'A' in g2
        assert 'A' not in g

    def test_lookup_missing_is_internal(self):
        with pytest.raises(InternalError):
            GlobalEnv().lookup('nope')

    def test_declared_sorts(self):
        """Each declaration records the sort of its type."""
        g = get_globals("axiom P : Prop. axiom p : P. axiom A : U 1. axiom T : U 3.")
        assert [g.lookup(n).sort for n in ['P', 'p', 'A', 'T']] == [1, 0, 2, 4]

    def test_context_lookup_innermost(self):
        """Shadowed names resolve to the innermost binder."""
        ctx = TypingContext.empty(GlobalEnv())
        ctx = ctx.extend('x', Univ(1), VU(1)).extend('x', Univ(2), VU(2))
        index, entry = ctx.lookup('x')
        assert index == 0
        assert entry.type_core == Univ(2)

    def test_context_anonymous_binder(self):
        """Arrow binders have no name and never match."""
        ctx = TypingContext.empty(GlobalEnv()).extend('x', Univ(1), VU(1)).extend(None, Univ(0), VU(0))
        assert ctx.lookup('x')[0] == 1
        assert ctx.names == ['x', 'x1']

    def test_anonymous_names_are_distinct(self):
        """Printed names for arrow binders never collide with named slots."""
        ctx = TypingContext.empty(GlobalEnv()).extend('x1', Univ(1), VU(1)).extend(None, Univ(0), VU(0))
        ctx = ctx.extend(None, Univ(0), VU(0))
        assert ctx.names == ['x1', 'x2', 'x3']

    def test_show_in_anonymous_scope_parses(self):
        """A type shown under an arrow binder parses back to the same core."""
        ctx = TypingContext.empty(GlobalEnv()).extend(None, Univ(1), VU(1))
        ty = eval_term(ctx.env, Pi(Var(0), Var(1)), GlobalEnv())
        shown = ctx.show(ty)
        assert shown == "x0 -> x0"
        named = TypingContext.empty(GlobalEnv()).extend('x0', Univ(1), VU(1))
        assert infer(named, parse_term(shown))[0] == Pi(Var(0), Var(1))

    def test_context_sorts(self):
        g = get_globals("axiom P : Prop.")
        ctx = TypingContext.empty(g).extend('h', Const('P'), eval_term((), Const('P'), g))
        assert ctx.entries[0].sort == 0
        assert ctx.env == (VIrrel(),)


# =============================================================================
# Tests: inference and checking
# =============================================================================

class TestInfer:
    """Tests for infer and check on raw terms."""

    def test_universe(self):
        core, ty = elaborate(GlobalEnv(), parse_term("U 2"))
        assert core == Univ(2)
        assert ty == VU(3)

    def test_prop_is_u0(self):
        core, ty = elaborate(GlobalEnv(), parse_term("Prop"))
        assert core == Univ(0)
        assert ty == VU(1)

    def test_local_variable_index(self):
        ctx = TypingContext.empty(GlobalEnv()).extend('X', Univ(1), VU(1)).extend('Y', Univ(1), VU(1))
        core, ty = infer(ctx, parse_term("X"))
        assert core == Var(1)
        assert ty == VU(1)

    def test_application_annotations(self):
        """Elaborated applications carry the function's normal domain and codomain."""
        g = get_globals("axiom A : U 1. axiom B : A -> U 1. axiom a : A.")
        core, ty = elaborate(g, parse_term("B a"))
        assert core == App(Const('A'), Univ(1), Const('B'), Const('a'))
        assert ty == VU(1)

    def test_lambda_head_application(self):
        """An annotated lambda applied directly is inferable."""
        core, ty = elaborate(GlobalEnv(), parse_term("(fun (X : U 1) => X) (U 0)"))
        assert core == App(Univ(1), Univ(1), Lam(Univ(1), Univ(1), Var(0)), Univ(0))
        assert ty == VU(1)

    def test_curried_lambda_head(self):
        core, ty = elaborate(GlobalEnv(), parse_term("(fun (X : U 1) => fun (Y : U 1) => X) (U 0) Prop"))
        assert ty == VU(1)

    def test_bare_lambda_not_inferable(self):
        with pytest.raises(TypeCheckError) as exc:
            elaborate(GlobalEnv(), parse_term("fun (x : U 1) => x"))
        assert 'cannot infer a lambda' in exc.value.message

    def test_check_lambda(self):
        """Checking a lambda against a Pi fills in the codomain annotation."""
        ctx = TypingContext.empty(GlobalEnv())
        expected = eval_term((), Pi(Univ(1), Univ(1)), GlobalEnv())
        core = check(ctx, parse_term("fun (x : U 1) => x"), expected)
        assert core == Lam(Univ(1), Univ(1), Var(0))

    def test_cumulativity(self):
        """A term of U 1 checks against U 5."""
        ctx = TypingContext.empty(GlobalEnv())
        assert check(ctx, parse_term("U 0"), VU(5)) == Univ(0)

    def test_infer_universe_rejects_elements(self):
        g = get_globals("axiom A : U 1. axiom a : A.")
        with pytest.raises(TypeCheckError) as exc:
            infer_universe(TypingContext.empty(g), parse_term("a"))
        assert 'expected a type' in exc.value.message

    def test_unbound_name_span(self):
        with pytest.raises(TypeCheckError) as exc:
            elaborate(GlobalEnv(), parse_term("U 1 -> zz"))
        assert exc.value.span.column == 8

    def test_mismatch_message_shows_types(self):
        g = get_globals("axiom P : Prop. axiom Q : Prop. axiom p : P.")
        with pytest.raises(TypeCheckError) as exc:
            check(TypingContext.empty(g), parse_term("p"), eval_term((), Const('Q'), g))
        assert exc.value.message == "type mismatch: expected Q, got P"


class TestImpredicativity:
    """Sorts of Pi types across the universe hierarchy, against a hand-derived table."""

    # (domain, codomain, sort of the Pi)
    TABLE = [
        ("P", "Q", 0), ("P", "B", 1), ("P", "U 1", 2),
        ("A", "Q", 0), ("A", "B", 1), ("A", "U 1", 2),
        ("U 1", "Q", 0), ("U 1", "B", 2), ("U 1", "U 1", 2),
        ("U 2", "Q", 0), ("U 2", "B", 3), ("U 2", "U 1", 3),
    ]

    def test_inferred_universe(self):
        """The inferred type of (x : D) -> C is U of the expected sort."""
        g = get_matrix_globals()
        for dom, cod, expected in self.TABLE:
            _, ty = elaborate(g, parse_term(f"(x : {dom}) -> {cod}"))
            assert ty == VU(expected), (dom, cod)

    def test_sort_of_value(self):
        """sort_of agrees with the inferred universe."""
        g = get_matrix_globals()
        scope = TypingContext.empty(g).scope
        for dom, cod, expected in self.TABLE:
            core, _ = elaborate(g, parse_term(f"(x : {dom}) -> {cod}"))
            assert sort_of(scope, eval_term((), core, g)) == expected, (dom, cod)

    def test_bot_is_a_proposition(self):
        """(X : Prop) -> X quantifies over all propositions and is one."""
        g = get_globals("def bot : Prop := (X : Prop) -> X.")
        assert g.lookup('bot').type_value == VU(0)
        scope = TypingContext.empty(g).scope
        assert sort_of(scope, eval_term((), Const('bot'), g)) == 0

    def test_proposition_through_definition(self):
        """A proposition declared at U 1 still inhabits Prop and keeps Pi into it impredicative."""
        g = get_globals("""
            axiom P : Prop. def Q : U 1 := P.
            axiom q1 : Q. axiom q2 : Q.
            def R : Prop := Q.
            axiom A : U 1.
            def S : Prop := A -> Q.
        """)
        assert g.lookup('R').type_value == VU(0)
        assert g.lookup('q1').sort == 0
        _, ty = elaborate(g, parse_term("(x : A) -> Q"))
        assert ty == VU(0)
        assert compare(g, elaborate(g, parse_term("q1")), elaborate(g, parse_term("q2"))) is True
        ctx = TypingContext.empty(g)
        for name in ['Q', 'R', 'S']:
            decl = g.lookup(name)
            check_core(ctx, decl.body_core, decl.type_value)

    def test_large_types_still_rejected_in_prop(self):
        g = get_globals("axiom A : U 1. def T : U 2 := A.")
        for body in ["A", "T", "U 0", "A -> A"]:
            with pytest.raises(TypeCheckError):
                get_globals(f"axiom A : U 1. def T : U 2 := A. def bad : Prop := {body}.")
        _, ty = elaborate(g, parse_term("T -> T"))
        assert ty == VU(1)


# =============================================================================
# Tests: declarations
# =============================================================================

class TestDeclarations:
    """Tests for check_decl and check_decls."""

    def test_check_decls_corpus(self):
        """The whole corpus checks."""
        g = check_decls(parse_file(get_corpus_text()))
        assert len(g) >= 50

    def test_error_names_declaration(self):
        with pytest.raises(TypeCheckError) as exc:
            check_decls(parse_file("axiom A : U 1.\ndef bad : A := U 0."))
        assert exc.value.decl == 'bad'
        assert exc.value.message.startswith("in declaration 'bad':")
        assert exc.value.span.line == 2

    def test_duplicate_in_environment(self):
        g = get_globals("axiom A : U 1.")
        with pytest.raises(TypeCheckError):
            check_decl(g, parse_file("axiom A : U 2.")[0])

    def test_cross_prop_coercion_rejected(self):
        with pytest.raises(TypeCheckError):
            get_globals("axiom P : Prop. axiom Q : Prop. axiom p : P. def q : Q := p.")

    def test_proof_indexed_types_convertible(self):
        """Families at two proofs of the same proposition are the same type."""
        g = get_globals("""
            axiom P : Prop. axiom p : P. axiom q : P.
            axiom T : P -> U 1. axiom t : T p.
            def t' : T q := t.
        """)
        assert 't\'' in g

    def test_proof_at_wrapped_proposition(self):
        """A family applied through a larger Pi still yields the same proposition."""
        g = get_globals("""
            axiom A : U 1. axiom a : A. axiom G : A -> Prop. axiom g : G a.
            def wrap : (A -> U 1) -> A -> U 1 := fun (F : A -> U 1) => fun (x : A) => F x.
            def h : wrap G a := g.
            def k : G a := h.
        """)
        assert g.lookup('h').sort == 0
        assert g.lookup('k').body_value == VIrrel()

    def test_definitions_do_not_see_themselves(self):
        with pytest.raises(TypeCheckError):
            get_globals("def loop : U 1 := loop.")


# =============================================================================
# Tests: normalize and the core re-check
# =============================================================================

class TestNormalize:
    """Tests for normalize."""

    def test_normalize_beta(self):
        nf, ty = normalize(GlobalEnv(), parse_term("(fun (X : U 1) => X) (U 0)"))
        assert nf == Univ(0)
        assert ty == VU(1)

    def test_normalize_proof(self):
        g = get_globals("axiom P : Prop. axiom p : P.")
        nf, _ = normalize(g, parse_term("p"))
        assert nf == Irrel()


class TestCompare:
    """Tests for compare: equality at the smaller type, None across unrelated types."""

    def get_globals(self):
        return get_globals("""
            axiom A : U 1. axiom a : A. axiom b : A.
            axiom P : Prop. axiom p : P. axiom q : P.
            def id : A -> A := fun (x : A) => x.
        """)

    def test_equal(self):
        g = self.get_globals()
        assert compare(g, elaborate(g, parse_term("id a")), elaborate(g, parse_term("a"))) is True
        assert compare(g, elaborate(g, parse_term("p")), elaborate(g, parse_term("q"))) is True

    def test_not_equal(self):
        g = self.get_globals()
        assert compare(g, elaborate(g, parse_term("a")), elaborate(g, parse_term("b"))) is False

    def test_at_smaller_universe(self):
        g = self.get_globals()
        assert compare(g, elaborate(g, parse_term("A")), elaborate(g, parse_term("U 0"))) is False
        assert compare(g, elaborate(g, parse_term("U 0")), elaborate(g, parse_term("Prop"))) is True

    def test_incompatible(self):
        g = self.get_globals()
        assert compare(g, elaborate(g, parse_term("a")), elaborate(g, parse_term("p"))) is None


class TestCoreRecheck:
    """Tests for infer_core and check_core."""

    def test_irrel_only_at_propositions(self):
        g = get_globals("axiom P : Prop. axiom A : U 1.")
        ctx = TypingContext.empty(g)
        check_core(ctx, Irrel(), eval_term((), Const('P'), g))
        with pytest.raises(TypeCheckError):
            check_core(ctx, Irrel(), eval_term((), Const('A'), g))

    def test_bad_annotation_rejected(self):
        """An App whose domain annotation disagrees with the function is rejected."""
        g = get_globals("axiom A : U 1. axiom B : A -> U 1. axiom a : A.")
        ctx = TypingContext.empty(g)
        good = App(Const('A'), Univ(1), Const('B'), Const('a'))
        assert infer_core(ctx, good) == VU(1)
        bad = App(Univ(1), Univ(1), Const('B'), Const('a'))
        with pytest.raises(TypeCheckError):
            infer_core(ctx, bad)

    def test_ill_scoped_core(self):
        with pytest.raises(TypeCheckError):
            infer_core(TypingContext.empty(GlobalEnv()), Var(0))

    def test_elaboration_is_sound(self):
        """Every elaborated corpus declaration re-checks from its annotations alone."""
        g = check_decls(parse_file(get_corpus_text()))
        for decl in g.decls():
            ctx = TypingContext.empty(g)
            assert isinstance(infer_core(ctx, decl.type_core), VU), decl.name
            if isinstance(decl, Definition):
                check_core(ctx, decl.body_core, decl.type_value)

    def test_annotation_coherence(self):
        """K on an elaborated application is the normal domain of the function's type."""
        g = get_globals("axiom A : U 1. axiom B : A -> U 1. def C : U 1 -> U 1 := fun (X : U 1) => X.")
        core, _ = elaborate(g, parse_term("(x : C A) -> B x"))
        assert isinstance(core, Pi)
        assert core.dom == App(Univ(1), Univ(1), Const('C'), Const('A'))
        assert core.cod == App(Const('A'), Univ(1), Const('B'), Var(0))
        scope = TypingContext.empty(g).scope
        assert quote_type(scope, eval_term((), core, g)) == Pi(Const('A'), core.cod)
