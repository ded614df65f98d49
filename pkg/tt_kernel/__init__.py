"""Kernel for a dependent type theory with cumulative universes and an impredicative,
proof-irrelevant bottom universe, decided by normalization by evaluation."""

from . import syntax
from . import parser
from . import printer
from . import nbe
from . import typecheck

# Convenience exports for common functions
from .errors import InternalError, KernelError, ParseError, Span, TypeCheckError
from .syntax import App, Const, Irrel, Lam, Pi, Univ, Var, term_equal
from .parser import parse_file, parse_term
from .printer import pretty
from .nbe import Scope, conv, conv_type, eval_term, quote, quote_type, sort_of, subtype
from .typecheck import GlobalEnv, TypingContext, check_decls, compare, elaborate, normalize
