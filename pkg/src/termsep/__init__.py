"""termsep: decide unifiability of first-order terms, and when it fails,
build a finite algebra over GF(2) vectors that provably separates them."""

from .gf2 import (
    AffineForm,
    Assign,
    FiniteAlgebra,
    FlagConst,
    IndexAllocator,
    TweakedAssign,
    alg_of,
    check_separation,
    check_separation_bruteforce,
    eval_term,
    format_algebra,
    parse_algebra,
    path_transform,
    product,
    tweaked_path_transform,
)
from .models import FiniteModel, Inconsistent, finite_model, parse_sentence
from .separator import SeparationCertificate, SeparationError, separate
from .terms import (
    App,
    Signature,
    Term,
    TermSyntaxError,
    Var,
    format_term,
    parse_signature,
    parse_term,
    render_tree,
    subterm_at,
)
from .unification import Failed, Statement, Unifiable, close, unify

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "App",
    "Assign",
    "Failed",
    "FiniteAlgebra",
    "FiniteModel",
    "FlagConst",
    "Inconsistent",
    "IndexAllocator",
    "SeparationCertificate",
    "SeparationError",
    "Signature",
    "Statement",
    "Term",
    "TermSyntaxError",
    "TweakedAssign",
    "Unifiable",
    "Var",
    "__version__",
    "alg_of",
    "check_separation",
    "check_separation_bruteforce",
    "close",
    "eval_term",
    "finite_model",
    "format_algebra",
    "format_term",
    "parse_algebra",
    "parse_sentence",
    "parse_signature",
    "parse_term",
    "path_transform",
    "product",
    "render_tree",
    "separate",
    "subterm_at",
    "tweaked_path_transform",
    "unify",
]
