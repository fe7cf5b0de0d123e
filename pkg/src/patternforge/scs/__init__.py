"""Structured call sequence language: AST, parser, printer, linearizer."""

from .corpus import load_corpus, load_corpus_text, split_blocks
from .linearize import linearize_example, linearize_expr, token_strings
from .nodes import (
    CallTemplate,
    Constructor,
    Declaration,
    EnumAccess,
    Expr,
    ExprStatement,
    FieldAccess,
    FreeVar,
    Hole,
    IfBlock,
    Literal,
    MethodCall,
    NullConst,
    Placeholder,
    ScsExample,
    ScsPattern,
    SeqToken,
    Stmt,
    TryCatch,
    UNKNOWN_TYPE,
    WhileBlock,
    children,
    expr_depth,
    free_var_names,
    placeholder_count,
    walk,
)
from .parser import parse_example, tokenize
from .printer import (
    PLACEHOLDER_CLOSE,
    PLACEHOLDER_OPEN,
    print_ast,
    print_example,
    print_expr,
    print_pattern,
    print_stmt,
)

__all__ = [
    "CallTemplate",
    "Constructor",
    "Declaration",
    "EnumAccess",
    "Expr",
    "ExprStatement",
    "FieldAccess",
    "FreeVar",
    "Hole",
    "IfBlock",
    "Literal",
    "MethodCall",
    "NullConst",
    "Placeholder",
    "PLACEHOLDER_CLOSE",
    "PLACEHOLDER_OPEN",
    "ScsExample",
    "ScsPattern",
    "SeqToken",
    "Stmt",
    "TryCatch",
    "UNKNOWN_TYPE",
    "WhileBlock",
    "children",
    "expr_depth",
    "free_var_names",
    "linearize_example",
    "linearize_expr",
    "load_corpus",
    "load_corpus_text",
    "parse_example",
    "placeholder_count",
    "print_ast",
    "print_example",
    "print_expr",
    "print_pattern",
    "print_stmt",
    "split_blocks",
    "token_strings",
    "tokenize",
    "walk",
]
