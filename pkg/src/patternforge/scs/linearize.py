"""Flattening of SCS trees into call-token sequences for the miner.

Only method and constructor invocations emit CALL tokens; variable uses,
literals, field reads and enum accesses are silent.  Tokens appear in
evaluation order: receiver first, then arguments left to right, then the
call itself.  Control structure is kept as bracketing marker tokens so the
miner can treat loops, branches and try blocks as part of the vocabulary.
"""

from __future__ import annotations

from .nodes import (
    Constructor,
    Declaration,
    Expr,
    ExprStatement,
    FieldAccess,
    IfBlock,
    MethodCall,
    ScsExample,
    SeqToken,
    Stmt,
    TOKEN_CALL,
    TOKEN_CATCH,
    TOKEN_END_IF,
    TOKEN_END_TRY,
    TOKEN_END_WHILE,
    TOKEN_IF,
    TOKEN_TRY,
    TOKEN_WHILE,
    TryCatch,
    WhileBlock,
)


def linearize_expr(expr: Expr) -> list[SeqToken]:
    out: list[SeqToken] = []
    _walk_expr(expr, out)
    return out


def _walk_expr(expr: Expr, out: list[SeqToken]) -> None:
    if isinstance(expr, Constructor):
        for arg in expr.args:
            _walk_expr(arg, out)
        out.append(SeqToken(TOKEN_CALL, f"{expr.type_name}.new", expr))
    elif isinstance(expr, MethodCall):
        if expr.receiver is not None:
            _walk_expr(expr.receiver, out)
        for arg in expr.args:
            _walk_expr(arg, out)
        out.append(SeqToken(TOKEN_CALL, f"{expr.owner}.{expr.method}", expr))
    elif isinstance(expr, FieldAccess) and expr.base is not None:
        _walk_expr(expr.base, out)


def linearize_stmt(stmt: Stmt, out: list[SeqToken]) -> None:
    if isinstance(stmt, Declaration):
        _walk_expr(stmt.init, out)
    elif isinstance(stmt, ExprStatement):
        _walk_expr(stmt.expr, out)
    elif isinstance(stmt, IfBlock):
        _walk_expr(stmt.cond, out)
        out.append(SeqToken(TOKEN_IF, TOKEN_IF, None))
        for inner in stmt.body:
            linearize_stmt(inner, out)
        out.append(SeqToken(TOKEN_END_IF, TOKEN_END_IF, None))
    elif isinstance(stmt, WhileBlock):
        _walk_expr(stmt.cond, out)
        out.append(SeqToken(TOKEN_WHILE, TOKEN_WHILE, None))
        for inner in stmt.body:
            linearize_stmt(inner, out)
        out.append(SeqToken(TOKEN_END_WHILE, TOKEN_END_WHILE, None))
    elif isinstance(stmt, TryCatch):
        out.append(SeqToken(TOKEN_TRY, TOKEN_TRY, None))
        for inner in stmt.body:
            linearize_stmt(inner, out)
        out.append(SeqToken(TOKEN_CATCH, f"{TOKEN_CATCH}({stmt.catch_type})", None))
        for inner in stmt.handler:
            linearize_stmt(inner, out)
        out.append(SeqToken(TOKEN_END_TRY, TOKEN_END_TRY, None))


def linearize_example(example: ScsExample) -> tuple[SeqToken, ...]:
    out: list[SeqToken] = []
    for stmt in example.statements:
        linearize_stmt(stmt, out)
    return tuple(out)


def token_strings(tokens: tuple[SeqToken, ...] | list[SeqToken]) -> tuple[str, ...]:
    """Mining alphabet view: each token reduced to its text symbol."""
    return tuple(t.text for t in tokens)
