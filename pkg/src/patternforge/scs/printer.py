"""Canonical text rendering for SCS ASTs.

The printed form is the reference representation: structural equality of two
expression trees is defined as equality of their canonical prints, and
``parse(print(x))`` reproduces ``x`` for well-typed inputs.
"""

from __future__ import annotations

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
    Stmt,
    TryCatch,
    WhileBlock,
)

PLACEHOLDER_OPEN = "\u27e8"  # ⟨
PLACEHOLDER_CLOSE = "\u27e9"  # ⟩


def print_expr(expr: Expr) -> str:
    if isinstance(expr, Literal):
        return _print_literal(expr)
    if isinstance(expr, NullConst):
        return "null"
    if isinstance(expr, FreeVar):
        return expr.name
    if isinstance(expr, EnumAccess):
        return f"{expr.enum}.{expr.constant}"
    if isinstance(expr, Constructor):
        return f"new {expr.type_name}({_print_args(expr.args)})"
    if isinstance(expr, FieldAccess):
        base = expr.owner if expr.static else print_expr(expr.base)
        return f"{base}.{expr.fld}"
    if isinstance(expr, MethodCall):
        base = expr.owner if expr.static else print_expr(expr.receiver)
        return f"{base}.{expr.method}({_print_args(expr.args)})"
    if isinstance(expr, Placeholder):
        return f"{PLACEHOLDER_OPEN}{expr.type_name}{PLACEHOLDER_CLOSE}"
    raise TypeError(f"not an expression: {expr!r}")


def _print_args(args: tuple[Expr, ...]) -> str:
    return ", ".join(print_expr(a) for a in args)


def _print_literal(lit: Literal) -> str:
    if lit.kind == "string":
        return '"' + _escape(str(lit.value)) + '"'
    if lit.kind == "char":
        return "'" + _escape(str(lit.value)) + "'"
    if lit.kind == "boolean":
        return "true" if lit.value else "false"
    if lit.kind == "long":
        return f"{lit.value}L"
    if lit.kind == "double":
        text = repr(float(lit.value))
        return text if "." in text or "e" in text else text + ".0"
    return str(lit.value)


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("'", "\\'").replace("\n", "\\n")


def print_stmt(stmt: Stmt, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(stmt, Declaration):
        return f"{pad}{stmt.type_name} {stmt.name} = {print_expr(stmt.init)};"
    if isinstance(stmt, ExprStatement):
        return f"{pad}{print_expr(stmt.expr)};"
    if isinstance(stmt, IfBlock):
        lines = [f"{pad}if ({print_expr(stmt.cond)}) {{"]
        lines += [print_stmt(s, indent + 1) for s in stmt.body]
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    if isinstance(stmt, WhileBlock):
        lines = [f"{pad}while ({print_expr(stmt.cond)}) {{"]
        lines += [print_stmt(s, indent + 1) for s in stmt.body]
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    if isinstance(stmt, TryCatch):
        lines = [f"{pad}try {{"]
        lines += [print_stmt(s, indent + 1) for s in stmt.body]
        binder = f" {stmt.catch_name}" if stmt.catch_name else ""
        lines.append(f"{pad}}} catch ({stmt.catch_type}{binder}) {{")
        lines += [print_stmt(s, indent + 1) for s in stmt.handler]
        lines.append(f"{pad}}}")
        return "\n".join(lines)
    raise TypeError(f"not a statement: {stmt!r}")


def print_example(example: ScsExample) -> str:
    return "\n".join(print_stmt(s) for s in example.statements)


def print_pattern(pattern: ScsPattern) -> str:
    """Skeleton preview of a pattern: holes rendered as typed placeholders."""
    by_id = {h.id: h for h in pattern.holes}
    lines = []
    for call in pattern.calls:
        owner, _, name = call.method_token.rpartition(".")
        args = ", ".join(
            _hole_text(by_id[h]) for h in call.arg_holes
        )
        if name == "new":
            text = f"new {owner}({args});"
        elif call.receiver_hole is None:
            text = f"{owner}.{name}({args});"
        else:
            text = f"{_hole_text(by_id[call.receiver_hole])}.{name}({args});"
        if call.control != "plain":
            text += f"  // in {call.control}"
        lines.append(text)
    return "\n".join(lines)


def _hole_text(hole: Hole) -> str:
    return f"{PLACEHOLDER_OPEN}{hole.declared_type}{PLACEHOLDER_CLOSE}"


def print_ast(ast) -> str:
    """Polymorphic entry point: example, pattern, statement, or expression."""
    if isinstance(ast, ScsExample):
        return print_example(ast)
    if isinstance(ast, ScsPattern):
        return print_pattern(ast)
    if isinstance(
        ast, (Declaration, ExprStatement, IfBlock, WhileBlock, TryCatch)
    ):
        return print_stmt(ast)
    return print_expr(ast)
