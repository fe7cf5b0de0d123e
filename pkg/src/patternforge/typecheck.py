"""Expression typing against an ApiGraph: produced types, assignability of
values to declared slots, and full structural type-checking."""

from __future__ import annotations

from .apigraph import ApiGraph
from .scs.nodes import (
    Constructor,
    EnumAccess,
    Expr,
    FieldAccess,
    FreeVar,
    Literal,
    MethodCall,
    NullConst,
    Placeholder,
    UNKNOWN_TYPE,
)

NULL_TYPE = "null"


def produced_type(expr: Expr, g: ApiGraph) -> str:
    if isinstance(expr, Literal):
        return "String" if expr.kind == "string" else expr.kind
    if isinstance(expr, NullConst):
        return NULL_TYPE
    if isinstance(expr, FreeVar):
        return expr.type_name
    if isinstance(expr, EnumAccess):
        return expr.enum
    if isinstance(expr, Constructor):
        return expr.type_name
    if isinstance(expr, Placeholder):
        return expr.type_name
    if isinstance(expr, FieldAccess):
        owner = g.declaring_owner(expr.owner, expr.fld, field=True) or expr.owner
        f = g.field(owner, expr.fld)
        return f.type_name if f else UNKNOWN_TYPE
    if isinstance(expr, MethodCall):
        m = g.method(expr.owner, expr.method)
        return m.returns if m and m.returns else UNKNOWN_TYPE
    return UNKNOWN_TYPE


def value_fits(expr: Expr, declared: str, g: ApiGraph) -> bool:
    """Can `expr` fill a slot of the declared type?"""
    if isinstance(expr, Literal):
        return g.literal_fits(expr.kind, declared)
    if isinstance(expr, NullConst):
        # null fits any reference type; String is built-in but still a reference
        return declared == "String" or not g.is_primitive(declared)
    produced = produced_type(expr, g)
    if produced == UNKNOWN_TYPE or not g.has_type(produced):
        return False
    return g.is_assignable(produced, declared)


def well_typed(expr: Expr, g: ApiGraph, target: str | None = None) -> bool:
    """Structural check: every call resolves and every slot is satisfied.
    With a target, the root must additionally fit it."""
    if target is not None and not value_fits(expr, target, g):
        return False
    if isinstance(expr, (Literal, NullConst, Placeholder)):
        return True
    if isinstance(expr, FreeVar):
        return expr.type_name != UNKNOWN_TYPE
    if isinstance(expr, EnumAccess):
        return g.is_enum_constant(expr.enum, expr.constant)
    if isinstance(expr, Constructor):
        ctor = g.constructor(expr.type_name)
        if ctor is None or len(ctor.params) != len(expr.args):
            return False
        return all(
            well_typed(a, g, p.type_name) for a, p in zip(expr.args, ctor.params)
        )
    if isinstance(expr, FieldAccess):
        owner = g.declaring_owner(expr.owner, expr.fld, field=True) or expr.owner
        f = g.field(owner, expr.fld)
        if f is None or f.static != expr.static:
            return False
        if expr.static:
            return expr.base is None
        return expr.base is not None and well_typed(expr.base, g, expr.owner)
    if isinstance(expr, MethodCall):
        m = g.method(expr.owner, expr.method)
        if m is None or m.static != expr.static or len(m.params) != len(expr.args):
            return False
        if expr.static:
            if expr.receiver is not None:
                return False
        else:
            if expr.receiver is None or not well_typed(expr.receiver, g, expr.owner):
                return False
        return all(
            well_typed(a, g, p.type_name) for a, p in zip(expr.args, m.params)
        )
    return False
