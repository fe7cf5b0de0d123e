"""AST node types for the SCS mini-language.

Expressions are immutable trees; statements are flat records that own
expression trees and (for blocks) nested statement tuples.  Sequence tokens
carry a back-reference to the call node they were emitted from so later
def-use analysis can find the concrete receiver/argument expressions, but
that reference never participates in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

PRIMITIVE_TYPES = ("int", "long", "short", "double", "boolean", "char", "String")
LITERAL_KINDS = ("int", "long", "short", "double", "boolean", "char", "string")

UNKNOWN_TYPE = "unknown"


# --------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Literal:
    value: Union[int, float, bool, str]
    kind: str  # one of LITERAL_KINDS


@dataclass(frozen=True)
class NullConst:
    pass


@dataclass(frozen=True)
class FreeVar:
    """A variable use: a local, a context parameter, or a true free variable."""

    name: str
    type_name: str = UNKNOWN_TYPE


@dataclass(frozen=True)
class EnumAccess:
    enum: str
    constant: str


@dataclass(frozen=True)
class Constructor:
    type_name: str
    args: tuple["Expr", ...] = ()


@dataclass(frozen=True)
class FieldAccess:
    owner: str
    fld: str
    base: Optional["Expr"] = None  # None iff static
    static: bool = False


@dataclass(frozen=True)
class MethodCall:
    owner: str  # declaring type; UNKNOWN_TYPE when unresolved
    method: str
    receiver: Optional["Expr"] = None  # None iff static
    args: tuple["Expr", ...] = ()
    static: bool = False


@dataclass(frozen=True)
class Placeholder:
    """Typed leaf standing for an expression that could not be completed."""

    type_name: str


Expr = Union[
    Literal, NullConst, FreeVar, EnumAccess, Constructor, FieldAccess, MethodCall, Placeholder
]


def children(expr: Expr) -> tuple[Expr, ...]:
    if isinstance(expr, Constructor):
        return expr.args
    if isinstance(expr, FieldAccess):
        return (expr.base,) if expr.base is not None else ()
    if isinstance(expr, MethodCall):
        head = (expr.receiver,) if expr.receiver is not None else ()
        return head + expr.args
    return ()


def walk(expr: Expr):
    """Pre-order traversal over an expression tree."""
    yield expr
    for child in children(expr):
        yield from walk(child)


def placeholder_count(expr: Expr) -> int:
    return sum(1 for node in walk(expr) if isinstance(node, Placeholder))


def free_var_names(expr: Expr) -> set[str]:
    return {node.name for node in walk(expr) if isinstance(node, FreeVar)}


def expr_depth(expr: Expr) -> int:
    kids = children(expr)
    if not kids:
        return 1
    return 1 + max(expr_depth(k) for k in kids)


# --------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class Declaration:
    type_name: str
    name: str
    init: Expr


@dataclass(frozen=True)
class ExprStatement:
    expr: Expr


@dataclass(frozen=True)
class IfBlock:
    cond: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class WhileBlock:
    cond: Expr
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class TryCatch:
    body: tuple["Stmt", ...]
    catch_type: str
    catch_name: Optional[str]
    handler: tuple["Stmt", ...]


Stmt = Union[Declaration, ExprStatement, IfBlock, WhileBlock, TryCatch]


# --------------------------------------------------------------------------
# Example / pattern containers


@dataclass(frozen=True)
class ScsExample:
    id: str
    context_params: tuple[tuple[str, str], ...]  # (name, type)
    statements: tuple[Stmt, ...]
    free_vars: tuple[tuple[str, str], ...] = ()  # (name, inferred type)
    source_uri: Optional[str] = None


@dataclass(frozen=True)
class Hole:
    """A missing receiver or parameter position in a pattern."""

    id: str
    call_index: int
    slot: str  # "receiver" or "param"
    index: int  # 0 for receiver, parameter position otherwise
    declared_type: str

    @property
    def role(self) -> str:
        return self.slot if self.slot == "receiver" else f"param({self.index})"


@dataclass(frozen=True)
class CallTemplate:
    method_token: str  # "Owner.name" or "Owner.new"
    control: str = "plain"  # plain | if | while | try
    receiver_hole: Optional[str] = None
    arg_holes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScsPattern:
    id: str
    calls: tuple[CallTemplate, ...]
    holes: tuple[Hole, ...]
    support: int
    description: str
    tokens: tuple[str, ...] = ()  # mined token sequence incl. control tokens

    def hole(self, hole_id: str) -> Hole:
        for h in self.holes:
            if h.id == hole_id:
                return h
        raise KeyError(hole_id)


# --------------------------------------------------------------------------
# Sequence tokens

TOKEN_CALL = "CALL"
TOKEN_IF = "IF"
TOKEN_END_IF = "END-IF"
TOKEN_WHILE = "WHILE"
TOKEN_END_WHILE = "END-WHILE"
TOKEN_TRY = "TRY"
TOKEN_CATCH = "CATCH"
TOKEN_END_TRY = "END-TRY"


@dataclass(frozen=True)
class SeqToken:
    kind: str
    text: str
    # back-reference to the call node for CALL tokens; excluded from eq/hash
    node: Optional[Expr] = field(default=None, compare=False)

    def is_call(self) -> bool:
        return self.kind == TOKEN_CALL

    def __str__(self) -> str:  # pragma: no cover - debugging aid
        return self.text
