"""Tokenizer and recursive-descent parser for the SCS mini-language.

Grammar reference lives in docs/scs-grammar.md.  Parsing optionally consults
an ApiGraph: with a graph, member accesses are resolved against declared
signatures and free variables get their types inferred from the signature of
their first constrained use; without one, a capitalization heuristic
distinguishes enum accesses and static members, and unresolved positions are
typed "unknown".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, TYPE_CHECKING

from ..errors import ScsSyntaxError, TypeNameError
from .nodes import (
    Constructor,
    Declaration,
    EnumAccess,
    Expr,
    ExprStatement,
    FieldAccess,
    FreeVar,
    IfBlock,
    Literal,
    MethodCall,
    NullConst,
    Placeholder,
    ScsExample,
    Stmt,
    TryCatch,
    UNKNOWN_TYPE,
    WhileBlock,
)
from .printer import PLACEHOLDER_CLOSE, PLACEHOLDER_OPEN

if TYPE_CHECKING:  # pragma: no cover
    from ..apigraph import ApiGraph

KEYWORDS = {"new", "if", "while", "try", "catch", "null", "true", "false"}
PRIMITIVE_TYPE_NAMES = {"int", "long", "short", "double", "boolean", "char", "String"}

_PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    "{": "LBRACE",
    "}": "RBRACE",
    ";": "SEMI",
    ",": "COMMA",
    ".": "DOT",
    "=": "ASSIGN",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)

    def error(msg: str):
        raise ScsSyntaxError(msg, line, col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "/" and text[i : i + 2] == "//":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word.upper() if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            kind = "INT"
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                kind = "DOUBLE"
            elif j < n and text[j] in "lL":
                j += 1
                kind = "LONG"
            tokens.append(Token(kind, text[i:j].rstrip("lL"), start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            value = []
            while j < n and text[j] != quote:
                if text[j] == "\\" and j + 1 < n:
                    esc = text[j + 1]
                    value.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    j += 2
                elif text[j] == "\n":
                    error("unterminated literal")
                else:
                    value.append(text[j])
                    j += 1
            if j >= n:
                error("unterminated literal")
            kind = "STRING" if quote == '"' else "CHAR"
            tokens.append(Token(kind, "".join(value), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch == PLACEHOLDER_OPEN:
            j = text.find(PLACEHOLDER_CLOSE, i + 1)
            if j < 0:
                error("unterminated placeholder")
            tokens.append(Token("PHOLD", text[i + 1 : j].strip(), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start_line, start_col))
            i += 1
            col += 1
            continue
        error(f"unexpected character {ch!r}")
    tokens.append(Token("EOF", "", line, col))
    return tokens


def _valid_type_name(name: str) -> bool:
    return name in PRIMITIVE_TYPE_NAMES or (name[:1].isupper() and name.isidentifier())


def _looks_like_constant(name: str) -> bool:
    return name.isupper() or not any(c.islower() for c in name)


class _Parser:
    def __init__(self, tokens: list[Token], graph: Optional["ApiGraph"], context: dict[str, str]):
        self.tokens = tokens
        self.pos = 0
        self.graph = graph
        self.scopes: list[dict[str, str]] = [dict(context)]
        self.context = dict(context)
        # free variable name -> list of type constraints observed, in order
        self.free_constraints: dict[str, list[str]] = {}

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {kind}, found {tok.kind} {tok.value!r}", tok)
        return self.next()

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ScsSyntaxError(msg, tok.line, tok.col)

    # -- scope helpers -----------------------------------------------------

    def lookup(self, name: str) -> Optional[str]:
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        return None

    def declare(self, name: str, type_name: str, tok: Token) -> None:
        if name in self.scopes[-1]:
            self.error(f"variable {name!r} already declared in this scope", tok)
        self.scopes[-1][name] = type_name

    def constrain(self, name: str, type_name: Optional[str]) -> None:
        seen = self.free_constraints.setdefault(name, [])
        if type_name and type_name != UNKNOWN_TYPE:
            seen.append(type_name)

    def current_free_type(self, name: str) -> str:
        seen = self.free_constraints.get(name, [])
        if not seen:
            return UNKNOWN_TYPE
        return seen[0] if all(t == seen[0] for t in seen) else UNKNOWN_TYPE

    # -- statements --------------------------------------------------------

    def parse_statements(self, *, top: bool) -> tuple[Stmt, ...]:
        stmts: list[Stmt] = []
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                if not top:
                    self.error("unexpected end of input inside block")
                break
            if tok.kind == "RBRACE":
                if top:
                    self.error("unbalanced '}'")
                break
            stmts.append(self.parse_statement())
        return tuple(stmts)

    def parse_statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "IF":
            return self.parse_if()
        if tok.kind == "WHILE":
            return self.parse_while()
        if tok.kind == "TRY":
            return self.parse_try()
        if tok.kind == "IDENT" and self.peek(1).kind == "IDENT" and self.peek(2).kind == "ASSIGN":
            return self.parse_declaration()
        expr = self.parse_expression()
        self.expect("SEMI")
        return ExprStatement(expr)

    def parse_declaration(self) -> Declaration:
        type_tok = self.expect("IDENT")
        if not _valid_type_name(type_tok.value):
            raise TypeNameError(
                f"{type_tok.line}:{type_tok.col}: {type_tok.value!r} is not a valid type name"
            )
        name_tok = self.expect("IDENT")
        self.expect("ASSIGN")
        init = self.parse_expression(expected=type_tok.value)
        self.expect("SEMI")
        self.declare(name_tok.value, type_tok.value, name_tok)
        return Declaration(type_tok.value, name_tok.value, init)

    def _parse_block(self) -> tuple[Stmt, ...]:
        self.expect("LBRACE")
        self.scopes.append({})
        body = self.parse_statements(top=False)
        self.scopes.pop()
        self.expect("RBRACE")
        return body

    def parse_if(self) -> IfBlock:
        self.expect("IF")
        self.expect("LPAREN")
        cond = self.parse_expression(expected="boolean")
        self.expect("RPAREN")
        return IfBlock(cond, self._parse_block())

    def parse_while(self) -> WhileBlock:
        self.expect("WHILE")
        self.expect("LPAREN")
        cond = self.parse_expression(expected="boolean")
        self.expect("RPAREN")
        return WhileBlock(cond, self._parse_block())

    def parse_try(self) -> TryCatch:
        self.expect("TRY")
        body = self._parse_block()
        self.expect("CATCH")
        self.expect("LPAREN")
        type_tok = self.expect("IDENT")
        if not _valid_type_name(type_tok.value):
            raise TypeNameError(
                f"{type_tok.line}:{type_tok.col}: {type_tok.value!r} is not a valid type name"
            )
        catch_name = None
        if self.peek().kind == "IDENT":
            binder = self.next()
            catch_name = binder.value
        self.expect("RPAREN")
        self.scopes.append({catch_name: type_tok.value} if catch_name else {})
        self.expect("LBRACE")
        handler = self.parse_statements(top=False)
        self.scopes.pop()
        self.expect("RBRACE")
        return TryCatch(body, type_tok.value, catch_name, handler)

    # -- expressions -------------------------------------------------------

    def parse_expression(self, expected: Optional[str] = None) -> Expr:
        expr = self.parse_primary(expected)
        return self.parse_postfix(expr, expected)

    def parse_primary(self, expected: Optional[str]) -> Expr:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return Literal(int(tok.value), "int")
        if tok.kind == "LONG":
            self.next()
            return Literal(int(tok.value), "long")
        if tok.kind == "DOUBLE":
            self.next()
            return Literal(float(tok.value), "double")
        if tok.kind == "STRING":
            self.next()
            return Literal(tok.value, "string")
        if tok.kind == "CHAR":
            self.next()
            return Literal(tok.value, "char")
        if tok.kind in ("TRUE", "FALSE"):
            self.next()
            return Literal(tok.kind == "TRUE", "boolean")
        if tok.kind == "NULL":
            self.next()
            return NullConst()
        if tok.kind == "PHOLD":
            self.next()
            return Placeholder(tok.value)
        if tok.kind == "NEW":
            return self.parse_constructor()
        if tok.kind == "IDENT":
            return self.parse_name(expected)
        self.error(f"expected expression, found {tok.kind} {tok.value!r}", tok)

    def parse_constructor(self) -> Constructor:
        self.expect("NEW")
        type_tok = self.expect("IDENT")
        if not _valid_type_name(type_tok.value):
            raise TypeNameError(
                f"{type_tok.line}:{type_tok.col}: {type_tok.value!r} is not a valid type name"
            )
        sig = None
        if self.graph is not None:
            ctor = self.graph.constructor(type_tok.value)
            sig = [p.type_name for p in ctor.params] if ctor else None
        args = self.parse_args(sig)
        return Constructor(type_tok.value, args)

    def parse_args(self, sig: Optional[list[str]]) -> tuple[Expr, ...]:
        self.expect("LPAREN")
        args: list[Expr] = []
        if self.peek().kind != "RPAREN":
            while True:
                expected = sig[len(args)] if sig and len(args) < len(sig) else None
                args.append(self.parse_expression(expected))
                if self.peek().kind == "COMMA":
                    self.next()
                    continue
                break
        self.expect("RPAREN")
        return tuple(args)

    def parse_name(self, expected: Optional[str]) -> Expr:
        """Identifier-rooted primary: a variable use or a type-qualified access."""
        tok = self.expect("IDENT")
        name = tok.value
        declared = self.lookup(name)
        if declared is not None:
            return FreeVar(name, declared)
        dotted = self.peek().kind == "DOT"
        if dotted and self._is_type_root(name):
            return self.parse_static_member(name)
        # true free variable; type resolved at the end of the parse.  An
        # expected type constrains the whole expression, so it only binds the
        # variable when the variable is not a receiver of a longer chain.
        if expected and not dotted:
            self.constrain(name, expected)
        else:
            self.free_constraints.setdefault(name, [])
        return FreeVar(name, UNKNOWN_TYPE)

    def _is_type_root(self, name: str) -> bool:
        if self.graph is not None:
            return self.graph.has_type(name) and name not in PRIMITIVE_TYPE_NAMES
        return name[:1].isupper()

    def parse_static_member(self, owner: str) -> Expr:
        self.expect("DOT")
        member = self.expect("IDENT")
        if self.peek().kind == "LPAREN":
            sig = None
            if self.graph is not None:
                decl = self.graph.declaring_owner(owner, member.value)
                if decl is not None:
                    owner = decl
                    sig = [p.type_name for p in self.graph.method(decl, member.value).params]
            args = self.parse_args(sig)
            return MethodCall(owner, member.value, None, args, static=True)
        if self.graph is not None:
            if self.graph.is_enum_constant(owner, member.value):
                return EnumAccess(owner, member.value)
            decl = self.graph.declaring_owner(owner, member.value, field=True)
            if decl is not None:
                return FieldAccess(decl, member.value, None, static=True)
            return FieldAccess(owner, member.value, None, static=True)
        if _looks_like_constant(member.value):
            return EnumAccess(owner, member.value)
        return FieldAccess(owner, member.value, None, static=True)

    def parse_postfix(self, expr: Expr, expected: Optional[str]) -> Expr:
        while self.peek().kind == "DOT":
            self.next()
            member = self.expect("IDENT")
            if self.peek().kind == "LPAREN":
                expr = self.parse_instance_call(expr, member.value)
            else:
                expr = self.parse_instance_field(expr, member.value)
        return expr

    def parse_instance_call(self, receiver: Expr, method: str) -> Expr:
        owner = UNKNOWN_TYPE
        sig = None
        if self.graph is not None:
            base_type = self.type_of(receiver)
            if base_type == UNKNOWN_TYPE and isinstance(receiver, FreeVar):
                # infer the receiver type from the method's unique declaring owner
                owners = self.graph.owners_declaring(method)
                if len(owners) == 1:
                    self.constrain(receiver.name, owners[0])
                    base_type = owners[0]
            decl = (
                self.graph.declaring_owner(base_type, method)
                if base_type != UNKNOWN_TYPE
                else None
            )
            if decl is not None:
                owner = decl
                sig = [p.type_name for p in self.graph.method(decl, method).params]
        args = self.parse_args(sig)
        return MethodCall(owner, method, receiver, args, static=False)

    def parse_instance_field(self, base: Expr, fld: str) -> Expr:
        owner = UNKNOWN_TYPE
        if self.graph is not None:
            base_type = self.type_of(base)
            if base_type != UNKNOWN_TYPE:
                decl = self.graph.declaring_owner(base_type, fld, field=True)
                if decl is not None:
                    owner = decl
        return FieldAccess(owner, fld, base, static=False)

    # -- types -------------------------------------------------------------

    def type_of(self, expr: Expr) -> str:
        """Static type of an expression as far as the graph can tell."""
        if isinstance(expr, Literal):
            return "String" if expr.kind == "string" else expr.kind
        if isinstance(expr, NullConst):
            return "null"
        if isinstance(expr, FreeVar):
            if expr.type_name != UNKNOWN_TYPE:
                return expr.type_name
            return self.current_free_type(expr.name)
        if isinstance(expr, EnumAccess):
            return expr.enum
        if isinstance(expr, Constructor):
            return expr.type_name
        if isinstance(expr, Placeholder):
            return expr.type_name
        if isinstance(expr, FieldAccess):
            if self.graph is not None and expr.owner != UNKNOWN_TYPE:
                f = self.graph.field(expr.owner, expr.fld)
                if f is not None:
                    return f.type_name
            return UNKNOWN_TYPE
        if isinstance(expr, MethodCall):
            if self.graph is not None and expr.owner != UNKNOWN_TYPE:
                m = self.graph.method(expr.owner, expr.method)
                if m is not None and m.returns:
                    return m.returns
            return UNKNOWN_TYPE
        return UNKNOWN_TYPE

    # -- finalization ------------------------------------------------------

    def final_free_types(self) -> dict[str, str]:
        return {name: self.current_free_type(name) for name in self.free_constraints}


def _retype_expr(expr: Expr, free_types: dict[str, str]) -> Expr:
    if isinstance(expr, FreeVar) and expr.name in free_types:
        final = free_types[expr.name]
        return expr if expr.type_name == final else FreeVar(expr.name, final)
    if isinstance(expr, Constructor):
        return Constructor(expr.type_name, tuple(_retype_expr(a, free_types) for a in expr.args))
    if isinstance(expr, FieldAccess) and expr.base is not None:
        return FieldAccess(expr.owner, expr.fld, _retype_expr(expr.base, free_types), expr.static)
    if isinstance(expr, MethodCall):
        receiver = _retype_expr(expr.receiver, free_types) if expr.receiver is not None else None
        return MethodCall(
            expr.owner,
            expr.method,
            receiver,
            tuple(_retype_expr(a, free_types) for a in expr.args),
            expr.static,
        )
    return expr


def _retype_stmt(stmt: Stmt, free_types: dict[str, str]) -> Stmt:
    if isinstance(stmt, Declaration):
        return Declaration(stmt.type_name, stmt.name, _retype_expr(stmt.init, free_types))
    if isinstance(stmt, ExprStatement):
        return ExprStatement(_retype_expr(stmt.expr, free_types))
    if isinstance(stmt, IfBlock):
        return IfBlock(
            _retype_expr(stmt.cond, free_types),
            tuple(_retype_stmt(s, free_types) for s in stmt.body),
        )
    if isinstance(stmt, WhileBlock):
        return WhileBlock(
            _retype_expr(stmt.cond, free_types),
            tuple(_retype_stmt(s, free_types) for s in stmt.body),
        )
    if isinstance(stmt, TryCatch):
        return TryCatch(
            tuple(_retype_stmt(s, free_types) for s in stmt.body),
            stmt.catch_type,
            stmt.catch_name,
            tuple(_retype_stmt(s, free_types) for s in stmt.handler),
        )
    return stmt


def parse_example(
    text: str,
    *,
    example_id: str = "example",
    context_params: tuple[tuple[str, str], ...] = (),
    graph: Optional["ApiGraph"] = None,
    source_uri: Optional[str] = None,
) -> ScsExample:
    """Parse one SCS example.

    `text` is either a bare statement list or a corpus block starting with a
    `#example <id> (name: Type, ...)` header and optionally ending in `#end`.
    """
    lines = text.strip().split("\n")
    if lines and lines[0].lstrip().startswith("#example"):
        example_id, context_params = _parse_header(lines[0])
        lines = lines[1:]
    if lines and lines[-1].strip() == "#end":
        lines = lines[:-1]
    body = "\n".join(lines)

    parser = _Parser(tokenize(body), graph, dict(context_params))
    statements = parser.parse_statements(top=True)
    free_types = parser.final_free_types()
    statements = tuple(_retype_stmt(s, free_types) for s in statements)
    return ScsExample(
        id=example_id,
        context_params=tuple(context_params),
        statements=statements,
        free_vars=tuple(sorted(free_types.items())),
        source_uri=source_uri,
    )


def _parse_header(line: str) -> tuple[str, tuple[tuple[str, str], ...]]:
    rest = line.strip()[len("#example") :].strip()
    params: list[tuple[str, str]] = []
    if "(" in rest:
        name_part, _, param_part = rest.partition("(")
        example_id = name_part.strip()
        param_part = param_part.rstrip().rstrip(")")
        for chunk in filter(None, (c.strip() for c in param_part.split(","))):
            if ":" not in chunk:
                raise ScsSyntaxError(f"malformed context parameter {chunk!r}", 1, 1)
            pname, _, ptype = chunk.partition(":")
            params.append((pname.strip(), ptype.strip()))
    else:
        example_id = rest
    if not example_id:
        raise ScsSyntaxError("missing example id in header", 1, 1)
    return example_id, tuple(params)
