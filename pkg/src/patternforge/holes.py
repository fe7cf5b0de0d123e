"""Hole analysis: def-use resolution, syntax classification, fixed-hole
freezing, and co-reference clustering.

Given a pattern and the corpus examples it embeds into, each hole resolves
to the concrete receiver or argument at the matched call site, with local
variables inlined through their declarations.  Holes whose resolved
expressions are near-constant freeze to their dominant value; the remaining
changeable holes cluster into co-reference groups that a single expression
can fill.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import NoMatch
from .scs.linearize import linearize_example
from .scs.nodes import (
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
from .scs.printer import print_expr

SYNTAX_TYPES = (
    "Enumeration",
    "MethodCall",
    "Constant",
    "ClassInstantiation",
    "DefinedVariable",
)


@dataclass(frozen=True)
class HoleResolution:
    hole_id: str
    example_id: str
    expression: Expr
    syntax_type: str


@dataclass(frozen=True)
class ClusterConfig:
    fixed_threshold: float = 0.5
    coref_threshold: float = 0.8

    def __post_init__(self):
        if not 0 < self.fixed_threshold <= 1 or not 0 < self.coref_threshold <= 1:
            raise ValueError("thresholds must be in (0, 1]")


@dataclass(frozen=True)
class HoleGroup:
    id: str
    hole_ids: tuple[str, ...]
    declared_type: str
    description: str = ""


@dataclass
class CoRefMatrix:
    """Disjoint hole-id groups plus their symmetric co-reference degrees."""

    groups: list[frozenset[str]]
    degree: list[list[float]] = field(default_factory=list)

    def check(self) -> None:
        n = len(self.groups)
        assert len(self.degree) == n and all(len(row) == n for row in self.degree)
        for i in range(n):
            for j in range(n):
                assert abs(self.degree[i][j] - self.degree[j][i]) < 1e-12


# -- classification ----------------------------------------------------------


def classify(expr: Expr) -> str:
    """Five-way syntax classification by the root node."""
    if isinstance(expr, EnumAccess):
        return "Enumeration"
    if isinstance(expr, (Literal, NullConst)):
        return "Constant"
    if isinstance(expr, Constructor):
        return "ClassInstantiation"
    if isinstance(expr, FreeVar):
        return "DefinedVariable"
    # method calls, field accesses, and placeholders all surface in the
    # method-call bucket; a placeholder stands for an incomplete call chain
    return "MethodCall"


# -- def-use resolution -------------------------------------------------------


def embed_pattern(pattern: ScsPattern, example: ScsExample) -> list[int]:
    """Greedy leftmost embedding of the pattern tokens into the example's
    linearization; returns one example-token index per pattern token."""
    tokens = linearize_example(example)
    positions: list[int] = []
    start = 0
    for want in pattern.tokens:
        pos = next(
            (i for i in range(start, len(tokens)) if tokens[i].text == want), None
        )
        if pos is None:
            raise NoMatch(f"pattern {pattern.id} does not embed in example {example.id}")
        positions.append(pos)
        start = pos + 1
    return positions


def _call_token_offsets(pattern: ScsPattern) -> list[int]:
    """Index into pattern.tokens of each call, in call order."""
    from .miner import is_call_token

    return [i for i, t in enumerate(pattern.tokens) if is_call_token(t)]


class _DefEnv:
    """Per-call-site snapshots of the declaration environment.

    Maps each call/constructor node (by identity) to the bindings visible at
    its source position, so hole actuals can be inlined transitively.  A
    binding is (init-expression, env-at-declaration); context params and
    catch binders bind to None and stay leaves.
    """

    def __init__(self, example: ScsExample):
        self.at_call: dict[int, dict] = {}
        root = {name: None for name, _ in example.context_params}
        self._walk_stmts(example.statements, root)

    def _walk_stmts(self, stmts: tuple[Stmt, ...], env: dict) -> None:
        for stmt in stmts:
            if isinstance(stmt, Declaration):
                self._walk_expr(stmt.init, env)
                env[stmt.name] = (stmt.init, dict(env))
            elif isinstance(stmt, ExprStatement):
                self._walk_expr(stmt.expr, env)
            elif isinstance(stmt, (IfBlock, WhileBlock)):
                self._walk_expr(stmt.cond, env)
                self._walk_stmts(stmt.body, dict(env))
            elif isinstance(stmt, TryCatch):
                self._walk_stmts(stmt.body, dict(env))
                handler_env = dict(env)
                if stmt.catch_name:
                    handler_env[stmt.catch_name] = None
                self._walk_stmts(stmt.handler, handler_env)

    def _walk_expr(self, expr: Expr, env: dict) -> None:
        if isinstance(expr, (Constructor, MethodCall)):
            self.at_call[id(expr)] = dict(env)
        if isinstance(expr, Constructor):
            for a in expr.args:
                self._walk_expr(a, env)
        elif isinstance(expr, MethodCall):
            if expr.receiver is not None:
                self._walk_expr(expr.receiver, env)
            for a in expr.args:
                self._walk_expr(a, env)
        elif isinstance(expr, FieldAccess) and expr.base is not None:
            self._walk_expr(expr.base, env)


def _inline(expr: Expr, env: dict) -> Expr:
    if isinstance(expr, FreeVar):
        binding = env.get(expr.name)
        if binding is None:
            return expr
        init, decl_env = binding
        return _inline(init, decl_env)
    if isinstance(expr, Constructor):
        return Constructor(expr.type_name, tuple(_inline(a, env) for a in expr.args))
    if isinstance(expr, MethodCall):
        receiver = _inline(expr.receiver, env) if expr.receiver is not None else None
        return MethodCall(
            expr.owner,
            expr.method,
            receiver,
            tuple(_inline(a, env) for a in expr.args),
            expr.static,
        )
    if isinstance(expr, FieldAccess) and expr.base is not None:
        return FieldAccess(expr.owner, expr.fld, _inline(expr.base, env), expr.static)
    return expr


def resolve_hole(example: ScsExample, pattern: ScsPattern, hole: Hole) -> Expr:
    """Actual expression filling `hole` in `example`, locals inlined."""
    positions = embed_pattern(pattern, example)
    tokens = linearize_example(example)
    call_offsets = _call_token_offsets(pattern)
    call_pos = positions[call_offsets[hole.call_index]]
    node = tokens[call_pos].node
    if hole.slot == "receiver":
        if not isinstance(node, MethodCall) or node.receiver is None:
            raise NoMatch(f"call site for {hole.id} has no receiver in {example.id}")
        actual = node.receiver
    else:
        args = node.args
        if hole.index >= len(args):
            raise NoMatch(
                f"call site for {hole.id} has {len(args)} args in {example.id}"
            )
        actual = args[hole.index]
    env = _DefEnv(example).at_call[id(node)]
    return _inline(actual, env)


def resolve_all(
    pattern: ScsPattern, corpus: list[ScsExample]
) -> dict[str, list[HoleResolution]]:
    """Resolutions per hole id over every corpus example the pattern embeds in."""
    out: dict[str, list[HoleResolution]] = {h.id: [] for h in pattern.holes}
    for example in corpus:
        try:
            embed_pattern(pattern, example)
        except NoMatch:
            continue
        for hole in pattern.holes:
            expr = resolve_hole(example, pattern, hole)
            out[hole.id].append(
                HoleResolution(hole.id, example.id, expr, classify(expr))
            )
    return out


# -- fixed-hole freezing ------------------------------------------------------


def frequency_table(resolutions: list[HoleResolution]) -> list[tuple[str, int, Expr]]:
    counts: dict[str, int] = {}
    first: dict[str, Expr] = {}
    for res in resolutions:
        text = print_expr(res.expression)
        counts[text] = counts.get(text, 0) + 1
        first.setdefault(text, res.expression)
    table = [(text, n, first[text]) for text, n in counts.items()]
    table.sort(key=lambda row: (-row[1], row[0]))
    return table


def freeze_fixed(
    pattern: ScsPattern,
    resolutions: dict[str, list[HoleResolution]],
    cfg: ClusterConfig,
) -> tuple[dict[str, Expr], list[Hole]]:
    """Split holes into fixed assignments and the changeable remainder.

    A hole freezes when its most frequent resolved expression is of constant
    kind (literal, null, or enum access) and reaches fixed_threshold.  The
    scan repeats until no further hole freezes.
    """
    fixed: dict[str, Expr] = {}
    changeable = list(pattern.holes)
    changed = True
    while changed:
        changed = False
        for hole in list(changeable):
            rows = resolutions.get(hole.id) or []
            if not rows:
                continue
            table = frequency_table(rows)
            text, count, expr = table[0]
            if classify(expr) not in ("Constant", "Enumeration"):
                continue
            if count / len(rows) >= cfg.fixed_threshold:
                fixed[hole.id] = expr
                changeable.remove(hole)
                changed = True
    return fixed, changeable


# -- co-reference clustering --------------------------------------------------


def coref_degree(
    a: list[HoleResolution], b: list[HoleResolution]
) -> float:
    """Fraction of shared examples where both holes resolve identically."""
    bye = {r.example_id: print_expr(r.expression) for r in b}
    shared = [r for r in a if r.example_id in bye]
    if not shared:
        return 0.0
    same = sum(1 for r in shared if print_expr(r.expression) == bye[r.example_id])
    return same / len(shared)


def build_coref_matrix(
    changeable: list[Hole], resolutions: dict[str, list[HoleResolution]]
) -> CoRefMatrix:
    n = len(changeable)
    degree = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = coref_degree(
                resolutions.get(changeable[i].id, []),
                resolutions.get(changeable[j].id, []),
            )
            degree[i][j] = degree[j][i] = d
    return CoRefMatrix(groups=[frozenset({h.id}) for h in changeable], degree=degree)


def merge_step(matrix: CoRefMatrix, threshold: float) -> bool:
    """One merge iteration: row-major scan, first pair at or above threshold
    merges into the lower index with elementwise-min degrees.  Returns
    whether a merge happened."""
    n = len(matrix.groups)
    for i in range(n):
        for j in range(i + 1, n):
            if matrix.degree[i][j] >= threshold:
                matrix.groups[i] = matrix.groups[i] | matrix.groups[j]
                del matrix.groups[j]
                for k in range(n):
                    matrix.degree[i][k] = min(matrix.degree[i][k], matrix.degree[j][k])
                    matrix.degree[k][i] = matrix.degree[i][k]
                matrix.degree[i][i] = 0.0
                del matrix.degree[j]
                for row in matrix.degree:
                    del row[j]
                return True
    return False


def cluster_matrix(matrix: CoRefMatrix, threshold: float) -> list[frozenset[str]]:
    while merge_step(matrix, threshold):
        pass
    return list(matrix.groups)


def cluster_coref(
    changeable: list[Hole],
    resolutions: dict[str, list[HoleResolution]],
    cfg: ClusterConfig,
) -> list[HoleGroup]:
    """Maximal co-reference groups over the changeable holes, in pattern
    hole order of their first members."""
    order = {h.id: i for i, h in enumerate(changeable)}
    types = {h.id: h.declared_type for h in changeable}
    matrix = build_coref_matrix(changeable, resolutions)
    parts = cluster_matrix(matrix, cfg.coref_threshold)
    groups: list[HoleGroup] = []
    for gi, part in enumerate(parts):
        members = tuple(sorted(part, key=lambda hid: order[hid]))
        groups.append(
            HoleGroup(
                id=f"group-{gi}",
                hole_ids=members,
                declared_type=types[members[0]],
            )
        )
    return groups
