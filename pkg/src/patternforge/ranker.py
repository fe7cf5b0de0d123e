"""Popularity estimation, candidate ranking, and example re-ranking.

Popularity: for each type, how often each creator (constructor, method,
field, enum constant) appears in client code as the root of an expression
producing that type, normalized with add-one smoothing so every creator
keeps positive mass and each type's probabilities sum to one.  An
expression's popularity is the product over its creator nodes.

Candidates order by completeness first (placeholders plus unbound variables,
fewer is better), popularity second, canonical text last.  Usage examples
re-rank against the session's current assignments: exact expression match
scores 1, same root creator scores 0.5.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Optional

from .apigraph import ApiGraph
from .holes import HoleGroup, HoleResolution
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
    ScsExample,
    Stmt,
    Declaration,
    ExprStatement,
    IfBlock,
    WhileBlock,
    TryCatch,
    walk,
)
from .scs.printer import print_expr
from .synth import CandidateExpression

DEFAULT_PLACEHOLDER_EPSILON = 0.01


def creator_key(expr: Expr, g: ApiGraph) -> Optional[tuple[str, str]]:
    """(produced type, kind-prefixed key) for a creator node, else None."""
    if isinstance(expr, Constructor):
        if g.constructor(expr.type_name) is None:
            return None
        return expr.type_name, f"constructor:{expr.type_name}.new"
    if isinstance(expr, MethodCall):
        m = g.method(expr.owner, expr.method)
        if m is None or not m.returns or not g.has_type(m.returns):
            return None
        return m.returns, f"method:{expr.owner}.{expr.method}"
    if isinstance(expr, FieldAccess):
        f = g.field(expr.owner, expr.fld)
        if f is None or not g.has_type(f.type_name):
            return None
        return f.type_name, f"field:{expr.owner}.{expr.fld}"
    if isinstance(expr, EnumAccess):
        if not g.is_enum_constant(expr.enum, expr.constant):
            return None
        return expr.enum, f"enum:{expr.enum}.{expr.constant}"
    return None


def _creator_set_keys(g: ApiGraph, type_name: str) -> list[str]:
    return [f"{c.kind}:{c.owner}.{c.name}" for c in g.exact_creators_of(type_name)]


class PopularityModel:
    def __init__(
        self,
        probs: dict[str, dict[str, float]],
        g: ApiGraph,
        corpus_size: int,
        placeholder_epsilon: float = DEFAULT_PLACEHOLDER_EPSILON,
    ):
        self.probs = probs
        self.g = g
        self.corpus_size = corpus_size
        self.placeholder_epsilon = placeholder_epsilon

    def prob(self, type_name: str, key: str) -> float:
        table = self.probs.get(type_name)
        if table is not None and key in table:
            return table[key]
        # unseen type: smoothing-only, uniform over its creator set
        creators = _creator_set_keys(self.g, type_name)
        return 1.0 / len(creators) if creators else 1.0

    def score_expression(self, expr: Expr) -> float:
        score = 1.0
        for node in walk(expr):
            if isinstance(node, Placeholder):
                score *= self.placeholder_epsilon
                continue
            located = creator_key(node, self.g)
            if located is not None:
                produced, key = located
                score *= self.prob(produced, key)
        return score

    def to_document(self) -> dict:
        return {
            "version": 1,
            "corpus_size": self.corpus_size,
            "placeholder_epsilon": self.placeholder_epsilon,
            "probs": {t: dict(sorted(m.items())) for t, m in sorted(self.probs.items())},
        }

    @classmethod
    def from_document(cls, doc: dict, g: ApiGraph) -> "PopularityModel":
        return cls(
            probs={t: dict(m) for t, m in doc.get("probs", {}).items()},
            g=g,
            corpus_size=doc.get("corpus_size", 0),
            placeholder_epsilon=doc.get("placeholder_epsilon", DEFAULT_PLACEHOLDER_EPSILON),
        )


def _statement_exprs(stmt: Stmt):
    if isinstance(stmt, Declaration):
        yield stmt.init
    elif isinstance(stmt, ExprStatement):
        yield stmt.expr
    elif isinstance(stmt, (IfBlock, WhileBlock)):
        yield stmt.cond
        for inner in stmt.body:
            yield from _statement_exprs(inner)
    elif isinstance(stmt, TryCatch):
        for inner in stmt.body:
            yield from _statement_exprs(inner)
        for inner in stmt.handler:
            yield from _statement_exprs(inner)


def fit_popularity(
    corpus: list[ScsExample],
    g: ApiGraph,
    placeholder_epsilon: float = DEFAULT_PLACEHOLDER_EPSILON,
) -> PopularityModel:
    """Count creator roots across all corpus expressions and normalize."""
    if not corpus:
        raise ValueError("corpus must be non-empty")
    counts: dict[str, dict[str, int]] = {}
    for example in corpus:
        for stmt in example.statements:
            for root in _statement_exprs(stmt):
                for node in walk(root):
                    located = creator_key(node, g)
                    if located is None:
                        continue
                    produced, key = located
                    bucket = counts.setdefault(produced, {})
                    bucket[key] = bucket.get(key, 0) + 1
    probs: dict[str, dict[str, float]] = {}
    for type_name, observed in counts.items():
        creator_keys = _creator_set_keys(g, type_name)
        total = sum(observed.values())
        denom = total + len(creator_keys)
        probs[type_name] = {
            key: (observed.get(key, 0) + 1) / denom for key in creator_keys
        }
    return PopularityModel(probs, g, len(corpus), placeholder_epsilon)


def score_expression(expr: Expr, model: PopularityModel) -> float:
    return model.score_expression(expr)


# -- candidate ranking --------------------------------------------------------


def rank_candidates(
    cands: list[CandidateExpression], model: PopularityModel
) -> list[CandidateExpression]:
    rescored = [
        replace(c, popularity=model.score_expression(c.expression)) for c in cands
    ]
    return sorted(
        rescored,
        key=lambda c: (
            c.placeholder_count + c.free_var_count,
            -c.popularity,
            print_expr(c.expression),
        ),
    )


# -- example re-ranking -------------------------------------------------------


@dataclass(frozen=True)
class ExampleRanking:
    order: tuple[tuple[str, float], ...]
    rng_seed: int

    def rank_of(self, example_id: str) -> int:
        for i, (eid, _) in enumerate(self.order):
            if eid == example_id:
                return i + 1
        raise KeyError(example_id)


def root_key(expr: Expr) -> tuple:
    if isinstance(expr, Constructor):
        return ("ctor", expr.type_name)
    if isinstance(expr, MethodCall):
        return ("call", expr.owner, expr.method)
    if isinstance(expr, FieldAccess):
        return ("field", expr.owner, expr.fld)
    if isinstance(expr, EnumAccess):
        return ("enum", expr.enum, expr.constant)
    if isinstance(expr, Literal):
        return ("lit", expr.kind, repr(expr.value))
    if isinstance(expr, NullConst):
        return ("null",)
    if isinstance(expr, FreeVar):
        return ("var", expr.name)
    if isinstance(expr, Placeholder):
        return ("placeholder", expr.type_name)
    return ("other",)


def match_credit(resolved: Expr, assigned: Expr, partial_credit: float = 0.5) -> float:
    if print_expr(resolved) == print_expr(assigned):
        return 1.0
    if root_key(resolved) == root_key(assigned):
        return partial_credit
    return 0.0


def rerank_examples(
    examples: list[ScsExample],
    groups: list[HoleGroup],
    resolutions: dict[str, list[HoleResolution]],
    assignments: dict[str, Expr],
    seed: int,
    priors: Optional[dict[str, float]] = None,
    partial_credit: float = 0.5,
) -> ExampleRanking:
    """Order examples by agreement with the current assignments.

    With nothing assigned the order is a seeded shuffle; otherwise each
    example scores the sum over assigned groups of its match credit, ties
    broken by prior popularity then id.
    """
    ids = sorted(e.id for e in examples)
    priors = priors or {}
    if not assignments:
        rng = random.Random(seed)
        rng.shuffle(ids)
        return ExampleRanking(tuple((eid, 0.0) for eid in ids), seed)

    by_group: dict[str, dict[str, Expr]] = {}
    for group in groups:
        first = group.hole_ids[0]
        by_group[group.id] = {
            r.example_id: r.expression for r in resolutions.get(first, [])
        }

    def score(eid: str) -> float:
        total = 0.0
        for group_id, assigned in assignments.items():
            resolved = by_group.get(group_id, {}).get(eid)
            if resolved is not None:
                total += match_credit(resolved, assigned, partial_credit)
        return total

    scored = [(eid, score(eid)) for eid in ids]
    scored.sort(key=lambda pair: (-pair[1], -priors.get(pair[0], 0.0), pair[0]))
    return ExampleRanking(tuple(scored), seed)


def mrr(ranks: list[Optional[int]]) -> float:
    """Mean reciprocal rank; an absent answer contributes zero."""
    if not ranks:
        raise ValueError("mrr needs at least one hole")
    total = 0.0
    for rank in ranks:
        if rank is None:
            continue
        if rank < 1:
            raise ValueError("ranks are 1-based")
        total += 1.0 / rank
    return total / len(ranks)
