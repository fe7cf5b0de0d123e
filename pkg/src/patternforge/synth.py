"""Type-directed expression synthesis by bounded recursive search.

For a target type, the search at depth d collects leaf expressions (local
variables, static fields, enum constants of the target), then for every
creator in the graph builds receivers and arguments at depth d-1 and takes
their cartesian combinations.  A sub-search that comes back empty yields a
single typed placeholder so partial candidates survive; the caller ranks
them below complete ones.  Results are memoized per (type, depth) and
optionally capped per type by popularity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Protocol

from .apigraph import ApiGraph, Creator
from .errors import UnknownType
from .holes import HoleGroup, classify
from .scs.nodes import (
    EnumAccess,
    Expr,
    FieldAccess,
    FreeVar,
    MethodCall,
    Placeholder,
    Constructor,
    free_var_names,
    placeholder_count,
)
from .scs.printer import print_expr

# combinations drawn per creator before the per-type cap; keeps many-argument
# creators from exploding the search while staying deterministic
COMBO_FACTOR = 4


class Scorer(Protocol):
    def score_expression(self, expr: Expr) -> float: ...


@dataclass(frozen=True)
class SynthConfig:
    max_depth: int = 4
    per_type_cap: int = 50  # 0 disables the cap

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.per_type_cap < 0:
            raise ValueError("per_type_cap must be >= 0")


@dataclass(frozen=True)
class CandidateExpression:
    expression: Expr
    placeholder_count: int
    free_var_count: int
    popularity: float
    syntax_type: str


class _UniformScorer:
    """Fallback popularity when no fitted model is supplied: smoothing-only
    probabilities, so every creator of a type scores 1/|creators|."""

    def __init__(self, g: ApiGraph):
        from .ranker import PopularityModel

        self._model = PopularityModel({}, g, 0)

    def score_expression(self, expr: Expr) -> float:
        return self._model.score_expression(expr)


def describe_group(group: HoleGroup, pattern, g: ApiGraph) -> str:
    """Parameter doc of the first documented param member, else the class name."""
    by_id = {h.id: h for h in pattern.holes}
    for hole_id in group.hole_ids:
        hole = by_id.get(hole_id)
        if hole is None or hole.slot != "param":
            continue
        call = pattern.calls[hole.call_index]
        method = g.resolve_call_token(call.method_token)
        if method is None:
            continue
        if hole.index < len(method.params) and method.params[hole.index].doc:
            return method.params[hole.index].doc
    return group.declared_type


class Synthesizer:
    def __init__(
        self,
        locals_: list[tuple[str, str]],
        cfg: SynthConfig,
        g: ApiGraph,
        scorer: Optional[Scorer] = None,
    ):
        self.locals = list(locals_)
        self.cfg = cfg
        self.g = g
        self.scorer = scorer or _UniformScorer(g)
        self.memo: dict[tuple[str, int], tuple[Expr, ...]] = {}

    # -- search ------------------------------------------------------------

    def search(self, target: str, depth: int) -> tuple[Expr, ...]:
        """All expressions of `target` type with nesting depth <= depth."""
        if depth <= 0:
            return ()
        key = (target, depth)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        found: dict[str, Expr] = {}

        def add(expr: Expr) -> None:
            found.setdefault(print_expr(expr), expr)

        for name, type_name in self.locals:
            if self.g.has_type(type_name) and self.g.is_assignable(type_name, target):
                add(FreeVar(name, type_name))
        for creator in self.g.creators_of(target):
            if creator.kind == "enum":
                add(EnumAccess(creator.owner, creator.name))
            elif creator.kind == "field":
                field = self.g.field(creator.owner, creator.name)
                if field.static:
                    add(FieldAccess(creator.owner, creator.name, None, static=True))
                else:
                    for base in self._sub(creator.owner, depth - 1):
                        add(FieldAccess(creator.owner, creator.name, base, static=False))
            else:
                for expr in self._combine(creator, depth):
                    add(expr)

        ordered = self._order(found.values())
        if self.cfg.per_type_cap > 0:
            ordered = ordered[: self.cfg.per_type_cap]
        result = tuple(ordered)
        self.memo[key] = result
        return result

    def _combine(self, creator: Creator, depth: int):
        """Cartesian combinations for a method or constructor creator."""
        method = self.g.method(creator.owner, creator.name)
        slots: list[tuple[Expr, ...]] = []
        if not method.constructor and not method.static:
            receivers = self._sub(creator.owner, depth - 1)
            if not receivers:
                return
            slots.append(receivers)
        for param in method.params:
            options = self._sub(param.type_name, depth - 1)
            if not options:
                return
            slots.append(options)
        limit = None
        if self.cfg.per_type_cap > 0:
            limit = self.cfg.per_type_cap * COMBO_FACTOR
        for combo in itertools.islice(itertools.product(*slots), limit):
            if method.constructor:
                yield Constructor(creator.owner, tuple(combo))
            elif method.static:
                yield MethodCall(creator.owner, creator.name, None, tuple(combo), static=True)
            else:
                yield MethodCall(
                    creator.owner, creator.name, combo[0], tuple(combo[1:]), static=False
                )

    def _sub(self, type_name: str, depth: int) -> tuple[Expr, ...]:
        """Sub-search with placeholder fallback: an empty result at depth >= 1
        becomes a single typed placeholder so the parent combination survives."""
        if not self.g.has_type(type_name):
            return ()
        result = self.search(type_name, depth)
        if not result and depth >= 1:
            return (Placeholder(type_name),)
        return result

    def _order(self, exprs) -> list[Expr]:
        return sorted(
            exprs, key=lambda e: (-self.scorer.score_expression(e), print_expr(e))
        )

    # -- packaging -----------------------------------------------------------

    def candidates(self, target: str) -> list[CandidateExpression]:
        self.g.require_type(target)
        exprs = list(self.search(target, self.cfg.max_depth))
        if not exprs:
            exprs = [Placeholder(target)]
        local_names = {name for name, _ in self.locals}
        out = []
        for expr in exprs:
            unbound = sum(1 for n in free_var_names(expr) if n not in local_names)
            out.append(
                CandidateExpression(
                    expression=expr,
                    placeholder_count=placeholder_count(expr),
                    free_var_count=unbound,
                    popularity=self.scorer.score_expression(expr),
                    syntax_type=classify(expr),
                )
            )
        return out


def synthesize(
    locals_: list[tuple[str, str]],
    target: str,
    cfg: SynthConfig,
    g: ApiGraph,
    scorer: Optional[Scorer] = None,
) -> list[CandidateExpression]:
    """All well-typed candidate expressions for `target`, or exactly one
    placeholder when the bounded search finds nothing."""
    if not g.has_type(target):
        raise UnknownType(target)
    return Synthesizer(locals_, cfg, g, scorer).candidates(target)
