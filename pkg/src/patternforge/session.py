"""Interactive integration sessions: lifecycle, fills, undo, code emission,
and the rank-promotion simulation harness.

A session is a pure fold over its event list (one open event plus fills).
Undo refolds with the last fill removed, so replaying a persisted event log
always reproduces the exact state, including the emitted code bytes.  Events
are appended to a JSONL file per session when the engine has a data
directory.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .apigraph import ApiGraph
from .errors import (
    GroupAlreadyFilled,
    ModelMismatch,
    NoEmbedding,
    NoMatch,
    SessionIncomplete,
    TypeMismatch,
    UndoEmpty,
    UnknownCandidate,
    UnknownGroup,
    UnknownPattern,
    UnknownSession,
)
from .holes import (
    ClusterConfig,
    HoleGroup,
    HoleResolution,
    classify,
    cluster_coref,
    embed_pattern,
    freeze_fixed,
    resolve_all,
)
from .ranker import (
    ExampleRanking,
    PopularityModel,
    fit_popularity,
    rank_candidates,
    rerank_examples,
)
from .scs.nodes import (
    Constructor,
    Expr,
    FreeVar,
    Literal,
    MethodCall,
    NullConst,
    ScsExample,
    ScsPattern,
)
from .scs.parser import parse_example, tokenize
from .scs.printer import print_expr
from .synth import CandidateExpression, SynthConfig, Synthesizer, describe_group
from .typecheck import value_fits


@dataclass(frozen=True)
class PatternData:
    """Corpus-dependent analysis of one pattern, computed once."""

    pattern: ScsPattern
    examples: tuple[str, ...]  # ids of corpus examples the pattern embeds in
    resolutions: dict[str, list[HoleResolution]]
    fixed: dict[str, Expr]
    groups: tuple[HoleGroup, ...]
    priors: dict[str, float]


@dataclass(frozen=True)
class Session:
    id: str
    pattern_id: str
    context: tuple[tuple[str, str], ...]
    seed: int
    fixed: dict[str, Expr]
    groups: tuple[HoleGroup, ...]
    candidates: dict[str, tuple[CandidateExpression, ...]]
    assignments: dict[str, Expr]  # group id -> expression, in fill order
    ranking: ExampleRanking
    events: tuple[dict, ...]

    @property
    def complete(self) -> bool:
        return len(self.assignments) == len(self.groups)

    def group(self, group_id: str) -> HoleGroup:
        for g in self.groups:
            if g.id == group_id:
                return g
        raise UnknownGroup(group_id)


@dataclass(frozen=True)
class SimulationReport:
    pattern_id: str
    goal_example_id: str
    seed: int
    group_ids: tuple[str, ...]
    initial_rank: int
    trajectory: tuple[int, ...]  # goal rank after each fill
    bucket_ranks: tuple[Optional[int], ...]  # answer rank within its bucket
    mrr: float
    response_ms: tuple[float, ...]

    @property
    def final_rank(self) -> int:
        return self.trajectory[-1] if self.trajectory else self.initial_rank


def parse_expression_text(
    text: str, g: Optional[ApiGraph] = None, declared: str = "Tmp"
) -> Expr:
    """Parse a single expression by wrapping it in a declaration whose type
    constrains a bare free-variable expression."""
    example = parse_example(f"{declared} __it = {text};", graph=g)
    return example.statements[0].init


def parse_constant_text(text: str) -> Expr:
    """Parse a literal or null; anything else is a TypeMismatch."""
    tokens = tokenize(text.strip())
    if len(tokens) != 2:  # value + EOF
        raise TypeMismatch(f"not a constant: {text!r}")
    tok = tokens[0]
    if tok.kind == "INT":
        return Literal(int(tok.value), "int")
    if tok.kind == "LONG":
        return Literal(int(tok.value), "long")
    if tok.kind == "DOUBLE":
        return Literal(float(tok.value), "double")
    if tok.kind == "STRING":
        return Literal(tok.value, "string")
    if tok.kind == "CHAR":
        return Literal(tok.value, "char")
    if tok.kind in ("TRUE", "FALSE"):
        return Literal(tok.kind == "TRUE", "boolean")
    if tok.kind == "NULL":
        return NullConst()
    raise TypeMismatch(f"not a constant: {text!r}")


class SessionEngine:
    """Shared immutable data (graph, patterns, corpus, popularity) plus the
    per-session event folds.  Distinct sessions are independent; this object
    itself is safe for concurrent reads."""

    def __init__(
        self,
        graph: ApiGraph,
        patterns: list[ScsPattern],
        corpus: list[ScsExample],
        model: Optional[PopularityModel] = None,
        cluster_cfg: ClusterConfig = ClusterConfig(),
        synth_cfg: SynthConfig = SynthConfig(),
        data_dir: Optional[str | Path] = None,
    ):
        self.graph = graph
        self.patterns = {p.id: p for p in patterns}
        self.corpus = {e.id: e for e in corpus}
        if model is None:
            # popularity comes from the client corpus unless a fitted model
            # is supplied; an empty corpus falls back to smoothing-only
            model = (
                fit_popularity(corpus, graph)
                if corpus
                else PopularityModel({}, graph, 0)
            )
        self.model = model
        self.cluster_cfg = cluster_cfg
        self.synth_cfg = synth_cfg
        self.data_dir = Path(data_dir) if data_dir else None
        self.sessions: dict[str, Session] = {}
        self._pattern_data: dict[str, PatternData] = {}

    # -- pattern analysis ----------------------------------------------------

    def pattern_data(self, pattern_id: str) -> PatternData:
        cached = self._pattern_data.get(pattern_id)
        if cached is not None:
            return cached
        pattern = self.patterns.get(pattern_id)
        if pattern is None:
            raise UnknownPattern(pattern_id)
        for call in pattern.calls:
            if self.graph.resolve_call_token(call.method_token) is None:
                raise ModelMismatch(
                    f"pattern {pattern_id} call {call.method_token} not in the model"
                )
        corpus = list(self.corpus.values())
        resolutions = resolve_all(pattern, corpus)
        embedding = []
        for example in corpus:
            try:
                embed_pattern(pattern, example)
                embedding.append(example.id)
            except NoMatch:
                continue
        fixed, changeable = freeze_fixed(pattern, resolutions, self.cluster_cfg)
        groups = cluster_coref(changeable, resolutions, self.cluster_cfg)
        groups = tuple(
            replace(g, description=describe_group(g, pattern, self.graph))
            for g in groups
        )
        priors: dict[str, float] = {}
        for example_id in embedding:
            scores = []
            for group in groups:
                for res in resolutions.get(group.hole_ids[0], []):
                    if res.example_id == example_id:
                        scores.append(self.model.score_expression(res.expression))
                        break
            priors[example_id] = sum(scores) / len(scores) if scores else 0.0
        data = PatternData(
            pattern=pattern,
            examples=tuple(embedding),
            resolutions=resolutions,
            fixed=fixed,
            groups=groups,
            priors=priors,
        )
        self._pattern_data[pattern_id] = data
        return data

    # -- fold ------------------------------------------------------------------

    def _synthesize_group(
        self, group: HoleGroup, locals_: list[tuple[str, str]]
    ) -> tuple[CandidateExpression, ...]:
        synth = Synthesizer(locals_, self.synth_cfg, self.graph, self.model)
        return tuple(rank_candidates(synth.candidates(group.declared_type), self.model))

    def _session_locals(
        self, context: tuple[tuple[str, str], ...], groups: tuple[HoleGroup, ...],
        assignments: dict[str, Expr],
    ) -> list[tuple[str, str]]:
        locals_ = list(context)
        for i, group in enumerate(groups):
            if group.id in assignments:
                locals_.append((f"v{i}", group.declared_type))
        return locals_

    def _fold(self, events: list[dict], session_id: str) -> Session:
        if not events or events[0].get("type") != "open":
            raise ValueError("event log must start with an open event")
        head = events[0]
        pattern_id = head["pattern_id"]
        context = tuple((n, t) for n, t in head.get("context", []))
        seed = int(head.get("seed", 0))
        for _, type_name in context:
            if not self.graph.has_type(type_name):
                raise ModelMismatch(f"context type {type_name!r} not in the model")
        data = self.pattern_data(pattern_id)

        session = Session(
            id=session_id,
            pattern_id=pattern_id,
            context=context,
            seed=seed,
            fixed=dict(data.fixed),
            groups=data.groups,
            candidates={},
            assignments={},
            ranking=self._rank(data, {}, seed),
            events=(head,),
        )
        session = replace(session, candidates=self._refresh_candidates(session, data))
        for event in events[1:]:
            if event.get("type") != "fill":
                raise ValueError(f"unexpected event {event.get('type')!r} in fold")
            session = self._apply_fill(session, data, event)
        return session

    def _rank(
        self, data: PatternData, assignments: dict[str, Expr], seed: int
    ) -> ExampleRanking:
        examples = [self.corpus[eid] for eid in data.examples]
        return rerank_examples(
            examples, list(data.groups), data.resolutions, assignments, seed,
            priors=data.priors,
        )

    def _refresh_candidates(
        self, session: Session, data: PatternData
    ) -> dict[str, tuple[CandidateExpression, ...]]:
        locals_ = self._session_locals(session.context, session.groups, session.assignments)
        fresh: dict[str, tuple[CandidateExpression, ...]] = {}
        for group in session.groups:
            if group.id in session.assignments:
                fresh[group.id] = session.candidates.get(group.id, ())
            else:
                fresh[group.id] = self._synthesize_group(group, locals_)
        return fresh

    def _resolve_choice(self, session: Session, group: HoleGroup, choice: dict) -> Expr:
        if "candidate" in choice:
            wanted = choice["candidate"]
            for cand in session.candidates.get(group.id, ()):
                if print_expr(cand.expression) == wanted:
                    return cand.expression
            raise UnknownCandidate(f"{wanted!r} is not offered for {group.id}")
        if "constant" in choice:
            expr = parse_constant_text(choice["constant"])
            if not value_fits(expr, group.declared_type, self.graph):
                raise TypeMismatch(
                    f"constant {choice['constant']!r} does not fit {group.declared_type}"
                )
            return expr
        if "expression" in choice:
            expr = parse_expression_text(
                choice["expression"], self.graph, declared=group.declared_type
            )
            if not value_fits(expr, group.declared_type, self.graph):
                raise TypeMismatch(
                    f"expression {choice['expression']!r} does not fit {group.declared_type}"
                )
            return expr
        raise TypeMismatch(f"choice needs candidate, constant, or expression: {choice}")

    def _apply_fill(self, session: Session, data: PatternData, event: dict) -> Session:
        group_id = event["group_id"]
        group = session.group(group_id)  # raises UnknownGroup
        if group_id in session.assignments:
            raise GroupAlreadyFilled(group_id)
        expr = self._resolve_choice(session, group, event["choice"])
        assignments = dict(session.assignments)
        assignments[group_id] = expr
        session = replace(
            session,
            assignments=assignments,
            ranking=self._rank(data, assignments, session.seed),
            events=session.events + (event,),
        )
        return replace(session, candidates=self._refresh_candidates(session, data))

    # -- public session API ------------------------------------------------

    def open_session(
        self,
        pattern_id: str,
        context: list[tuple[str, str]] | tuple[tuple[str, str], ...] = (),
        seed: int = 0,
        session_id: Optional[str] = None,
    ) -> Session:
        session_id = session_id or uuid.uuid4().hex[:12]
        event = {
            "type": "open",
            "pattern_id": pattern_id,
            "context": [list(p) for p in context],
            "seed": seed,
        }
        session = self._fold([event], session_id)
        self.sessions[session_id] = session
        self._persist(session_id, event)
        return session

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise UnknownSession(session_id)
        return session

    def fill(self, session_id: str, group_id: str, choice: dict) -> Session:
        session = self.get_session(session_id)
        data = self.pattern_data(session.pattern_id)
        event = {"type": "fill", "group_id": group_id, "choice": choice}
        session = self._apply_fill(session, data, event)
        self.sessions[session_id] = session
        self._persist(session_id, event)
        return session

    def undo(self, session_id: str) -> Session:
        session = self.get_session(session_id)
        if len(session.events) <= 1:
            raise UndoEmpty(session_id)
        session = self._fold(list(session.events[:-1]), session_id)
        self.sessions[session_id] = session
        self._persist(session_id, {"type": "undo"})
        return session

    def replay(self, events: list[dict], session_id: str = "replay") -> Session:
        """Fold a persisted event log; undo events pop the previous fill."""
        effective: list[dict] = []
        for event in events:
            if event.get("type") == "undo":
                if effective and effective[-1].get("type") == "fill":
                    effective.pop()
            else:
                effective.append(event)
        return self._fold(effective, session_id)

    def load_session(self, session_id: str) -> Session:
        path = self._log_path(session_id)
        if path is None or not path.exists():
            raise UnknownSession(f"no session log {session_id!r}")
        events = [json.loads(line) for line in path.read_text().splitlines() if line]
        session = self.replay(events, session_id)
        self.sessions[session_id] = session
        return session

    def _log_path(self, session_id: str) -> Optional[Path]:
        if self.data_dir is None:
            return None
        return self.data_dir / "sessions" / f"{session_id}.jsonl"

    def _persist(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")

    # -- code emission -------------------------------------------------------

    def emit_code(self, session: Session) -> str:
        if not session.complete:
            missing = [g.id for g in session.groups if g.id not in session.assignments]
            raise SessionIncomplete(f"unassigned groups: {', '.join(missing)}")
        data = self.pattern_data(session.pattern_id)
        pattern = data.pattern

        var_of_hole: dict[str, Expr] = {}
        for i, group in enumerate(session.groups):
            for hole_id in group.hole_ids:
                var_of_hole[hole_id] = FreeVar(f"v{i}", group.declared_type)
        for hole_id, expr in session.fixed.items():
            var_of_hole[hole_id] = expr

        lines: list[str] = []
        for i, group in enumerate(session.groups):
            expr = session.assignments[group.id]
            lines.append(f"{group.declared_type} v{i} = {print_expr(expr)};")
        for call in pattern.calls:
            owner, _, name = call.method_token.rpartition(".")
            args = tuple(var_of_hole[h] for h in call.arg_holes)
            if name == "new":
                expr = Constructor(owner, args)
            elif call.receiver_hole is None:
                expr = MethodCall(owner, name, None, args, static=True)
            else:
                expr = MethodCall(owner, name, var_of_hole[call.receiver_hole], args)
            suffix = "" if call.control == "plain" else f"  // in {call.control}"
            lines.append(f"{print_expr(expr)};{suffix}")
        return "\n".join(lines)

    # -- simulation ------------------------------------------------------------

    def simulate(self, pattern_id: str, goal_example_id: str, seed: int) -> SimulationReport:
        data = self.pattern_data(pattern_id)
        goal = self.corpus.get(goal_example_id)
        if goal is None or goal_example_id not in data.examples:
            raise NoEmbedding(f"{pattern_id} does not embed in {goal_example_id!r}")

        session = self.open_session(pattern_id, goal.context_params, seed)
        initial_rank = session.ranking.rank_of(goal_example_id)
        trajectory: list[int] = []
        bucket_ranks: list[Optional[int]] = []
        response_ms: list[float] = []

        for group in session.groups:
            goal_expr = next(
                r.expression
                for r in data.resolutions[group.hole_ids[0]]
                if r.example_id == goal_example_id
            )
            goal_text = print_expr(goal_expr)
            bucket = classify(goal_expr)
            in_bucket = [
                c
                for c in session.candidates[group.id]
                if c.syntax_type == bucket
            ]
            rank = next(
                (
                    i + 1
                    for i, c in enumerate(in_bucket)
                    if print_expr(c.expression) == goal_text
                ),
                None,
            )
            bucket_ranks.append(rank)
            started = time.perf_counter()
            session = self.fill(
                session.id, group.id, {"expression": goal_text}
            )
            response_ms.append((time.perf_counter() - started) * 1000.0)
            trajectory.append(session.ranking.rank_of(goal_example_id))

        from .ranker import mrr as mean_reciprocal_rank

        return SimulationReport(
            pattern_id=pattern_id,
            goal_example_id=goal_example_id,
            seed=seed,
            group_ids=tuple(g.id for g in session.groups),
            initial_rank=initial_rank,
            trajectory=tuple(trajectory),
            bucket_ranks=tuple(bucket_ranks),
            mrr=mean_reciprocal_rank(bucket_ranks) if bucket_ranks else 0.0,
            response_ms=tuple(response_ms),
        )
