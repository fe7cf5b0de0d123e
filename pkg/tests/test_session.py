"""Session lifecycle: fills, undo, persistence replay, emission, simulation."""

import json

import pytest

from patternforge.errors import (
    GroupAlreadyFilled,
    ModelMismatch,
    NoEmbedding,
    SessionIncomplete,
    TypeMismatch,
    UndoEmpty,
    UnknownCandidate,
    UnknownGroup,
    UnknownPattern,
    UnknownSession,
)
from patternforge.scs.nodes import Literal, NullConst
from patternforge.scs.printer import print_expr
from patternforge.session import (
    SessionEngine,
    parse_constant_text,
    parse_expression_text,
)

CORE = "pat-08dffe4a1e"
CONTEXT = [("wb", "Workbook"), ("cell", "Cell")]
FILLS = [
    ("group-0", {"candidate": "wb"}),
    ("group-1", {"candidate": "wb.createCellStyle()"}),
    ("group-2", {"candidate": "IndexedColors.RED.getIndex()"}),
    ("group-3", {"candidate": "FillPatternType.SOLID_FOREGROUND"}),
    ("group-4", {"candidate": "cell"}),
]
EMITTED = """\
Workbook v0 = wb;
CellStyle v1 = wb.createCellStyle();
short v2 = IndexedColors.RED.getIndex();
FillPatternType v3 = FillPatternType.SOLID_FOREGROUND;
Cell v4 = cell;
v0.createCellStyle();
v1.setFillForegroundColor(v2);
v1.setFillPattern(v3);
v4.setCellStyle(v1);"""


def fill_all(engine, session):
    for gid, choice in FILLS:
        session = engine.fill(session.id, gid, choice)
    return session


class TestOpenSession:
    def test_initial_state(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        assert [(g.id, g.hole_ids, g.declared_type, g.description) for g in s.groups] == [
            ("group-0", ("hole-0",), "Workbook", "Workbook"),
            ("group-1", ("hole-1", "hole-3", "hole-6"), "CellStyle", "the style to apply"),
            ("group-2", ("hole-2",), "short", "the color index to set"),
            ("group-3", ("hole-4",), "FillPatternType", "the fill pattern to use"),
            ("group-4", ("hole-5",), "Cell", "Cell"),
        ]
        assert s.fixed == {}
        assert s.assignments == {}
        assert not s.complete
        assert set(s.candidates) == {g.id for g in s.groups}
        assert all(s.candidates[g.id] for g in s.groups)
        assert len(s.ranking.order) == 10  # every labeled example embeds

    def test_context_becomes_candidates(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        group0 = [print_expr(c.expression) for c in s.candidates["group-0"]]
        assert "wb" in group0
        # both are complete with popularity 1.0; print order breaks the tie
        assert group0[0] == "new HSSFWorkbook()" and group0[1] == "wb"

    def test_unknown_pattern(self, engine):
        with pytest.raises(UnknownPattern):
            engine.open_session("pat-nope", CONTEXT, seed=0)

    def test_context_type_must_exist(self, engine):
        with pytest.raises(ModelMismatch):
            engine.open_session(CORE, [("x", "Ghost")], seed=0)

    def test_get_unknown_session(self, engine):
        with pytest.raises(UnknownSession):
            engine.get_session("nope")


class TestFill:
    def test_choice_kinds(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        s = engine.fill(s.id, "group-0", {"candidate": "wb"})
        assert print_expr(s.assignments["group-0"]) == "wb"
        s = engine.fill(s.id, "group-2", {"constant": "42"})
        assert print_expr(s.assignments["group-2"]) == "42"
        s = engine.fill(s.id, "group-1", {"expression": "wb.createCellStyle()"})
        assert print_expr(s.assignments["group-1"]) == "wb.createCellStyle()"

    def test_filled_groups_add_session_locals(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        before = {print_expr(c.expression) for c in s.candidates["group-1"]}
        assert "v0.createCellStyle()" not in before
        s = engine.fill(s.id, "group-0", {"candidate": "wb"})
        after = {print_expr(c.expression) for c in s.candidates["group-1"]}
        assert "v0.createCellStyle()" in after

    def test_unknown_group(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(UnknownGroup):
            engine.fill(s.id, "group-99", {"candidate": "wb"})

    def test_double_fill_rejected(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        engine.fill(s.id, "group-0", {"candidate": "wb"})
        with pytest.raises(GroupAlreadyFilled):
            engine.fill(s.id, "group-0", {"candidate": "wb"})

    def test_unoffered_candidate_rejected(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(UnknownCandidate):
            engine.fill(s.id, "group-0", {"candidate": "workbookFromNowhere"})

    def test_constant_type_mismatch(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(TypeMismatch):
            engine.fill(s.id, "group-2", {"constant": "true"})

    def test_expression_type_mismatch(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(TypeMismatch):
            engine.fill(s.id, "group-1", {"expression": "wb.createSheet()"})

    def test_ranking_scores_non_increasing(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        s = fill_all(engine, s)
        scores = [score for _, score in s.ranking.order]
        assert scores == sorted(scores, reverse=True)


class TestUndo:
    def test_undo_fill_is_identity(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        before = engine.get_session(s.id)
        engine.fill(s.id, "group-0", {"candidate": "wb"})
        after = engine.undo(s.id)
        assert after == before

    def test_undo_empty_session(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(UndoEmpty):
            engine.undo(s.id)

    def test_undo_then_refill_differently(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        engine.fill(s.id, "group-2", {"constant": "42"})
        engine.undo(s.id)
        s = engine.fill(s.id, "group-2", {"candidate": "IndexedColors.RED.getIndex()"})
        assert print_expr(s.assignments["group-2"]) == "IndexedColors.RED.getIndex()"


class TestEmitCode:
    def test_incomplete_session_rejected(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        with pytest.raises(SessionIncomplete):
            engine.emit_code(s)

    def test_emitted_block_frozen(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        s = fill_all(engine, s)
        assert engine.emit_code(s) == EMITTED

    def test_emission_independent_of_fill_order(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        for gid, choice in reversed(FILLS):
            s = engine.fill(s.id, gid, choice)
        assert engine.emit_code(s) == EMITTED


class TestPersistence:
    def test_log_lines_match_events(self, engine, tmp_path):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        engine.fill(s.id, "group-0", {"candidate": "wb"})
        engine.undo(s.id)
        engine.fill(s.id, "group-0", {"candidate": "wb"})
        log = tmp_path / "sessions" / f"{s.id}.jsonl"
        events = [json.loads(line) for line in log.read_text().splitlines()]
        assert [e["type"] for e in events] == ["open", "fill", "undo", "fill"]

    def test_replayed_session_emits_identical_bytes(
        self, engine, tmp_path, poi_graph, poi_patterns, labeled_corpus
    ):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        s = fill_all(engine, s)
        engine.undo(s.id)
        s = engine.fill(s.id, "group-4", {"candidate": "cell"})
        want = engine.emit_code(s)

        fresh = SessionEngine(
            poi_graph, poi_patterns, labeled_corpus, data_dir=tmp_path
        )
        loaded = fresh.load_session(s.id)
        assert loaded == s
        assert fresh.emit_code(loaded).encode() == want.encode()

    def test_replay_folds_undo_events(self, engine):
        s = engine.open_session(CORE, CONTEXT, seed=11)
        engine.fill(s.id, "group-2", {"constant": "42"})
        reference = engine.undo(s.id)
        events = [
            {"type": "open", "pattern_id": CORE, "context": [list(p) for p in CONTEXT], "seed": 11},
            {"type": "fill", "group_id": "group-2", "choice": {"constant": "42"}},
            {"type": "undo"},
        ]
        replayed = engine.replay(events, session_id=s.id)
        assert replayed == reference

    def test_load_session_without_log(self, engine):
        with pytest.raises(UnknownSession):
            engine.load_session("missing-session")


class TestSimulate:
    def test_frozen_report_ex02(self, engine):
        r = engine.simulate(CORE, "ex-02", 3)
        assert r.pattern_id == CORE and r.goal_example_id == "ex-02" and r.seed == 3
        assert r.group_ids == ("group-0", "group-1", "group-2", "group-3", "group-4")
        assert r.initial_rank == 1
        assert r.trajectory == (1, 1, 1, 1, 1)
        assert r.bucket_ranks == (2, None, 2, 5, None)
        assert r.mrr == pytest.approx(0.24)
        assert r.final_rank == 1
        assert len(r.response_ms) == 5 and all(ms >= 0 for ms in r.response_ms)

    def test_frozen_report_ex05(self, engine):
        r = engine.simulate(CORE, "ex-05", 3)
        assert r.initial_rank == 6
        assert r.trajectory == (1, 1, 1, 1, 1)
        assert r.bucket_ranks == (1, 3, 1, 4, 1)
        assert r.mrr == pytest.approx(43 / 60)

    def test_trajectory_never_rises(self, engine):
        for goal in ("ex-01", "ex-03", "ex-08"):
            r = engine.simulate(CORE, goal, 17)
            assert list(r.trajectory) == sorted(r.trajectory, reverse=True)
            assert r.final_rank == 1

    def test_unembedded_goal_rejected(self, engine):
        with pytest.raises(NoEmbedding):
            engine.simulate(CORE, "ex-99", 3)


class TestExpressionParsing:
    def test_constants(self):
        assert parse_constant_text("42") == Literal(42, "int")
        assert parse_constant_text("5L") == Literal(5, "long")
        assert parse_constant_text("2.5") == Literal(2.5, "double")
        assert parse_constant_text('"hi"') == Literal("hi", "string")
        assert parse_constant_text("'x'") == Literal("x", "char")
        assert parse_constant_text("true") == Literal(True, "boolean")
        assert parse_constant_text("null") == NullConst()

    def test_non_constants_rejected(self):
        with pytest.raises(TypeMismatch):
            parse_constant_text("wb")
        with pytest.raises(TypeMismatch):
            parse_constant_text("1 2")

    def test_expression_text_round_trip(self, poi_graph):
        expr = parse_expression_text("IndexedColors.RED.getIndex()", poi_graph, "short")
        assert print_expr(expr) == "IndexedColors.RED.getIndex()"
