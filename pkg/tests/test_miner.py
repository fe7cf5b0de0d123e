"""Closed frequent call-subsequence mining."""

import json
import random
from pathlib import Path

import pytest

import genmodels
import oracles
from patternforge.apigraph import build_graph
from patternforge.errors import UnknownMethodToken
from patternforge.miner import (
    MinerConfig,
    extract_holes,
    load_patterns,
    mine,
    package_pattern,
    pattern_id,
    save_patterns,
    support_threshold,
)
from patternforge.scs.corpus import load_corpus_text

FIXTURES = Path(__file__).parent / "fixtures"

TRIPLE_DOC = {
    "name": "triple",
    "types": [
        {
            "name": "A",
            "kind": "class",
            "methods": [
                {"name": "m1", "params": [], "static": True},
                {"name": "m2", "params": [], "static": True},
                {"name": "m3", "params": [], "static": True},
            ],
        }
    ],
}


def triple_corpus(g):
    text = "\n".join(
        f"#example e{i}\nA.m1();\nA.m2();\nA.m3();\n#end" for i in range(3)
    )
    return load_corpus_text(text, graph=g)


class TestSpecExamples:
    def test_three_identical_examples_yield_single_closed_pattern(self):
        g = build_graph(TRIPLE_DOC)
        pats = mine(triple_corpus(g), MinerConfig(0.05, 3), g)
        assert [(p.tokens, p.support) for p in pats] == [(("A.m1", "A.m2", "A.m3"), 3)]

    def test_closed_filter_drops_equal_support_subsequence(self):
        g = build_graph(TRIPLE_DOC)
        pats = mine(triple_corpus(g), MinerConfig(0.05, 2), g)
        tokens = [p.tokens for p in pats]
        assert ("A.m1", "A.m2", "A.m3") in tokens
        assert ("A.m1", "A.m2") not in tokens  # support 3 == superseq's support

    def test_empty_corpus_rejected(self, poi_graph):
        with pytest.raises(ValueError):
            mine([], MinerConfig(), poi_graph)

    def test_unknown_call_token(self, poi_graph):
        corpus = load_corpus_text("#example x\nwb.createCellStyle();\n#end", graph=poi_graph)
        with pytest.raises(UnknownMethodToken):
            mine(corpus, MinerConfig(), build_graph(TRIPLE_DOC))
        assert mine(corpus, MinerConfig(0.05, 1), poi_graph)


class TestSupportThreshold:
    def test_values(self):
        assert support_threshold(10, 0.05) == 1
        assert support_threshold(100, 0.05) == 5
        assert support_threshold(10, 1.0) == 10
        assert support_threshold(1, 0.05) == 1
        assert support_threshold(10, 0.61) == 7

    def test_never_below_one(self):
        assert support_threshold(0, 0.05) == 1


class TestLabeledCorpus:
    def test_frozen_patterns(self, poi_patterns):
        assert [(p.id, p.support, p.tokens) for p in poi_patterns] == [
            (
                "pat-08dffe4a1e",
                10,
                (
                    "Workbook.createCellStyle",
                    "CellStyle.setFillForegroundColor",
                    "CellStyle.setFillPattern",
                    "Cell.setCellStyle",
                ),
            ),
            (
                "pat-7f2098b841",
                7,
                (
                    "Workbook.createCellStyle",
                    "IndexedColors.getIndex",
                    "CellStyle.setFillForegroundColor",
                    "CellStyle.setFillPattern",
                    "Cell.setCellStyle",
                ),
            ),
        ]

    def test_fig1_holes(self, core_pattern):
        """The 4-call fill-style sequence needs receivers for the style, the
        cell and the workbook plus the color, pattern and style arguments."""
        assert [(h.id, h.call_index, h.slot, h.index, h.declared_type) for h in core_pattern.holes] == [
            ("hole-0", 0, "receiver", 0, "Workbook"),
            ("hole-1", 1, "receiver", 0, "CellStyle"),
            ("hole-2", 1, "param", 0, "short"),
            ("hole-3", 2, "receiver", 0, "CellStyle"),
            ("hole-4", 2, "param", 0, "FillPatternType"),
            ("hole-5", 3, "receiver", 0, "Cell"),
            ("hole-6", 3, "param", 0, "CellStyle"),
        ]

    def test_description(self, core_pattern):
        assert core_pattern.description == (
            "createCellStyle then setFillForegroundColor then setFillPattern then setCellStyle"
        )

    def test_pattern_id_is_token_hash(self, core_pattern):
        assert core_pattern.id == pattern_id(core_pattern.tokens)

    def test_corpus_order_insensitive(self, poi_graph, labeled_corpus, poi_patterns):
        shuffled = list(labeled_corpus)
        random.Random(7).shuffle(shuffled)
        assert mine(shuffled, MinerConfig(0.6, 3), poi_graph) == poi_patterns

    def test_denylist(self, poi_graph, labeled_corpus):
        pats = mine(
            labeled_corpus, MinerConfig(0.6, 3), poi_graph, denylist={"pat-08dffe4a1e"}
        )
        assert [p.id for p in pats] == ["pat-7f2098b841"]


class TestControlContext:
    def test_zero_holes_for_static_no_arg_call(self):
        g = build_graph(TRIPLE_DOC)
        assert extract_holes(package_pattern(("A.m1",), 1, g).calls, g) == []

    def test_nested_control_tags(self, poi_graph, control_corpus):
        pats = mine(control_corpus, MinerConfig(0.25, 2), poi_graph)
        by_tokens = {p.tokens: p for p in pats}
        nested = by_tokens[
            (
                "TRY",
                "Row.getZeroHeight",
                "IF",
                "Workbook.createSheet",
                "Sheet.autoSizeColumn",
                "END-IF",
                "CATCH(IOException)",
                "IOException.getMessage",
                "END-TRY",
            )
        ]
        assert [c.control for c in nested.calls] == ["try", "if", "if", "try"]
        handler = by_tokens[("TRY", "CATCH(IOException)", "IOException.getMessage", "END-TRY")]
        assert [c.control for c in handler.calls] == ["try"]

    def test_unmatched_markers_tolerated(self, poi_graph):
        dangling_closer = package_pattern(("END-IF", "Workbook.createCellStyle"), 1, poi_graph)
        assert [c.control for c in dangling_closer.calls] == ["plain"]
        dangling_opener = package_pattern(("TRY", "Workbook.createCellStyle"), 1, poi_graph)
        assert [c.control for c in dangling_opener.calls] == ["try"]


class TestManifestReplay:
    def test_168_pattern_hole_counts(self, poi_graph):
        manifest = json.loads((FIXTURES / "hole_manifest.json").read_text())
        graphs = {
            "poi-mini": poi_graph,
            "promo": build_graph(genmodels.promo_model()),
            "perf": build_graph(genmodels.perf_model()),
        }
        total = 0
        assert len(manifest["patterns"]) == 168
        for entry in manifest["patterns"]:
            g = graphs[entry["model"]]
            pattern = package_pattern(tuple(entry["tokens"]), 1, g)
            assert len(pattern.holes) == entry["holes"], entry
            total += len(pattern.holes)
        assert total == manifest["total_holes"] == 1236


class TestOracleFuzz:
    def test_small_random_corpora_match_oracle(self):
        for trial in range(10):
            rng = random.Random(61_000 + trial)
            doc, text, sequences, cfg, min_support = genmodels.miner_corpus(rng)
            g = build_graph(doc)
            corpus = load_corpus_text(text, graph=g)
            got = {
                (p.tokens, p.support)
                for p in mine(corpus, MinerConfig(**cfg), g)
            }
            want = oracles.closed_frequent_subsequences(sequences, min_support, cfg["min_length"])
            assert got == {(seq, sup) for seq, sup in want.items()}, trial

    def test_outputs_respect_threshold_length_and_closedness(self, poi_patterns):
        threshold = support_threshold(10, 0.6)
        for p in poi_patterns:
            assert p.support >= threshold and len(p.tokens) >= 3
        for p in poi_patterns:
            for q in poi_patterns:
                if p is not q and p.support == q.support:
                    assert not oracles.contains_subsequence(q.tokens, p.tokens)


class TestPersistence:
    def test_save_load_round_trip(self, poi_patterns, tmp_path):
        path = tmp_path / "patterns.json"
        save_patterns(poi_patterns, path)
        assert load_patterns(path) == poi_patterns
