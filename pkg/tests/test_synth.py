"""Type-directed synthesis: bounded search, placeholders, descriptions."""

import copy
import json
import random
from pathlib import Path

import pytest

import astcheck
import genmodels
import oracles
from patternforge.apigraph import build_graph
from patternforge.errors import UnknownType
from patternforge.holes import ClusterConfig, cluster_coref, freeze_fixed, resolve_all
from patternforge.scs.nodes import Placeholder
from patternforge.scs.printer import print_expr
from patternforge.synth import SynthConfig, describe_group, synthesize

FIXTURES = Path(__file__).parent / "fixtures"


def prints(cands):
    return [print_expr(c.expression) for c in cands]


@pytest.fixture(scope="module")
def reduced_poi_doc(poi_doc):
    """poi-mini without InputStream.read, so int bottoms out as a placeholder."""
    doc = copy.deepcopy(poi_doc)
    for t in doc["types"]:
        if t["name"] == "InputStream":
            t["methods"] = [m for m in t.get("methods", []) if m["name"] != "read"]
    return doc


class TestSpecExamples:
    def test_fig4_chain_with_placeholder_ints(self, reduced_poi_doc):
        g = build_graph(reduced_poi_doc)
        got = prints(synthesize([("wb", "Workbook")], "Cell", SynthConfig(4, 50), g))
        assert "wb.createSheet().createRow(⟨int⟩).createCell(⟨int⟩)" in got

    def test_fig4_chain_on_full_graph_fills_int_args(self, poi_graph):
        """With InputStream.read available, the same chain synthesizes its int
        arguments instead of leaving placeholders."""
        got = prints(synthesize([("wb", "Workbook")], "Cell", SynthConfig(4, 50), poi_graph))
        assert (
            "wb.createSheet().createRow(⟨InputStream⟩.read())"
            ".createCell(new FileInputStream(⟨File⟩).read())" in got
        )
        assert not any("createRow(⟨int⟩)" in p for p in got)

    def test_enum_chain_for_short(self, poi_graph):
        got = prints(synthesize([], "short", SynthConfig(3, 50), poi_graph))
        assert "IndexedColors.RED.getIndex()" in got
        assert set(got) == {
            "IndexedColors.BLUE.getIndex()",
            "IndexedColors.GREEN.getIndex()",
            "IndexedColors.RED.getIndex()",
        }

    def test_unreachable_target_yields_exactly_one_placeholder(self, poi_graph):
        cands = synthesize([], "int", SynthConfig(1, 50), poi_graph)
        assert len(cands) == 1
        only = cands[0]
        assert isinstance(only.expression, Placeholder)
        assert print_expr(only.expression) == "⟨int⟩"
        assert only.placeholder_count == 1
        assert only.syntax_type == "MethodCall"

    def test_unknown_target_raises(self, poi_graph):
        with pytest.raises(UnknownType):
            synthesize([], "Ghost", SynthConfig(), poi_graph)


class TestSearchSemantics:
    def test_locals_are_leaves(self, poi_graph):
        got = prints(synthesize([("cell", "Cell")], "Cell", SynthConfig(1, 0), poi_graph))
        assert got == ["cell"]

    def test_assignable_local_counts(self, poi_graph):
        got = prints(synthesize([("x", "XSSFWorkbook")], "Workbook", SynthConfig(1, 0), poi_graph))
        assert "x" in got

    def test_deeper_search_keeps_complete_candidates(self, poi_graph):
        """Complete (placeholder-free) results are monotone in depth; the
        placeholder-bearing ones get superseded by concrete subexpressions."""
        def complete(depth):
            cands = synthesize([("wb", "Workbook")], "Sheet", SynthConfig(depth, 0), poi_graph)
            return {print_expr(c.expression) for c in cands if c.placeholder_count == 0}

        assert complete(2) <= complete(3) <= complete(4)
        shallow = prints(synthesize([("wb", "Workbook")], "Sheet", SynthConfig(2, 0), poi_graph))
        deep = prints(synthesize([("wb", "Workbook")], "Sheet", SynthConfig(3, 0), poi_graph))
        assert "wb.getSheet(⟨String⟩)" in shallow
        assert "wb.getSheet(⟨String⟩)" not in deep  # String became synthesizable
        assert len(deep) > len(shallow)

    def test_irrelevant_local_changes_nothing(self, poi_graph):
        base = prints(synthesize([("wb", "Workbook")], "Cell", SynthConfig(3, 0), poi_graph))
        extra = prints(
            synthesize(
                [("wb", "Workbook"), ("oops", "IOException")], "Cell", SynthConfig(3, 0), poi_graph
            )
        )
        assert base == extra

    def test_no_duplicate_prints(self, poi_graph):
        got = prints(synthesize([("wb", "Workbook")], "Cell", SynthConfig(4, 0), poi_graph))
        assert len(got) == len(set(got))

    def test_per_type_cap_limits_results(self, poi_graph):
        capped = synthesize([], "Sheet", SynthConfig(3, 2), poi_graph)
        uncapped = synthesize([], "Sheet", SynthConfig(3, 0), poi_graph)
        assert len(capped) == 2 < len(uncapped)
        assert prints(capped) == [
            "new HSSFWorkbook().createSheet()",
            "WorkbookFactory.create(⟨File⟩).createSheet()",
        ]

    def test_candidates_sorted_by_popularity_then_print(self, poi_graph):
        cands = synthesize([("wb", "Workbook")], "Cell", SynthConfig(4, 50), poi_graph)
        keys = [(-c.popularity, print_expr(c.expression)) for c in cands]
        assert keys == sorted(keys)

    def test_free_vars_always_bound_to_locals(self, poi_graph):
        cands = synthesize([("wb", "Workbook")], "Cell", SynthConfig(4, 50), poi_graph)
        assert all(c.free_var_count == 0 for c in cands)


class TestTypeChecking:
    def test_poi_candidates_type_check(self, poi_doc, poi_graph):
        index = oracles.ModelIndex(poi_doc)
        locals_ = [("wb", "Workbook"), ("cell", "Cell")]
        locals_map = dict(locals_)
        for target in ("Workbook", "Sheet", "Row", "Cell", "CellStyle", "short"):
            for cand in synthesize(locals_, target, SynthConfig(3, 0), poi_graph):
                astcheck.check(index, cand.expression, locals_map, target)
                assert cand.placeholder_count == sum(
                    1 for _ in _placeholders(cand.expression)
                )

    def test_random_graphs_match_enumeration_oracle(self):
        done = 0
        attempt = 0
        while done < 5:
            rng = random.Random(71_000 + attempt)
            attempt += 1
            made = genmodels.synth_model(rng)
            if made is None:
                continue
            doc, locals_, target, depth = made
            g = build_graph(doc)
            got = set(prints(synthesize(locals_, target, SynthConfig(depth, 0), g)))
            want = oracles.enumerate_terms(doc, locals_, target, depth)
            if not want:
                want = {f"{oracles.PHOLD_OPEN}{target}{oracles.PHOLD_CLOSE}"}
            assert got == set(want), (attempt, target, depth)
            done += 1


def _placeholders(expr):
    from patternforge.scs.nodes import walk

    return (n for n in walk(expr) if isinstance(n, Placeholder))


class TestDescribeGroup:
    @pytest.fixture()
    def groups(self, core_pattern, labeled_corpus):
        resolved = resolve_all(core_pattern, labeled_corpus)
        _, changeable = freeze_fixed(core_pattern, resolved, ClusterConfig())
        return cluster_coref(changeable, resolved, ClusterConfig())

    def test_param_doc_wins(self, groups, core_pattern, poi_graph):
        by_id = {g.id: g for g in groups}
        assert describe_group(by_id["group-2"], core_pattern, poi_graph) == "the color index to set"
        assert describe_group(by_id["group-3"], core_pattern, poi_graph) == "the fill pattern to use"

    def test_receiver_only_group_uses_class_name(self, groups, core_pattern, poi_graph):
        by_id = {g.id: g for g in groups}
        assert describe_group(by_id["group-0"], core_pattern, poi_graph) == "Workbook"
        assert describe_group(by_id["group-4"], core_pattern, poi_graph) == "Cell"

    def test_mixed_group_prefers_documented_param(self, groups, core_pattern, poi_graph):
        by_id = {g.id: g for g in groups}
        # group-1 holds two receivers and the documented setCellStyle param
        assert by_id["group-1"].hole_ids == ("hole-1", "hole-3", "hole-6")
        assert describe_group(by_id["group-1"], core_pattern, poi_graph) == "the style to apply"
