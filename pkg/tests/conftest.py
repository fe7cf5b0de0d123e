import json
from pathlib import Path
from types import SimpleNamespace

import pytest

import genmodels
from patternforge.apigraph import build_graph
from patternforge.miner import MinerConfig, mine
from patternforge.scs.corpus import load_corpus, load_corpus_text
from patternforge.session import SessionEngine

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def poi_doc():
    return json.loads((FIXTURES / "poi-mini.json").read_text())


@pytest.fixture(scope="session")
def poi_graph(poi_doc):
    return build_graph(poi_doc)


@pytest.fixture(scope="session")
def labeled_corpus(poi_graph):
    return load_corpus([FIXTURES / "corpus" / "labeled.scs"], graph=poi_graph)


@pytest.fixture(scope="session")
def control_corpus(poi_graph):
    return load_corpus([FIXTURES / "corpus" / "control.scs"], graph=poi_graph)


@pytest.fixture(scope="session")
def labels():
    return json.loads((FIXTURES / "labels.json").read_text())


@pytest.fixture(scope="session")
def poi_patterns(labeled_corpus, poi_graph):
    cfg = MinerConfig(min_support_fraction=0.6, min_length=3)
    return mine(labeled_corpus, cfg, poi_graph)


@pytest.fixture(scope="session")
def core_pattern(poi_patterns):
    """The 4-call styling chain every labeled example embeds."""
    return next(p for p in poi_patterns if p.support == 10)


@pytest.fixture()
def engine(poi_graph, poi_patterns, labeled_corpus, tmp_path):
    return SessionEngine(poi_graph, poi_patterns, labeled_corpus, data_dir=tmp_path)


@pytest.fixture(scope="session")
def promo():
    """100-example promotion corpus: 10 chains x (7 background + 3 goals)."""
    doc = genmodels.promo_model()
    text, goals = genmodels.promo_corpus()
    graph = build_graph(doc)
    corpus = load_corpus_text(text, graph=graph)
    patterns = mine(
        corpus, MinerConfig(min_support_fraction=0.075, min_length=3), graph
    )
    engine = SessionEngine(graph, patterns, corpus)
    return SimpleNamespace(
        doc=doc,
        graph=graph,
        corpus=corpus,
        patterns=patterns,
        engine=engine,
        goals=goals,
    )
