"""patternforge: mine API usage patterns, synthesize their missing
expressions, and drive interactive integration sessions."""

from .apigraph import ApiGraph, Creator, build_graph, load_graph, load_model
from .errors import PatternForgeError
from .holes import (
    ClusterConfig,
    CoRefMatrix,
    HoleGroup,
    HoleResolution,
    SYNTAX_TYPES,
    classify,
    cluster_coref,
    freeze_fixed,
    resolve_all,
    resolve_hole,
)
from .miner import MinerConfig, load_patterns, mine, save_patterns
from .ranker import (
    ExampleRanking,
    PopularityModel,
    fit_popularity,
    mrr,
    rank_candidates,
    rerank_examples,
    score_expression,
)
from .scs import ScsExample, ScsPattern, load_corpus, parse_example, print_example
from .session import Session, SessionEngine, SimulationReport
from .synth import CandidateExpression, SynthConfig, describe_group, synthesize

__version__ = "0.1.0"

__all__ = [
    "ApiGraph",
    "CandidateExpression",
    "ClusterConfig",
    "CoRefMatrix",
    "Creator",
    "ExampleRanking",
    "HoleGroup",
    "HoleResolution",
    "MinerConfig",
    "PatternForgeError",
    "PopularityModel",
    "SYNTAX_TYPES",
    "ScsExample",
    "ScsPattern",
    "Session",
    "SessionEngine",
    "SimulationReport",
    "SynthConfig",
    "build_graph",
    "classify",
    "cluster_coref",
    "describe_group",
    "fit_popularity",
    "freeze_fixed",
    "load_corpus",
    "load_graph",
    "load_model",
    "load_patterns",
    "mine",
    "mrr",
    "parse_example",
    "print_example",
    "rank_candidates",
    "rerank_examples",
    "resolve_all",
    "resolve_hole",
    "save_patterns",
    "score_expression",
    "synthesize",
    "__version__",
]
