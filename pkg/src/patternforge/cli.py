"""Command-line interface.

Subcommands cover the pipeline end to end: build-kg validates and caches an
API model, mine extracts patterns from a corpus, analyze reports hole groups
for one pattern, synth lists ranked candidate expressions for a type,
simulate replays goal examples and renders a CSV report with figures, and
serve starts the local HTTP service.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .apigraph import build_graph, load_model
from .errors import PatternForgeError
from .holes import ClusterConfig, build_coref_matrix, cluster_coref, freeze_fixed, resolve_all, frequency_table
from .miner import MinerConfig, load_patterns, mine, pattern_to_document, save_patterns
from .ranker import fit_popularity, rank_candidates, PopularityModel
from .scs.corpus import load_corpus
from .scs.printer import print_expr, print_pattern
from .session import SessionEngine
from .synth import SynthConfig, synthesize


def _load_graph_arg(path: str):
    return build_graph(load_model(path))


def _corpus_paths(raw: list[str]) -> list[Path]:
    return [Path(p) for p in raw]


def cmd_build_kg(args) -> int:
    graph = _load_graph_arg(args.model)
    graph.dump(args.out)
    print(f"model {graph.model_hash}: {graph.member_count()} members -> {args.out}")
    return 0


def _read_denylist(path: str | None) -> set[str]:
    if not path or not Path(path).exists():
        return set()
    lines = Path(path).read_text().splitlines()
    return {ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")}


def cmd_mine(args) -> int:
    graph = _load_graph_arg(args.model)
    corpus = load_corpus(_corpus_paths(args.corpus), graph=graph)
    cfg = MinerConfig(
        min_support_fraction=args.min_support,
        min_length=args.min_length,
        closed_only=not args.all_frequent,
    )
    patterns = mine(corpus, cfg, graph, denylist=_read_denylist(args.denylist))
    save_patterns(patterns, args.out)
    print(f"{len(corpus)} examples -> {len(patterns)} patterns -> {args.out}")
    if args.review:
        review = [
            {"id": p.id, "support": p.support, "description": p.description,
             "text": print_pattern(p)}
            for p in patterns
        ]
        Path(args.review).write_text(json.dumps(review, indent=2) + "\n")
        print(f"review listing -> {args.review} (reject ids via --denylist)")
    return 0


def cmd_analyze(args) -> int:
    graph = _load_graph_arg(args.model)
    corpus = load_corpus(_corpus_paths(args.corpus), graph=graph)
    patterns = {p.id: p for p in load_patterns(args.patterns)}
    pattern = patterns.get(args.pattern)
    if pattern is None:
        print(f"no pattern {args.pattern!r} in {args.patterns}", file=sys.stderr)
        return 2
    cfg = ClusterConfig(
        fixed_threshold=args.fixed_threshold, coref_threshold=args.coref_threshold
    )
    resolutions = resolve_all(pattern, corpus)
    fixed, changeable = freeze_fixed(pattern, resolutions, cfg)
    matrix = build_coref_matrix(changeable, resolutions)
    groups = cluster_coref(changeable, resolutions, cfg)
    doc = {
        "pattern": pattern_to_document(pattern),
        "fixed": {hole_id: print_expr(e) for hole_id, e in fixed.items()},
        "changeable": [h.id for h in changeable],
        "degree": matrix.degree,
        "groups": [
            {
                "id": g.id,
                "holes": list(g.hole_ids),
                "declared_type": g.declared_type,
            }
            for g in groups
        ],
        "frequencies": {
            hole.id: [
                {"expression": text, "count": count}
                for text, count, _ in frequency_table(resolutions.get(hole.id, []))
            ]
            for hole in pattern.holes
        },
    }
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    print(
        f"{len(fixed)} fixed, {len(changeable)} changeable -> "
        f"{len(groups)} groups -> {args.out}"
    )
    return 0


def _parse_locals(raw: str) -> list[tuple[str, str]]:
    out = []
    for chunk in filter(None, (c.strip() for c in raw.split(","))):
        name, sep, type_name = chunk.partition(":")
        if not sep:
            raise ValueError(f"locals entry {chunk!r} must look like name:Type")
        out.append((name.strip(), type_name.strip()))
    return out


def cmd_synth(args) -> int:
    graph = _load_graph_arg(args.model)
    if args.corpus:
        corpus = load_corpus(_corpus_paths(args.corpus), graph=graph)
        model = fit_popularity(corpus, graph)
    else:
        model = PopularityModel({}, graph, 0)
    cfg = SynthConfig(max_depth=args.max_depth, per_type_cap=args.cap)
    locals_ = _parse_locals(args.locals) if args.locals else []
    candidates = rank_candidates(
        synthesize(locals_, args.target, cfg, graph, model), model
    )
    for i, cand in enumerate(candidates[: args.top], start=1):
        print(
            f"{i:3d}. {print_expr(cand.expression)}"
            f"  [{cand.syntax_type}, p={cand.popularity:.4f},"
            f" placeholders={cand.placeholder_count}]"
        )
    if not candidates:
        print("no candidates")
    return 0


def _build_engine(args) -> SessionEngine:
    graph = _load_graph_arg(args.model)
    corpus = load_corpus(_corpus_paths(args.corpus), graph=graph)
    if args.patterns and Path(args.patterns).exists():
        patterns = load_patterns(args.patterns)
    else:
        patterns = mine(corpus, MinerConfig(), graph)
    model = fit_popularity(corpus, graph)
    return SessionEngine(
        graph,
        patterns,
        corpus,
        model,
        synth_cfg=SynthConfig(max_depth=args.max_depth),
    )


def cmd_simulate(args) -> int:
    from .report import write_report

    engine = _build_engine(args)
    reports = []
    for goal in args.goal:
        pattern_id = args.pattern
        if not pattern_id:
            pattern_id = next(
                (
                    pid
                    for pid in sorted(
                        engine.patterns, key=lambda p: -engine.patterns[p].support
                    )
                    if goal in engine.pattern_data(pid).examples
                ),
                None,
            )
            if pattern_id is None:
                print(f"no pattern embeds in goal {goal!r}", file=sys.stderr)
                return 2
        report = engine.simulate(pattern_id, goal, args.seed)
        reports.append(report)
        path = " -> ".join(str(r) for r in report.trajectory)
        print(
            f"{goal}: initial {report.initial_rank}, trajectory {path or '(no holes)'}, "
            f"final {report.final_rank}, MRR {report.mrr:.4f}"
        )
    written = write_report(reports, args.report)
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    data = Path(args.data)
    model_path = data / "model.json"
    graph = _load_graph_arg(str(model_path))
    corpus_dir = data / "corpus"
    corpus = load_corpus(corpus_dir, graph=graph)
    patterns_path = data / "patterns.json"
    if patterns_path.exists():
        patterns = load_patterns(patterns_path)
    else:
        patterns = mine(corpus, MinerConfig(), graph)
    popularity_path = data / "popularity.json"
    if popularity_path.exists():
        model = PopularityModel.from_document(
            json.loads(popularity_path.read_text()), graph
        )
    else:
        model = fit_popularity(corpus, graph)
    engine = SessionEngine(graph, patterns, corpus, model, data_dir=data)
    app = build_app(engine)
    print(f"serving {len(patterns)} patterns, {len(corpus)} examples on :{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patternforge",
        description="Mine API usage patterns and synthesize their missing expressions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kg", help="validate an API model and write the graph cache")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_kg)

    p = sub.add_parser("mine", help="mine closed frequent call patterns from a corpus")
    p.add_argument("--corpus", required=True, nargs="+")
    p.add_argument("--model", required=True)
    p.add_argument("--min-support", type=float, default=0.05)
    p.add_argument("--min-length", type=int, default=3)
    p.add_argument("--all-frequent", action="store_true",
                   help="keep non-closed sequences too")
    p.add_argument("--out", required=True)
    p.add_argument("--review", help="also write a human-review listing")
    p.add_argument("--denylist", help="file of rejected pattern ids, one per line")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("analyze", help="hole resolution, freezing, and co-reference groups")
    p.add_argument("--pattern", required=True)
    p.add_argument("--patterns", required=True, help="patterns.json from mine")
    p.add_argument("--corpus", required=True, nargs="+")
    p.add_argument("--model", required=True)
    p.add_argument("--fixed-threshold", type=float, default=0.5)
    p.add_argument("--coref-threshold", type=float, default=0.8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="synthesize ranked expressions for a target type")
    p.add_argument("--model", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--locals", default="", help='comma list like "wb:Workbook,row:Row"')
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--cap", type=int, default=50)
    p.add_argument("--top", type=int, default=25)
    p.add_argument("--corpus", nargs="*", help="optional corpus for popularity fitting")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="replay goal examples and report rank promotion")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True, nargs="+")
    p.add_argument("--patterns", help="patterns.json; mined on the fly when absent")
    p.add_argument("--pattern", help="pattern id; defaults to the best-supported match")
    p.add_argument("--goal", required=True, action="append")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--report", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="start the local HTTP/JSON service")
    p.add_argument("--port", type=int, default=8715)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--data", required=True,
                   help="directory with model.json, corpus/, optional patterns.json")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PatternForgeError as error:
        print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
