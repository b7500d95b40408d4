"""Command-line interface.

Subcommands mirror the pipeline stages; each stage can be re-run on its
own from the files persisted in the output directory. ``run`` executes
everything in one go.

Exit codes: 0 success (warnings allowed), 1 usage error, 2 input/parse
fatal error, 3 internal-consistency error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, community, corpus, features, graph, pipeline, report

log = logging.getLogger("reqnet")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common_out(p):
    p.add_argument("--out", default="out", help="output directory")


def _add_input(p):
    p.add_argument("--input", required=True, help="input file")
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reqnet",
                     description="Feature-request co-occurrence network analysis")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse/clean an export into corpus.jsonl")
    _add_input(p)
    _add_common_out(p)
    p.add_argument("--schedule", help="android-preset or a schedule JSON path")

    p = sub.add_parser("extract", help="noun features + unigram/pair counts")
    p.add_argument("--input", help="corpus.jsonl (default: <out>/corpus.jsonl) "
                                   "or a pretagged text file")
    p.add_argument("--tagger", choices=["builtin", "pretagged"],
                   default="builtin")
    p.add_argument("--pretagged-file", action="store_true",
                   help="input is '#doc'-delimited token_TAG text")
    p.add_argument("--stopwords", help="stopword file, one word per line")
    p.add_argument("--issue-type", default="enhancement",
                   choices=list(corpus.ISSUE_TYPES) + ["all"])
    _add_common_out(p)

    p = sub.add_parser("graph", help="threshold counts into a network")
    p.add_argument("--min-unigram", type=int, default=1)
    p.add_argument("--min-pair", type=int, default=1)
    p.add_argument("--keep-isolated", action="store_true")
    p.add_argument("--export", action="append", choices=list(graph.EXPORT_FORMATS),
                   default=None, help="repeatable; default csv")
    _add_common_out(p)

    p = sub.add_parser("metrics", help="degree/closeness/clustering per vertex")
    _add_common_out(p)

    p = sub.add_parser("communities", help="greedy modularity communities")
    _add_common_out(p)

    p = sub.add_parser("tiers", help="high/medium/low tertiles per metric")
    p.add_argument("--top-k", type=int, default=10)
    _add_common_out(p)

    p = sub.add_parser("stats", help="tier normality/KW/MW tests per metric")
    _add_common_out(p)

    p = sub.add_parser("report", help="assemble report.json from intermediates")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--no-figures", action="store_true")
    _add_common_out(p)

    p = sub.add_parser("run", help="full pipeline")
    _add_input(p)
    p.add_argument("--tagger", choices=["builtin", "pretagged"], default="builtin")
    p.add_argument("--stopwords")
    p.add_argument("--issue-type", default="enhancement",
                   choices=list(corpus.ISSUE_TYPES) + ["all"])
    p.add_argument("--min-unigram", type=int, default=1)
    p.add_argument("--min-pair", type=int, default=1)
    p.add_argument("--keep-isolated", action="store_true")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--schedule")
    p.add_argument("--export", action="append",
                   choices=list(graph.EXPORT_FORMATS), default=None)
    p.add_argument("--no-figures", action="store_true")
    _add_common_out(p)

    return parser


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_counts(out: Path):
    with open(out / "unigrams.csv", "r", encoding="utf-8", newline="") as fh:
        unigrams = features.read_unigrams_csv(fh)
    with open(out / "pairs.csv", "r", encoding="utf-8", newline="") as fh:
        pairs = features.read_pairs_csv(fh)
    n_docs = 0
    docfile = out / "features.jsonl"
    if docfile.exists():
        n_docs = sum(1 for line in docfile.read_text(encoding="utf-8").splitlines()
                     if line.strip())
    return (features.UnigramCounts(unigrams.counts, n_docs),
            features.PairCounts(pairs.counts, n_docs))


def _load_graph(out: Path) -> graph.FeatureGraph:
    with open(out / "edges.csv", "r", encoding="utf-8", newline="") as fh:
        return graph.read_edges_csv(fh)


def _load_metrics(out: Path) -> dict[str, graph.VertexMetrics]:
    metrics = {}
    lines = (out / "metrics.csv").read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:
        if not line.strip():
            continue
        v, deg, clo, clu = line.split(",")[:4]
        metrics[v] = graph.VertexMetrics(v, int(deg), float(clo), float(clu))
    return metrics


def cmd_ingest(args) -> int:
    out = _out(args)
    cfg = pipeline.PipelineConfig(input_path=args.input,
                                  input_format=args.format,
                                  out_dir=str(out))
    snapshot, rejects = pipeline.ingest_stage(cfg, out)
    print("parsed %d records, %d rejects" % (len(snapshot), len(rejects)))
    if args.schedule:
        schedule = corpus.load_schedule(args.schedule)
        result = corpus.partition_by_release(snapshot, schedule)
        lines = ["window,days,total_requests,mean_per_day"]
        for s in result.stats:
            lines.append("%s,%d,%d,%r" % (s.window.name, s.days,
                                          s.total_requests, s.mean_per_day))
        (out / "release_stats.csv").write_text("\n".join(lines) + "\n",
                                               encoding="utf-8")
    return EXIT_OK


def cmd_extract(args) -> int:
    out = _out(args)
    if args.pretagged_file:
        path = Path(args.input) if args.input else None
        if path is None or not path.exists():
            log.error("pretagged input file required")
            return EXIT_INPUT
        with open(path, "r", encoding="utf-8") as fh:
            raw_docs, errors = features.read_pretagged(fh)
        for err in errors:
            log.warning(err)
        tagger = features.PretaggedTagger()
        docs = [features.extract_features(tagger.tag(toks), doc_id)
                for doc_id, toks in raw_docs]
        unigrams = features.unigram_document_frequency(docs)
        pairs = features.pair_document_frequency(docs)
        with open(out / "unigrams.csv", "w", encoding="utf-8", newline="") as fh:
            features.write_unigrams_csv(unigrams, fh)
        with open(out / "pairs.csv", "w", encoding="utf-8", newline="") as fh:
            features.write_pairs_csv(pairs, fh)
        with open(out / "features.jsonl", "w", encoding="utf-8") as fh:
            for doc in docs:
                fh.write(json.dumps({"doc_id": doc.doc_id,
                                     "features": sorted(doc.features)},
                                    sort_keys=True) + "\n")
        print("extracted %d features over %d docs"
              % (len(unigrams.counts), unigrams.n_docs))
        return EXIT_OK

    corpus_path = Path(args.input) if args.input else out / "corpus.jsonl"
    if not corpus_path.exists():
        log.error("corpus file not found: %s (run `reqnet ingest` first)", corpus_path)
        return EXIT_INPUT
    with open(corpus_path, "r", encoding="utf-8") as fh:
        snapshot, _ = corpus.parse_records(fh, "jsonl")
    if args.issue_type != "all":
        snapshot = corpus.filter_by_type(snapshot, args.issue_type)
    cfg = pipeline.PipelineConfig(input_path=str(corpus_path),
                                  tagger=args.tagger,
                                  stopwords_path=args.stopwords,
                                  out_dir=str(out))
    docs, unigrams, pairs = pipeline.extract_stage(cfg, snapshot, out)
    print("extracted %d features over %d docs"
          % (len(unigrams.counts), unigrams.n_docs))
    return EXIT_OK


def cmd_graph(args) -> int:
    out = _out(args)
    unigrams, pairs = _load_counts(out)
    g = graph.build_graph(pairs, unigrams, args.min_unigram, args.min_pair,
                          keep_isolated=args.keep_isolated)
    if g.n_vertices == 0:
        log.warning("graph is empty at these thresholds")
    formats = args.export or ["csv"]
    if "csv" not in formats:
        formats = ["csv"] + formats  # edges.csv feeds the later stages
    names = {"csv": "edges.csv", "dot": "graph.dot", "graphml": "graph.graphml"}
    for fmt in formats:
        (out / names[fmt]).write_bytes(graph.export_graph(g, fmt=fmt))
    print("graph: %d vertices, %d edges" % (g.n_vertices, g.n_edges))
    return EXIT_OK


def cmd_metrics(args) -> int:
    out = _out(args)
    g = _load_graph(out)
    metrics = graph.compute_metrics(g)
    pipeline.write_metrics_csv(metrics, {}, out)
    print("metrics for %d vertices" % len(metrics))
    return EXIT_OK


def cmd_communities(args) -> int:
    out = _out(args)
    g = _load_graph(out)
    part = community.detect_communities_cnm(g)
    lines = ["vertex,community"]
    lines += ["%s,%d" % (v, part.assignment[v]) for v in sorted(part.assignment)]
    (out / "communities.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    dlines = ["step,merged_a,merged_b,q_after"]
    dlines += ["%d,%s,%s,%r" % (s, a, b, q) for s, (a, b), q in part.dendrogram]
    (out / "dendrogram.csv").write_text("\n".join(dlines) + "\n", encoding="utf-8")
    print("%d communities, Q=%.6f" % (part.n_communities, part.modularity))
    return EXIT_OK


def cmd_tiers(args) -> int:
    out = _out(args)
    metrics = _load_metrics(out)
    if len(metrics) < 3:
        log.warning("fewer than 3 vertices; tier stage skipped")
        return EXIT_OK
    for metric in report.METRIC_NAMES:
        values = {v: float(getattr(m, metric)) for v, m in metrics.items()}
        assignment = report.tertile_partition(values, metric)
        lines = ["tier,vertex,value"]
        for tier in report.TIER_NAMES:
            for v, val in assignment.tiers[tier]:
                lines.append("%s,%s,%r" % (tier, v, val))
        (out / ("tiers_%s.csv" % metric)).write_text("\n".join(lines) + "\n",
                                                     encoding="utf-8")
    print("tier tables written for %s" % ", ".join(report.METRIC_NAMES))
    return EXIT_OK


def cmd_stats(args) -> int:
    out = _out(args)
    metrics = _load_metrics(out)
    if len(metrics) < 3:
        log.warning("fewer than 3 vertices; stats stage skipped")
        return EXIT_OK
    results = {}
    for metric in report.METRIC_NAMES:
        values = {v: float(getattr(m, metric)) for v, m in metrics.items()}
        assignment = report.tertile_partition(values, metric)
        results[metric] = report.tier_tests(assignment)
    pipeline._write_json(out / "stats.json", results)
    print("stats.json written")
    return EXIT_OK


def cmd_report(args) -> int:
    out = _out(args)
    corpus_path = out / "corpus.jsonl"
    with open(corpus_path, "r", encoding="utf-8") as fh:
        snapshot, _ = corpus.parse_records(fh, "jsonl")
    by_type = {t: 0 for t in corpus.ISSUE_TYPES}
    for rec in snapshot.records:
        by_type[rec.issue_type] += 1
    rejects = 0
    for rej in out.glob("*.rejects.jsonl"):
        rejects += sum(1 for line in
                       rej.read_text(encoding="utf-8").splitlines() if line.strip())
    unigrams, pairs = _load_counts(out)
    g = _load_graph(out)
    metrics = graph.compute_metrics(g)
    part = community.detect_communities_cnm(g) if g.n_vertices else None
    rpt = report.build_report(
        corpus_summary={"total_records": len(snapshot),
                        "analyzed_records": unigrams.n_docs,
                        "by_type": by_type, "rejects": rejects,
                        "release_stats": None},
        vocabulary={"n_documents": unigrams.n_docs,
                    "n_features": len(unigrams.counts),
                    "n_pairs": len(pairs.counts)},
        graph_summary={"n_vertices": g.n_vertices, "n_edges": g.n_edges},
        metrics=metrics,
        communities=part,
        config_echo={"out": str(out), "top_k": args.top_k},
        tool_version=__version__,
        top_n=args.top_k,
        notes=["tier tests run over all graph vertices per metric"],
    )
    pipeline._write_json(out / "report.json", rpt)
    (out / "report.txt").write_text(report.render_text_tables(rpt),
                                    encoding="utf-8")
    if not args.no_figures and metrics:
        from . import figures as figs
        fig_dir = out / "figures"
        fig_dir.mkdir(exist_ok=True)
        figs.plot_metric_distributions(metrics, fig_dir / "metric_distributions.png")
        if part:
            figs.plot_community_sizes(part, fig_dir / "community_sizes.png")
    print("report.json written")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = pipeline.PipelineConfig(
        input_path=args.input,
        input_format=args.format,
        tagger=args.tagger,
        stopwords_path=args.stopwords,
        issue_type=None if args.issue_type == "all" else args.issue_type,
        min_unigram=args.min_unigram,
        min_pair=args.min_pair,
        keep_isolated=args.keep_isolated,
        top_k=args.top_k,
        schedule=args.schedule,
        out_dir=args.out,
        export_formats=tuple(args.export or ["csv"]),
        figures=not args.no_figures,
    )
    result = pipeline.run_pipeline(cfg)
    for warning in result.warnings:
        print("warning: %s" % warning, file=sys.stderr)
    print("report written to %s" % (result.out_dir / "report.json"))
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "extract": cmd_extract,
    "graph": cmd_graph,
    "metrics": cmd_metrics,
    "communities": cmd_communities,
    "tiers": cmd_tiers,
    "stats": cmd_stats,
    "report": cmd_report,
    "run": cmd_run,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (corpus.FormatError, FileNotFoundError, json.JSONDecodeError) as exc:
        log.error("[%s] input error: %s", args.command, exc)
        return EXIT_INPUT
    except report.ConsistencyError as exc:
        log.error("[%s] internal consistency error: %s", args.command, exc)
        return EXIT_INTERNAL
    except ValueError as exc:
        log.error("[%s] usage error: %s", args.command, exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
