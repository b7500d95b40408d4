"""End-to-end pipeline: ingest -> extract -> graph -> metrics -> tiers ->
tests -> communities -> report and exports.

Every stage persists its intermediate output so each report number can be
recomputed from the files on disk, and identical input plus config always
produces a byte-identical report.json.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path

from . import __version__, community, corpus, features, graph, report

log = logging.getLogger("reqnet")


@dataclass
class PipelineConfig:
    input_path: str
    input_format: str = "csv"  # csv | jsonl
    tagger: str = "builtin"    # builtin | pretagged
    stopwords_path: str | None = None
    issue_type: str | None = "enhancement"  # None = keep all
    min_unigram: int = 1
    min_pair: int = 1
    keep_isolated: bool = False
    top_k: int = 10
    schedule: str | None = None  # "android-preset" or a JSON path
    out_dir: str = "out"
    export_formats: tuple[str, ...] = ("csv",)
    figures: bool = True
    source_label: str = ""

    def validate(self) -> None:
        if self.min_unigram < 1 or self.min_pair < 1:
            raise ValueError("thresholds must be >= 1")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.input_format not in ("csv", "jsonl"):
            raise ValueError("format must be csv or jsonl")
        if self.tagger not in ("builtin", "pretagged"):
            raise ValueError("tagger must be builtin or pretagged")
        for fmt in self.export_formats:
            if fmt not in graph.EXPORT_FORMATS:
                raise ValueError("unknown export format %r" % fmt)

    def echo(self) -> dict:
        d = asdict(self)
        d["export_formats"] = list(self.export_formats)
        return d


@dataclass
class PipelineResult:
    report: dict
    out_dir: Path
    warnings: list[str] = field(default_factory=list)


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2,
                               ensure_ascii=True) + "\n", encoding="utf-8")


def ingest_stage(cfg: PipelineConfig, out_dir: Path):
    """Parse the input file, write cleaned records and rejects."""
    input_path = Path(cfg.input_path)
    with open(input_path, "r", encoding="utf-8", newline="") as fh:
        snapshot, rejects = corpus.parse_records(
            fh, cfg.input_format, source_label=cfg.source_label or input_path.name)
    with open(out_dir / "corpus.jsonl", "w", encoding="utf-8") as fh:
        corpus.write_jsonl(snapshot, fh)
    rejects_path = out_dir / (input_path.name + ".rejects.jsonl")
    with open(rejects_path, "w", encoding="utf-8") as fh:
        corpus.write_rejects(rejects, fh)
    return snapshot, rejects


def extract_stage(cfg: PipelineConfig, snapshot: corpus.CorpusSnapshot,
                  out_dir: Path):
    """Per-document noun features plus unigram and pair counts."""
    if cfg.tagger == "pretagged":
        tagger = features.PretaggedTagger()
    else:
        stopwords = (features.load_stopwords(cfg.stopwords_path)
                     if cfg.stopwords_path else None)
        tagger = features.HeuristicTagger(stopwords=stopwords)
    docs = []
    for rec in snapshot.records:
        if cfg.tagger == "pretagged":
            # summaries carry token_TAG pairs; a malformed pair rejects
            # the record, not the run
            try:
                tagged = tagger.tag(rec.summary.split())
            except features.TaggingError as exc:
                log.warning("skipping record %s: %s", rec.issue_id, exc)
                continue
        else:
            tagged = tagger.tag(features.tokenize(rec.summary))
        docs.append(features.extract_features(tagged, rec.issue_id))
    unigrams = features.unigram_document_frequency(docs)
    pairs = features.pair_document_frequency(docs)
    with open(out_dir / "unigrams.csv", "w", encoding="utf-8", newline="") as fh:
        features.write_unigrams_csv(unigrams, fh)
    with open(out_dir / "pairs.csv", "w", encoding="utf-8", newline="") as fh:
        features.write_pairs_csv(pairs, fh)
    with open(out_dir / "features.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"doc_id": doc.doc_id,
                                 "features": sorted(doc.features)},
                                sort_keys=True) + "\n")
    return docs, unigrams, pairs


def graph_stage(cfg: PipelineConfig, pairs, unigrams, out_dir: Path):
    g = graph.build_graph(pairs, unigrams, cfg.min_unigram, cfg.min_pair,
                          keep_isolated=cfg.keep_isolated)
    return g


def write_exports(cfg: PipelineConfig, g, metrics, assignment,
                  out_dir: Path) -> None:
    names = {"csv": "edges.csv", "dot": "graph.dot", "graphml": "graph.graphml"}
    for fmt in cfg.export_formats:
        data = graph.export_graph(g, metrics=metrics, communities=assignment,
                                  fmt=fmt)
        (out_dir / names[fmt]).write_bytes(data)


def write_metrics_csv(metrics, assignment, out_dir: Path) -> None:
    lines = ["vertex,degree,closeness,clustering,community"]
    for v in sorted(metrics):
        m = metrics[v]
        comm = assignment.get(v, "") if assignment else ""
        lines.append("%s,%d,%r,%r,%s" % (v, m.degree, m.closeness,
                                         m.clustering, comm))
    (out_dir / "metrics.csv").write_text("\n".join(lines) + "\n",
                                         encoding="utf-8")


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    warnings: list[str] = []
    notes: list[str] = []

    snapshot, rejects = ingest_stage(cfg, out_dir)
    by_type = {t: 0 for t in corpus.ISSUE_TYPES}
    for rec in snapshot.records:
        by_type[rec.issue_type] += 1

    release_rows = None
    if cfg.schedule:
        schedule = corpus.load_schedule(cfg.schedule)
        partition = corpus.partition_by_release(snapshot, schedule)
        release_rows = [
            {
                "name": s.window.name,
                "days": s.days,
                "total_requests": s.total_requests,
                "mean_per_day": s.mean_per_day,
            }
            for s in partition.stats
        ]
        release_rows.append({
            "name": "(before first window)", "days": 0,
            "total_requests": len(partition.buckets[corpus.BEFORE_FIRST]),
            "mean_per_day": 0.0})
        release_rows.append({
            "name": "(after last window)", "days": 0,
            "total_requests": len(partition.buckets[corpus.AFTER_LAST]),
            "mean_per_day": 0.0})

    analyzed = snapshot
    if cfg.issue_type:
        analyzed = corpus.filter_by_type(snapshot, cfg.issue_type)

    if not analyzed.records:
        warnings.append("corpus is empty after filtering; report is zeroed")
        log.warning(warnings[-1])

    docs, unigrams, pairs = extract_stage(cfg, analyzed, out_dir)
    g = graph_stage(cfg, pairs, unigrams, out_dir)
    if g.n_vertices == 0:
        warnings.append("graph is empty at the configured thresholds")
        log.warning(warnings[-1])

    metrics = graph.compute_metrics(g)
    partition_result = (community.detect_communities_cnm(g)
                        if g.n_vertices else None)
    assignment = partition_result.assignment if partition_result else {}
    write_metrics_csv(metrics, assignment, out_dir)
    write_exports(cfg, g, metrics, assignment, out_dir)
    if partition_result:
        lines = ["vertex,community"]
        lines += ["%s,%d" % (v, assignment[v]) for v in sorted(assignment)]
        (out_dir / "communities.csv").write_text("\n".join(lines) + "\n",
                                                 encoding="utf-8")

    corpus_summary = {
        "total_records": len(snapshot),
        "analyzed_records": len(analyzed),
        "by_type": by_type,
        "rejects": len(rejects),
        "release_stats": release_rows,
    }
    vocabulary = {
        "n_documents": unigrams.n_docs,
        "n_features": len(unigrams.counts),
        "n_pairs": len(pairs.counts),
    }
    graph_summary = {"n_vertices": g.n_vertices, "n_edges": g.n_edges}
    notes.append("tier tests run over all graph vertices per metric")
    notes.extend(warnings)

    rpt = report.build_report(
        corpus_summary=corpus_summary,
        vocabulary=vocabulary,
        graph_summary=graph_summary,
        metrics=metrics,
        communities=partition_result,
        config_echo=cfg.echo(),
        tool_version=__version__,
        top_n=cfg.top_k,
        notes=notes,
    )
    _write_json(out_dir / "report.json", rpt)
    (out_dir / "report.txt").write_text(report.render_text_tables(rpt),
                                        encoding="utf-8")

    if cfg.figures:
        from . import figures as figs
        fig_dir = out_dir / "figures"
        fig_dir.mkdir(exist_ok=True)
        if metrics:
            figs.plot_metric_distributions(metrics,
                                           fig_dir / "metric_distributions.png")
        if partition_result and partition_result.n_communities:
            figs.plot_community_sizes(partition_result,
                                      fig_dir / "community_sizes.png")
        if release_rows:
            schedule = corpus.load_schedule(cfg.schedule)
            stats_rows = corpus.partition_by_release(snapshot, schedule).stats
            figs.plot_release_activity(stats_rows,
                                       fig_dir / "release_activity.png")

    return PipelineResult(rpt, out_dir, warnings)
