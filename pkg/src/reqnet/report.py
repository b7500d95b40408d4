"""Tier partitioning and assembly of the analysis report.

The report mirrors the analysis flow: per-metric high/medium/low tertiles,
top-k tables per tier, normality checks per tier distribution, a
Kruskal-Wallis test across the three tiers and pairwise Mann-Whitney
follow-ups, plus a community table ranked by size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import stats
from .community import CommunityPartition
from .graph import VertexMetrics

TIER_NAMES = ("high", "medium", "low")
METRIC_NAMES = ("degree", "closeness", "clustering")


class ConsistencyError(Exception):
    """Stage outputs disagree (e.g. metric tables cover different vertices)."""


@dataclass(frozen=True)
class TierAssignment:
    metric: str
    tiers: dict[str, list[tuple[str, float]]]  # tier -> (vertex, value) rows

    def sizes(self) -> dict[str, int]:
        return {name: len(rows) for name, rows in self.tiers.items()}


def tertile_split_sizes(n: int) -> tuple[int, int, int]:
    """High/medium/low sizes: n//3 each, remainder handed to the earlier
    (higher) groups, so sizes differ by at most 1."""
    base, rem = divmod(n, 3)
    return tuple(base + (1 if i < rem else 0) for i in range(3))


def tertile_partition(values: Mapping[str, float], metric: str = "") -> TierAssignment:
    """Sort vertices by value descending (ties by label ascending) and cut
    into high/medium/low tertiles."""
    if len(values) < 3:
        raise ValueError("tertile partition needs at least 3 vertices")
    rows = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    sizes = tertile_split_sizes(len(rows))
    tiers: dict[str, list[tuple[str, float]]] = {}
    start = 0
    for name, size in zip(TIER_NAMES, sizes):
        tiers[name] = rows[start:start + size]
        start += size
    return TierAssignment(metric, tiers)


def top_k(rows: Sequence[tuple[str, float]], k: int) -> list[tuple[str, float]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    return list(rows[:k])


def tier_tests(assignment: TierAssignment) -> dict:
    """Shapiro-Wilk per tier distribution, Kruskal-Wallis across the three
    tiers, and pairwise Mann-Whitney comparisons."""
    samples = {
        name: stats.Sample(tuple(v for _, v in rows), label=name)
        for name, rows in assignment.tiers.items()
    }
    out: dict = {"shapiro_wilk": {}, "kruskal_wallis": None, "mann_whitney": {}}
    for name, sample in samples.items():
        try:
            out["shapiro_wilk"][name] = _result_dict(stats.shapiro_wilk(sample))
        except stats.StatsError as exc:
            out["shapiro_wilk"][name] = {"skipped": str(exc)}
    try:
        out["kruskal_wallis"] = _result_dict(
            stats.kruskal_wallis([samples[t] for t in TIER_NAMES]))
    except stats.StatsError as exc:
        out["kruskal_wallis"] = {"skipped": str(exc)}
    for a, b in (("high", "medium"), ("high", "low"), ("medium", "low")):
        try:
            out["mann_whitney"]["%s_vs_%s" % (a, b)] = _result_dict(
                stats.mann_whitney(samples[a], samples[b]))
        except stats.StatsError as exc:
            out["mann_whitney"]["%s_vs_%s" % (a, b)] = {"skipped": str(exc)}
    return out


def _result_dict(result: stats.TestResult) -> dict:
    return {
        "statistic_name": result.statistic_name,
        "statistic": result.statistic,
        "p_value": result.p_value,
        "extras": result.extras,
    }


def _metric_values(metrics: Mapping[str, VertexMetrics], metric: str) -> dict[str, float]:
    return {v: float(getattr(m, metric)) for v, m in metrics.items()}


def build_report(*, corpus_summary: dict, vocabulary: dict, graph_summary: dict,
                 metrics: Mapping[str, VertexMetrics],
                 communities: CommunityPartition | None,
                 config_echo: dict, tool_version: str,
                 top_n: int = 10, notes: Sequence[str] = ()) -> dict:
    """Assemble the full report. Raises ConsistencyError if the community
    assignment covers a different vertex set than the metrics table."""
    notes = list(notes)
    if communities is not None and set(communities.assignment) != set(metrics):
        raise ConsistencyError("community assignment and metrics tables "
                               "cover different vertex sets")

    report: dict = {
        "tool_version": tool_version,
        "config": config_echo,
        "corpus": corpus_summary,
        "vocabulary": vocabulary,
        "graph": graph_summary,
        "tiers": {},
        "top_features": {},
        "tests": {},
        "communities": None,
        "notes": notes,
    }

    summary = {}
    for metric in METRIC_NAMES:
        values = _metric_values(metrics, metric)
        if values:
            summary[metric] = {
                k: v for k, v in stats.descriptive(list(values.values())).items()
                if k != "degenerate"
            }
    report["graph"] = dict(graph_summary, metrics_summary=summary)

    if len(metrics) < 3:
        notes.append("tier analysis skipped: fewer than 3 graph vertices")
    else:
        for metric in METRIC_NAMES:
            values = _metric_values(metrics, metric)
            assignment = tertile_partition(values, metric)
            report["tiers"][metric] = {
                "sizes": assignment.sizes(),
                "members": {t: [v for v, _ in rows]
                            for t, rows in assignment.tiers.items()},
            }
            report["top_features"][metric] = {
                t: [[v, val] for v, val in top_k(rows, top_n)]
                for t, rows in assignment.tiers.items()
            }
            report["tests"][metric] = tier_tests(assignment)

    if communities is not None:
        table = []
        for rank, (cid, members) in enumerate(
                sorted(communities.members().items(),
                       key=lambda kv: (-len(kv[1]), kv[1][0])), start=1):
            table.append({
                "rank": rank,
                "community": cid,
                "size": len(members),
                "members_sample": members[:top_n],
            })
        report["communities"] = {
            "modularity": communities.modularity,
            "n_communities": communities.n_communities,
            "table": table,
        }
    return report


def render_text_tables(report: dict) -> str:
    """Human-readable plain-text companion to the JSON report."""
    lines: list[str] = []
    lines.append("reqnet analysis report (tool %s)" % report["tool_version"])
    lines.append("")
    corpus = report.get("corpus", {})
    lines.append("Corpus: %d records (%s)" % (
        corpus.get("total_records", 0),
        ", ".join("%s=%d" % (k, v)
                  for k, v in sorted(corpus.get("by_type", {}).items()))))
    release = corpus.get("release_stats")
    if release:
        lines.append("")
        lines.append("%-24s %6s %8s %12s" % ("Release", "days", "requests", "mean/day"))
        for row in release:
            lines.append("%-24s %6d %8d %12.2f" % (
                row["name"], row["days"], row["total_requests"], row["mean_per_day"]))
    graph = report.get("graph", {})
    lines.append("")
    lines.append("Graph: %d vertices, %d edges" % (
        graph.get("n_vertices", 0), graph.get("n_edges", 0)))
    for metric, table in report.get("top_features", {}).items():
        lines.append("")
        lines.append("Top %s per tier" % metric)
        lines.append("%-20s %-10s %-20s %-10s %-20s %-10s" % (
            "High", "Value", "Medium", "Value", "Low", "Value"))
        rows = max(len(table[t]) for t in TIER_NAMES)
        for i in range(rows):
            cells = []
            for t in TIER_NAMES:
                if i < len(table[t]):
                    v, val = table[t][i]
                    cells += [v, "%.4g" % val]
                else:
                    cells += ["", ""]
            lines.append("%-20s %-10s %-20s %-10s %-20s %-10s" % tuple(cells))
    communities = report.get("communities")
    if communities:
        lines.append("")
        lines.append("Communities (Q=%.4f)" % communities["modularity"])
        lines.append("%-6s %-6s %s" % ("Rank", "Size", "Examples"))
        for row in communities["table"]:
            lines.append("%-6d %-6d %s" % (
                row["rank"], row["size"], ", ".join(row["members_sample"])))
    for note in report.get("notes", []):
        lines.append("")
        lines.append("note: %s" % note)
    return "\n".join(lines) + "\n"
