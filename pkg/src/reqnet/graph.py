"""Undirected feature network: construction from co-occurrence counts,
centrality metrics, connected components, and serialization.

Shortest-path distances are unweighted hop counts; co-occurrence weights
only drive edge thickness in exports.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .features import PairCounts, UnigramCounts


@dataclass(frozen=True)
class VertexMetrics:
    vertex: str
    degree: int
    closeness: float
    clustering: float


class FeatureGraph:
    """Immutable undirected weighted graph over feature labels."""

    def __init__(self, edges: Mapping[tuple[str, str], int],
                 extra_vertices: tuple[str, ...] = ()):
        adj: dict[str, dict[str, int]] = {}
        for (a, b), w in edges.items():
            if a == b:
                raise ValueError("self-loop on %r" % a)
            if w <= 0:
                raise ValueError("non-positive weight on %r-%r" % (a, b))
            adj.setdefault(a, {})
            adj.setdefault(b, {})
            if b in adj[a]:
                raise ValueError("duplicate edge %r-%r" % (a, b))
            adj[a][b] = w
            adj[b][a] = w
        for v in extra_vertices:
            adj.setdefault(v, {})
        self._adj = adj
        self.vertices = tuple(sorted(adj))

    @property
    def adj(self) -> dict[str, dict[str, int]]:
        return self._adj

    def neighbors(self, v: str) -> list[str]:
        return sorted(self._adj[v])

    def weight(self, a: str, b: str) -> int:
        return self._adj[a][b]

    def edges(self) -> list[tuple[str, str, int]]:
        out = []
        for a in self.vertices:
            for b, w in self._adj[a].items():
                if a < b:
                    out.append((a, b, w))
        return sorted(out)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2


def build_graph(pairs: PairCounts, unigrams: UnigramCounts,
                min_unigram: int = 1, min_pair: int = 1,
                keep_isolated: bool = False) -> FeatureGraph:
    """Threshold the co-occurrence table into a graph.

    Vertices are features with document frequency >= min_unigram; edges
    connect kept features with pair count >= min_pair. Vertices left
    without any edge are dropped unless keep_isolated is set.
    """
    if min_unigram < 1 or min_pair < 1:
        raise ValueError("thresholds must be >= 1")
    kept = {f for f, c in unigrams.counts.items() if c >= min_unigram}
    edges = {
        (a, b): w for (a, b), w in pairs.counts.items()
        if w >= min_pair and a in kept and b in kept
    }
    if keep_isolated:
        return FeatureGraph(edges, extra_vertices=tuple(sorted(kept)))
    return FeatureGraph(edges)


def degree_all(g: FeatureGraph) -> dict[str, int]:
    return {v: len(g.adj[v]) for v in g.vertices}


def connected_components(g: FeatureGraph) -> dict[str, int]:
    """Component ids are integers ordered by the smallest label each
    component contains."""
    comp_of: dict[str, int] = {}
    cid = 0
    for v in g.vertices:  # sorted, so ids follow smallest member label
        if v in comp_of:
            continue
        queue = deque([v])
        comp_of[v] = cid
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w not in comp_of:
                    comp_of[w] = cid
                    queue.append(w)
        cid += 1
    return comp_of


def _bfs_distances(g: FeatureGraph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def closeness_all(g: FeatureGraph) -> dict[str, float]:
    """Closeness(v) = (n_c - 1) / sum of hop distances to the other
    vertices of v's connected component (size n_c); 0 for isolated
    vertices. Normalizing per component keeps values in [0, 1] on
    disconnected graphs."""
    comp_of = connected_components(g)
    comp_size: dict[int, int] = {}
    for v, c in comp_of.items():
        comp_size[c] = comp_size.get(c, 0) + 1
    out = {}
    for v in g.vertices:
        n_c = comp_size[comp_of[v]]
        if n_c <= 1:
            out[v] = 0.0
            continue
        total = sum(_bfs_distances(g, v).values())
        out[v] = (n_c - 1) / total
    return out


def clustering_all(g: FeatureGraph) -> dict[str, float]:
    """C_v = edges among v's neighbors / (deg(v) choose 2); 0 when
    deg(v) <= 1."""
    out = {}
    for v in g.vertices:
        nbrs = list(g.adj[v])
        k = len(nbrs)
        if k <= 1:
            out[v] = 0.0
            continue
        links = 0
        for i in range(k):
            ni = g.adj[nbrs[i]]
            for j in range(i + 1, k):
                if nbrs[j] in ni:
                    links += 1
        out[v] = links / (k * (k - 1) / 2)
    return out


def compute_metrics(g: FeatureGraph) -> dict[str, VertexMetrics]:
    deg = degree_all(g)
    clo = closeness_all(g)
    clu = clustering_all(g)
    return {v: VertexMetrics(v, deg[v], clo[v], clu[v]) for v in g.vertices}


EXPORT_FORMATS = ("graphml", "dot", "csv")


def export_graph(g: FeatureGraph,
                 metrics: Mapping[str, VertexMetrics] | None = None,
                 communities: Mapping[str, int] | None = None,
                 fmt: str = "csv") -> bytes:
    """Serialize the graph. Output is byte-deterministic: vertices and
    edges are emitted in lexicographic order."""
    if fmt == "csv":
        return _export_csv(g)
    if fmt == "dot":
        return _export_dot(g)
    if fmt == "graphml":
        return _export_graphml(g, metrics, communities)
    raise ValueError("unknown export format %r (expected one of %s)"
                     % (fmt, "/".join(EXPORT_FORMATS)))


def _export_csv(g: FeatureGraph) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "weight"])
    for a, b, w in g.edges():
        writer.writerow([a, b, w])
    return buf.getvalue().encode("utf-8")


def read_edges_csv(fh) -> FeatureGraph:
    reader = csv.reader(fh)
    next(reader, None)  # header
    edges = {}
    for row in reader:
        if not row:
            continue
        a, b, w = row[0], row[1], int(row[2])
        key = (a, b) if a <= b else (b, a)
        edges[key] = w
    return FeatureGraph(edges)


def _dot_id(label: str) -> str:
    return '"%s"' % label.replace('"', '\\"')


def _export_dot(g: FeatureGraph) -> bytes:
    lines = ["graph features {"]
    for v in g.vertices:
        lines.append("  %s;" % _dot_id(v))
    for a, b, w in g.edges():
        lines.append("  %s -- %s [weight=%d, penwidth=%d];"
                     % (_dot_id(a), _dot_id(b), w, w))
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _xml_escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _export_graphml(g, metrics, communities) -> bytes:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="degree" for="node" attr.name="degree" attr.type="int"/>',
        '  <key id="closeness" for="node" attr.name="closeness" attr.type="double"/>',
        '  <key id="clustering" for="node" attr.name="clustering" attr.type="double"/>',
        '  <key id="community" for="node" attr.name="community" attr.type="int"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph id="features" edgedefault="undirected">',
    ]
    for v in g.vertices:
        vid = _xml_escape(v)
        lines.append('    <node id="%s">' % vid)
        if metrics is not None and v in metrics:
            m = metrics[v]
            lines.append('      <data key="degree">%d</data>' % m.degree)
            lines.append('      <data key="closeness">%r</data>' % m.closeness)
            lines.append('      <data key="clustering">%r</data>' % m.clustering)
        if communities is not None and v in communities:
            lines.append('      <data key="community">%d</data>' % communities[v])
        lines.append('    </node>')
    for i, (a, b, w) in enumerate(g.edges()):
        lines.append('    <edge id="e%d" source="%s" target="%s">'
                     % (i, _xml_escape(a), _xml_escape(b)))
        lines.append('      <data key="weight">%d</data>' % w)
        lines.append('    </edge>')
    lines.append('  </graph>')
    lines.append('</graphml>')
    return ("\n".join(lines) + "\n").encode("utf-8")
