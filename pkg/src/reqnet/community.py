"""Greedy agglomerative modularity maximization (Clauset-Newman-Moore
style) and the modularity measure itself.

The greedy merge keeps a sparse table of inter-community edge fractions,
so each step scans only community pairs that share at least one edge.
Ties in the modularity gain are broken by the lexicographically smallest
community-id pair, which makes the whole procedure deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graph import FeatureGraph


@dataclass(frozen=True)
class CommunityPartition:
    assignment: dict[str, int]
    modularity: float
    # (merge step, (community id kept, community id absorbed), Q after merge)
    dendrogram: tuple[tuple[int, tuple[str, str], float], ...]

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for v, c in self.assignment.items():
            out.setdefault(c, []).append(v)
        for c in out:
            out[c].sort()
        return out


def modularity(g: FeatureGraph, assignment: Mapping[str, int]) -> float:
    """Q = sum_i (e_ii - a_i^2) over communities i, with e_ii the fraction
    of edges internal to i and a_i the fraction of edge ends in i.
    Edges count unweighted; an edgeless graph has Q = 0."""
    missing = [v for v in g.vertices if v not in assignment]
    if missing:
        raise ValueError("assignment misses vertices: %s" % ", ".join(missing[:5]))
    m = g.n_edges
    if m == 0:
        return 0.0
    e_in: dict[int, int] = {}
    ends: dict[int, int] = {}
    for a, b, _w in g.edges():
        ca, cb = assignment[a], assignment[b]
        ends[ca] = ends.get(ca, 0) + 1
        ends[cb] = ends.get(cb, 0) + 1
        if ca == cb:
            e_in[ca] = e_in.get(ca, 0) + 1
    q = 0.0
    for c in set(assignment.values()):
        e_ii = e_in.get(c, 0) / m
        a_i = ends.get(c, 0) / (2 * m)
        q += e_ii - a_i * a_i
    return q


def detect_communities_cnm(g: FeatureGraph) -> CommunityPartition:
    """Start from singletons, repeatedly merge the community pair with the
    largest modularity gain, and return the partition at the step where Q
    peaked (singletons included). Merging stops once no two communities
    share an edge, since further merges can only lower Q."""
    m = g.n_edges
    if m == 0:
        assignment = _final_ids({v: {v} for v in g.vertices})
        return CommunityPartition(assignment, 0.0, ())

    # community id = smallest member label
    members: dict[str, set[str]] = {v: {v} for v in g.vertices}
    a: dict[str, float] = {v: len(g.adj[v]) / (2.0 * m) for v in g.vertices}
    e_between: dict[tuple[str, str], float] = {}
    for x, y, _w in g.edges():
        e_between[(x, y)] = 1.0 / m  # ids are the labels themselves initially

    q = -sum(ai * ai for ai in a.values())  # singleton e_ii are all 0
    best_q = q
    best_members = {cid: set(s) for cid, s in members.items()}
    dendrogram: list[tuple[int, tuple[str, str], float]] = []
    step = 0

    while e_between:
        best_pair = None
        best_dq = None
        for pair in sorted(e_between):
            i, j = pair
            dq = 2.0 * (e_between[pair] / 2.0 - a[i] * a[j])
            if best_dq is None or dq > best_dq + 1e-15:
                best_dq = dq
                best_pair = pair
        i, j = best_pair  # i < j; i survives
        q += best_dq
        step += 1
        dendrogram.append((step, (i, j), q))

        members[i] |= members.pop(j)
        a[i] += a.pop(j)
        # fold j's inter-community edges into i's
        merged: dict[str, float] = {}
        for (x, y), val in list(e_between.items()):
            if j in (x, y):
                other = y if x == j else x
                del e_between[(x, y)]
                if other != i:
                    merged[other] = merged.get(other, 0.0) + val
        for other, val in merged.items():
            key = (i, other) if i < other else (other, i)
            e_between[key] = e_between.get(key, 0.0) + val

        if q > best_q + 1e-15:
            best_q = q
            best_members = {cid: set(s) for cid, s in members.items()}

    assignment = _final_ids(best_members)
    return CommunityPartition(assignment, modularity(g, assignment),
                              tuple(dendrogram))


def _final_ids(members: Mapping[str, set[str]]) -> dict[str, int]:
    """Number communities by size (largest first), breaking ties by the
    smallest member label, so ids line up with a size-ranked table."""
    ordered = sorted(members.values(), key=lambda s: (-len(s), min(s)))
    assignment: dict[str, int] = {}
    for cid, group in enumerate(ordered):
        for v in group:
            assignment[v] = cid
    return assignment
