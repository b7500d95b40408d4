"""Matplotlib renderings saved next to the delimited outputs: metric
distributions, community sizes and requests per release window."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .community import CommunityPartition  # noqa: E402
from .corpus import ReleaseStats  # noqa: E402
from .graph import VertexMetrics  # noqa: E402


def plot_metric_distributions(metrics: Mapping[str, VertexMetrics],
                              path: Path) -> None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    for ax, (name, values) in zip(axes, [
        ("degree", [m.degree for m in metrics.values()]),
        ("closeness", [m.closeness for m in metrics.values()]),
        ("clustering", [m.clustering for m in metrics.values()]),
    ]):
        ax.hist(values, bins=min(20, max(5, len(values) // 5 or 5)),
                color="steelblue", edgecolor="white")
        ax.set_title(name)
        ax.set_xlabel(name)
        ax.set_ylabel("vertices")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_community_sizes(partition: CommunityPartition, path: Path) -> None:
    members = partition.members()
    sizes = sorted((len(v) for v in members.values()), reverse=True)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(range(1, len(sizes) + 1), sizes, color="darkseagreen",
           edgecolor="white")
    ax.set_xlabel("community rank")
    ax.set_ylabel("size")
    ax.set_title("Community sizes (Q=%.3f)" % partition.modularity)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_release_activity(release_stats: Sequence[ReleaseStats],
                          path: Path) -> None:
    names = [s.window.name for s in release_stats]
    means = [s.mean_per_day for s in release_stats]
    fig, ax = plt.subplots(figsize=(max(6, len(names)), 3.5))
    ax.bar(range(len(names)), means, color="indianred", edgecolor="white")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=45, ha="right")
    ax.set_ylabel("mean requests per day")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
