"""Complex-network metrics for a single note network."""

from __future__ import annotations

import csv
import io
from collections import Counter, deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .network import NoteNetwork, undirected_view

__all__ = [
    "FEATURE_NAMES",
    "Stats4",
    "MetricsReport",
    "degree_stats",
    "node_degrees",
    "path_metrics",
    "clustering_coefficient",
    "local_clustering",
    "betweenness",
    "betweenness_stats",
    "full_report",
    "degree_distribution",
    "metrics_csv",
    "degree_distribution_csv",
    "fmt",
]

_STATS_GROUPS = ("degree", "in_degree", "weighted_degree", "betweenness")
FEATURE_NAMES: tuple[str, ...] = (
    "n_nodes", "n_edges", "solo_length", "diameter", "notes_per_bar", "clustering_coefficient",
) + tuple(f"{stat}_{group}" for group in _STATS_GROUPS for stat in ("mean", "median", "min", "max"))


def fmt(x: float) -> str:
    """Floats in output files carry 9 significant digits."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".9g")


@dataclass(frozen=True)
class Stats4:
    mean: float
    median: float
    min: float
    max: float

    @classmethod
    def of(cls, values) -> Stats4:
        a = np.asarray(list(values), dtype=float)
        if a.size == 0:
            raise ValueError("statistics of an empty sample")
        return cls(float(a.mean()), float(np.median(a)), float(a.min()), float(a.max()))


@dataclass(frozen=True)
class MetricsReport:
    artist: str
    title: str
    n_nodes: int
    n_edges: int
    solo_length: int
    notes_per_bar: float
    diameter: int
    avg_path_length: float
    clustering_coefficient: float
    degree: Stats4
    in_degree: Stats4
    weighted_degree: Stats4
    betweenness: Stats4

    @property
    def track_id(self) -> str:
        return f"{self.artist}/{self.title}"

    def features(self) -> dict[str, float]:
        """All registry features, in registry order."""
        out = {
            "n_nodes": float(self.n_nodes),
            "n_edges": float(self.n_edges),
            "solo_length": float(self.solo_length),
            "diameter": float(self.diameter),
            "notes_per_bar": float(self.notes_per_bar),
            "clustering_coefficient": float(self.clustering_coefficient),
        }
        for group in _STATS_GROUPS:
            s = getattr(self, group)
            for stat in ("mean", "median", "min", "max"):
                out[f"{stat}_{group}"] = getattr(s, stat)
        return out


def node_degrees(net: NoteNetwork) -> tuple[dict[str, int], dict[str, int], dict[str, int]]:
    """Per-node (degree, in-degree, weighted degree); a self-loop counts once in and once out."""
    deg = dict.fromkeys(net.nodes, 0)
    indeg = dict.fromkeys(net.nodes, 0)
    wdeg = dict.fromkeys(net.nodes, 0)
    for (u, v), w in net.edges.items():
        deg[u] += 1
        deg[v] += 1
        indeg[v] += 1
        wdeg[u] += w
        wdeg[v] += w
    return deg, indeg, wdeg


def degree_stats(net: NoteNetwork) -> tuple[Stats4, Stats4, Stats4]:
    if not net.nodes:
        raise ValueError("empty network")
    order = net.sorted_nodes()
    deg, indeg, wdeg = node_degrees(net)
    return (Stats4.of(deg[v] for v in order),
            Stats4.of(indeg[v] for v in order),
            Stats4.of(wdeg[v] for v in order))


def _bfs(adj: Mapping[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def largest_component(adj: Mapping[str, set[str]]) -> list[str]:
    """Largest connected component; ties go to the one holding the smallest label."""
    seen: set[str] = set()
    best: list[str] = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = sorted(_bfs(adj, v))
        seen.update(comp)
        if len(comp) > len(best):
            best = comp
    return best


def path_metrics(adj: Mapping[str, set[str]]) -> tuple[int, float]:
    """(diameter, average shortest-path length) over the largest connected component."""
    if not adj:
        raise ValueError("empty graph")
    comp = largest_component(adj)
    if len(comp) < 2:
        return 0, 0.0
    diameter = 0
    total = 0
    for s in comp:
        dist = _bfs(adj, s)
        diameter = max(diameter, max(dist.values()))
        total += sum(dist.values())
    pairs = len(comp) * (len(comp) - 1)
    return diameter, total / pairs


def local_clustering(adj: Mapping[str, set[str]]) -> dict[str, float]:
    out = {}
    for v in sorted(adj):
        nbrs = sorted(adj[v] - {v})
        k = len(nbrs)
        if k < 2:
            out[v] = 0.0
            continue
        links = sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1:] if b in adj[a])
        out[v] = 2.0 * links / (k * (k - 1))
    return out


def clustering_coefficient(adj: Mapping[str, set[str]]) -> float:
    if not adj:
        raise ValueError("empty graph")
    local = local_clustering(adj)
    return sum(local[v] for v in sorted(local)) / len(local)


def betweenness(net: NoteNetwork, normalized: bool = True) -> dict[str, float]:
    """Brandes' accumulation on the directed, unweighted network.

    Normalized scores are divided by (n-1)(n-2); with fewer than three nodes all
    scores are zero.
    """
    order = net.sorted_nodes()
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    succ = [[] for _ in range(n)]
    for (u, v) in sorted(net.edges):
        if u != v:
            succ[index[u]].append(index[v])

    score = [0.0] * n
    for s in range(n):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]

    if normalized:
        scale = 1.0 / ((n - 1) * (n - 2)) if n >= 3 else 0.0
        score = [b * scale for b in score]
    return {v: score[index[v]] for v in order}


def betweenness_stats(net: NoteNetwork) -> Stats4:
    if not net.nodes:
        raise ValueError("empty network")
    b = betweenness(net)
    return Stats4.of(b[v] for v in sorted(b))


def full_report(net: NoteNetwork) -> MetricsReport:
    degree, in_degree, weighted = degree_stats(net)
    adj = undirected_view(net)
    diameter, apl = path_metrics(adj)
    return MetricsReport(
        artist=net.artist,
        title=net.title,
        n_nodes=len(net.nodes),
        n_edges=len(net.edges),
        solo_length=net.solo_length,
        notes_per_bar=net.solo_length / net.bars,
        diameter=diameter,
        avg_path_length=apl,
        clustering_coefficient=clustering_coefficient(adj),
        degree=degree,
        in_degree=in_degree,
        weighted_degree=weighted,
        betweenness=betweenness_stats(net),
    )


def degree_distribution(net: NoteNetwork) -> list[tuple[int, int]]:
    deg, _, _ = node_degrees(net)
    return sorted(Counter(deg.values()).items())


def metrics_csv(reports: list[MetricsReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["artist", "title", *FEATURE_NAMES])
    for r in reports:
        feats = r.features()
        writer.writerow([r.artist, r.title, *(fmt(feats[name]) for name in FEATURE_NAMES)])
    return buf.getvalue()


def degree_distribution_csv(net: NoteNetwork) -> str:
    rows = ["degree,count"] + [f"{d},{c}" for d, c in degree_distribution(net)]
    return "\n".join(rows) + "\n"
