"""Co-occurrence consensus over repeated k-means runs, cliques and artist similarity."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .clustering import ClusteringResult, as_matrix, kmeans
from .metrics import fmt

__all__ = [
    "ConsensusGraph",
    "SimilarityMatrix",
    "run_seed",
    "ensemble",
    "accumulate",
    "threshold",
    "maximal_cliques",
    "artist_similarity",
    "consensus_csv",
    "cliques_tsv",
    "similarity_csv",
]


@dataclass(frozen=True)
class ConsensusGraph:
    nodes: tuple[str, ...]
    weights: dict[tuple[str, str], int]  # keys are sorted pairs; zero weights omitted
    total_runs: int

    def weight(self, u: str, v: str) -> int:
        return self.weights.get((u, v) if u < v else (v, u), 0)


def run_seed(seed: int, k: int, run: int) -> int:
    return int(np.random.SeedSequence([seed, k, run]).generate_state(1)[0])


def ensemble(X, ks: Iterable[int], runs: int = 10, seed: int = 0, restarts: int = 10,
             track_ids: Sequence[str] = ()) -> list[ClusteringResult]:
    """``runs`` independently seeded k-means results for each k, in (k, run) order."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if not track_ids and len(X) and hasattr(X[0], "track_id"):
        track_ids = tuple(v.track_id for v in X)
    M = as_matrix(X)
    out = []
    for k in ks:
        for r in range(runs):
            out.append(kmeans(M, k, seed=run_seed(seed, k, r), restarts=restarts,
                              track_ids=track_ids))
    return out


def _co_clustered(run: ClusteringResult) -> Iterable[tuple[str, str]]:
    for members in run.clusters():
        yield from combinations(sorted(members), 2)


def accumulate(runs: Sequence[ClusteringResult]) -> ConsensusGraph:
    if not runs:
        raise ValueError("no runs to accumulate")
    nodes = tuple(sorted(runs[0].assignments))
    counts: Counter = Counter()
    for i, run in enumerate(runs):
        if tuple(sorted(run.assignments)) != nodes:
            raise ValueError(f"run {i} covers a different track set")
        counts.update(_co_clustered(run))
    return ConsensusGraph(nodes, dict(sorted(counts.items())), len(runs))


def threshold(g: ConsensusGraph, tau: float = 0.5) -> dict[str, set[str]]:
    """Keep pairs co-clustered in at least ``tau * total_runs`` runs."""
    if not 0 < tau <= 1:
        raise ValueError(f"tau={tau} outside (0, 1]")
    if g.total_runs < 1:
        raise ValueError("consensus graph holds no runs")
    cut = tau * g.total_runs - 1e-9
    adj = {v: set() for v in g.nodes}
    for (u, v), w in g.weights.items():
        if w >= cut:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def maximal_cliques(adj: Mapping[str, set[str]]) -> list[list[str]]:
    """All maximal cliques by Bron-Kerbosch with pivoting.

    Isolated nodes come out as singletons. Each clique is sorted, and the list is
    sorted lexicographically.
    """
    nbrs = {v: set(adj[v]) - {v} for v in adj}
    cliques = []

    def expand(R, P, X):
        if not P and not X:
            cliques.append(sorted(R))
            return
        pivot = max(sorted(P | X), key=lambda u: len(P & nbrs[u]))
        for v in sorted(P - nbrs[pivot]):
            expand(R | {v}, P & nbrs[v], X & nbrs[v])
            P = P - {v}
            X = X | {v}

    expand(set(), set(nbrs), set())
    return sorted(cliques)


@dataclass(frozen=True)
class SimilarityMatrix:
    artists: tuple[str, ...]
    values: np.ndarray  # NaN where undefined

    def __getitem__(self, pair: tuple[str, str]) -> float:
        i, j = (self.artists.index(a) for a in pair)
        return float(self.values[i, j])


def artist_similarity(runs: Sequence[ClusteringResult],
                      track_artist: Mapping[str, str]) -> SimilarityMatrix:
    """Fraction of possible track pairs of artists x, y that share a cluster, averaged over runs.

    Cross entries divide by |T_x|·|T_y|, diagonal entries by |T_x|(|T_x|-1)/2; a
    diagonal entry for an artist with a single track is NaN.
    """
    if not runs:
        raise ValueError("no runs")
    tracks = sorted(runs[0].assignments)
    missing = [t for t in tracks if t not in track_artist]
    if missing:
        raise ValueError(f"tracks without an artist: {', '.join(missing)}")
    artists = tuple(sorted({track_artist[t] for t in tracks}))
    idx = {a: i for i, a in enumerate(artists)}
    sizes = Counter(track_artist[t] for t in tracks)
    A = len(artists)
    possible = np.zeros((A, A))
    for a, i in idx.items():
        for b, j in idx.items():
            possible[i, j] = sizes[a] * (sizes[a] - 1) / 2 if i == j else sizes[a] * sizes[b]

    total = np.zeros((A, A))
    for run in runs:
        if sorted(run.assignments) != tracks:
            raise ValueError("runs cover different track sets")
        counts = np.zeros((A, A))
        for u, v in _co_clustered(run):
            i, j = idx[track_artist[u]], idx[track_artist[v]]
            counts[i, j] += 1
            if i != j:
                counts[j, i] += 1
        with np.errstate(invalid="ignore", divide="ignore"):
            total += np.where(possible > 0, counts / np.where(possible > 0, possible, 1), np.nan)
    return SimilarityMatrix(artists, total / len(runs))


def consensus_csv(g: ConsensusGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["track_u", "track_v", "weight", "total_runs"])
    for (u, v), weight in g.weights.items():
        w.writerow([u, v, weight, g.total_runs])
    return buf.getvalue()


def cliques_tsv(cliques: Sequence[Sequence[str]]) -> str:
    return "".join("\t".join(c) + "\n" for c in cliques)


def similarity_csv(S: SimilarityMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["", *S.artists])
    for a, row in zip(S.artists, S.values):
        w.writerow([a, *("NA" if math.isnan(x) else fmt(x) for x in row)])
    return buf.getvalue()
