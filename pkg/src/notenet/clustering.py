"""Feature vectors, clustering tendency and k-means over track metrics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .metrics import FEATURE_NAMES, MetricsReport, fmt

__all__ = [
    "FEATURE_NAMES",
    "InvariantError",
    "FeatureVector",
    "feature_selection",
    "assemble_features",
    "as_matrix",
    "Standardization",
    "standardize",
    "default_hopkins_sample",
    "HopkinsResult",
    "hopkins_ratio",
    "hopkins",
    "ClusteringResult",
    "kmeans",
    "kmeans_plusplus",
    "sse",
    "silhouette",
    "SweepResult",
    "elbow_sweep",
    "knee_point",
    "sse_curve_csv",
    "assignments_csv",
    "hopkins_csv",
]


class InvariantError(RuntimeError):
    """An internal invariant was violated (a bug, not bad input)."""


@dataclass(frozen=True)
class FeatureVector:
    artist: str
    title: str
    names: tuple[str, ...]
    values: np.ndarray

    @property
    def track_id(self) -> str:
        return f"{self.artist}/{self.title}"


def feature_selection(names: Sequence[str] | str | None = None) -> tuple[str, ...]:
    """Validate a feature subset; ``None`` selects the full registry.

    A comma-separated string is accepted for convenience.
    """
    if names is None:
        return FEATURE_NAMES
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    names = tuple(names)
    if not names:
        raise ValueError("feature selection is empty")
    unknown = [n for n in names if n not in FEATURE_NAMES]
    if unknown:
        raise ValueError(f"unknown feature names: {', '.join(unknown)}")
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise ValueError(f"duplicate feature names: {', '.join(dup)}")
    return names


def assemble_features(reports: Sequence[MetricsReport], selection=None) -> list[FeatureVector]:
    names = feature_selection(selection)
    if len(reports) < 2:
        raise ValueError("need at least two tracks")
    ids = [r.track_id for r in reports]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate track ids (artist/title)")
    out = []
    for r in reports:
        feats = r.features()
        values = np.array([feats[n] for n in names], dtype=float)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"non-finite feature value for {r.track_id}")
        out.append(FeatureVector(r.artist, r.title, names, values))
    return out


def as_matrix(vectors) -> np.ndarray:
    if len(vectors) and isinstance(vectors[0], FeatureVector):
        names = vectors[0].names
        if any(v.names != names for v in vectors):
            raise ValueError("feature vectors disagree on feature names")
        return np.vstack([v.values for v in vectors])
    X = np.asarray(vectors, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    return X


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    scale: np.ndarray  # population sd; 0 marks a constant feature

    def apply(self, X) -> np.ndarray:
        X = as_matrix(X)
        safe = np.where(self.scale > 0, self.scale, 1.0)
        return np.where(self.scale > 0, (X - self.mean) / safe, 0.0)


def standardize(vectors) -> tuple[np.ndarray, Standardization]:
    """Z-score every feature column (population sd); constant columns become zeros."""
    X = as_matrix(vectors)
    if X.shape[0] < 2:
        raise ValueError("need at least two vectors")
    mean = X.mean(axis=0)
    sd = X.std(axis=0)
    constant = np.ptp(X, axis=0) == 0
    sd = np.where(constant, 0.0, sd)
    t = Standardization(mean, sd)
    return t.apply(X), t


def default_hopkins_sample(n: int) -> int:
    return min(max(10, math.ceil(0.1 * n)), n - 1)


@dataclass(frozen=True)
class HopkinsResult:
    mean: float
    per_trial: tuple[float, ...]
    sample_size: int

    @property
    def tendency(self) -> bool:
        return self.mean > 0.5


def hopkins_ratio(real_nn, artificial_nn) -> float:
    """H = sum(a) / (sum(r) + sum(a)); 0.5 when every distance is zero."""
    r = float(np.sum(real_nn))
    a = float(np.sum(artificial_nn))
    return 0.5 if r + a == 0 else a / (r + a)


def hopkins(X, m: int | None = None, trials: int = 20, seed: int = 0) -> HopkinsResult:
    """Hopkins statistic H = sum(a) / (sum(r) + sum(a)), averaged over trials.

    Per trial, ``m`` real objects are drawn without replacement and ``m`` artificial
    points are drawn uniformly in the bounding box of the data. ``r`` is the distance
    from a sampled object to its nearest other object, ``a`` the distance from an
    artificial point to its nearest object.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if n < 3:
        raise ValueError("Hopkins statistic needs at least 3 objects")
    if m is None:
        m = default_hopkins_sample(n)
    if not 1 <= m <= n - 1:
        raise ValueError(f"sample size m={m} outside [1, {n - 1}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    lo, hi = X.min(axis=0), X.max(axis=0)
    values = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        idx = rng.choice(n, size=m, replace=False)
        d_real = cdist(X[idx], X)
        d_real[np.arange(m), idx] = np.inf
        r = d_real.min(axis=1)
        fake = rng.uniform(lo, hi, size=(m, X.shape[1]))
        a = cdist(fake, X).min(axis=1)
        values.append(hopkins_ratio(r, a))
    return HopkinsResult(float(np.mean(values)), tuple(values), m)


@dataclass
class ClusteringResult:
    k: int
    labels: np.ndarray
    centroids: np.ndarray
    sse: float
    seed: int
    restarts: int
    track_ids: tuple[str, ...] = ()
    silhouette: float | None = None
    iterations: int = 0
    sse_trace: list[float] = field(default_factory=list, repr=False)

    @property
    def assignments(self) -> dict[str, int]:
        ids = self.track_ids or tuple(str(i) for i in range(len(self.labels)))
        return {t: int(c) for t, c in zip(ids, self.labels)}

    def clusters(self) -> list[list[str]]:
        """Members of each nonempty cluster, in cluster order."""
        ids = self.track_ids or tuple(str(i) for i in range(len(self.labels)))
        groups: list[list[str]] = [[] for _ in range(self.k)]
        for t, c in zip(ids, self.labels):
            groups[int(c)].append(t)
        return [g for g in groups if g]


def _sq_dists(X, C):
    return cdist(X, C, "sqeuclidean")


def kmeans_plusplus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = [int(rng.integers(n))]
    d2 = _sq_dists(X, X[centers])[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            nxt = int(rng.integers(n))
        centers.append(nxt)
        d2 = np.minimum(d2, _sq_dists(X, X[[nxt]])[:, 0])
    return X[centers].copy()


def _repair_empty(X, labels, centroids, k):
    counts = np.bincount(labels, minlength=k)
    while np.any(counts == 0):
        j = int(np.flatnonzero(counts == 0)[0])
        own = np.sum((X - centroids[labels]) ** 2, axis=1)
        own[counts[labels] < 2] = -np.inf
        p = int(np.argmax(own))
        counts[labels[p]] -= 1
        labels[p] = j
        counts[j] += 1
    return labels


def _centroids(X, labels, k):
    C = np.zeros((k, X.shape[1]))
    for j in range(k):
        C[j] = X[labels == j].mean(axis=0)
    return C


def _lloyd(X, init, max_iters, tol):
    k = init.shape[0]
    C = init.copy()
    prev = math.inf
    trace = []
    labels = None
    it = 0
    for it in range(1, max_iters + 1):
        labels = np.argmin(_sq_dists(X, C), axis=1)
        labels = _repair_empty(X, labels, C, k)
        newC = _centroids(X, labels, k)
        cost = float(np.sum((X - newC[labels]) ** 2))
        if cost > prev + 1e-9 * max(1.0, prev):
            raise InvariantError(f"SSE increased in Lloyd iteration {it}: {prev} -> {cost}")
        trace.append(cost)
        shift = float(np.max(np.linalg.norm(newC - C, axis=1)))
        C, prev = newC, cost
        if shift < tol:
            break
    return labels, C, prev, it, trace


def kmeans(X, k: int, seed: int = 0, restarts: int = 10, max_iters: int = 300,
           tol: float = 1e-10, init: np.ndarray | None = None,
           track_ids: Sequence[str] = ()) -> ClusteringResult:
    """Lloyd's k-means with k-means++ seeding, best of ``restarts`` by SSE.

    Each restart draws from its own stream keyed by (seed, k, restart). An explicit
    ``init`` is run as one extra candidate. Ties keep the earliest candidate.
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], FeatureVector) and not track_ids:
        track_ids = tuple(v.track_id for v in X)
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    candidates = []
    if init is not None:
        candidates.append(np.asarray(init, dtype=float))
    for r in range(restarts):
        candidates.append(kmeans_plusplus(X, k, np.random.default_rng([seed, k, r])))

    best = None
    for C0 in candidates:
        labels, C, cost, iters, trace = _lloyd(X, C0, max_iters, tol)
        if best is None or cost < best[2]:
            best = (labels, C, cost, iters, trace)
    labels, C, cost, iters, trace = best
    result = ClusteringResult(k, labels, C, cost, seed, restarts, tuple(track_ids),
                              iterations=iters, sse_trace=trace)
    if k >= 2 and len(np.unique(labels)) >= 2:
        result.silhouette = silhouette(X, result)
    return result


def sse(X, result: ClusteringResult) -> float:
    X = as_matrix(X)
    labels = np.asarray(result.labels)
    if labels.shape != (X.shape[0],):
        raise ValueError("assignments do not cover the vectors")
    if np.any(labels < 0) or np.any(labels >= result.k):
        raise ValueError("assignment to a nonexistent cluster")
    return float(np.sum((X - result.centroids[labels]) ** 2))


def silhouette(X, result) -> float:
    """Mean silhouette; members of singleton clusters score 0, as does a = b = 0."""
    X = as_matrix(X)
    labels = np.asarray(result.labels if isinstance(result, ClusteringResult) else result)
    k = result.k if isinstance(result, ClusteringResult) else int(labels.max()) + 1
    n = X.shape[0]
    if k < 2:
        raise ValueError("silhouette needs k >= 2")
    if n < 2 or labels.shape != (n,):
        raise ValueError("silhouette needs one label per vector and n >= 2")
    D = cdist(X, X)
    present = [j for j in range(k) if np.any(labels == j)]
    members = {j: np.flatnonzero(labels == j) for j in present}
    scores = np.zeros(n)
    for i in range(n):
        own = members[labels[i]]
        if len(own) < 2:
            continue
        a = D[i, own].sum() / (len(own) - 1)
        others = [D[i, members[j]].mean() for j in present if j != labels[i]]
        if not others:
            continue
        b = min(others)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


@dataclass
class SweepResult:
    curve: list[tuple[int, float]]
    suggested_k: int
    results: dict[int, ClusteringResult]
    sharp_drop: bool

    @property
    def monotone(self) -> bool:
        s = [c for _, c in self.curve]
        return all(b <= a for a, b in zip(s, s[1:]))


def knee_point(ks: Sequence[int], values: Sequence[float]) -> int:
    """Point farthest below the chord joining the curve's end points.

    Both axes are rescaled to [0, 1] first so the answer does not depend on the
    units of the SSE. Ties go to the smallest k.
    """
    ks = np.asarray(ks, dtype=float)
    v = np.asarray(values, dtype=float)
    if len(ks) < 2:
        return int(ks[0])
    span = v[0] - v[-1]
    if span <= 0:
        return int(ks[0])
    x = (ks - ks[0]) / (ks[-1] - ks[0])
    y = (v - v[-1]) / span
    dist = (1.0 - x - y) / math.sqrt(2.0)
    return int(ks[int(np.argmax(dist))])


def _farthest_point(X, C):
    d = _sq_dists(X, C).min(axis=1)
    return X[int(np.argmax(d))]


def elbow_sweep(X, k_min: int, k_max: int, seed: int = 0, restarts: int = 10,
                max_iters: int = 300, tol: float = 1e-10,
                track_ids: Sequence[str] = ()) -> SweepResult:
    """SSE for every k in [k_min, k_max] and the suggested elbow.

    From the second k on, the previous best centroids plus the point farthest from
    them are added as a warm-start candidate, which keeps the curve non-increasing.
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], FeatureVector) and not track_ids:
        track_ids = tuple(v.track_id for v in X)
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k_min < k_max <= n:
        raise ValueError(f"invalid k range [{k_min}, {k_max}] for {n} objects")
    results = {}
    prev = None
    for k in range(k_min, k_max + 1):
        init = None
        if prev is not None:
            init = np.vstack([prev.centroids, _farthest_point(X, prev.centroids)])
        res = kmeans(X, k, seed=seed, restarts=restarts, max_iters=max_iters, tol=tol,
                     init=init, track_ids=track_ids)
        if prev is not None and res.sse > prev.sse + 1e-9 * max(1.0, prev.sse):
            raise InvariantError(f"SSE rose from k={k - 1} to k={k}")
        results[k] = res
        prev = res
    ks = list(results)
    values = [results[k].sse for k in ks]
    sharp = any(a > 0 and (a - b) / a > 0.5 for a, b in zip(values, values[1:]))
    return SweepResult(list(zip(ks, values)), knee_point(ks, values), results, sharp)


def sse_curve_csv(sweep: SweepResult) -> str:
    return "k,sse\n" + "".join(f"{k},{fmt(s)}\n" for k, s in sweep.curve)


def assignments_csv(result: ClusteringResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["artist", "title", "cluster"])
    for tid, c in result.assignments.items():
        artist, _, title = tid.partition("/")
        w.writerow([artist, title, c])
    return buf.getvalue()


def hopkins_csv(h: HopkinsResult) -> str:
    rows = ["trial,H"] + [f"{i},{fmt(v)}" for i, v in enumerate(h.per_trial)]
    rows.append(f"mean,{fmt(h.mean)}")
    return "\n".join(rows) + "\n"
