"""Brute-force reference implementations used to check the fast paths.

Nothing here imports the algorithms under test.
"""

import itertools
import math
import random

import numpy as np


def random_digraph(rng: random.Random, max_nodes=8, p=None):
    n = rng.randint(1, max_nodes)
    p = rng.uniform(0.1, 0.7) if p is None else p
    nodes = [f"v{i}" for i in range(n)]
    edges = {}
    for u in nodes:
        for v in nodes:
            if rng.random() < p:
                edges[(u, v)] = rng.randint(1, 4)
    return nodes, edges


def random_graph(rng: random.Random, max_nodes=10):
    n = rng.randint(1, max_nodes)
    p = rng.uniform(0.1, 0.9)
    nodes = [f"n{i}" for i in range(n)]
    adj = {v: set() for v in nodes}
    for a, b in itertools.combinations(nodes, 2):
        if rng.random() < p:
            adj[a].add(b)
            adj[b].add(a)
    return adj


def all_shortest_paths(succ, s, t):
    """Every shortest s->t path, by exhaustive DFS over simple paths."""
    paths = []

    def dfs(path):
        u = path[-1]
        if u == t:
            paths.append(list(path))
            return
        for w in succ[u]:
            if w not in path:
                path.append(w)
                dfs(path)
                path.pop()

    dfs([s])
    if not paths:
        return []
    shortest = min(len(p) for p in paths)
    return [p for p in paths if len(p) == shortest]


def betweenness_bruteforce(nodes, edges):
    succ = {v: sorted({b for (a, b) in edges if a == v and b != v}) for v in nodes}
    score = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        for t in nodes:
            if s == t:
                continue
            paths = all_shortest_paths(succ, s, t)
            for v in nodes:
                if v in (s, t) or not paths:
                    continue
                score[v] += sum(v in p for p in paths) / len(paths)
    n = len(nodes)
    scale = 1.0 / ((n - 1) * (n - 2)) if n >= 3 else 0.0
    return {v: b * scale for v, b in score.items()}


def floyd_warshall(adj):
    nodes = sorted(adj)
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    D = np.full((n, n), math.inf)
    np.fill_diagonal(D, 0)
    for u in nodes:
        for v in adj[u]:
            if u != v:
                D[idx[u], idx[v]] = 1
    for m in range(n):
        D = np.minimum(D, D[:, [m]] + D[[m], :])
    return nodes, D


def path_metrics_bruteforce(adj):
    """(diameter, APL) on the largest component; ties to the component with the smallest label."""
    nodes, D = floyd_warshall(adj)
    comps = {frozenset(np.flatnonzero(np.isfinite(D[i]))) for i in range(len(nodes))}
    comps = sorted(comps, key=lambda c: (-len(c), min(nodes[i] for i in c)))
    comp = sorted(comps[0])
    if len(comp) < 2:
        return 0, 0.0
    sub = D[np.ix_(comp, comp)]
    off = ~np.eye(len(comp), dtype=bool)
    return int(sub[off].max()), float(sub[off].mean())


def clustering_bruteforce(adj):
    nodes = sorted(adj)
    tri = dict.fromkeys(nodes, 0)
    for a, b, c in itertools.combinations(nodes, 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            for v in (a, b, c):
                tri[v] += 1
    total = 0.0
    for v in nodes:
        d = len(adj[v] - {v})
        total += 0.0 if d < 2 else 2 * tri[v] / (d * (d - 1))
    return total / len(nodes), tri


def maximal_cliques_bruteforce(adj):
    nodes = sorted(adj)
    cliques = []
    for r in range(1, len(nodes) + 1):
        for sub in itertools.combinations(nodes, r):
            if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
                cliques.append(set(sub))
    maximal = [c for c in cliques if not any(c < d for d in cliques)]
    return sorted(sorted(c) for c in maximal)


def optimal_sse_bruteforce(X, k):
    """Minimum SSE over every assignment of the n points to at most k clusters."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    best = math.inf
    for labels in itertools.product(range(k), repeat=n - 1):
        labels = (0,) + labels  # fix the first point's cluster to cut symmetric copies
        lab = np.array(labels)
        cost = 0.0
        for j in range(k):
            pts = X[lab == j]
            if len(pts):
                cost += float(((pts - pts.mean(axis=0)) ** 2).sum())
        best = min(best, cost)
    return best
