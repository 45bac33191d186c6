"""
Consensus cliques and artist similarity
=======================================

Repeat k-means with different seeds, link two tracks each time they share a
cluster, drop links seen in fewer than half of the runs, and read the groups
off as maximal cliques. The same runs give the artist co-clustering table.
"""

import math

from notenet import (accumulate, analyze_tracks, artist_similarity, assemble_features, demo_profiles,
                     ensemble, generate_corpus, maximal_cliques, standardize, threshold)

tracks = generate_corpus(demo_profiles(seed=3), 10, 256, seed=3)
vectors = assemble_features([a.report for a in analyze_tracks(tracks)])
Z, _ = standardize(vectors)
ids = [v.track_id for v in vectors]

runs = ensemble(Z, [3], runs=10, seed=3, restarts=10, track_ids=ids)
graph = accumulate(runs)
for clique in maximal_cliques(threshold(graph, tau=0.5)):
    print(f"{len(clique):2d} tracks: {', '.join(clique[:3])}, ...")

S = artist_similarity(runs, {v.track_id: v.artist for v in vectors})
print()
print(" " * 10 + "".join(f"{a:>10}" for a in S.artists))
for i, a in enumerate(S.artists):
    cells = ["" if j > i else ("NA" if math.isnan(x) else f"{x:.2f}") for j, x in enumerate(S.values[i])]
    print(f"{a:<10}" + "".join(f"{c:>10}" for c in cells))

# Across a range of k the consensus is looser; lower the threshold to see sub-groups.
wide = accumulate(ensemble(Z, range(2, 7), runs=4, seed=3, restarts=5, track_ids=ids))
print("\ncliques over k=2..6 at tau=0.5:", len(maximal_cliques(threshold(wide, 0.5))))
