"""
Clustering tendency and the choice of k
=======================================

Features are z-scored, the Hopkins statistic checks that the tracks are not
spread uniformly, and an SSE sweep over k picks the elbow.
"""

from notenet import (analyze_tracks, assemble_features, demo_profiles, elbow_sweep, generate_corpus,
                     hopkins, standardize)

tracks = generate_corpus(demo_profiles(seed=2), 10, 256, seed=2)
vectors = assemble_features([a.report for a in analyze_tracks(tracks)])
Z, scaling = standardize(vectors)

h = hopkins(Z, trials=20, seed=2)
print(f"Hopkins H = {h.mean:.3f} over {len(h.per_trial)} trials "
      f"(m = {h.sample_size}) -> tendency: {'yes' if h.tendency else 'no'}")

sweep = elbow_sweep(Z, 2, 10, seed=2, restarts=10)
top = sweep.curve[0][1]
for k, s in sweep.curve:
    bar = "#" * int(50 * s / top)
    print(f"k={k:<3} SSE={s:9.3f} {bar}")
print("suggested k:", sweep.suggested_k)

best = sweep.results[sweep.suggested_k]
print(f"silhouette at k={best.k}: {best.silhouette:.3f}")

# A smaller feature set works the same way.
small = assemble_features([a.report for a in analyze_tracks(tracks)],
                          ["n_nodes", "n_edges", "diameter", "clustering_coefficient"])
print("suggested k on four features:", elbow_sweep(standardize(small)[0], 2, 10, seed=2).suggested_k)
