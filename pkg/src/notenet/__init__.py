"""Melodies as note-transition networks, and clustering of tracks by network metrics."""

from .clustering import (FEATURE_NAMES, ClusteringResult, FeatureVector, HopkinsResult, SweepResult,
                         assemble_features, elbow_sweep, hopkins, kmeans, silhouette, sse, standardize)
from .consensus import (ConsensusGraph, SimilarityMatrix, accumulate, artist_similarity, ensemble,
                        maximal_cliques, threshold)
from .melody import (MarkovProfile, MelodyFormatError, MelodyTrack, NoteEvent, canonical_label,
                     demo_profiles, dumps_melody, generate_corpus, parse_melody)
from .metrics import (MetricsReport, Stats4, betweenness, betweenness_stats, clustering_coefficient,
                      degree_stats, full_report, path_metrics)
from .network import NoteNetwork, build_network, to_dot, to_graphml, undirected_view
from .pipeline import analyze_tracks, load_corpus

__version__ = "0.1.0"
