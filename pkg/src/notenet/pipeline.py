"""Corpus loading and per-track analysis shared by the CLI and scripts."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .melody import MelodyFormatError, MelodyTrack, parse_melody
from .metrics import MetricsReport, full_report
from .network import NoteNetwork, build_network

SNAPSHOT_NAME = "config.json"

__all__ = ["SNAPSHOT_NAME", "CorpusError", "melody_files", "load_corpus", "analyze_tracks", "TrackAnalysis"]


class CorpusError(Exception):
    """One or more corpus files could not be read; ``failures`` lists (path, reason)."""

    def __init__(self, failures: list[tuple[str, str]]):
        self.failures = failures
        super().__init__("; ".join(f"{p}: {why}" for p, why in failures))


def melody_files(paths: Iterable[str | Path]) -> list[Path]:
    """Expand directories to their ``*.json`` files (sorted); files pass through.

    A run snapshot (``config.json``) inside a directory is not a melody and is skipped.
    """
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(f for f in sorted(p.glob("*.json")) if f.name != SNAPSHOT_NAME)
        else:
            out.append(p)
    return out


def load_corpus(paths: Iterable[str | Path]) -> list[MelodyTrack]:
    files = melody_files(paths)
    if not files:
        raise CorpusError([(", ".join(map(str, paths)) or "<none>", "no melody files found")])
    tracks, failures = [], []
    for f in files:
        try:
            tracks.append(parse_melody(f.read_bytes()))
        except (OSError, MelodyFormatError) as exc:
            failures.append((str(f), str(exc)))
    if failures:
        raise CorpusError(failures)
    ids = [t.track_id for t in tracks]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        raise CorpusError([(i, "duplicate artist/title") for i in dup])
    return tracks


@dataclass(frozen=True)
class TrackAnalysis:
    track: MelodyTrack
    network: NoteNetwork
    report: MetricsReport


def _analyze(track: MelodyTrack) -> TrackAnalysis:
    net = build_network(track)
    return TrackAnalysis(track, net, full_report(net))


def analyze_tracks(tracks: Sequence[MelodyTrack], jobs: int = 1) -> list[TrackAnalysis]:
    """Network and metrics for every track, in input order."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_analyze, tracks))
    return [_analyze(t) for t in tracks]
