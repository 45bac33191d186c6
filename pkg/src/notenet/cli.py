"""Command-line front end: ``notenet <command> [options]``.

Every command writes into ``--out`` through a staging directory that is moved in
place only on success, plus a ``config.json`` snapshot of the effective settings.

Exit codes: 0 success, 1 usage, 2 input/parse, 3 internal invariant violation.
Set ``NOTENET_VERBOSITY`` (debug, info, warning, error) to control log output.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import re
import shutil
import sys
import tempfile
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .clustering import (InvariantError, assemble_features, assignments_csv, default_hopkins_sample,
                         elbow_sweep, feature_selection, hopkins, hopkins_csv, kmeans,
                         sse_curve_csv, standardize)
from .consensus import (accumulate, artist_similarity, cliques_tsv, consensus_csv, ensemble,
                        maximal_cliques, similarity_csv, threshold)
from .melody import demo_profiles, dumps_melody, generate_corpus
from .metrics import degree_distribution_csv, fmt, metrics_csv
from .network import to_dot, to_graphml
from .pipeline import SNAPSHOT_NAME, CorpusError, analyze_tracks, load_corpus

log = logging.getLogger("notenet")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class PipelineConfig:
    corpus: list[str] = field(default_factory=list)
    out: str | None = None
    features: list[str] | None = None
    k: int | None = None
    k_min: int = 2
    k_max: int = 10
    seed: int = 0
    restarts: int = 10
    runs: int = 10
    tau: float = 0.5
    hopkins_m: int | None = None
    hopkins_trials: int = 20
    jobs: int = 1
    tracks_per_artist: int = 10
    events: int = 256

    @classmethod
    def load(cls, path: str | None, overrides: dict) -> PipelineConfig:
        data = {}
        if path:
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from None
            known = {f.name for f in fields(cls)}
            unknown = sorted(set(data) - known)
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def validate(self):
        if self.features is not None:
            try:
                self.features = list(feature_selection(self.features))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        for name in ("k", "k_min", "k_max", "restarts", "runs", "hopkins_m", "hopkins_trials",
                     "jobs", "tracks_per_artist", "events"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"{name} must be >= 1")
        if self.k_min >= self.k_max:
            raise UsageError("k_min must be below k_max")
        if not 0 < self.tau <= 1:
            raise UsageError("tau must lie in (0, 1]")
        missing = [c for c in self.corpus if not Path(c).exists()]
        if missing:
            raise CorpusError([(m, "no such file or directory") for m in missing])

    def snapshot(self) -> str:
        data = asdict(self)
        data.pop("out")
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _comma_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="notenet", description="Note-transition networks of melodies and their clustering.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, corpus=True):
        p.add_argument("--config", help="JSON file with default settings; flags win")
        if corpus:
            p.add_argument("--corpus", action="append", help="melody file or directory (repeatable)")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int)
        return p

    def clustering(p):
        p.add_argument("--features", type=_comma_list, help="comma-separated feature names")
        p.add_argument("--restarts", type=int, help="k-means++ restarts per run")
        return p

    p = common(sub.add_parser("generate", help="write the synthetic three-artist corpus"), corpus=False)
    p.add_argument("--tracks-per-artist", type=int)
    p.add_argument("--events", type=int, help="events per track")

    p = common(sub.add_parser("analyze", help="networks, metrics and degree distributions"))
    p.add_argument("--jobs", type=int)
    p = common(sub.add_parser("export-graph", help="GraphML and DOT for every track"))

    p = clustering(common(sub.add_parser("tendency", help="Hopkins statistic")))
    p.add_argument("--hopkins-m", type=int)
    p.add_argument("--hopkins-trials", type=int)

    p = clustering(common(sub.add_parser("cluster", help="one k-means clustering")))
    p.add_argument("--k", type=int)

    p = clustering(common(sub.add_parser("sweep", help="SSE curve and elbow")))
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)

    p = clustering(common(sub.add_parser("consensus", help="co-occurrence graph and maximal cliques")))
    p.add_argument("--k", type=int, help="single k; otherwise every k in --k-min..--k-max")
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--tau", type=float)

    p = clustering(common(sub.add_parser("similarity", help="artist co-clustering matrix")))
    p.add_argument("--k", type=int)
    p.add_argument("--runs", type=int)
    return parser


def _safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_") or "track"


@contextlib.contextmanager
def staged_output(out: str):
    """Yield a scratch directory whose contents land in ``out`` only if the block succeeds."""
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".notenet-", dir=target.parent))
    try:
        yield tmp
        target.mkdir(exist_ok=True)
        for src in sorted(tmp.rglob("*")):
            dest = target / src.relative_to(tmp)
            if src.is_dir():
                dest.mkdir(exist_ok=True)
            else:
                os.replace(src, dest)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def _write(path: Path, text: str | bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(text, bytes):
        path.write_bytes(text)
    else:
        path.write_text(text, encoding="utf-8", newline="")


def _features(cfg):
    if not cfg.corpus:
        raise UsageError("--corpus is required")
    analyses = analyze_tracks(load_corpus(cfg.corpus), cfg.jobs)
    if len(analyses) < 2:
        raise ValueError("clustering needs at least two tracks")
    vectors = assemble_features([a.report for a in analyses], cfg.features)
    Z, _ = standardize(vectors)
    return vectors, Z


def _graph_files(tmp, analyses):
    for i, a in enumerate(analyses):
        stem = f"{i:03d}_{_safe_name(a.network.track_id)}"
        _write(tmp / "graphs" / f"{stem}.graphml", to_graphml(a.network))
        _write(tmp / "graphs" / f"{stem}.dot", to_dot(a.network))
    return analyses


def cmd_generate(cfg, tmp):
    tracks = generate_corpus(demo_profiles(cfg.seed), cfg.tracks_per_artist, cfg.events, cfg.seed)
    for t in tracks:
        _write(tmp / f"{_safe_name(t.artist)}_{_safe_name(t.title)}.json", dumps_melody(t))
    log.info("wrote %d tracks", len(tracks))


def cmd_analyze(cfg, tmp):
    if not cfg.corpus:
        raise UsageError("--corpus is required")
    analyses = analyze_tracks(load_corpus(cfg.corpus), cfg.jobs)
    _write(tmp / "metrics.csv", metrics_csv([a.report for a in analyses]))
    _graph_files(tmp, analyses)
    for i, a in enumerate(analyses):
        stem = f"{i:03d}_{_safe_name(a.network.track_id)}"
        _write(tmp / "degrees" / f"{stem}.csv", degree_distribution_csv(a.network))
    log.info("analyzed %d tracks", len(analyses))


def cmd_export_graph(cfg, tmp):
    if not cfg.corpus:
        raise UsageError("--corpus is required")
    _graph_files(tmp, analyze_tracks(load_corpus(cfg.corpus), cfg.jobs))


def cmd_tendency(cfg, tmp):
    _, Z = _features(cfg)
    if len(Z) < 3:
        raise ValueError("Hopkins statistic needs at least 3 tracks")
    m = cfg.hopkins_m or default_hopkins_sample(len(Z))
    h = hopkins(Z, m=m, trials=cfg.hopkins_trials, seed=cfg.seed)
    verdict = f"clustering tendency: {'yes' if h.tendency else 'no'}\n"
    _write(tmp / "hopkins.csv", hopkins_csv(h))
    _write(tmp / "tendency.txt", f"H_mean,{fmt(h.mean)}\nm,{h.sample_size}\n" + verdict)
    print(verdict, end="")


def cmd_cluster(cfg, tmp):
    if cfg.k is None:
        raise UsageError("--k is required")
    vectors, Z = _features(cfg)
    res = kmeans(Z, cfg.k, seed=cfg.seed, restarts=cfg.restarts,
                 track_ids=[v.track_id for v in vectors])
    _write(tmp / "assignments.csv", assignments_csv(res))
    sil = "NA" if res.silhouette is None else fmt(res.silhouette)
    _write(tmp / "clustering.csv", f"k,sse,silhouette\n{res.k},{fmt(res.sse)},{sil}\n")


def cmd_sweep(cfg, tmp):
    vectors, Z = _features(cfg)
    sw = elbow_sweep(Z, cfg.k_min, cfg.k_max, seed=cfg.seed, restarts=cfg.restarts,
                     track_ids=[v.track_id for v in vectors])
    _write(tmp / "sse_curve.csv", sse_curve_csv(sw))
    _write(tmp / "sweep.csv", f"suggested_k,sharp_drop\n{sw.suggested_k},{str(sw.sharp_drop).lower()}\n")
    print(f"suggested k: {sw.suggested_k}")


def cmd_consensus(cfg, tmp):
    vectors, Z = _features(cfg)
    ks = [cfg.k] if cfg.k is not None else list(range(cfg.k_min, cfg.k_max + 1))
    runs = ensemble(Z, ks, runs=cfg.runs, seed=cfg.seed, restarts=cfg.restarts,
                    track_ids=[v.track_id for v in vectors])
    g = accumulate(runs)
    _write(tmp / "consensus_edges.csv", consensus_csv(g))
    _write(tmp / "cliques.tsv", cliques_tsv(maximal_cliques(threshold(g, cfg.tau))))


def cmd_similarity(cfg, tmp):
    if cfg.k is None:
        raise UsageError("--k is required")
    vectors, Z = _features(cfg)
    runs = ensemble(Z, [cfg.k], runs=cfg.runs, seed=cfg.seed, restarts=cfg.restarts,
                    track_ids=[v.track_id for v in vectors])
    S = artist_similarity(runs, {v.track_id: v.artist for v in vectors})
    _write(tmp / "similarity.csv", similarity_csv(S))


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "export-graph": cmd_export_graph,
    "tendency": cmd_tendency,
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "consensus": cmd_consensus,
    "similarity": cmd_similarity,
}


def main(argv=None) -> int:
    level = os.environ.get("NOTENET_VERBOSITY", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = PipelineConfig.load(args.config, overrides)
        with staged_output(cfg.out) as tmp:
            COMMANDS[args.command](cfg, tmp)
            _write(tmp / SNAPSHOT_NAME, cfg.snapshot())
    except UsageError as exc:
        print(f"notenet {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CorpusError as exc:
        for path, why in exc.failures:
            print(f"notenet {args.command}: {path}: {why}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantError, AssertionError) as exc:
        print(f"notenet {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"notenet {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
