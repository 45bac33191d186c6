"""Directed weighted note-transition networks."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .melody import MelodyTrack, canonical_label

__all__ = ["NoteNetwork", "build_network", "undirected_view", "to_graphml", "to_dot"]


@dataclass(frozen=True)
class NoteNetwork:
    nodes: frozenset[str]
    edges: dict[tuple[str, str], int]
    artist: str
    title: str
    bars: int
    solo_length: int

    @property
    def track_id(self) -> str:
        return f"{self.artist}/{self.title}"

    def sorted_nodes(self) -> list[str]:
        return sorted(self.nodes)

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        return [(u, v, w) for (u, v), w in sorted(self.edges.items())]

    def successors(self) -> dict[str, set[str]]:
        succ = {v: set() for v in self.nodes}
        for u, v in self.edges:
            succ[u].add(v)
        return succ


def build_network(track: MelodyTrack) -> NoteNetwork:
    """One node per distinct label, one edge per consecutive pair weighted by its count."""
    labels = [canonical_label(e) for e in track.events]
    edges = Counter(zip(labels, labels[1:]))
    net = NoteNetwork(frozenset(labels), dict(sorted(edges.items())), track.artist,
                      track.title, track.bars, len(labels))
    assert sum(net.edges.values()) == net.solo_length - 1
    return net


def undirected_view(net: NoteNetwork) -> dict[str, set[str]]:
    """Simple undirected adjacency: directions and weights dropped, self-loops removed."""
    adj = {v: set() for v in net.sorted_nodes()}
    for u, v in net.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def to_graphml(net: NoteNetwork) -> str:
    ids = {v: f"n{i}" for i, v in enumerate(net.sorted_nodes())}
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="label" for="node" attr.name="label" attr.type="string"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        f'  <graph id={quoteattr(net.track_id)} edgedefault="directed">',
    ]
    for v, i in ids.items():
        lines.append(f'    <node id="{i}"><data key="label">{escape(v)}</data></node>')
    for u, v, w in net.sorted_edges():
        lines.append(f'    <edge source="{ids[u]}" target="{ids[v]}"><data key="weight">{w}</data></edge>')
    lines += ["  </graph>", "</graphml>", ""]
    return "\n".join(lines)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: NoteNetwork) -> str:
    lines = [f"digraph {_dot_quote(net.track_id)} {{"]
    for v in net.sorted_nodes():
        lines.append(f"  {_dot_quote(v)} [label={_dot_quote(v)}];")
    for u, v, w in net.sorted_edges():
        lines.append(f"  {_dot_quote(u)} -> {_dot_quote(v)} [weight={w}];")
    lines += ["}", ""]
    return "\n".join(lines)
