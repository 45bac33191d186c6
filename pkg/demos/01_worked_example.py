"""
From a melodic line to a note-transition network
=================================================

Nine events: C D D C D, an eighth-note G, a rest, a quarter G and the G an
octave above. Every distinct (pitch, octave, duration) becomes a node; each
pair of consecutive events adds one to the weight of a directed link.
"""

from fractions import Fraction

from notenet import MelodyTrack, NoteEvent, build_network, full_report, to_dot, undirected_view

q, e = Fraction(1, 4), Fraction(1, 8)
events = [NoteEvent.note("C", 4, q), NoteEvent.note("D", 4, q), NoteEvent.note("D", 4, q),
          NoteEvent.note("C", 4, q), NoteEvent.note("D", 4, q), NoteEvent.note("G", 4, e),
          NoteEvent.rest(e), NoteEvent.note("G", 4, q), NoteEvent.note("G", 5, q)]
track = MelodyTrack("example", "line", bars=2, events=events)

net = build_network(track)
print(f"{len(net.nodes)} nodes, {len(net.edges)} directed links")
for u, v, w in net.sorted_edges():
    print(f"  {u:>8} -> {v:<8} weight {w}")

# The D -> D self-loop and the C <-> D pair collapse in the undirected view,
# which is what diameter, path length and clustering are computed on.
adj = undirected_view(net)
print("undirected links:", sum(len(n) for n in adj.values()) // 2)

report = full_report(net)
print(f"diameter {report.diameter}, average path length {report.avg_path_length:.3f}")
print(f"mean degree {report.degree.mean:.3f}, max weighted degree {report.weighted_degree.max:.0f}")

print()
print(to_dot(net))
