"""Melody file format, note events and synthetic corpora.

A melody file is a UTF-8 JSON object::

    {"artist": "...", "title": "...", "bars": 4,
     "events": [{"kind": "note", "pitch": "G", "octave": 5, "duration": "1-8"},
                {"kind": "rest", "duration": "1-8"},
                {"kind": "chord", "members": [{"pitch": "C", "octave": 4}, ...],
                 "duration": "1-4"}]}
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "MelodyFormatError",
    "NoteEvent",
    "MelodyTrack",
    "MarkovProfile",
    "canonical_label",
    "parse_label",
    "parse_duration",
    "parse_melody",
    "dumps_melody",
    "generate_corpus",
    "demo_profiles",
]

KINDS = ("note", "rest", "chord")
_PITCH_RE = re.compile(r"^[A-G](#|b)?$")
_DURATION_RE = re.compile(r"^(-?\d+)-(-?\d+)$")
OCTAVE_RANGE = (0, 9)


class MelodyFormatError(ValueError):
    """Raised for malformed melody files.

    ``event_index`` names the offending event (None for file-level problems),
    ``position`` is a ``(line, column)`` pair for JSON syntax errors.
    """

    def __init__(self, message, event_index=None, position=None):
        self.event_index = event_index
        self.position = position
        where = []
        if position is not None:
            where.append(f"line {position[0]}, column {position[1]}")
        if event_index is not None:
            where.append(f"event {event_index}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True)
class NoteEvent:
    kind: str
    duration: Fraction
    pitch: str | None = None
    octave: int | None = None
    members: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        duration = Fraction(self.duration)
        if duration <= 0:
            raise ValueError("duration must be positive")
        object.__setattr__(self, "duration", duration)
        if self.kind == "note":
            _check_pitch(self.pitch, self.octave)
            if self.members:
                raise ValueError("note events carry no chord members")
        elif self.kind == "rest":
            if self.pitch is not None or self.octave is not None or self.members:
                raise ValueError("rest events carry only a duration")
        else:
            if self.pitch is not None or self.octave is not None:
                raise ValueError("chord pitches go in members")
            members = tuple((p, o) for p, o in self.members)
            for p, o in members:
                _check_pitch(p, o)
            if len(set(members)) != len(members):
                raise ValueError("duplicate chord member")
            if len(members) < 2:
                raise ValueError("a chord needs at least two members")
            object.__setattr__(self, "members", tuple(sorted(members, key=lambda m: (m[1], m[0]))))

    @classmethod
    def note(cls, pitch: str, octave: int, duration) -> NoteEvent:
        return cls("note", Fraction(duration), pitch, octave)

    @classmethod
    def rest(cls, duration) -> NoteEvent:
        return cls("rest", Fraction(duration))

    @classmethod
    def chord(cls, members: Sequence[tuple[str, int]], duration) -> NoteEvent:
        return cls("chord", Fraction(duration), members=tuple(members))

    @property
    def label(self) -> str:
        return canonical_label(self)


def _check_pitch(pitch, octave):
    if not isinstance(pitch, str) or not _PITCH_RE.match(pitch):
        raise ValueError(f"invalid pitch {pitch!r}")
    if isinstance(octave, bool) or not isinstance(octave, int):
        raise ValueError(f"invalid octave {octave!r}")
    if not OCTAVE_RANGE[0] <= octave <= OCTAVE_RANGE[1]:
        raise ValueError(f"octave {octave} outside {OCTAVE_RANGE}")


@dataclass(frozen=True)
class MelodyTrack:
    artist: str
    title: str
    bars: int
    events: tuple[NoteEvent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if isinstance(self.bars, bool) or not isinstance(self.bars, int) or self.bars < 1:
            raise ValueError("bars must be a positive integer")
        if not self.events:
            raise ValueError("a track needs at least one event")
        if "/" in self.artist:
            raise ValueError("artist names may not contain '/'")

    @property
    def track_id(self) -> str:
        return f"{self.artist}/{self.title}"


def _format_duration(d: Fraction) -> str:
    return f"{d.numerator}-{d.denominator}"


def canonical_label(event: NoteEvent) -> str:
    """Node identity of an event, e.g. ``G/5/1-8``, ``rest/1-8``, ``C/4+E/4/1-4``."""
    dur = _format_duration(event.duration)
    if event.kind == "note":
        return f"{event.pitch}/{event.octave}/{dur}"
    if event.kind == "rest":
        return f"rest/{dur}"
    members = sorted(f"{p}/{o}" for p, o in event.members)
    return "+".join(members) + "/" + dur


def parse_duration(text: str) -> Fraction:
    m = _DURATION_RE.match(text) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"duration {text!r} is not of the form num-den")
    num, den = int(m.group(1)), int(m.group(2))
    if num < 1 or den < 1:
        raise ValueError(f"duration {text!r} needs positive numerator and denominator")
    return Fraction(num, den)


def parse_label(label: str) -> NoteEvent:
    """Inverse of :func:`canonical_label`."""
    head, _, dur = label.rpartition("/")
    duration = parse_duration(dur)
    if head == "rest":
        return NoteEvent.rest(duration)
    parts = head.split("+")
    members = []
    for part in parts:
        pitch, _, octave = part.partition("/")
        members.append((pitch, int(octave)))
    if len(members) == 1:
        return NoteEvent.note(members[0][0], members[0][1], duration)
    return NoteEvent.chord(members, duration)


def _event_from_json(obj, index):
    if not isinstance(obj, dict):
        raise MelodyFormatError("event must be an object", index)
    kind = obj.get("kind")
    if kind not in KINDS:
        raise MelodyFormatError(f"unknown event kind {kind!r}", index)
    allowed = {"note": {"kind", "pitch", "octave", "duration"},
               "rest": {"kind", "duration"},
               "chord": {"kind", "members", "duration"}}[kind]
    extra = set(obj) - allowed
    if extra:
        raise MelodyFormatError(f"unexpected fields {sorted(extra)} for {kind}", index)
    if "duration" not in obj:
        raise MelodyFormatError("missing duration", index)
    try:
        duration = parse_duration(obj["duration"])
        if kind == "note":
            return NoteEvent.note(obj.get("pitch"), obj.get("octave"), duration)
        if kind == "rest":
            return NoteEvent.rest(duration)
        members = obj.get("members")
        if not isinstance(members, list):
            raise ValueError("chord members must be a list")
        pairs = []
        for m in members:
            if not isinstance(m, dict) or set(m) != {"pitch", "octave"}:
                raise ValueError("chord member must be {pitch, octave}")
            pairs.append((m["pitch"], m["octave"]))
        return NoteEvent.chord(pairs, duration)
    except ValueError as exc:
        raise MelodyFormatError(str(exc), index) from None


def parse_melody(data: bytes | str) -> MelodyTrack:
    """Parse and validate melody file content."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MelodyFormatError(f"not UTF-8: {exc.reason} at byte {exc.start}") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MelodyFormatError(f"syntax error: {exc.msg}", position=(exc.lineno, exc.colno)) from None
    if not isinstance(obj, dict):
        raise MelodyFormatError("top level must be an object")
    for key, typ in (("artist", str), ("title", str), ("bars", int), ("events", list)):
        if key not in obj:
            raise MelodyFormatError(f"missing field {key!r}")
        if not isinstance(obj[key], typ) or isinstance(obj[key], bool):
            raise MelodyFormatError(f"field {key!r} must be {typ.__name__}")
    if obj["bars"] < 1:
        raise MelodyFormatError("bars must be >= 1")
    if not obj["events"]:
        raise MelodyFormatError("events must be nonempty")
    events = tuple(_event_from_json(e, i) for i, e in enumerate(obj["events"]))
    try:
        return MelodyTrack(obj["artist"], obj["title"], obj["bars"], events)
    except ValueError as exc:
        raise MelodyFormatError(str(exc)) from None


def _event_to_json(e: NoteEvent) -> dict:
    dur = _format_duration(e.duration)
    if e.kind == "note":
        return {"kind": "note", "pitch": e.pitch, "octave": e.octave, "duration": dur}
    if e.kind == "rest":
        return {"kind": "rest", "duration": dur}
    return {"kind": "chord",
            "members": [{"pitch": p, "octave": o} for p, o in e.members],
            "duration": dur}


def dumps_melody(track: MelodyTrack) -> bytes:
    """Canonical serialization: fixed key order, reduced durations, sorted chord members."""
    obj = {"artist": track.artist, "title": track.title, "bars": track.bars,
           "events": [_event_to_json(e) for e in track.events]}
    return (json.dumps(obj, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


@dataclass(frozen=True)
class MarkovProfile:
    """First-order Markov chain over note events, standing in for one artist's licks."""

    artist: str
    alphabet: tuple[NoteEvent, ...]
    transitions: np.ndarray
    initial: np.ndarray | None = None

    def __post_init__(self):
        alphabet = tuple(parse_label(a) if isinstance(a, str) else a for a in self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if not alphabet:
            raise ValueError("empty alphabet")
        n = len(alphabet)
        P = np.asarray(self.transitions, dtype=float)
        if P.shape != (n, n):
            raise ValueError(f"transition matrix must be {n}x{n}, got {P.shape}")
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-9):
            bad = int(np.flatnonzero((np.abs(P.sum(axis=1) - 1.0) > 1e-9) | np.any(P < 0, axis=1))[0])
            raise ValueError(f"row {bad} of the transition matrix is not stochastic")
        object.__setattr__(self, "transitions", P)
        if self.initial is None:
            p0 = np.full(n, 1.0 / n)
        else:
            p0 = np.asarray(self.initial, dtype=float)
            if p0.shape != (n,) or np.any(p0 < 0) or abs(p0.sum() - 1.0) > 1e-9:
                raise ValueError("initial distribution is not stochastic")
        object.__setattr__(self, "initial", p0)

    def sample(self, length: int, rng: np.random.Generator) -> list[NoteEvent]:
        n = len(self.alphabet)
        state = int(rng.choice(n, p=self.initial))
        out = [self.alphabet[state]]
        for _ in range(length - 1):
            state = int(rng.choice(n, p=self.transitions[state]))
            out.append(self.alphabet[state])
        return out


def generate_corpus(profiles: Sequence[MarkovProfile], tracks_per_artist: int,
                    events_per_track: int, seed: int) -> list[MelodyTrack]:
    if not profiles:
        raise ValueError("no profiles")
    if tracks_per_artist < 1 or events_per_track < 1:
        raise ValueError("counts must be >= 1")
    rng = np.random.default_rng(seed)
    bars = math.ceil(events_per_track / 8)
    corpus = []
    for profile in profiles:
        for i in range(tracks_per_artist):
            events = profile.sample(events_per_track, rng)
            corpus.append(MelodyTrack(profile.artist, f"track{i + 1:03d}", bars, tuple(events)))
    return corpus


_SCALE = ("C", "D", "E", "F", "G", "A", "B")


def demo_profiles(seed: int = 0) -> list[MarkovProfile]:
    """Three stylistically distinct artists over disjoint alphabets.

    * ``riffer``: five eighth notes, any note may follow any other (small, dense network).
    * ``climber``: sixteen quarter notes walked stepwise up and down (long, thin network).
    * ``shredder``: twenty-one sixteenths plus a rest, three fixed successors each
      (mid-sized, loosely knit network).

    ``seed`` only shuffles the shredder's jump targets.
    """
    rng = np.random.default_rng(seed)

    riffer = [NoteEvent.note(p, 3, Fraction(1, 8)) for p in ("A", "C", "D", "E", "G")]
    P1 = np.full((5, 5), 0.2)

    climber = [NoteEvent.note(p, o, Fraction(1, 4)) for o in (4, 5, 6) for p in _SCALE][:16]
    n2 = len(climber)
    P2 = np.zeros((n2, n2))
    for i in range(n2):
        P2[i, min(i + 1, n2 - 1)] += 0.5
        P2[i, max(i - 1, 0)] += 0.45
        P2[i, i] += 0.05

    shredder = [NoteEvent.note(p, o, Fraction(1, 16)) for o in (5, 6, 7) for p in _SCALE]
    shredder.append(NoteEvent.rest(Fraction(1, 2)))
    n3 = len(shredder)
    P3 = np.zeros((n3, n3))
    jumps = rng.permutation(n3)
    for i in range(n3):
        for j in (i + 1, i + 7, jumps[i]):
            P3[i, j % n3] += 1.0 / 3.0

    return [MarkovProfile("riffer", tuple(riffer), P1),
            MarkovProfile("climber", tuple(climber), P2),
            MarkovProfile("shredder", tuple(shredder), P3)]
