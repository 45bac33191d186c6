import json

import pytest

FIG1_EVENTS = [
    {"kind": "note", "pitch": "C", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "D", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "D", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "C", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "D", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "G", "octave": 4, "duration": "1-8"},
    {"kind": "rest", "duration": "1-8"},
    {"kind": "note", "pitch": "G", "octave": 4, "duration": "1-4"},
    {"kind": "note", "pitch": "G", "octave": 5, "duration": "1-4"},
]


@pytest.fixture
def fig1_bytes():
    """The melodic line of the worked example.

    Octave 4 and quarter durations for C and D, and the eighth rest, are fixture
    choices; the example only pins the G durations and the octave jump.
    """
    doc = {"artist": "example", "title": "fig1", "bars": 2, "events": FIG1_EVENTS}
    return json.dumps(doc).encode("utf-8")


@pytest.fixture
def fig1_track(fig1_bytes):
    from notenet.melody import parse_melody

    return parse_melody(fig1_bytes)


@pytest.fixture
def fig1_net(fig1_track):
    from notenet.network import build_network

    return build_network(fig1_track)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)
