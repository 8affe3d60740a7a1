import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def measured(request):
    """Attach a short measurement string to the criterion line."""
    notes = []
    request.node.user_properties.append(("measured", notes))
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "notes": [], "secs": 0.0})
    entry["ok"] &= rep.passed
    entry["secs"] += rep.duration
    for key, notes in item.user_properties:
        if key == "measured":
            entry["notes"].extend(notes)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        status = "PASS" if e["ok"] else "FAIL"
        notes = "; ".join(e["notes"])
        line = f"criterion {number}: {status}  {e['title']}  [{e['secs']:.2f}s]"
        terminalreporter.write_line(f"{line}  {notes}" if notes else line)
