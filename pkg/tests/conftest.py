import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = {}


def _entry(item):
    number, title = item.get_closest_marker("criterion").args
    return _RESULTS.setdefault(number, {"title": title, "info": "", "elapsed": 0.0, "passed": False})


@pytest.fixture
def criterion(request):
    """Per-criterion record; the test may set ``info`` for the summary line."""
    entry = _entry(request.node)
    start = time.perf_counter()
    yield entry
    entry["elapsed"] = time.perf_counter() - start


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.get_closest_marker("criterion") and rep.when == "call":
        _entry(item)["passed"] = rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        r = _RESULTS[number]
        line = f"criterion {number}: {'PASS' if r['passed'] else 'FAIL'} ({r['elapsed']:.1f}s) {r['title']}"
        if r["info"]:
            line += f" [{r['info']}]"
        terminalreporter.write_line(line)
