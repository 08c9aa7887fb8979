import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
GATE = pytest.StashKey[dict]()


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture
def gate(request):
    """Record one acceptance line, then assert it."""
    store = request.config.stash.setdefault(GATE, {})

    def record(number: int, ok: bool, detail: str):
        store[number] = (bool(ok), detail)
        assert ok, f"criterion {number}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(GATE, {})
    if not store:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(store):
        ok, detail = store[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
