import contextlib
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES: list[str] = []


@contextlib.contextmanager
def _criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        ACCEPTANCE_LINES.append(f"[FAIL] criterion {number:2d}: {title} ({elapsed:.2f}s; {type(exc).__name__}: {exc})")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    tag = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"[{tag}] criterion {number:2d}: {title} ({elapsed:.2f}s, limit {limit:.0f}s)")
    assert ok, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
