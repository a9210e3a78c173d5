from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from spellnorm.synthetic import build_corpus  # noqa: E402

SUITE_BUDGET_SECONDS = 300

# oracle-backed properties are slow per example; wall-clock deadlines only add flakiness
settings.register_profile("spellnorm", deadline=None)
settings.load_profile("spellnorm")

_results: dict[int, tuple[str, str, str]] = {}
_session_start = time.monotonic()


class _Record:
    detail = ""


@contextmanager
def criterion(number: int, title: str):
    """Record the outcome of one acceptance criterion for the summary."""
    rec = _Record()
    try:
        yield rec
    except pytest.skip.Exception as exc:
        _results[number] = ("SKIP", title, str(exc))
        raise
    except BaseException as exc:
        _results[number] = ("FAIL", title, f"{type(exc).__name__}: {exc}".splitlines()[0])
        raise
    _results[number] = ("PASS", title, rec.detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    elapsed = time.monotonic() - _session_start
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        status, title, detail = _results[number]
        terminalreporter.write_line(f"criterion {number} [{status}] {title}: {detail}")
    status = "PASS" if elapsed < SUITE_BUDGET_SECONDS else "FAIL"
    terminalreporter.write_line(
        f"criterion 8 [{status}] full suite runtime: {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS}s)"
    )


@pytest.fixture(scope="session")
def synthetic():
    return build_corpus()
