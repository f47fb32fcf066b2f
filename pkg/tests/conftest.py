from __future__ import annotations

import pytest

_RESULTS: dict[int, tuple[bool, str]] = {}


class Recorder:
    """Collects one verdict per acceptance criterion for the terminal summary."""

    def __call__(self, number: int, ok: bool, summary: str) -> bool:
        _RESULTS[number] = (bool(ok), summary)
        return bool(ok)


@pytest.fixture(scope="session")
def acceptance() -> Recorder:
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, summary = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {summary}")
