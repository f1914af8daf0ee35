from __future__ import annotations

import pytest

# criterion number -> list of (test name, passed, seconds)
_CRITERIA: dict[int, list[tuple[str, bool, float]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA.setdefault(marker.args[0], []).append((item.name, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        runs = _CRITERIA[k]
        ok = all(passed for _, passed, _ in runs)
        seconds = sum(d for _, _, d in runs)
        failed = [name for name, passed, _ in runs if not passed]
        tail = f" (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {seconds:7.2f}s{tail}")
