from __future__ import annotations

import pytest

_results: dict[int, tuple[str, str]] = {}


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = rep.failed or (rep.when == "setup" and rep.skipped)
    prev = _results.get(num, ("PASS", title))[0]
    if rep.when == "call" or failed:
        _results[num] = ("FAIL" if failed or prev == "FAIL" else "PASS", title)


def pytest_terminal_summary(terminalreporter) -> None:
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        status, title = _results[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {title}")
