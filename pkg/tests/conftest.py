from collections import defaultdict

import pytest

CRITERIA = range(1, 10)
_outcomes: dict = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): clause of acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            _outcomes[n].append((item.name, False, rep.wasxfail))
        else:
            _outcomes[n].append((item.name, rep.passed, "" if rep.passed else rep.longreprtext.splitlines()[-1]))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in CRITERIA:
        clauses = _outcomes.get(n)
        if not clauses:
            terminalreporter.write_line(f"criterion {n}: NOT RUN")
            continue
        failed = [(name, why) for name, ok, why in clauses if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {n}: {status} ({len(clauses) - len(failed)}/{len(clauses)} clauses)"
        for name, why in failed:
            line += f"; {name}: {why}"
        terminalreporter.write_line(line)
