from pathlib import Path

import pytest

# criterion number -> [title, outcomes]
_criteria: dict[int, list] = {}

from endorsenet import load

NETWORKS = Path(__file__).resolve().parent.parent / "networks"


@pytest.fixture
def fixture_path():
    return lambda name: NETWORKS / f"{name}.endo"


@pytest.fixture
def fixture_net():
    return lambda name: load(NETWORKS / f"{name}.endo")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            number, title = mark.args
            _criteria.setdefault(number, [title, []])
            item.user_properties.append(("criterion", number))


def pytest_runtest_logreport(report):
    number = dict(report.user_properties).get("criterion")
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _criteria[number][1].append(report.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcomes = _criteria[number]
        verdict = "NOT RUN" if not outcomes else "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {verdict}  {title}")
