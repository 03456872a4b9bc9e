import pytest

from josabpp.generator import GenParams, generate

_acceptance: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def small_instance():
    return generate(GenParams.preset("small", seed=0, name="small-0"))


@pytest.fixture(scope="session")
def mini_instance():
    """A 2,000-item instance: big enough for real batching, quick to solve."""
    return generate(GenParams(items=2000, orders=100, zones=2, orders_per_batch=10, seed=3, name="mini"))


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
