import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kloosterman import _backend  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def pytest_addoption(parser):
    parser.addoption("--backend", choices=_backend.available(), default=None,
                     help="kernel backend for the whole session (default: compiled if built)")


def pytest_configure(config):
    choice = config.getoption("--backend")
    if choice:
        _backend.use(choice)


def pytest_report_header(config):
    return f"kloosterman kernels: {_backend.name()} (available: {', '.join(_backend.available())})"


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = _backend.use(request.param)
    yield request.param
    _backend.use(previous)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
