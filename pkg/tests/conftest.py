import json
from importlib import resources
from pathlib import Path

import pytest

from nmmkit.kb import load_fixture_kb

FIXTURES = Path(str(resources.files("nmmkit").joinpath("fixtures")))


def load_json(rel):
    with open(FIXTURES / rel, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES


@pytest.fixture(scope="session")
def kb():
    return load_fixture_kb()


# one line per acceptance criterion, printed after the run
CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, desc = CRITERIA[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {desc}")
