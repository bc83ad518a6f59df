import os

import pytest

ACCEPTANCE_LINES = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ROGAME_LONG_RUN") == "1":
        return
    skip = pytest.mark.skip(reason="long-run reproduction; set ROGAME_LONG_RUN=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
