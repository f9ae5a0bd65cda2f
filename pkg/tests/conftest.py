import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", help="run multi-hour criteria (full n=10 scan)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long") or os.environ.get("CTX_LONG") == "1":
        return
    skip = pytest.mark.skip(reason="long-running; use --long or CTX_LONG=1")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    """``criterion(key, ok, detail)`` records one acceptance result for the summary."""

    def record(key, ok, detail=""):
        ACCEPTANCE[key] = (bool(ok), detail)
        print(f"ACCEPTANCE {key}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k.split()[0]), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}  {detail}")
