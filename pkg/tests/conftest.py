import functools
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qgext.bicrossed import build_quantum_group  # noqa: E402
from qgext.cohomology import cocycle_representatives, extension_group  # noqa: E402
from qgext.fixtures import fixture_pairs  # noqa: E402

SLOW = os.environ.get("QGEXT_SLOW", "") not in ("", "0")


@functools.lru_cache(maxsize=None)
def pairs():
    return fixture_pairs()


@functools.lru_cache(maxsize=None)
def representatives(name):
    pair = pairs()[name]
    return tuple(cocycle_representatives(pair, extension_group(pair).exponent))


@functools.lru_cache(maxsize=None)
def quantum_groups(name):
    pair = pairs()[name]
    return tuple(build_quantum_group(pair, c) for c in representatives(name))


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    from qgext.fixtures import write_fixtures

    d = tmp_path_factory.mktemp("fixtures")
    write_fixtures(d)
    return d


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
