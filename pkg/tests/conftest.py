import sys
from pathlib import Path

import pytest

from jordanbound.catalog import acceptance_catalog, block, cyclic, q8, sym_zero_sum
from jordanbound.groups import close_generators

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def s3():
    return close_generators(sym_zero_sum(2).generators)


@pytest.fixture(scope="session")
def s4():
    return close_generators(sym_zero_sum(3).generators)


@pytest.fixture(scope="session")
def quaternion():
    return close_generators(q8().generators)


@pytest.fixture(scope="session")
def c13():
    return close_generators(cyclic(13).generators)


@pytest.fixture(scope="session")
def c13_s3():
    return close_generators(block(cyclic(13), sym_zero_sum(2)).generators)


@pytest.fixture(scope="session")
def s3_conjugated():
    return close_generators(sym_zero_sum(2).conjugate().generators)


@pytest.fixture(scope="session")
def catalog_groups():
    return [(e, close_generators(e.generators)) for e in acceptance_catalog()]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
