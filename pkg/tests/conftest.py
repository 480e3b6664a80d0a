import sys

import pytest

from nfbeam.geometry import CarrierConfig, make_uca, make_ula


@pytest.fixture(scope="session")
def carrier28():
    return CarrierConfig.from_ghz(28)


@pytest.fixture(scope="session")
def ula256(carrier28):
    return make_ula(256, carrier28)


@pytest.fixture(scope="session")
def uca256(carrier28):
    return make_uca(256, carrier28)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
