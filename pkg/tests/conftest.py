import pytest

from appell_lab.qseries import TauPoint
from appell_lab.sampling import make_rng


@pytest.fixture
def rng():
    return make_rng(2024, 0)


@pytest.fixture(params=[0.1, 0.3 + 0.2j, 0.45j], ids=["q=0.1", "q=0.3+0.2i", "q=0.45i"])
def tau(request):
    return TauPoint.from_q(request.param)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(RESULTS, key=lambda l: l.criterion):
        terminalreporter.write_line(str(line))
