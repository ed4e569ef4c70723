import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from zeroprod.exact_linalg import QQ, PrimeField

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

FIELDS = {"GF(5)": PrimeField(5), "GF(7)": PrimeField(7), "GF(101)": PrimeField(101), "Q": QQ}


@pytest.fixture(params=["GF(7)", "GF(101)", "Q"])
def field(request):
    return FIELDS[request.param]


@pytest.fixture
def gf7():
    return PrimeField(7)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
