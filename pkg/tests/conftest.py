import os

import pytest
from hypothesis import HealthCheck, settings

from speccalc.ring import Ring

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _no_char_override(monkeypatch):
    monkeypatch.delenv("SPECCALC_CHAR", raising=False)


@pytest.fixture
def r1():
    return Ring.polynomial(1)


@pytest.fixture
def r2():
    return Ring.polynomial(2)


@pytest.fixture
def r3():
    return Ring.polynomial(3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.line(mod.RESULTS[k])
