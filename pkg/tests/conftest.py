import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _clean_precision_env(monkeypatch):
    monkeypatch.delenv("MUNTZ_PRECISION_BITS", raising=False)


ACCEPTANCE = pytest.StashKey[dict]()
CRITERIA = range(1, 11)


@pytest.fixture
def criterion(request):
    """``criterion(number, ok, detail)`` records one acceptance measurement."""
    results = request.config.stash.setdefault(ACCEPTANCE, {})

    def record(number, ok, detail):
        results.setdefault(number, []).append((bool(ok), detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in CRITERIA:
        parts = results.get(n)
        if not parts:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN")
            continue
        verdict = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  " + "; ".join(d for _, d in parts))
