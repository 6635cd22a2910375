import time

import pytest
from hypothesis import settings

SUITE_BUDGET_SECONDS = 60.0

# fixed seeds: every property test draws the same examples on every run
settings.register_profile("fixed", derandomize=True, print_blob=True)
settings.load_profile("fixed")


def pytest_sessionstart(session):
    session.config._suite_started = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - session.config._suite_started
    if elapsed > SUITE_BUDGET_SECONDS:
        print(f"\nwhole suite took {elapsed:.1f} s, over the {SUITE_BUDGET_SECONDS:.0f} s budget")
        session.exitstatus = pytest.ExitCode.TESTS_FAILED
