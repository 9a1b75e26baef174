import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_poly(rng, deg):
    return rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)


def random_annulus(rng, n, lo=0.1, hi=1.0):
    return rng.uniform(lo, hi, n) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def pytest_sessionstart(session):
    import time

    session.config._fracpicard_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time

    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(RESULTS, key=lambda k: int(k.split()[0][1:])):
        passed, detail = RESULTS[key]
        tr.write_line(f"{'PASS' if passed else 'FAIL'}  {key}: {detail}")
    elapsed = time.perf_counter() - config._fracpicard_t0
    tr.write_line(f"{'PASS' if elapsed < 30 else 'FAIL'}  suite runtime: {elapsed:.2f}s (limit 30s)")
