import time

import pytest

from lucaspal.pipeline import Config, run_full
from lucaspal.reduction import stage1_ell, stage2_m, stage3_n, tau_expansion

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(name):
        head = name.split()[0]
        num = head.rstrip("abcdefgh")
        return int(num), head

    for name in sorted(ACCEPTANCE, key=order):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def _timed_stages(digits):
    t0 = time.perf_counter()
    s1 = stage1_ell(digits=digits)
    s2 = stage2_m(s1.bound, digits=digits)
    s3 = stage3_n(s1.bound, s2.bound, digits=digits)
    return {"stage 1": s1, "stage 2": s2, "stage 3": s3, "seconds": time.perf_counter() - t0}


@pytest.fixture(scope="session")
def tau1000():
    return tau_expansion(1000)


@pytest.fixture(scope="session")
def stages1000():
    return _timed_stages(1000)


@pytest.fixture(scope="session")
def stages400():
    return _timed_stages(400)


@pytest.fixture(scope="session")
def cert1000():
    return run_full(Config(precision=1000))


@pytest.fixture(scope="session")
def cert500():
    return run_full(Config(precision=500))
