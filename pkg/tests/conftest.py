import numpy as np
import pytest

from artinres.algebra import build_algebra, quotient_from_polynomials
from artinres.decomp import ClassRegistry


def dual_numbers():
    # F_2[x]/(x^2) from structure constants
    c = np.zeros((2, 2, 2), dtype=np.int64)
    c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = 1
    return build_algebra(2, ["1", "x"], c, [1, 0])


def truncated(p=5, n=4):
    return quotient_from_polynomials(p, ["x"], [f"x^{n}"])


def ci():
    return quotient_from_polynomials(3, ["x", "y"], ["x^2", "y^2"])


def square_zero():
    return quotient_from_polynomials(2, ["x", "y"], ["x^2", "x*y", "y^2"])


@pytest.fixture(scope="session")
def A2():
    return dual_numbers()


@pytest.fixture(scope="session")
def C4():
    return truncated()


@pytest.fixture(scope="session")
def CI():
    return ci()


@pytest.fixture(scope="session")
def B():
    return square_zero()


@pytest.fixture(scope="session")
def gorenstein_rings(A2, C4, CI):
    return [A2, C4, CI]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def registry_for():
    return lambda A: ClassRegistry(A, seed=0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, title = results[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {title}")
