import numpy as np
import pytest

from groupoid_logic.io import parse_builtin

# every builtin fixture with at most six objects
SMALL = [
    "units:1",
    "units:3",
    "units:5",
    "units:6",
    "pair:1",
    "pair:2",
    "pair:3",
    "pair:4",
    "pair:6",
    "group:z:2",
    "group:z:3",
    "pair:2+pair:2",
    "pair:2+units:1",
    "pair:3+group:z:2",
    "pair:2+group:z:3",
    "units:2+pair:3",
]

# larger fixtures, still |G| <= 64
MEDIUM = ["pair:7", "pair:8", "pair:4+pair:4", "pair:5+units:3", "group:z:5+pair:3"]


def build(name):
    return parse_builtin(name)


def random_lambda(rng, n, zeros=False):
    lam = rng.dirichlet(np.ones(n))
    if zeros and n > 1:
        k = rng.integers(1, n)
        lam[rng.choice(n, size=k, replace=False)] = 0.0
        if lam.sum() == 0:
            lam[0] = 1.0
        lam /= lam.sum()
    return lam


def dyadic_lambda(n):
    """Powers of two summing to 1: (1/2, 1/4, ..., 1/2^(n-1), 1/2^(n-1))."""
    if n == 1:
        return np.array([1.0])
    lam = np.array([2.0 ** -(k + 1) for k in range(n)])
    lam[-1] = lam[-2]
    return lam


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=SMALL)
def small(request):
    return build(request.param)


ACCEPTANCE_LINES = []


def acceptance(number, ok, detail):
    """Record and print one acceptance verdict."""
    line = f"{'PASS' if ok else 'FAIL'}  AC-{number:02d}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
