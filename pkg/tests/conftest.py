import sys
import random
from fractions import Fraction

import pytest

from rsdof.region import CsitProfile


def Q(x) -> Fraction:
    return Fraction(str(x))


def vec(*xs):
    return tuple(Q(x) for x in xs)


def random_profile(rng: random.Random, K: int, denominator: int = 20) -> CsitProfile:
    """Random exponents on a 1/denominator lattice; ties are frequent on purpose."""
    return CsitProfile.from_alphas(Fraction(rng.randint(0, denominator), denominator) for _ in range(K))


@pytest.fixture
def p2():
    return CsitProfile.from_alphas(vec(0.6, 0.3))


@pytest.fixture
def p3():
    return CsitProfile.from_alphas(vec(0.8, 0.5, 0.2))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
