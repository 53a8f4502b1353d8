from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from tridecouple.orbitlab import rational_orthogonal
from tridecouple.tensor import SymTensor3, tensor_from_cubic

REFERENCE_CUBIC = {"3,0,0": 2, "2,1,0": 3, "0,3,0": 3, "1,1,1": -12, "0,0,3": 6}


@pytest.fixture
def reference_tensor():
    return tensor_from_cubic(REFERENCE_CUBIC, 3)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def rational_tensors(draw, n=None):
    n = n if n is not None else draw(st.integers(2, 4))
    m = n * (n + 1) * (n + 2) // 6
    vals = draw(st.lists(rationals, min_size=m, max_size=m))
    return SymTensor3(n, [Fraction(v) for v in vals], True)


@st.composite
def rational_maps(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return rational_orthogonal(n, seed)


def random_rational_tensor(rng, n, num=9, den=4):
    m = n * (n + 1) * (n + 2) // 6
    return SymTensor3(n, [Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1))) for _ in range(m)])


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    state = {"label": None}

    def declare(label):
        state["label"] = label

    yield declare
    if state["label"] is not None:
        failed = request.node.stash.get(_FAILED, False)
        ACCEPTANCE_LINES.append(f"{'FAIL' if failed else 'PASS'}  {state['label']}")


_FAILED = pytest.StashKey[bool]()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.stash[_FAILED] = rep.failed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
