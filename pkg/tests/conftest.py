import sys

import numpy as np
import pytest


def random_hermitian(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return G + G.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
