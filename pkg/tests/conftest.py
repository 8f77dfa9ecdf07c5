import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_mask(rng, max_side=64, density=None):
    h, w = rng.integers(1, max_side + 1, size=2)
    p = density if density is not None else rng.uniform(0.1, 0.9)
    return (rng.random((h, w)) < p).astype(np.uint8)


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts are collected while captured; replay them visibly
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and getattr(mod, "VERDICTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.VERDICTS:
            terminalreporter.write_line(line)
