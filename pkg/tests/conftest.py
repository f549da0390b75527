from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("widomkit", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("widomkit")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
