import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from terrarough import geometry  # noqa: E402

BACKENDS = sorted(geometry.available_backends())


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
