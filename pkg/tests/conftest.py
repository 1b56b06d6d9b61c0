import os
import re
import sys
import random
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=int(os.environ.get("DLAWS_SEED", "20240917")),
                     help="seed for randomized rank certificates")


@pytest.fixture
def rng(request):
    return random.Random(request.config.getoption("--seed"))


@pytest.fixture
def data_dir():
    return DATA


def parse_juxtaposed(ring, text):
    """Parse a polynomial written with juxtaposition for products."""
    return ring.parse(re.sub(r"(?<=[\w)])\s+(?=[\w(])", "*", text.strip()))


def read_polys(ring, path):
    return [parse_juxtaposed(ring, s) for s in path.read_text().splitlines() if s.strip()]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
