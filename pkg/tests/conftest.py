import itertools
import os

import pytest
from hypothesis import HealthCheck, settings

from sl3kloosterman import oracle, sums

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CMAX = 12
CHAR_RANGE = range(-2, 3)


def char_pairs(r=CHAR_RANGE):
    return [((a, b), (c, d)) for a, b, c, d in itertools.product(r, r, r, r)]


@pytest.fixture(scope="session")
def corpus():
    """Closed-form (both words) and oracle values on the full flagship grid.

    Maps (c1, c2, ch) to (aba value, bab value, oracle value); shared by the
    criteria that sweep the same range.
    """
    table = {}
    for c1 in range(1, CMAX + 1):
        for c2 in range(1, CMAX + 1):
            for ch in char_pairs():
                table[c1, c2, ch] = (
                    sums.coarse_kloosterman(ch, c1, c2, "aba").value,
                    sums.coarse_kloosterman(ch, c1, c2, "bab").value,
                    oracle.oracle_coarse(ch, c1, c2).value,
                )
    return table


_LINES = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion and return the verdict."""

    def record(number, title, ok, detail=""):
        line = f"criterion {number:>2} {title}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        print(line)
        _LINES.append((number, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
