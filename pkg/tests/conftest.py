"""Shared fixtures and the acceptance summary hook.

Random inputs are always drawn from seeded generators so every run sees
the same data.  Hypothesis runs derandomized for the same reason: the
suite is a reproducible artifact, not a fuzzing session.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from revser.multiindex import SeriesContext, enumerate_weight
from revser.series import TruncatedSeriesMap, random_map

settings.register_profile(
    "artifact",
    max_examples=40,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("artifact")


def build_map(nvars: int, degree: int, *comps) -> TruncatedSeriesMap:
    """Terse map literal: build_map(1, 4, {(1,): 1, (2,): 1})."""
    from revser.series import series_map

    ctx = SeriesContext(nvars, degree)
    return series_map(ctx, [{k: Fraction(v) for k, v in c.items()} for c in comps])


def seeded_maps(count: int, nvars: int, degree: int, seed: int, **kw):
    """Deterministic batch of unit-tangent random maps."""
    rng = random.Random(seed)
    ctx = SeriesContext(nvars, degree)
    return [random_map(ctx, rng, **kw) for _ in range(count)]


@pytest.fixture
def xx2():
    """The one-variable golden map x + x^2 at cap 4."""
    return build_map(1, 4, {(1,): 1, (2,): 1})


@pytest.fixture
def xy2():
    """The two-variable golden map (x + y^2, y) at cap 4."""
    return build_map(2, 4, {(1, 0): 1, (0, 2): 1}, {(0, 1): 1})


# ---------------------------------------------------------------------------
# Acceptance reporting: collect per-criterion outcomes while the suite runs
# and print one line per criterion in the terminal summary, where output
# capture cannot swallow it.

ACCEPTANCE = {}  # criterion number -> (label, passed)


def register_criterion(number: int, label: str):
    ACCEPTANCE.setdefault(number, (label, None))


def record_criterion(number: int, label: str, passed: bool):
    ACCEPTANCE[number] = (label, passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.ensure_newline()
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        label, passed = ACCEPTANCE[number]
        verdict = "PASS" if passed else ("FAIL" if passed is not None else "NOT RUN")
        terminalreporter.write_line(f"criterion {number:2d} {verdict}: {label}")
