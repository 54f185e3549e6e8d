import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite_dims = st.integers(min_value=2, max_value=12)
phis = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False, allow_infinity=False)
times = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
nonneg_kappas = st.fractions(min_value=0, max_value=3, max_denominator=7)


@st.composite
def truncated_kappa_size(draw):
    """``(kappa, s)`` admitting a truncated representation."""
    if draw(st.booleans()):
        kappa = draw(nonneg_kappas)
        s = draw(st.integers(min_value=2, max_value=9))
    else:
        d = draw(st.integers(min_value=3, max_value=12))
        kappa = Fraction(-1, d - 1)
        s = draw(st.integers(min_value=2, max_value=d))
    return kappa, s


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        terminalreporter.section("acceptance verdict per criterion")
        verdict: dict[str, bool] = {}
        for line in ACCEPTANCE_LINES:
            status, rest = line.split(maxsplit=1)
            key = rest.split()[0]
            verdict[key] = verdict.get(key, True) and status == "PASS"
        for key in sorted(verdict, key=int):
            terminalreporter.write_line(f"criterion {key}: {'PASS' if verdict[key] else 'FAIL'}")
