from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from fervir.scalar import ScalarK

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(ScalarK, small_fractions, small_fractions)
nonzero_scalars = scalars.filter(bool)

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


def half(n) -> Fraction:
    return Fraction(n, 2)
