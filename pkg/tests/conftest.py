from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def rationals(min_value=None, max_value=None, max_denominator=50):
    return st.fractions(min_value=min_value, max_value=max_value, max_denominator=max_denominator)


positive_rationals = st.builds(
    Fraction, st.integers(1, 40), st.integers(1, 12)
)

velocity_vectors = st.lists(positive_rationals, min_size=1, max_size=3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
