import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from takagi.core_numbers import BinExp  # noqa: E402

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def unit_rationals(draw, max_den=10**4):
    q = draw(st.integers(1, max_den))
    p = draw(st.integers(0, q))
    return Fraction(p, q)


words = st.text(alphabet="01", max_size=12)


@st.composite
def expansions(draw, max_pre=10, max_per=8):
    pre = draw(st.text(alphabet="01", max_size=max_pre))
    per = draw(st.text(alphabet="01", min_size=1, max_size=max_per))
    return BinExp(pre, per)


@st.composite
def balanced_words(draw, max_half=5):
    """Words with equally many zeros and ones."""
    m = draw(st.integers(1, max_half))
    bits = draw(st.permutations("0" * m + "1" * m))
    return "".join(bits)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
