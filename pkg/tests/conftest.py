from hypothesis import strategies as st

from quotdt.motive import TateClass

ACCEPTANCE_LINES: list[str] = []


def tate_classes(max_exp: int = 6, max_coeff: int = 5, max_terms: int = 4, min_coeff: int | None = None):
    lo = -max_coeff if min_coeff is None else min_coeff
    return st.dictionaries(
        st.integers(-max_exp, max_exp), st.integers(lo, max_coeff), max_size=max_terms
    ).map(TateClass)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
