import pytest

from chgldpc.component import make_bch_31_21, make_repetition
from chgldpc.tanner import build_permutation_code, search_shifts


@pytest.fixture(scope="session")
def bch():
    return make_bch_31_21()


@pytest.fixture(scope="session")
def rep5():
    return make_repetition(5, 2)


@pytest.fixture(scope="session")
def layout3():
    """(3,5,13) circulant layout of girth 8 (its lower two block rows have girth 8 too)."""
    return search_shifts(3, 5, 13, 8, seed=1)


@pytest.fixture(scope="session")
def graph3(layout3):
    return build_permutation_code(layout3)


@pytest.fixture(scope="session")
def layout4():
    """(4,5,17) circulant layout of girth 6 whose lower three block rows have girth 8."""
    return search_shifts(4, 5, 17, 6, seed=1, lower_rows_girth=8)


@pytest.fixture(scope="session")
def graph4(layout4):
    return build_permutation_code(layout4)


@pytest.fixture(scope="session")
def layout3_lower12():
    """(3,5,21) circulant layout whose lower two block rows have girth 12."""
    return search_shifts(3, 5, 21, 8, seed=1, lower_rows_girth=12)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance line; all lines are printed at the end of the run."""
    def emit(number: int, ok: bool, detail: str, seconds: float, limit: float | None):
        budget = f"{seconds:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
        line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {budget}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
