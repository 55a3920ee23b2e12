import pytest

# filled by the acceptance tests, printed once at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str) -> bool:
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES[criterion] = f"criterion {criterion:2d}: {status}  {detail}"
    print(ACCEPTANCE_LINES[criterion])
    return passed


@pytest.fixture
def acceptance_record():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
