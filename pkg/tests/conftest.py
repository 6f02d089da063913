import pytest

# (criterion number, description, passed) filled in by test_acceptance.py
ACCEPTANCE_LINES: list[tuple[int, str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {desc}")


@pytest.fixture
def record_criterion():
    def record(num: int, desc: str, ok: bool) -> bool:
        ACCEPTANCE_LINES.append((num, desc, bool(ok)))
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {desc}")
        return ok

    return record
