import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def report():
    """Record a one-line verdict, then assert it so the test fails too."""
    def _report(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        assert passed, line
    return _report


@pytest.fixture
def report_skip():
    def _skip(number, reason):
        line = f"criterion {number:>2}: SKIP  {reason}"
        _ACCEPTANCE.append(line)
        pytest.skip(line)
    return _skip


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
