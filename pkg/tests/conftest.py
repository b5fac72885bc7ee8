import pytest

_AC_LINES: list[str] = []


@pytest.fixture
def ac_line():
    """Record one summary line per acceptance criterion."""

    def record(name: str, ok: bool, detail: str) -> None:
        line = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
        _AC_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _AC_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _AC_LINES:
            terminalreporter.write_line(line)
