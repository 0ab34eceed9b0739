import pytest

_LINES: dict[int, str] = {}


class Verdict:
    """Collects one summary line per acceptance criterion."""

    def __call__(self, number: int, passed: bool, detail: str) -> bool:
        _LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_LINES[number])
        return passed


@pytest.fixture
def verdict():
    return Verdict()


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_LINES):
            terminalreporter.write_line(_LINES[k])
