"""Shared pytest hooks: collect acceptance lines and show them at the end."""

_acceptance_lines = []


def record_acceptance_line(text: str) -> None:
    _acceptance_lines.append(text)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
