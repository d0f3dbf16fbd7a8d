"""Collects acceptance outcomes and prints one line per criterion."""
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def record(number: int, ok: bool, text: str) -> None:
    ACCEPTANCE_LINES.append((number, bool(ok), text))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
