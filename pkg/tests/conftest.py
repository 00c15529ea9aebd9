"""Shared pytest wiring.

The acceptance tests append their one-line verdicts here so the summary
survives output capture and lands at the end of every full run.
"""

acceptance_verdicts: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_verdicts:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_verdicts:
            terminalreporter.write_line(line)
