"""Shared pytest plumbing: the acceptance summary block.

Acceptance tests append one line per criterion; the hook below prints them
after the run regardless of capture settings, so the final report always
shows the per-criterion verdicts.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines:
        terminalreporter.write_line(line)
