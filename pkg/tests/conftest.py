def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import acceptance_report

    if acceptance_report.lines:
        terminalreporter.ensure_newline()
        terminalreporter.section("acceptance criteria", sep="-")
        for n in sorted(acceptance_report.lines):
            terminalreporter.write_line(acceptance_report.lines[n])
