def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.report_lines(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
