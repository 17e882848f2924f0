# filled by test_acceptance.py: criterion number -> (passed, description, detail)
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        passed, desc, detail = ACCEPTANCE_RESULTS[n]
        line = f"{'PASS' if passed else 'FAIL'} criterion {n}: {desc}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)
