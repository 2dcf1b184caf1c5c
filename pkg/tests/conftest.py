def pytest_terminal_summary(terminalreporter):
    # surface the acceptance PASS/FAIL lines even when output is captured
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" and "[acceptance" in getattr(rep, "capstdout", ""):
                lines += [ln for ln in rep.capstdout.splitlines() if ln.startswith("[acceptance")]
    if lines:
        terminalreporter.section("acceptance criteria")
        for ln in sorted(lines, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(ln)
