def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status, detail in sorted(lines, key=lambda x: int(x[0].split()[0][1:])):
            terminalreporter.write_line(f"[{status}] {name}  {detail}")
