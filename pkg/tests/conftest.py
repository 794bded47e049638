import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=int):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})")
