import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when == "teardown":
        return
    if rep.when == "setup" and rep.passed:
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.failed:
        detail = (detail + " " if detail else "") + "(" + str(rep.longrepr).strip().splitlines()[-1][:120] + ")"
    status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
    item.config._criteria[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = getattr(config, "_criteria", {})
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(rows):
        title, status, detail = rows[number]
        terminalreporter.write_line(f"criterion {number:2d}  {status}  {title}" + (f"  [{detail}]" if detail else ""))
