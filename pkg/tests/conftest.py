import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one ACCEPTANCE PASS/FAIL line per acceptance-criterion test."""
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.fspath.basename == "test_acceptance.py":
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {item.name}: {verdict}", flush=True)
