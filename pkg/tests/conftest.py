"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

from pathlib import Path

import pytest

from nomtax.records import CorrectionTable, RawEntry

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(num, desc): marks a test as one acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and rep.when == "call":
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _acceptance_results[marker.args[0]] = (marker.args[1], status)
    elif marker and rep.when == "setup" and rep.skipped:
        _acceptance_results[marker.args[0]] = (marker.args[1], "SKIP")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_acceptance_results):
        desc, status = _acceptance_results[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {desc}")


@pytest.fixture(scope="session")
def pages_dir() -> Path:
    return FIXTURES / "pages"

@pytest.fixture(scope="session")
def wordnet_dir() -> Path:
    return FIXTURES / "wordnet"


@pytest.fixture(scope="session")
def corrections() -> CorrectionTable:
    from nomtax.cli import _default_corrections

    return CorrectionTable.load(_default_corrections())


@pytest.fixture(scope="session")
def fixture_pages(pages_dir) -> list[RawEntry]:
    from nomtax.fetch import load_cached_pages

    return load_cached_pages(pages_dir)


@pytest.fixture(scope="session")
def fixture_records(fixture_pages, corrections):
    from nomtax.records import assemble_records

    records, warnings = assemble_records(fixture_pages, corrections)
    return records, warnings


@pytest.fixture(scope="session")
def graph(wordnet_dir):
    from nomtax.wordnet import parse_wordnet

    return parse_wordnet(wordnet_dir)


def page(name: str) -> RawEntry:
    path = FIXTURES / "pages" / name
    return RawEntry(source_url=name, body=path.read_text(encoding="utf-8"))
