import csv
from pathlib import Path

import pytest

from errc.synthetic import make_synthetic

# (conference, year, empirical, non-empirical, RE, non-RE) per row of the reference label table
LABEL_TABLE = [
    ("RE", 2000, 7, 6, 12, 1),
    ("RE", 2005, 21, 23, 41, 3),
    ("RE", 2015, 29, 18, 43, 4),
    ("ISSTA", 2000, 12, 9, 1, 20),
    ("ISSTA", 2004, 11, 17, 1, 27),
    ("ISSTA", 2015, 21, 21, 0, 42),
]


def write_manifest(directory: Path, rows, texts=None) -> Path:
    """rows: (id, conference, year, re, empirical). Writes one text file per row."""
    directory.mkdir(parents=True, exist_ok=True)
    manifest = directory / "manifest.csv"
    with manifest.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "path", "conference", "year", "re_label", "empirical_label"])
        for i, (doc_id, conf, year, re_, emp) in enumerate(rows):
            text = texts[i] if texts else f"paper {doc_id} about {conf.lower()} topics\n"
            (directory / f"{doc_id}.txt").write_text(text, encoding="utf-8")
            w.writerow([doc_id, f"{doc_id}.txt", conf, year, int(re_), int(emp)])
    return manifest


def label_table_rows():
    rows = []
    for conf, year, emp, nonemp, re_, nonre in LABEL_TABLE:
        total = emp + nonemp
        assert total == re_ + nonre
        for i in range(total):
            rows.append((f"{conf}-{year}-{i}", conf, year, i < re_, i < emp))
    return rows


@pytest.fixture
def label_table_manifest(tmp_path):
    return write_manifest(tmp_path / "t1", label_table_rows())


@pytest.fixture(scope="session")
def synthetic_manifest(tmp_path_factory):
    return make_synthetic(tmp_path_factory.mktemp("synthetic"))


# -- acceptance reporting: one pass/fail line per criterion -------------------

ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        ACCEPTANCE[marker.args[0]] = (marker.args[1], rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
