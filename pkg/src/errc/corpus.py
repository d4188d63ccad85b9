"""Labeled corpus loading, validation and Table-1 style label accounting."""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

MANIFEST_HEADER = ["id", "path", "conference", "year", "re_label", "empirical_label"]

_TRUE = {"1", "true"}
_FALSE = {"0", "false"}


class CorpusError(ValueError):
    """Raised for unusable manifests or corpora."""


@dataclass(frozen=True)
class Document:
    id: str
    path: Path
    conference: str
    year: int
    re_label: bool
    empirical_label: bool

    def read_text(self) -> str:
        return self.path.read_text(encoding="utf-8")


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    source_manifest: Path | None = None

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def get(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.id == doc_id:
                return doc
        raise KeyError(doc_id)


@dataclass
class LabelRow:
    conference: str
    year: int
    empirical: int = 0
    non_empirical: int = 0
    re: int = 0
    non_re: int = 0

    @property
    def total(self) -> int:
        return self.empirical + self.non_empirical

    def add(self, doc: Document) -> None:
        if doc.empirical_label:
            self.empirical += 1
        else:
            self.non_empirical += 1
        if doc.re_label:
            self.re += 1
        else:
            self.non_re += 1


@dataclass
class LabelSummary:
    rows: list[LabelRow]
    totals: LabelRow

    def share(self, column: str) -> float:
        """Fraction of all documents counted in ``column`` (e.g. ``"empirical"``)."""
        return getattr(self.totals, column) / self.totals.total

    def format_table(self) -> str:
        cols = ("empirical", "non_empirical", "re", "non_re")
        lines = ["Year\tEmpirical\tNon-Empirical\tRE\tNon-RE\tTotal"]
        current = None
        for row in self.rows:
            if row.conference != current:
                current = row.conference
                lines.append(current)
            lines.append("\t".join([str(row.year)] + [str(getattr(row, c)) for c in cols] + [str(row.total)]))
        t = self.totals
        cells = [f"{getattr(t, c)} ({round(100 * self.share(c))}%)" for c in cols]
        lines.append("\t".join(["Total"] + cells + [f"{t.total} (100%)"]))
        return "\n".join(lines)


@dataclass
class ValidationReport:
    issues: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(f"{doc_id}: {msg}" for doc_id, msg in self.issues)


def _parse_bool(value: str, row_no: int, column: str) -> bool:
    v = value.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise CorpusError(f"row {row_no}: {column} must be one of 0/1/true/false, got {value!r}")


def load_manifest(path) -> Corpus:
    """Read a manifest CSV; row numbers in errors count the header as row 1."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"manifest not found: {path}")
    base = path.parent
    docs: list[Document] = []
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != MANIFEST_HEADER:
            raise CorpusError(f"manifest header must be {','.join(MANIFEST_HEADER)}, got {header}")
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(MANIFEST_HEADER):
                raise CorpusError(f"row {row_no}: expected {len(MANIFEST_HEADER)} fields, got {len(row)}")
            doc_id, rel, conference, year, re_label, emp_label = (c.strip() for c in row)
            if not doc_id:
                raise CorpusError(f"row {row_no}: empty id")
            if doc_id in seen:
                raise CorpusError(f"row {row_no}: duplicate id {doc_id!r}")
            try:
                year_int = int(year)
            except ValueError:
                raise CorpusError(f"row {row_no}: year must be an integer, got {year!r}") from None
            seen.add(doc_id)
            docs.append(
                Document(
                    id=doc_id,
                    path=(base / rel).resolve(),
                    conference=conference,
                    year=year_int,
                    re_label=_parse_bool(re_label, row_no, "re_label"),
                    empirical_label=_parse_bool(emp_label, row_no, "empirical_label"),
                )
            )
    if not docs:
        raise CorpusError("empty corpus")
    return Corpus(tuple(docs), path.resolve())


def summarize(corpus: Corpus) -> LabelSummary:
    if not len(corpus):
        raise CorpusError("empty corpus")
    rows: dict[tuple[str, int], LabelRow] = {}
    order: list[str] = []
    totals = LabelRow("Total", 0)
    for doc in corpus:
        key = (doc.conference, doc.year)
        if key not in rows:
            rows[key] = LabelRow(doc.conference, doc.year)
        if doc.conference not in order:
            order.append(doc.conference)
        rows[key].add(doc)
        totals.add(doc)
    # conferences in first-appearance order, years ascending
    ordered = sorted(rows.values(), key=lambda r: (order.index(r.conference), r.year))
    return LabelSummary(ordered, totals)


def validate(corpus: Corpus) -> ValidationReport:
    report = ValidationReport()
    counts = Counter(doc.id for doc in corpus)
    for doc_id, n in counts.items():
        if n > 1:
            report.issues.append((doc_id, f"duplicate id ({n} occurrences)"))
    for doc in corpus:
        try:
            raw = doc.path.read_bytes()
            raw.decode("utf-8")
        except FileNotFoundError:
            report.issues.append((doc.id, f"file not found: {doc.path}"))
            continue
        except OSError as exc:
            report.issues.append((doc.id, f"unreadable file: {exc}"))
            continue
        except UnicodeDecodeError:
            report.issues.append((doc.id, "file is not valid UTF-8"))
            continue
        if not raw:
            report.issues.append((doc.id, "document has no text"))
    return report
