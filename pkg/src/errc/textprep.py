"""Text normalization, tokenization, stop-word filtering, stemming and counting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .porter import porter_stem

_KEEP = frozenset("'-")
_EDGE = "'-"


@dataclass(frozen=True)
class StopList:
    entries: frozenset[str]
    source: str = "builtin"

    def __post_init__(self):
        if not self.entries:
            raise ValueError("stop list is empty")
        for e in self.entries:
            if e != e.lower() or any(ch.isspace() for ch in e):
                raise ValueError(f"invalid stop-list entry {e!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    @classmethod
    def builtin(cls) -> "StopList":
        text = resources.files("errc").joinpath("data/stopwords.txt").read_text(encoding="utf-8")
        return cls(frozenset(t.lower() for t in read_word_lines(text)), "builtin")

    @classmethod
    def from_file(cls, path) -> "StopList":
        text = Path(path).read_text(encoding="utf-8")
        return cls(frozenset(t.lower() for t in read_word_lines(text)), str(path))


@dataclass(frozen=True)
class TermCounts:
    doc_id: str
    counts: dict[str, int]
    total_tokens: int

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "total_tokens": self.total_tokens,
                "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_dict(cls, d: dict) -> "TermCounts":
        return cls(d["doc_id"], dict(d["counts"]), int(d["total_tokens"]))


def read_word_lines(text: str) -> list[str]:
    """Parse the one-token-per-line format shared by stop-list and keyword files."""
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    return out


def _map_char(ch: str) -> str:
    if ch.isdecimal():
        return ""
    if ch.isalpha() or ch in _KEEP:
        return ch
    # newlines, other whitespace, punctuation, symbols, non-decimal numerics
    return " "


def normalize(raw: str) -> str:
    # lowercase first: a few lowercasings emit combining marks, which then map to spaces
    return "".join(_map_char(ch) for ch in raw.lower())


def tokenize(normalized: str) -> list[str]:
    tokens = []
    for tok in normalized.split():
        tok = tok.strip(_EDGE)
        if tok:
            tokens.append(tok)
    return tokens


def remove_stopwords(tokens: list[str], stops: StopList) -> list[str]:
    return [t for t in tokens if t not in stops]


def stem(token: str) -> str:
    return porter_stem(token)


def count_text(text: str, stops: StopList, doc_id: str = "") -> TermCounts:
    tokens = tokenize(normalize(text))
    stems = Counter(stem(t) for t in remove_stopwords(tokens, stops))
    return TermCounts(doc_id, dict(stems), len(tokens))


def term_counts(doc, stops: StopList) -> TermCounts:
    """Run the full pipeline over one Document (anything with ``id`` and ``read_text``)."""
    return count_text(doc.read_text(), stops, doc.id)
