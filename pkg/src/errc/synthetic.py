"""Seeded generator for a small labeled corpus with planted class vocabulary.

Every document shares a block of high-frequency filler words whose counts do
not depend on the labels, so keywords derived from corpus-wide frequency are
uninformative. Each document also carries one RE-or-not marker word and one
empirical-or-not marker word at mid frequency, which land in fixed ranks of
the document's top-ten stem list.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

FILLER = ("system", "approach", "model", "software", "analysis", "method", "process", "result")
RE_WORDS = ("requirements", "stakeholders", "elicitation")
NON_RE_WORDS = ("testing", "bugs", "coverage")
EMPIRICAL_WORDS = ("experiment", "participants", "survey")
NON_EMPIRICAL_WORDS = ("theorem", "formalism", "proof")
NOISE = (
    "architecture", "bound", "case", "client", "component", "constraint", "context", "data",
    "design", "domain", "engineer", "environment", "feature", "framework", "goal", "graph",
    "industry", "input", "interface", "language", "library", "logic", "memory", "network",
    "object", "operation", "pattern", "platform", "policy", "problem", "program", "project",
    "quality", "query", "resource", "rule", "safety", "scenario", "security", "service",
    "source", "specification", "state", "structure", "task", "technique", "tool", "trace",
    "user", "value", "version", "workflow",
)
FUNCTION_WORDS = ("the", "and", "of", "a", "in", "to", "is", "we", "this", "for")

# (conference, year, documents)
LAYOUT = (
    ("RE", 2000, 20), ("RE", 2005, 40), ("RE", 2015, 40),
    ("ISSTA", 2000, 20), ("ISSTA", 2004, 40), ("ISSTA", 2015, 40),
)


def _document(rng: random.Random, is_re: bool, is_empirical: bool, flip: float) -> str:
    bag: list[str] = []
    for w in FILLER:
        bag += [w] * rng.randint(20, 30)
    # a small share of documents carry the opposite marker, so the task is not trivial
    re_marker = is_re if rng.random() >= flip else not is_re
    emp_marker = is_empirical if rng.random() >= flip else not is_empirical
    bag += [rng.choice(RE_WORDS if re_marker else NON_RE_WORDS)] * rng.randint(13, 16)
    bag += [rng.choice(EMPIRICAL_WORDS if emp_marker else NON_EMPIRICAL_WORDS)] * rng.randint(9, 11)
    for w in rng.sample(NOISE, 20):
        bag += [w] * rng.randint(1, 4)
    bag += [rng.choice(FUNCTION_WORDS) for _ in range(60)]
    bag += [str(rng.randint(1, 2020)) for _ in range(5)]
    rng.shuffle(bag)
    words_per_line = 12
    lines = [" ".join(bag[i:i + words_per_line]) + "." for i in range(0, len(bag), words_per_line)]
    return "\n".join(lines) + "\n"


def make_synthetic(out_dir, seed: int = 7, flip: float = 0.05) -> Path:
    """Write ``papers/*.txt`` and ``manifest.csv`` under ``out_dir``; return the manifest path."""
    out = Path(out_dir)
    papers = out / "papers"
    papers.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    rows = []
    for conference, year, n in LAYOUT:
        for i in range(n):
            # RE conference papers are mostly RE; a few ISSTA papers are RE
            is_re = rng.random() < (0.92 if conference == "RE" else 0.08)
            is_empirical = rng.random() < 0.5
            doc_id = f"{conference.lower()}{year}-{i + 1:03d}"
            rel = f"papers/{doc_id}.txt"
            (out / rel).write_text(_document(rng, is_re, is_empirical, flip), encoding="utf-8")
            rows.append([doc_id, rel, conference, year, int(is_re), int(is_empirical)])
    manifest = out / "manifest.csv"
    with manifest.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "path", "conference", "year", "re_label", "empirical_label"])
        writer.writerows(rows)
    return manifest
