"""Baseline keyword-count and ERRC top-stem feature extraction, plus dataset assembly."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .corpus import Corpus
from .textprep import StopList, TermCounts, read_word_lines, stem, term_counts

log = logging.getLogger(__name__)

SENTINEL = "∅"
ERRC_SLOTS = 10


class Task(str, Enum):
    RE = "re"
    EMPIRICAL = "empirical"

    @property
    def positive_name(self) -> str:
        return "RE" if self is Task.RE else "Empirical"

    @property
    def negative_name(self) -> str:
        return "non-" + self.positive_name

    @property
    def table_name(self) -> str:
        # column headings used by the significance table
        return "Requirements" if self is Task.RE else "Empirical"

    def label_of(self, doc) -> bool:
        return doc.re_label if self is Task.RE else doc.empirical_label


class Method(str, Enum):
    BASELINE = "baseline"
    ERRC = "errc"


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class KeywordSet:
    keywords: tuple[str, ...]
    provenance: str = "manual"

    def __post_init__(self):
        if not self.keywords:
            raise FeatureError("keyword set is empty")
        if len(set(self.keywords)) != len(self.keywords):
            raise FeatureError("keyword set contains duplicates")

    @classmethod
    def from_file(cls, path) -> "KeywordSet":
        """Load a keyword file; entries are lowercased and stemmed, duplicates dropped."""
        words = read_word_lines(Path(path).read_text(encoding="utf-8"))
        stems = list(dict.fromkeys(stem(w.lower()) for w in words))
        return cls(tuple(stems), f"file:{path}")


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str  # "numeric" or "nominal"


@dataclass(frozen=True)
class Instance:
    doc_id: str
    values: tuple
    label: bool


@dataclass
class Dataset:
    task: Task
    method: Method
    attributes: tuple[Attribute, ...]
    instances: list[Instance] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def labels(self) -> list[bool]:
        return [inst.label for inst in self.instances]

    def subset(self, indices) -> "Dataset":
        return Dataset(self.task, self.method, self.attributes, [self.instances[i] for i in indices])

    def to_dict(self) -> dict:
        return {
            "task": self.task.value,
            "method": self.method.value,
            "attributes": [[a.name, a.kind] for a in self.attributes],
            "instances": [
                {"doc_id": i.doc_id, "values": list(i.values), "label": i.label} for i in self.instances
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Dataset":
        return cls(
            Task(d["task"]),
            Method(d["method"]),
            tuple(Attribute(n, k) for n, k in d["attributes"]),
            [Instance(i["doc_id"], tuple(i["values"]), bool(i["label"])) for i in d["instances"]],
        )


def _top_stems(counts: dict[str, int], k: int) -> list[str]:
    return [s for s, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


def derive_keywords(corpus: Corpus, counts: dict[str, TermCounts] | None = None,
                    per_source: int = 5, stops: StopList | None = None) -> KeywordSet:
    """Top ``per_source`` stems of each conference's latest year, unioned.

    ``counts`` maps doc id to precomputed TermCounts; missing entries are
    computed with ``stops`` (builtin list if not given).
    """
    if per_source < 1:
        raise FeatureError("per_source must be positive")
    stops = stops or StopList.builtin()
    counts = counts or {}
    latest: dict[str, int] = {}
    for doc in corpus:
        latest[doc.conference] = max(doc.year, latest.get(doc.conference, doc.year))
    keywords: list[str] = []
    sources = []
    for conf in sorted(latest):
        docs = [d for d in corpus if d.conference == conf and d.year == latest[conf]]
        if not docs:
            raise FeatureError(f"conference {conf!r} has no documents in its latest year")
        total: Counter = Counter()
        for d in docs:
            tc = counts.get(d.id) or term_counts(d, stops)
            total.update(tc.counts)
        for s in _top_stems(total, per_source):
            if s not in keywords:
                keywords.append(s)
        sources.append(f"{conf} {latest[conf]}")
    return KeywordSet(tuple(keywords), "derived: top %d of %s" % (per_source, ", ".join(sources)))


def baseline_features(tc: TermCounts, ks: KeywordSet) -> list[int]:
    return [tc.counts.get(k, 0) for k in ks.keywords]


def errc_features(tc: TermCounts, k: int = ERRC_SLOTS) -> list[str]:
    top = _top_stems(tc.counts, k)
    return top + [SENTINEL] * (k - len(top))


def build_dataset(corpus: Corpus, method: Method, task: Task, stops: StopList | None = None,
                  ks: KeywordSet | None = None,
                  counts: dict[str, TermCounts] | None = None) -> Dataset:
    method, task = Method(method), Task(task)
    if method is Method.BASELINE and ks is None:
        raise FeatureError("baseline method requires a keyword set")
    stops = stops or StopList.builtin()
    counts = counts or {}
    if method is Method.BASELINE:
        attrs = tuple(Attribute(k, "numeric") for k in ks.keywords)
    else:
        attrs = tuple(Attribute(f"rank_{i + 1}", "nominal") for i in range(ERRC_SLOTS))
    ds = Dataset(task, method, attrs)
    for doc in corpus:
        tc = counts.get(doc.id) or term_counts(doc, stops)
        if method is Method.BASELINE:
            values = baseline_features(tc, ks)
        else:
            values = errc_features(tc)
        ds.instances.append(Instance(doc.id, tuple(values), task.label_of(doc)))
    if len(set(ds.labels)) < 2:
        log.warning("dataset for task %s has a single class", task.value)
    return ds
