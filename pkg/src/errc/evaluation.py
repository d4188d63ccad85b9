"""Repeated (stratified) k-fold cross-validation and the four evaluation measures."""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass

from . import classify
from .features import Dataset

METRICS = ("accuracy", "precision", "recall", "f_measure")
RESULTS_HEADER = ["method", "task", "classifier", "folds", "seed", "tp", "fp", "fn", "tn",
                  "accuracy", "precision", "recall", "f_measure"]


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class FoldPlan:
    n: int
    k: int
    seed: int
    assignment: tuple[int, ...]

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f != fold]


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fp + other.fp,
                               self.fn + other.fn, self.tn + other.tn)

    def swapped(self) -> "ConfusionMatrix":
        """The same outcomes with the positive and negative classes exchanged."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


@dataclass(frozen=True)
class RunResult:
    method: str
    task: str
    classifier: str
    folds: int
    seed: int
    confusion: ConfusionMatrix
    accuracy: float
    precision: float
    recall: float
    f_measure: float

    @property
    def config(self) -> tuple[str, str, str, int]:
        return (self.method, self.task, self.classifier, self.folds)

    def row(self) -> list:
        c = self.confusion
        return [self.method, self.task, self.classifier, self.folds, self.seed,
                c.tp, c.fp, c.fn, c.tn,
                repr(self.accuracy), repr(self.precision), repr(self.recall), repr(self.f_measure)]

    @classmethod
    def from_row(cls, row: dict) -> "RunResult":
        cm = ConfusionMatrix(int(row["tp"]), int(row["fp"]), int(row["fn"]), int(row["tn"]))
        return cls(row["method"], row["task"], row["classifier"], int(row["folds"]), int(row["seed"]), cm,
                   *(float(row[m]) for m in METRICS))


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def metrics(cm: ConfusionMatrix) -> tuple[float, float, float, float]:
    """(accuracy, precision, recall, f_measure) for the positive class; 0/0 counts as 0."""
    if cm.total < 1:
        raise EvaluationError("confusion matrix is empty")
    accuracy = (cm.tp + cm.tn) / cm.total
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    # harmonic mean of precision and recall, as one correctly rounded division
    f = _ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn)
    return accuracy, precision, recall, f


def make_folds(n: int, k: int, class_labels, seed: int, stratify: bool = True) -> FoldPlan:
    """Shuffle within each class (positives first), then deal instances round-robin to folds."""
    if k < 2:
        raise EvaluationError(f"need at least 2 folds, got {k}")
    if k > n:
        raise EvaluationError(f"cannot make {k} folds from {n} instances")
    labels = list(class_labels)
    if len(labels) != n:
        raise EvaluationError("class_labels length does not match n")
    rng = random.Random(seed)
    if stratify:
        order = []
        for cls in (True, False):
            members = [i for i, y in enumerate(labels) if bool(y) is cls]
            rng.shuffle(members)
            order.extend(members)
    else:
        order = list(range(n))
        rng.shuffle(order)
    assignment = [0] * n
    for pos, i in enumerate(order):
        assignment[i] = pos % k
    return FoldPlan(n, k, seed, tuple(assignment))


def evaluate_fold(model: classify.Model, ds: Dataset, indices) -> ConfusionMatrix:
    tp = fp = fn = tn = 0
    for i in indices:
        inst = ds.instances[i]
        guess = classify.predict(model, inst.values).label
        if guess and inst.label:
            tp += 1
        elif guess:
            fp += 1
        elif inst.label:
            fn += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, fn, tn)


def run_once(ds: Dataset, kind, k: int, seed: int, stratify: bool = True) -> RunResult:
    kind = classify.Kind(kind)
    plan = make_folds(len(ds), k, ds.labels, seed, stratify)
    pooled = ConfusionMatrix()
    for fold in range(k):
        train = ds.subset(plan.train_indices(fold))
        try:
            model = classify.train(kind, train)
        except classify.ClassifierError as exc:
            raise EvaluationError(f"seed {seed}, fold {fold}: {exc}") from exc
        pooled = pooled + evaluate_fold(model, ds, plan.test_indices(fold))
    return RunResult(ds.method.value, ds.task.value, kind.value, k, seed, pooled, *metrics(pooled))


def cross_validate(ds: Dataset, kind, k: int, seeds, stratify: bool = True) -> list[RunResult]:
    """One pooled RunResult per seed, in ascending seed order."""
    return [run_once(ds, kind, k, seed, stratify) for seed in sorted(seeds)]


def seeds_for(runs: int, seed_base: int = 42) -> list[int]:
    return [seed_base + i for i in range(runs)]


@dataclass(frozen=True)
class Aggregate:
    method: str
    task: str
    classifier: str
    folds: int
    runs: int
    mean: dict
    sd: dict


def aggregate(rs: list[RunResult]) -> Aggregate:
    """Arithmetic mean and sample standard deviation of each measure over runs."""
    if not rs:
        raise EvaluationError("nothing to aggregate")
    configs = {r.config for r in rs}
    if len(configs) > 1:
        raise EvaluationError(f"mixed configurations: {sorted(configs)}")
    mean, sd = {}, {}
    for m in METRICS:
        xs = [getattr(r, m) for r in rs]
        mean[m] = math.fsum(xs) / len(xs)
        sd[m] = statistics.stdev(xs) if len(xs) > 1 else 0.0
    return Aggregate(*rs[0].config, len(rs), mean, sd)
