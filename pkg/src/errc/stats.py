"""One-tailed t-tests of ERRC against the baseline, and the Student-t machinery behind them."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from enum import Enum

from .evaluation import RunResult

STATS_HEADER = ["task", "classifier", "metric", "mode", "t", "df", "p_one_tailed", "alpha", "significant"]

# comparison-table layout: tasks across, metric blocks down, classifiers within each block
TABLE_TASKS = ("empirical", "re")
TABLE_CLASSIFIERS = ("nb", "tree")
TABLE_METRICS = ("accuracy", "recall", "precision", "f_measure")
_TASK_TITLES = {"empirical": "Empirical", "re": "Requirements"}
_CLASSIFIER_TITLES = {"nb": "Naive Bayes", "tree": "J48", "zeror": "ZeroR"}
_METRIC_TITLES = {"accuracy": "Accuracy", "recall": "Recall", "precision": "Precision", "f_measure": "F-Measure"}

# spreads below this fraction of the data's magnitude are float rounding, not variance
_ROUNDING = 1e-12
_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10000


class StatsError(ValueError):
    pass


class Mode(str, Enum):
    PAIRED = "paired"
    WELCH = "welch"


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_one_tailed: float
    alpha: float
    mode: Mode

    @property
    def significant(self) -> bool:
        return self.p_one_tailed < self.alpha


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = _CF_TINY if abs(d) < _CF_TINY else d
        c = 1.0 + aa / c
        c = _CF_TINY if abs(c) < _CF_TINY else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = _CF_TINY if abs(d) < _CF_TINY else d
        c = 1.0 + aa / c
        c = _CF_TINY if abs(c) < _CF_TINY else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise StatsError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_beta(a: float, b: float, x: float, one_minus_x: float | None = None) -> float:
    """I_x(a, b). Pass ``one_minus_x`` when it is known more accurately than ``1 - x``."""
    y = 1.0 - x if one_minus_x is None else one_minus_x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log(y))
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_cf(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_cf(b, a, y) / b


def student_t_tail(t: float, df: float) -> float:
    """Upper tail P(T >= t) of Student's t with ``df`` degrees of freedom."""
    if not df > 0:
        raise StatsError(f"degrees of freedom must be positive, got {df}")
    if t == 0:
        return 0.5
    if math.isinf(t):
        return 0.0 if t > 0 else 1.0
    t2 = t * t
    if math.isinf(t2):
        return 0.0 if t > 0 else 1.0
    x, y = df / (df + t2), t2 / (df + t2)
    half_two_tail = 0.5 * regularized_beta(df / 2.0, 0.5, x, y)
    return half_two_tail if t > 0 else 1.0 - half_two_tail


def _degenerate(mean_diff: float, df: float, alpha: float, mode: Mode) -> TTestResult:
    if mean_diff > 0:
        return TTestResult(math.inf, df, 0.0, alpha, mode)
    if mean_diff < 0:
        return TTestResult(-math.inf, df, 1.0, alpha, mode)
    return TTestResult(0.0, df, 0.5, alpha, mode)


def t_test(errc, base, alpha: float = 0.05, mode=Mode.PAIRED) -> TTestResult:
    """Test H1: mean(errc) > mean(base). Zero-variance inputs resolve to p in {0, 0.5, 1}."""
    mode = Mode(mode)
    if not 0 < alpha < 1:
        raise StatsError(f"alpha must be in (0, 1), got {alpha}")
    errc, base = [float(v) for v in errc], [float(v) for v in base]
    if mode is Mode.PAIRED:
        if len(errc) != len(base):
            raise StatsError(f"paired samples differ in length: {len(errc)} vs {len(base)}")
        n = len(errc)
        if n < 2:
            raise StatsError("paired test needs at least 2 pairs")
        diffs = [a - b for a, b in zip(errc, base)]
        mean_d = math.fsum(diffs) / n
        sd = statistics.stdev(diffs)
        df = n - 1.0
        tol = _ROUNDING * max(abs(v) for v in errc + base)
        if sd <= tol:
            return _degenerate(0.0 if abs(mean_d) <= tol else mean_d, df, alpha, mode)
        t = mean_d / (sd / math.sqrt(n))
        return TTestResult(t, df, student_t_tail(t, df), alpha, mode)

    n1, n2 = len(errc), len(base)
    if n1 < 2 or n2 < 2:
        raise StatsError("Welch test needs at least 2 values per sample")
    m1, m2 = math.fsum(errc) / n1, math.fsum(base) / n2
    v1, v2 = statistics.variance(errc) / n1, statistics.variance(base) / n2
    se2 = v1 + v2
    tol = _ROUNDING * max(abs(v) for v in errc + base)
    if math.sqrt(se2) <= tol:
        diff = m1 - m2
        return _degenerate(0.0 if abs(diff) <= tol else diff, n1 + n2 - 2.0, alpha, mode)
    df = se2 ** 2 / (v1 ** 2 / (n1 - 1) + v2 ** 2 / (n2 - 1))
    t = (m1 - m2) / math.sqrt(se2)
    return TTestResult(t, df, student_t_tail(t, df), alpha, mode)


@dataclass(frozen=True)
class ComparisonRow:
    task: str
    classifier: str
    metric: str
    result: TTestResult

    def row(self) -> list:
        r = self.result
        return [self.task, self.classifier, self.metric, r.mode.value, repr(r.t_statistic),
                repr(r.degrees_of_freedom), repr(r.p_one_tailed), repr(r.alpha), str(r.significant).lower()]

    @classmethod
    def from_row(cls, row: dict) -> "ComparisonRow":
        res = TTestResult(float(row["t"]), float(row["df"]), float(row["p_one_tailed"]),
                          float(row["alpha"]), Mode(row["mode"]))
        return cls(row["task"], row["classifier"], row["metric"], res)


def _sample(results: list[RunResult], method: str, task: str, classifier: str, metric: str,
            folds) -> list[tuple[tuple[int, int], float]]:
    picked = [r for r in results if r.method == method and r.task == task and r.classifier == classifier
              and r.folds in folds]
    return sorted(((r.folds, r.seed), getattr(r, metric)) for r in picked)


def compare_table(results: list[RunResult], alpha: float = 0.05, mode=Mode.PAIRED,
                  folds=None, tasks=TABLE_TASKS, classifiers=TABLE_CLASSIFIERS) -> list[ComparisonRow]:
    """One ERRC-vs-baseline test per (task, classifier, metric) cell.

    ``folds`` selects which fold settings form the sample: a single k gives one
    value per seed; several k values pool all (k, seed) runs. Default: the
    smallest k present.
    """
    mode = Mode(mode)
    if folds is None:
        if not results:
            raise StatsError("missing results")
        folds = [min(r.folds for r in results)]
    folds = set(folds)
    rows = []
    for task in tasks:
        for metric in TABLE_METRICS:
            for clf in classifiers:
                errc = _sample(results, "errc", task, clf, metric, folds)
                base = _sample(results, "baseline", task, clf, metric, folds)
                if not errc or not base:
                    raise StatsError(f"missing results for task={task} classifier={clf}")
                if mode is Mode.PAIRED and [k for k, _ in errc] != [k for k, _ in base]:
                    raise StatsError(f"unpaired runs for task={task} classifier={clf}")
                res = t_test([v for _, v in errc], [v for _, v in base], alpha, mode)
                rows.append(ComparisonRow(task, clf, metric, res))
    return rows


def format_table(rows: list[ComparisonRow]) -> str:
    """Render the comparison in comparison-table layout; significant p-values are marked with ``*``."""
    by_key = {(r.task, r.classifier, r.metric): r.result for r in rows}
    tasks = [t for t in TABLE_TASKS if any(r.task == t for r in rows)]
    classifiers = list(dict.fromkeys(r.classifier for r in rows))
    lines = ["\t" + "\t".join(_TASK_TITLES[t] for t in tasks)]
    for metric in TABLE_METRICS:
        lines.append(f"{_METRIC_TITLES[metric]} P(T<=t) one tail")
        for clf in classifiers:
            cells = []
            for t in tasks:
                res = by_key.get((t, clf, metric))
                if res is None:
                    cells.append("-")
                else:
                    cells.append(f"{res.p_one_tailed:.9g}" + ("*" if res.significant else ""))
            lines.append("\t".join([_CLASSIFIER_TITLES.get(clf, clf)] + cells))
    return "\n".join(lines)
