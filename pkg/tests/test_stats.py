import math
import random

import pytest
from hypothesis import given, strategies as st

from errc.evaluation import ConfusionMatrix, RunResult
from errc.stats import (Mode, StatsError, TTestResult, compare_table, format_table, regularized_beta,
                        student_t_tail, t_test)

from oracles import t_tail_quadrature

# P(T >= 2.5) for 9 degrees of freedom, computed once with t_tail_quadrature (mpmath, 40 digits)
FROZEN_TAIL_2_5_DF9 = 0.016930913841492869605


def test_tail_symmetry_point():
    for df in range(1, 101):
        assert student_t_tail(0, df) == 0.5


def test_tail_cauchy():
    assert abs(student_t_tail(1.0, 1) - (0.5 - math.atan(1) / math.pi)) <= 1e-10
    assert abs(student_t_tail(1.0, 1) - 0.25) <= 1e-10


def test_tail_frozen_oracle_value():
    assert abs(student_t_tail(2.5, 9) - FROZEN_TAIL_2_5_DF9) <= 1e-10
    assert abs(t_tail_quadrature(2.5, 9) - FROZEN_TAIL_2_5_DF9) <= 1e-15


def test_tail_random_against_quadrature():
    rng = random.Random(2024)
    for _ in range(40):
        t, df = rng.uniform(-8, 8), rng.choice([rng.uniform(0.3, 5), rng.uniform(5, 120)])
        assert abs(student_t_tail(t, df) - t_tail_quadrature(t, df)) <= 1e-10


def test_tail_errors_and_limits():
    with pytest.raises(StatsError):
        student_t_tail(1.0, 0)
    assert student_t_tail(math.inf, 3) == 0.0
    assert student_t_tail(-math.inf, 3) == 1.0
    assert student_t_tail(1e200, 3) == 0.0


def test_regularized_beta_endpoints():
    assert regularized_beta(2, 3, 0) == 0.0
    assert regularized_beta(2, 3, 1) == 1.0
    # I_x(1, 1) = x
    assert regularized_beta(1, 1, 0.3) == pytest.approx(0.3, abs=1e-14)


@given(st.floats(-30, 30), st.floats(0.2, 500))
def test_tail_complement(t, df):
    assert abs(student_t_tail(t, df) + student_t_tail(-t, df) - 1) <= 1e-10


@given(st.floats(-20, 20), st.floats(0, 5), st.floats(0.5, 200))
def test_tail_monotone(t, step, df):
    assert student_t_tail(t + step, df) <= student_t_tail(t, df) + 1e-15


def test_t_test_identical_samples():
    x = [0.5, 0.6, 0.55, 0.52]
    r = t_test(x, x)
    assert (r.t_statistic, r.p_one_tailed, r.significant) == (0.0, 0.5, False)


def test_t_test_constant_positive_shift():
    errc = [.6, .62, .61, .63, .6]
    base = [.5, .52, .51, .53, .5]
    r = t_test(errc, base)
    assert r.p_one_tailed == 0.0 and r.significant and r.t_statistic == math.inf
    r = t_test(base, errc)
    assert r.p_one_tailed == 1.0 and not r.significant
    assert t_test(errc, base, mode="welch").p_one_tailed < 1e-6


def test_t_test_matches_manual_paired():
    errc = [0.61, 0.58, 0.64, 0.60, 0.62]
    base = [0.55, 0.57, 0.58, 0.56, 0.60]
    d = [a - b for a, b in zip(errc, base)]
    n = len(d)
    mean = sum(d) / n
    sd = math.sqrt(sum((x - mean) ** 2 for x in d) / (n - 1))
    t = mean / (sd / math.sqrt(n))
    r = t_test(errc, base)
    assert r.t_statistic == pytest.approx(t, rel=1e-12)
    assert r.degrees_of_freedom == 4
    assert r.p_one_tailed == pytest.approx(t_tail_quadrature(t, 4), abs=1e-10)


def test_t_test_random_paired_against_quadrature():
    rng = random.Random(77)
    for _ in range(10):
        errc = [rng.uniform(0.4, 0.9) for _ in range(10)]
        base = [rng.uniform(0.4, 0.9) for _ in range(10)]
        r = t_test(errc, base)
        assert abs(r.p_one_tailed - t_tail_quadrature(r.t_statistic, 9)) < 1e-8


def test_welch():
    a = [0.8, 0.82, 0.79, 0.85, 0.81]
    b = [0.7, 0.75, 0.6, 0.72, 0.69, 0.71]
    r = t_test(a, b, mode="welch")
    va, vb = 0, 0
    ma, mb = sum(a) / 5, sum(b) / 6
    va = sum((x - ma) ** 2 for x in a) / 4 / 5
    vb = sum((x - mb) ** 2 for x in b) / 5 / 6
    assert r.t_statistic == pytest.approx((ma - mb) / math.sqrt(va + vb), rel=1e-12)
    assert r.degrees_of_freedom == pytest.approx((va + vb) ** 2 / (va ** 2 / 4 + vb ** 2 / 5), rel=1e-12)
    assert r.mode is Mode.WELCH and r.significant
    with pytest.raises(StatsError):
        t_test([1.0], [2.0, 3.0], mode="welch")


def test_t_test_errors():
    with pytest.raises(StatsError):
        t_test([1, 2, 3], [1, 2])
    with pytest.raises(StatsError):
        t_test([1, 2], [1, 3], alpha=1.5)


@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=3, max_size=12), st.floats(-5, 5))
def test_t_test_antisymmetry_and_shift(pairs, shift):
    a = [x for x, _ in pairs]
    b = [y for _, y in pairs]
    r1, r2 = t_test(a, b), t_test(b, a)
    if math.isfinite(r1.t_statistic) and r1.t_statistic != 0:
        assert r2.t_statistic == pytest.approx(-r1.t_statistic, rel=1e-9)
        assert r1.p_one_tailed + r2.p_one_tailed == pytest.approx(1, abs=1e-9)
        r3 = t_test([x + shift for x in a], [y + shift for y in b])
        assert r3.t_statistic == pytest.approx(r1.t_statistic, rel=1e-6, abs=1e-6)


def test_significance_flag():
    assert TTestResult(1.0, 5, 0.049, 0.05, Mode.PAIRED).significant
    assert not TTestResult(1.0, 5, 0.05, 0.05, Mode.PAIRED).significant


def _run(method, task, clf, k, seed, acc):
    return RunResult(method, task, clf, k, seed, ConfusionMatrix(1, 1, 1, 1), acc, acc, acc, acc)


def _grid(delta=0.0, tasks=("re", "empirical"), folds=(10, 20)):
    rng = random.Random(1)
    out = []
    for task in tasks:
        for clf in ("zeror", "nb", "tree"):
            for k in folds:
                for seed in range(42, 52):
                    v = rng.uniform(0.4, 0.6)
                    out.append(_run("baseline", task, clf, k, seed, v))
                    out.append(_run("errc", task, clf, k, seed, v + delta))
    return out


def test_compare_table_layout_and_identical_results():
    rows = compare_table(_grid(0.0))
    assert len(rows) == 16
    assert {(r.task, r.classifier, r.metric) for r in rows} == {
        (t, c, m) for t in ("empirical", "re") for c in ("nb", "tree")
        for m in ("accuracy", "recall", "precision", "f_measure")}
    assert all(r.result.p_one_tailed == 0.5 and not r.result.significant for r in rows)
    assert all(r.result.degrees_of_freedom == 9 for r in rows)


def test_compare_table_pool_folds():
    rows = compare_table(_grid(0.0), folds=[10, 20])
    assert all(r.result.degrees_of_freedom == 19 for r in rows)


def test_compare_table_missing_cell():
    with pytest.raises(StatsError):
        compare_table(_grid(0.0, tasks=("re",)))
    with pytest.raises(StatsError):
        compare_table([])


def test_reference_p_values_render():
    # one non-significant and one significant cell at alpha = 0.05
    from errc.stats import ComparisonRow
    rows = [
        ComparisonRow("empirical", "nb", "accuracy", TTestResult(0.55, 9, 0.294063822, 0.05, Mode.PAIRED)),
        ComparisonRow("re", "nb", "accuracy", TTestResult(6.9, 9, 9.22234e-06, 0.05, Mode.PAIRED)),
    ]
    text = format_table(rows)
    assert "0.294063822\t" in text and "0.294063822*" not in text
    assert "9.22234e-06*" in text
