"""CSV/text summaries and metric-vs-folds SVG plots."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

from .evaluation import METRICS, RESULTS_HEADER, RunResult, aggregate
from .stats import STATS_HEADER, ComparisonRow, format_table

AGGREGATE_HEADER = ["method", "task", "classifier", "folds", "runs"] + [
    f"{m}_{s}" for m in METRICS for s in ("mean", "sd")
]

_TASK_NOUN = {"re": "RE", "empirical": "Empirical"}
_CLASSIFIER_NAME = {"nb": "Naive Bayes", "tree": "J48", "zeror": "ZeroR"}
_METRIC_NAME = {"accuracy": "Accuracy", "precision": "Precision", "recall": "Recall", "f_measure": "f-measure"}
_METHOD_STYLE = {"errc": ("ERRC", "#1f77b4"), "baseline": ("Baseline", "#d62728")}


class ReportError(ValueError):
    pass


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_results(results: list[RunResult], path) -> None:
    _write_csv(Path(path), RESULTS_HEADER, [r.row() for r in results])


def read_results(path) -> list[RunResult]:
    path = Path(path)
    if not path.is_file():
        raise ReportError(f"missing results: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULTS_HEADER:
            raise ReportError(f"unexpected results header in {path}")
        return [RunResult.from_row(row) for row in reader]


def group_runs(results: list[RunResult]) -> dict[tuple, list[RunResult]]:
    groups: dict[tuple, list[RunResult]] = {}
    for r in results:
        groups.setdefault(r.config, []).append(r)
    return groups


def write_aggregate(results: list[RunResult], path) -> None:
    rows = []
    for runs in group_runs(results).values():
        agg = aggregate(runs)
        rows.append([agg.method, agg.task, agg.classifier, agg.folds, agg.runs]
                    + [repr(getattr(agg, s)[m]) for m in METRICS for s in ("mean", "sd")])
    _write_csv(Path(path), AGGREGATE_HEADER, rows)


def write_stats(rows: list[ComparisonRow], path) -> None:
    _write_csv(Path(path), STATS_HEADER, [r.row() for r in rows])


def read_stats(path) -> list[dict]:
    path = Path(path)
    if not path.is_file():
        raise ReportError(f"missing stats: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _mean_accuracy(results, method, task) -> float | None:
    xs = [r.accuracy for r in results
          if r.method == method and r.task == task and r.classifier != "zeror"]
    return sum(xs) / len(xs) if xs else None


def summary_text(results: list[RunResult], stats_rows: list[ComparisonRow] | None = None,
                 alpha: float | None = None) -> str:
    lines = ["ERRC vs. baseline, mean accuracy over non-ZeroR classifiers, fold settings and seeds", ""]
    for task in dict.fromkeys(r.task for r in results):
        e, b = _mean_accuracy(results, "errc", task), _mean_accuracy(results, "baseline", task)
        noun = "RE papers" if task == "re" else f"{task} papers"
        if e is None or b is None:
            lines.append(f"{noun}: both methods are needed for a comparison")
            continue
        gap = round(100 * abs(e - b))
        if e > b:
            verdict = f"ERRC performed approximately {gap}% better than the baseline method"
        elif b > e:
            verdict = f"the baseline method performed approximately {gap}% better than ERRC"
        else:
            verdict = "ERRC and the baseline method performed the same"
        lines.append(f"{noun[0].upper() + noun[1:]}: ERRC {e:.4f} vs. baseline {b:.4f}; {verdict} at classifying {noun}.")
    if stats_rows:
        lines += ["", f"H0 (A_ERRC = A_B) vs. H1 (A_ERRC > A_B), one-tailed, alpha = {alpha}:"]
        lines += hypothesis_lines(stats_rows)
        lines += ["", "p-values (* = significant)", format_table(stats_rows)]
    return "\n".join(lines) + "\n"


def hypothesis_lines(stats_rows: list[ComparisonRow]) -> list[str]:
    out = []
    for row in stats_rows:
        if row.metric != "accuracy":
            continue
        r = row.result
        decision = "reject H0" if r.significant else "fail to reject H0"
        out.append(f"  {row.task:<9} {_CLASSIFIER_NAME.get(row.classifier, row.classifier):<11} "
                   f"t = {r.t_statistic:.4f}  p = {r.p_one_tailed:.6g}  -> {decision}")
    return out


# -- plots ---------------------------------------------------------------------


@dataclass
class PlotSpec:
    metric: str
    task: str
    classifier: str
    series: dict[str, list[tuple[int, float]]] = field(default_factory=dict)
    path: Path | None = None
    percent: bool = False

    @property
    def title(self) -> str:
        noun = _TASK_NOUN.get(self.task, self.task)
        clf = _CLASSIFIER_NAME.get(self.classifier, self.classifier)
        if self.metric == "accuracy":
            return f"Percent of Correctly Classified {noun} Papers using {clf}"
        return f"{clf} {_METRIC_NAME[self.metric]} for Classifying {noun} Papers"


W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 50, 60


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(spec: PlotSpec) -> str:
    if not spec.series or any(not pts for pts in spec.series.values()):
        raise ReportError("every plot series needs at least one point")
    ymax = 100.0 if spec.percent else 1.0
    xs = sorted({k for pts in spec.series.values() for k, _ in pts})
    x_lo, x_hi = xs[0], xs[-1]
    plot_w, plot_h = W - LEFT - RIGHT, H - TOP - BOTTOM

    def sx(k):
        if x_hi == x_lo:
            return LEFT + plot_w / 2
        return LEFT + (k - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v):
        return TOP + plot_h - v / ymax * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.0f}" y="25" text-anchor="middle" font-family="sans-serif" font-size="15">'
        f"{escape(spec.title)}</text>",
        f'<line x1="{LEFT}" y1="{TOP + plot_h}" x2="{LEFT + plot_w}" y2="{TOP + plot_h}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + plot_h}" stroke="black"/>',
    ]
    for i in range(6):
        v = ymax * i / 5
        y = sy(v)
        label = f"{v:.0f}" if spec.percent else f"{v:.1f}"
        out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(y)}" x2="{LEFT}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(y + 4)}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{label}</text>')
    for k in xs:
        x = sx(k)
        out.append(f'<line x1="{_fmt(x)}" y1="{TOP + plot_h}" x2="{_fmt(x)}" y2="{TOP + plot_h + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{TOP + plot_h + 18}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">{k}</text>')
    out.append(f'<text x="{LEFT + plot_w / 2:.0f}" y="{H - 15}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="12">Cross validation folds</text>')
    y_label = "Percent correct" if spec.percent else _METRIC_NAME[spec.metric]
    out.append(f'<text transform="translate(18,{TOP + plot_h / 2:.0f}) rotate(-90)" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(y_label)}</text>')

    for i, (method, pts) in enumerate(spec.series.items()):
        name, color = _METHOD_STYLE.get(method, (method, "#555555"))
        pts = sorted(pts)
        coords = [(sx(k), sy(v)) for k, v in pts]
        if len(coords) > 1:
            joined = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in coords)
            out.append(f'<polyline points="{joined}" fill="none" stroke="{color}" stroke-width="2"/>')
        for x, y in coords:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="{color}"/>')
        ly = TOP + 20 + 22 * i
        lx = W - RIGHT + 20
        out.append(f'<rect x="{lx}" y="{ly - 8}" width="16" height="10" fill="{color}"/>')
        out.append(f'<text x="{lx + 22}" y="{ly + 1}" font-family="sans-serif" font-size="12">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(spec: PlotSpec) -> Path:
    if spec.path is None:
        raise ReportError("plot spec has no output path")
    svg = render_svg(spec)
    path = Path(spec.path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    return path


def plot_specs(results: list[RunResult], out_dir) -> list[PlotSpec]:
    """One spec per (task, classifier, metric), one series per method of mean value vs. k."""
    means: dict[tuple, dict[str, list[tuple[int, float]]]] = {}
    for (method, task, clf, k), runs in group_runs(results).items():
        agg = aggregate(runs)
        for metric in METRICS:
            value = agg.mean[metric] * (100 if metric == "accuracy" else 1)
            means.setdefault((task, clf, metric), {}).setdefault(method, []).append((k, value))
    specs = []
    for (task, clf, metric), series in means.items():
        ordered = {m: sorted(series[m]) for m in ("errc", "baseline") if m in series}
        ordered.update({m: sorted(v) for m, v in series.items() if m not in ordered})
        path = Path(out_dir) / "plots" / f"{task}_{clf}_{metric}.svg"
        specs.append(PlotSpec(metric, task, clf, ordered, path, percent=metric == "accuracy"))
    return specs


def emit_summary(results: list[RunResult], stats_rows: list[ComparisonRow] | None, out_dir,
                 alpha: float = 0.05, plots: bool = True) -> list[Path]:
    if not results:
        raise ReportError("no results to report")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory {out}: {exc}") from exc
    written = [out / "results.csv", out / "aggregate.csv"]
    write_results(results, written[0])
    write_aggregate(results, written[1])
    if stats_rows is not None:
        written.append(out / "stats.csv")
        write_stats(stats_rows, written[-1])
    summary = out / "summary.txt"
    summary.write_text(summary_text(results, stats_rows, alpha), encoding="utf-8")
    written.append(summary)
    if plots:
        written += [emit_plot(spec) for spec in plot_specs(results, out)]
    return written
