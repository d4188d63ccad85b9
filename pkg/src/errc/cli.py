"""Command-line entry point: ``errc <stage> [options]``.

Stages read and write plain files in the output directory, so each one can be
inspected on its own; ``run`` executes them in order.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import classify, corpus as corpus_mod, evaluation, report, stats
from .features import Dataset, KeywordSet, Method, Task, build_dataset, derive_keywords
from .synthetic import make_synthetic
from .textprep import StopList, TermCounts, term_counts

log = logging.getLogger("errc")

CORPUS_FILE = "corpus.json"
COUNTS_FILE = "term_counts.json"
KEYWORDS_FILE = "keywords.txt"

ALL_TASKS = ("re", "empirical")
ALL_METHODS = ("baseline", "errc")
ALL_CLASSIFIERS = ("zeror", "nb", "tree")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    manifest: str | None = None
    stoplist: str = "builtin"
    keywords: str = "derive"
    tasks: list[str] = field(default_factory=lambda: list(ALL_TASKS))
    methods: list[str] = field(default_factory=lambda: list(ALL_METHODS))
    classifiers: list[str] = field(default_factory=lambda: list(ALL_CLASSIFIERS))
    folds: list[int] = field(default_factory=lambda: [10, 20, 30, 40])
    runs: int = 10
    seed_base: int = 42
    stratify: bool = True
    ttest: str = "paired"
    alpha: float = 0.05
    pool_folds: bool = False
    stats_folds: int | None = None
    out: str = "errc-out"

    def validate(self) -> None:
        if not self.folds or any(k < 2 for k in self.folds):
            raise ConfigError(f"folds must all be >= 2, got {self.folds}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha}")
        for name, values, allowed in (("task", self.tasks, ALL_TASKS), ("method", self.methods, ALL_METHODS),
                                      ("classifier", self.classifiers, ALL_CLASSIFIERS)):
            bad = [v for v in values if v not in allowed]
            if bad or not values:
                raise ConfigError(f"{name} must be a non-empty subset of {','.join(allowed)}, got {values}")
        if self.ttest not in ("paired", "welch"):
            raise ConfigError(f"ttest must be paired or welch, got {self.ttest}")
        if self.stats_folds is not None and self.stats_folds not in self.folds:
            raise ConfigError(f"stats-folds {self.stats_folds} is not one of the fold settings")

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    @property
    def seeds(self) -> list[int]:
        return evaluation.seeds_for(self.runs, self.seed_base)

    @property
    def compare_folds(self) -> list[int]:
        if self.pool_folds:
            return list(self.folds)
        return [self.stats_folds if self.stats_folds is not None else self.folds[0]]


# -- config parsing ------------------------------------------------------------


def _split_list(values) -> list[str]:
    out: list[str] = []
    for v in values if isinstance(values, list) else [values]:
        out += [p.strip().lower() for p in str(v).split(",") if p.strip()]
    return list(dict.fromkeys(out))


def _parse_bool(v) -> bool:
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _int_list(values) -> list[int]:
    try:
        return [int(v) for v in _split_list(values)]
    except ValueError:
        raise ConfigError(f"folds must be integers, got {values!r}") from None


def read_config_file(path) -> dict[str, str]:
    """``key = value`` lines; ``#`` comments; keys use the long flag names."""
    settings = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        sep = "=" if "=" in line else ":"
        if sep not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (p.strip() for p in line.split(sep, 1))
        settings[key.replace("_", "-").lstrip("-")] = value
    return settings


_KEY_MAP = {
    "manifest": ("manifest", str),
    "stoplist": ("stoplist", str),
    "keywords": ("keywords", str),
    "task": ("tasks", _split_list),
    "method": ("methods", _split_list),
    "classifier": ("classifiers", _split_list),
    "folds": ("folds", _int_list),
    "runs": ("runs", int),
    "seed-base": ("seed_base", int),
    "no-stratify": ("stratify", lambda v: not _parse_bool(v)),
    "ttest": ("ttest", lambda v: str(v).lower()),
    "alpha": ("alpha", float),
    "pool-folds": ("pool_folds", _parse_bool),
    "stats-folds": ("stats_folds", int),
    "out": ("out", str),
}


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig()
    settings: dict = {}
    if getattr(args, "config", None):
        settings.update(read_config_file(args.config))
    for key in _KEY_MAP:
        value = getattr(args, key.replace("-", "_"), None)
        if value not in (None, False):
            settings[key] = value
    for key, value in settings.items():
        if key not in _KEY_MAP:
            raise ConfigError(f"unknown config key {key!r}")
        attr, conv = _KEY_MAP[key]
        try:
            setattr(cfg, attr, conv(value))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from None
    cfg.validate()
    return cfg


# -- stage helpers -------------------------------------------------------------


def _dump_json(obj, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")


def _load_json(path: Path, stage: str):
    if not path.is_file():
        raise ConfigError(f"missing {path.name}; run `errc {stage}` first")
    return json.loads(path.read_text(encoding="utf-8"))


def _corpus_to_json(c: corpus_mod.Corpus) -> dict:
    return {
        "manifest": str(c.source_manifest),
        "documents": [
            {"id": d.id, "path": str(d.path), "conference": d.conference, "year": d.year,
             "re_label": d.re_label, "empirical_label": d.empirical_label}
            for d in c.documents
        ],
    }


def _load_corpus(out: Path) -> corpus_mod.Corpus:
    data = _load_json(out / CORPUS_FILE, "ingest")
    docs = tuple(corpus_mod.Document(d["id"], Path(d["path"]), d["conference"], d["year"],
                                     d["re_label"], d["empirical_label"]) for d in data["documents"])
    return corpus_mod.Corpus(docs, Path(data["manifest"]))


def _load_counts(out: Path) -> dict[str, TermCounts]:
    data = _load_json(out / COUNTS_FILE, "preprocess")
    return {d["doc_id"]: TermCounts.from_dict(d) for d in data["documents"]}


def _stoplist(cfg: ExperimentConfig) -> StopList:
    return StopList.builtin() if cfg.stoplist == "builtin" else StopList.from_file(cfg.stoplist)


def _features_path(out: Path, method: str, task: str) -> Path:
    return out / "features" / f"{method}_{task}.json"


def _load_dataset(out: Path, method: str, task: str) -> Dataset:
    return Dataset.from_dict(_load_json(_features_path(out, method, task), "featurize"))


def _threads() -> int:
    env = os.environ.get("ERRC_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            raise ConfigError(f"ERRC_THREADS must be an integer, got {env!r}") from None
    return cap


# -- stages --------------------------------------------------------------------


def stage_ingest(cfg: ExperimentConfig) -> int:
    if not cfg.manifest:
        raise ConfigError("--manifest is required")
    c = corpus_mod.load_manifest(cfg.manifest)
    rep = corpus_mod.validate(c)
    for doc_id, msg in rep.issues:
        log.warning("%s: %s", doc_id, msg)
    fatal = [i for i in rep.issues if i[1] != "document has no text"]
    if fatal:
        raise corpus_mod.CorpusError(f"{len(fatal)} unreadable document(s), first: {fatal[0][0]}: {fatal[0][1]}")
    _dump_json(_corpus_to_json(c), cfg.out_dir / CORPUS_FILE)
    print(corpus_mod.summarize(c).format_table())
    return 0


def stage_preprocess(cfg: ExperimentConfig, dump_stems: str | None = None) -> int:
    c = _load_corpus(cfg.out_dir)
    stops = _stoplist(cfg)
    counts = [term_counts(doc, stops) for doc in c]
    _dump_json({"stoplist": stops.source, "documents": [tc.to_dict() for tc in counts]},
               cfg.out_dir / COUNTS_FILE)
    if dump_stems:
        match = [tc for tc in counts if tc.doc_id == dump_stems]
        if not match:
            raise ConfigError(f"no document with id {dump_stems!r}")
        tc = match[0]
        print(f"{tc.doc_id}: {tc.total_tokens} tokens, {len(tc.counts)} distinct stems")
        for s, n in sorted(tc.counts.items(), key=lambda kv: (-kv[1], kv[0])):
            print(f"{n}\t{s}")
    return 0


def stage_featurize(cfg: ExperimentConfig, show: str | None = None) -> int:
    out = cfg.out_dir
    c = _load_corpus(out)
    counts = _load_counts(out)
    stops = _stoplist(cfg)
    ks = None
    if "baseline" in cfg.methods:
        if cfg.keywords == "derive":
            ks = derive_keywords(c, counts, stops=stops)
        else:
            ks = KeywordSet.from_file(cfg.keywords)
        (out / KEYWORDS_FILE).write_text(
            f"# {ks.provenance}\n" + "\n".join(ks.keywords) + "\n", encoding="utf-8")
        print(f"baseline keywords ({ks.provenance}): {', '.join(ks.keywords)}")
    for method in cfg.methods:
        for task in cfg.tasks:
            ds = build_dataset(c, Method(method), Task(task), stops, ks, counts)
            _dump_json(ds.to_dict(), _features_path(out, method, task))
            if show:
                inst = [i for i in ds.instances if i.doc_id == show]
                if not inst:
                    raise ConfigError(f"no document with id {show!r}")
                names = [a.name for a in ds.attributes]
                print(f"{method}/{task} {show} (label={inst[0].label}): "
                      + ", ".join(f"{n}={v}" for n, v in zip(names, inst[0].values)))
    return 0


def _eval_cell(job):
    ds_dict, clf, k, seeds, stratify = job
    ds = Dataset.from_dict(ds_dict)
    return evaluation.cross_validate(ds, clf, k, seeds, stratify)


def stage_evaluate(cfg: ExperimentConfig) -> int:
    out = cfg.out_dir
    jobs = []
    for task in cfg.tasks:
        for method in cfg.methods:
            ds = _load_dataset(out, method, task).to_dict()
            for clf in cfg.classifiers:
                for k in cfg.folds:
                    jobs.append((ds, clf, k, cfg.seeds, cfg.stratify))
    threads = min(_threads(), len(jobs))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(_eval_cell, jobs))
    else:
        cells = [_eval_cell(j) for j in jobs]
    results = [r for cell in cells for r in cell]
    report.write_results(results, out / "results.csv")
    report.write_aggregate(results, out / "aggregate.csv")
    print(f"wrote {len(results)} runs to {out / 'results.csv'}")
    return 0


def _comparison(cfg: ExperimentConfig, results) -> list[stats.ComparisonRow]:
    tasks = [t for t in stats.TABLE_TASKS if t in cfg.tasks]
    classifiers = [c for c in stats.TABLE_CLASSIFIERS if c in cfg.classifiers]
    return stats.compare_table(results, cfg.alpha, cfg.ttest, cfg.compare_folds, tasks, classifiers)


def stage_compare(cfg: ExperimentConfig) -> int:
    out = cfg.out_dir
    results = report.read_results(out / "results.csv")
    if not {"errc", "baseline"} <= {r.method for r in results}:
        raise stats.StatsError("comparison needs results for both the errc and baseline methods")
    rows = _comparison(cfg, results)
    report.write_stats(rows, out / "stats.csv")
    print(stats.format_table(rows))
    print(f"H0 (A_ERRC = A_B) vs. H1 (A_ERRC > A_B), alpha = {cfg.alpha}, folds = {cfg.compare_folds}:")
    print("\n".join(report.hypothesis_lines(rows)))
    return 0


def stage_report(cfg: ExperimentConfig) -> int:
    out = cfg.out_dir
    results = report.read_results(out / "results.csv")
    stats_path = out / "stats.csv"
    rows = [stats.ComparisonRow.from_row(r) for r in report.read_stats(stats_path)] if stats_path.is_file() else None
    written = report.emit_summary(results, rows, out, cfg.alpha)
    print((out / "summary.txt").read_text(encoding="utf-8"), end="")
    print(f"wrote {len(written)} files under {out}")
    return 0


def stage_run(cfg: ExperimentConfig) -> int:
    stage_ingest(cfg)
    stage_preprocess(cfg)
    stage_featurize(cfg)
    stage_evaluate(cfg)
    if {"errc", "baseline"} <= set(cfg.methods) and {"nb", "tree"} & set(cfg.classifiers):
        stage_compare(cfg)
    stage_report(cfg)
    return 0


def cmd_save_model(cfg: ExperimentConfig, model_path: str) -> int:
    if len(cfg.tasks) != 1 or len(cfg.methods) != 1 or len(cfg.classifiers) != 1:
        raise ConfigError("save-model needs exactly one --task, --method and --classifier")
    ds = _load_dataset(cfg.out_dir, cfg.methods[0], cfg.tasks[0])
    model = classify.train(cfg.classifiers[0], ds)
    Path(model_path).write_text(model.to_json() + "\n", encoding="utf-8")
    print(f"saved {model.kind.value} model trained on {len(ds)} instances to {model_path}")
    return 0


def cmd_load_model(cfg: ExperimentConfig, model_path: str) -> int:
    if len(cfg.tasks) != 1 or len(cfg.methods) != 1:
        raise ConfigError("load-model needs exactly one --task and --method")
    model = classify.Model.from_json(Path(model_path).read_text(encoding="utf-8"))
    ds = _load_dataset(cfg.out_dir, cfg.methods[0], cfg.tasks[0])
    task = Task(cfg.tasks[0])
    for inst in ds.instances:
        p = classify.predict(model, inst.values)
        name = task.positive_name if p.label else task.negative_name
        print(f"{inst.doc_id}\t{name}\t{p.p_positive:.6f}")
    return 0


# -- argument parsing ----------------------------------------------------------


def _experiment_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("experiment")
    g.add_argument("--config", help="flat key = value file; flags override it")
    g.add_argument("--manifest", help="corpus manifest CSV")
    g.add_argument("--stoplist", help="stop-list file, or 'builtin' (default)")
    g.add_argument("--keywords", help="baseline keyword file, or 'derive' (default)")
    g.add_argument("--task", action="append", help="re, empirical (comma list or repeated)")
    g.add_argument("--method", action="append", help="baseline, errc")
    g.add_argument("--classifier", action="append", help="zeror, nb, tree")
    g.add_argument("--folds", action="append", help="fold counts, default 10,20,30,40")
    g.add_argument("--runs", type=int, help="seeds per fold setting (default 10)")
    g.add_argument("--seed-base", type=int, help="first seed (default 42)")
    g.add_argument("--no-stratify", action="store_true", default=None, help="plain shuffled folds")
    g.add_argument("--ttest", choices=["paired", "welch"], help="t-test mode (default paired)")
    g.add_argument("--alpha", type=float, help="significance level (default 0.05)")
    g.add_argument("--pool-folds", action="store_true", default=None,
                   help="pool every fold setting into the t-test samples")
    g.add_argument("--stats-folds", type=int, help="fold setting whose runs form the t-test samples")
    g.add_argument("--out", help="output directory (default errc-out)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _experiment_options()
    parser = argparse.ArgumentParser(prog="errc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(
        dest="command", required=True,
        metavar="{run,ingest,preprocess,featurize,evaluate,compare,report,save-model,load-model,stoplist}")
    sub.add_parser("run", parents=[common], help="all stages in order")
    sub.add_parser("ingest", parents=[common], help="load and check the manifest, print label counts")
    p = sub.add_parser("preprocess", parents=[common], help="count stems per document")
    p.add_argument("--dump-stems", metavar="ID", help="print one document's stem counts")
    p = sub.add_parser("featurize", parents=[common], help="build baseline/ERRC datasets")
    p.add_argument("--show", metavar="ID", help="print one document's feature vectors")
    sub.add_parser("evaluate", parents=[common], help="repeated k-fold cross-validation")
    sub.add_parser("compare", parents=[common], help="one-tailed t-tests, ERRC vs. baseline")
    sub.add_parser("report", parents=[common], help="summary text and plots")
    p = sub.add_parser("save-model", parents=[common], help="train one model on a featurized dataset")
    p.add_argument("--model", required=True, help="output JSON path")
    p = sub.add_parser("load-model", parents=[common], help="predict with a saved model")
    p.add_argument("--model", required=True, help="model JSON path")
    sub.add_parser("stoplist", help="print the builtin stop list")
    p = sub.add_parser("make-synthetic")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=7)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "stoplist":
            print("\n".join(sorted(StopList.builtin().entries)))
            return 0
        if args.command == "make-synthetic":
            print(make_synthetic(args.out, args.seed))
            return 0
        cfg = build_config(args)
        if args.command == "preprocess":
            return stage_preprocess(cfg, args.dump_stems)
        if args.command == "featurize":
            return stage_featurize(cfg, args.show)
        if args.command == "save-model":
            return cmd_save_model(cfg, args.model)
        if args.command == "load-model":
            return cmd_load_model(cfg, args.model)
        stage = {"run": stage_run, "ingest": stage_ingest, "evaluate": stage_evaluate,
                 "compare": stage_compare, "report": stage_report}[args.command]
        return stage(cfg)
    except (ValueError, OSError, KeyError) as exc:
        module = type(exc).__module__.rsplit(".", 1)[-1]
        if module in ("builtins", "cli"):
            module = "config" if isinstance(exc, ConfigError) else "errc"
        print(f"errc: {module}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
