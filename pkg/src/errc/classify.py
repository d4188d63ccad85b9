"""ZeroR, naive Bayes and a C4.5-style decision tree, written from scratch.

Labels are booleans throughout: ``True`` is the positive class of the task.
Every trained :class:`Model` is immutable in practice and JSON-serializable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist

from .features import SENTINEL, Attribute, Dataset

MODEL_FORMAT = "errc-model"
MODEL_VERSION = 1
VARIANCE_FLOOR = 1e-9
PRUNE_CONFIDENCE = 0.25
MIN_LEAF = 2
_GAIN_EPS = 1e-12


class Kind(str, Enum):
    ZEROR = "zeror"
    NAIVE_BAYES = "nb"
    TREE = "tree"


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class Prediction:
    label: bool
    p_positive: float
    p_negative: float

    @property
    def scores(self) -> dict[bool, float]:
        return {True: self.p_positive, False: self.p_negative}


@dataclass(frozen=True)
class Model:
    kind: Kind
    attributes: tuple[Attribute, ...]
    params: dict

    def to_json(self) -> str:
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "kind": self.kind.value,
            "schema": [[a.name, a.kind] for a in self.attributes],
            "params": self.params,
        }
        return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Model":
        doc = json.loads(text)
        if doc.get("format") != MODEL_FORMAT:
            raise ClassifierError("not a serialized model")
        if doc.get("version") != MODEL_VERSION:
            raise ClassifierError(f"unsupported model version {doc.get('version')}")
        attrs = tuple(Attribute(n, k) for n, k in doc["schema"])
        return cls(Kind(doc["kind"]), attrs, doc["params"])


def _class_counts(ds: Dataset) -> tuple[int, int]:
    pos = sum(1 for inst in ds.instances if inst.label)
    return pos, len(ds.instances) - pos


def _require_both_classes(ds: Dataset) -> tuple[int, int]:
    pos, neg = _class_counts(ds)
    if pos == 0 or neg == 0:
        raise ClassifierError("training data must contain both classes")
    return pos, neg


# -- ZeroR ---------------------------------------------------------------------


def train_zeror(ds: Dataset) -> Model:
    if not ds.instances:
        raise ClassifierError("cannot train on an empty dataset")
    pos, neg = _class_counts(ds)
    return Model(Kind.ZEROR, ds.attributes, {"majority": pos >= neg, "counts": [pos, neg]})


# -- naive Bayes ---------------------------------------------------------------


def train_naive_bayes(ds: Dataset) -> Model:
    """Laplace-smoothed nominal likelihoods; per-class Gaussians for numeric attributes."""
    pos, neg = _require_both_classes(ds)
    n_c = {True: pos, False: neg}
    attrs = []
    for j, attr in enumerate(ds.attributes):
        if attr.kind == "nominal":
            table: dict[str, list[int]] = {SENTINEL: [0, 0]}
            for inst in ds.instances:
                row = table.setdefault(inst.values[j], [0, 0])
                row[0 if inst.label else 1] += 1
            attrs.append({"type": "nominal", "counts": dict(sorted(table.items()))})
        else:
            stats = []
            for cls in (True, False):
                xs = [float(inst.values[j]) for inst in ds.instances if inst.label is cls]
                mean = math.fsum(xs) / len(xs)
                var = math.fsum((x - mean) ** 2 for x in xs) / (len(xs) - 1) if len(xs) > 1 else 0.0
                stats.append([mean, max(var, VARIANCE_FLOOR)])
            attrs.append({"type": "numeric", "gaussian": stats})
    n = pos + neg
    priors = [(n_c[True] + 1) / (n + 2), (n_c[False] + 1) / (n + 2)]
    return Model(Kind.NAIVE_BAYES, ds.attributes,
                 {"priors": priors, "class_counts": [pos, neg], "attributes": attrs})


def _nb_log_joint(params: dict, values) -> tuple[float, float]:
    logp = [math.log(params["priors"][0]), math.log(params["priors"][1])]
    n_c = params["class_counts"]
    for attr, v in zip(params["attributes"], values):
        if attr["type"] == "nominal":
            table = attr["counts"]
            row = table.get(v, (0, 0))
            width = len(table)
            for c in (0, 1):
                logp[c] += math.log((row[c] + 1) / (n_c[c] + width))
        else:
            x = float(v)
            for c in (0, 1):
                mean, var = attr["gaussian"][c]
                logp[c] += -0.5 * math.log(2 * math.pi * var) - (x - mean) ** 2 / (2 * var)
    return logp[0], logp[1]


# -- decision tree -------------------------------------------------------------


def _entropy(pos: float, neg: float) -> float:
    n = pos + neg
    h = 0.0
    for c in (pos, neg):
        if c > 0:
            p = c / n
            h -= p * math.log2(p)
    return h


def _split_stats(parts, n: int, parent_info: float) -> tuple[float, float]:
    """(gain, split_info) for a partition given as [(pos, neg), ...]."""
    remainder = 0.0
    split_info = 0.0
    for p, q in parts:
        size = p + q
        if size == 0:
            continue
        w = size / n
        remainder += w * _entropy(p, q)
        split_info -= w * math.log2(w)
    return parent_info - remainder, split_info


def gain_ratio_nominal(values, labels, min_leaf: int = 1):
    """Gain ratio of a multiway split; None if the split is not admissible."""
    groups: dict = {}
    for v, y in zip(values, labels):
        g = groups.setdefault(v, [0, 0])
        g[0 if y else 1] += 1
    if len(groups) < 2 or sum(1 for g in groups.values() if g[0] + g[1] >= min_leaf) < 2:
        return None
    pos = sum(g[0] for g in groups.values())
    n = len(labels)
    gain, split_info = _split_stats(groups.values(), n, _entropy(pos, n - pos))
    if split_info <= 0:
        return None
    return gain / split_info, gain


def best_numeric_split(values, labels, min_leaf: int = 1):
    """Binary split at the midpoint with highest gain; returns (ratio, gain, threshold) or None."""
    pairs = sorted(zip(values, labels), key=lambda p: p[0])
    n = len(pairs)
    total_pos = sum(1 for _, y in pairs if y)
    parent = _entropy(total_pos, n - total_pos)
    best = None
    left_pos = 0
    for i in range(n - 1):
        if pairs[i][1]:
            left_pos += 1
        if pairs[i][0] == pairs[i + 1][0]:
            continue
        left = i + 1
        if left < min_leaf or n - left < min_leaf:
            continue
        parts = ((left_pos, left - left_pos), (total_pos - left_pos, n - left - total_pos + left_pos))
        gain, split_info = _split_stats(parts, n, parent)
        if best is None or gain > best[1] + _GAIN_EPS:
            threshold = (pairs[i][0] + pairs[i + 1][0]) / 2
            best = (gain / split_info, gain, threshold)
    return best


def _leaf(pos: int, neg: int) -> dict:
    return {"dist": [pos, neg]}


def _grow(rows, labels, idx, attributes, min_leaf):
    pos = sum(1 for i in idx if labels[i])
    neg = len(idx) - pos
    if pos == 0 or neg == 0 or len(idx) < 2:
        return _leaf(pos, neg)
    ys = [labels[i] for i in idx]
    best = None  # (ratio, attr index, threshold or None)
    for j, attr in enumerate(attributes):
        xs = [rows[i][j] for i in idx]
        if attr.kind == "nominal":
            res = gain_ratio_nominal(xs, ys, min_leaf)
            cand = None if res is None else (res[0], res[1], None)
        else:
            cand = best_numeric_split(xs, ys, min_leaf)
        if cand is None or cand[1] <= _GAIN_EPS:
            continue
        if best is None or cand[0] > best[0] + _GAIN_EPS:
            best = (cand[0], j, cand[2])
    if best is None:
        return _leaf(pos, neg)
    _, j, threshold = best
    node = {"attr": j, "dist": [pos, neg]}
    if threshold is None:
        buckets: dict = {}
        for i in idx:
            buckets.setdefault(rows[i][j], []).append(i)
        node["type"] = "nominal"
        node["children"] = {
            str(v): _grow(rows, labels, sub, attributes, min_leaf) for v, sub in sorted(buckets.items(), key=lambda kv: str(kv[0]))
        }
    else:
        left = [i for i in idx if rows[i][j] <= threshold]
        right = [i for i in idx if rows[i][j] > threshold]
        node["type"] = "numeric"
        node["threshold"] = threshold
        node["children"] = [_grow(rows, labels, left, attributes, min_leaf),
                            _grow(rows, labels, right, attributes, min_leaf)]
    return node


def pessimistic_extra_errors(n: float, e: float, cf: float = PRUNE_CONFIDENCE) -> float:
    """Extra errors implied by the upper ``cf`` confidence limit on the error rate e/n."""
    if e < 1:
        base = n * (1 - cf ** (1 / n))
        if e == 0:
            return base
        return base + e * (pessimistic_extra_errors(n, 1, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = NormalDist().inv_cdf(1 - cf)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n) + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n)
    return r * n - e


def _leaf_error_estimate(dist) -> float:
    n = dist[0] + dist[1]
    if n == 0:
        return 0.0
    e = n - max(dist)
    return e + pessimistic_extra_errors(n, e)


def _children(node):
    ch = node["children"]
    return list(ch.values()) if isinstance(ch, dict) else ch


def _prune(node, cf: float) -> float:
    """Bottom-up subtree replacement; returns the pruned subtree's error estimate."""
    if "children" not in node:
        return _leaf_error_estimate(node["dist"])
    subtree = sum(_prune(child, cf) for child in _children(node))
    as_leaf = _leaf_error_estimate(node["dist"])
    if as_leaf <= subtree + 0.1:
        for key in ("attr", "type", "children", "threshold"):
            node.pop(key, None)
        return as_leaf
    return subtree


def count_nodes(node) -> int:
    if "children" not in node:
        return 1
    return 1 + sum(count_nodes(c) for c in _children(node))


def train_tree(ds: Dataset, prune: bool = True, min_leaf: int = MIN_LEAF) -> Model:
    _require_both_classes(ds)
    rows = [inst.values for inst in ds.instances]
    labels = [inst.label for inst in ds.instances]
    root = _grow(rows, labels, list(range(len(rows))), ds.attributes, min_leaf)
    if prune:
        _prune(root, PRUNE_CONFIDENCE)
    return Model(Kind.TREE, ds.attributes, {"root": root, "pruned": prune, "min_leaf": min_leaf})


def tree_leaf(node: dict, values) -> dict:
    """Follow ``values`` down the tree; an unseen nominal value stops at the current node."""
    while "children" in node:
        v = values[node["attr"]]
        if node["type"] == "nominal":
            child = node["children"].get(str(v))
            if child is None:
                return node
            node = child
        else:
            node = node["children"][0 if v <= node["threshold"] else 1]
    return node


# -- shared entry points -------------------------------------------------------

TRAINERS = {Kind.ZEROR: train_zeror, Kind.NAIVE_BAYES: train_naive_bayes, Kind.TREE: train_tree}


def train(kind, ds: Dataset) -> Model:
    return TRAINERS[Kind(kind)](ds)


def _from_scores(p: float, q: float) -> Prediction:
    return Prediction(p >= q, p, q)


def predict(m: Model, values) -> Prediction:
    values = tuple(values)
    if len(values) != len(m.attributes):
        raise ClassifierError(f"expected {len(m.attributes)} feature values, got {len(values)}")
    for attr, v in zip(m.attributes, values):
        if attr.kind == "numeric" and (isinstance(v, (str, bool)) or not isinstance(v, (int, float))):
            raise ClassifierError(f"attribute {attr.name} expects a number, got {v!r}")
        if attr.kind == "nominal" and not isinstance(v, str):
            raise ClassifierError(f"attribute {attr.name} expects a string, got {v!r}")
    if m.kind is Kind.ZEROR:
        return _from_scores(1.0, 0.0) if m.params["majority"] else _from_scores(0.0, 1.0)
    if m.kind is Kind.NAIVE_BAYES:
        lp, lq = _nb_log_joint(m.params, values)
        top = max(lp, lq)
        a, b = math.exp(lp - top), math.exp(lq - top)
        return Prediction(lp >= lq, a / (a + b), b / (a + b))
    pos, neg = tree_leaf(m.params["root"], values)["dist"]
    return _from_scores(pos / (pos + neg), neg / (pos + neg))
