"""Multi-output CART regression tree over a single scalar gray-value feature.

The tree maps one 8-bit gray value to a 4-vector of real outputs. Growth is
greedy top-down least squares: at each node the candidate thresholds are the
midpoints between consecutive distinct feature values, the split minimizing
the summed SSE of both children over all four outputs wins, and ties go to
the smallest threshold. Growth is unbounded (default hyperparameters), so
every leaf ends up holding samples of a single feature value whenever
min_samples_split permits, which makes the fitted tree agree exactly with the
per-value grouped-mean predictor on seen feature values.

Samples sharing a feature value are aggregated before the split search
(count, label sum, label square sum per distinct value). This is equivalent
to per-sample CART for any min_samples_split, because split decisions depend
only on totals per side, and it keeps fitting fast for the <= 256 distinct
values an 8-bit feature allows.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mlzoom.errors import ModelFormatError

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class Leaf:
    mean: np.ndarray  # (4,) float64, componentwise mean of the labels
    count: int


@dataclass(frozen=True, eq=False)
class Internal:
    threshold: float  # feature <= threshold routes left, > routes right
    left: "Leaf | Internal"
    right: "Leaf | Internal"


@dataclass(frozen=True, eq=False)
class RegressionTree:
    root: Leaf | Internal
    n_samples: int
    n_leaves: int
    depth: int
    fit_seconds: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class FitReport:
    """Training-set goodness of fit: per-output R2 and their uniform mean."""

    r2_per_output: tuple[float, float, float, float]
    r2_uniform: float
    n_leaves: int
    depth: int
    fit_time: float


def fit(ts, params: dict | None = None) -> RegressionTree:
    """Grow a tree on a training set of (gray value -> 4 gray values) pairs.

    `params` accepts min_samples_split (default 2). No depth or leaf limits,
    no pruning: full growth.
    """
    if len(ts) == 0:
        raise ValueError("cannot fit on an empty training set")
    min_samples_split = 2
    if params:
        unknown = set(params) - {"min_samples_split"}
        if unknown:
            raise ValueError(f"unknown fit params: {sorted(unknown)}")
        min_samples_split = int(params["min_samples_split"])
        if min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")

    t0 = time.perf_counter()
    features = ts.features.astype(np.int64)
    labels = ts.labels.astype(np.int64)

    # Aggregate by distinct feature value: counts, label sums, square sums.
    values, inverse, counts = np.unique(features, return_inverse=True, return_counts=True)
    m = values.size
    sums = np.zeros((m, 4), dtype=np.int64)
    np.add.at(sums, inverse, labels)
    sq = np.zeros(m, dtype=np.int64)
    np.add.at(sq, inverse, (labels * labels).sum(axis=1))

    vals_f = values.astype(np.float64)
    counts = counts.astype(np.int64)

    def build(lo: int, hi: int) -> Leaf | Internal:
        # groups lo..hi inclusive
        n = int(counts[lo : hi + 1].sum())
        if lo == hi or n < min_samples_split:
            total = sums[lo : hi + 1].sum(axis=0)
            return Leaf(mean=total.astype(np.float64) / n, count=n)
        c = np.cumsum(counts[lo : hi + 1])[:-1].astype(np.float64)
        s = np.cumsum(sums[lo : hi + 1], axis=0)[:-1].astype(np.float64)
        q = np.cumsum(sq[lo : hi + 1])[:-1].astype(np.float64)
        c_all = float(n)
        s_all = sums[lo : hi + 1].sum(axis=0).astype(np.float64)
        q_all = float(sq[lo : hi + 1].sum())
        sse = (
            q
            - (s * s).sum(axis=1) / c
            + (q_all - q)
            - ((s_all - s) * (s_all - s)).sum(axis=1) / (c_all - c)
        )
        k = int(np.argmin(sse))  # first minimum = smallest threshold on ties
        threshold = (vals_f[lo + k] + vals_f[lo + k + 1]) / 2.0
        return Internal(
            threshold=threshold,
            left=build(lo, lo + k),
            right=build(lo + k + 1, hi),
        )

    root = build(0, m - 1)
    n_leaves, depth = _shape(root)
    return RegressionTree(
        root=root,
        n_samples=int(features.size),
        n_leaves=n_leaves,
        depth=depth,
        fit_seconds=time.perf_counter() - t0,
    )


def _shape(node) -> tuple[int, int]:
    if isinstance(node, Leaf):
        return 1, 0
    ll, dl = _shape(node.left)
    lr, dr = _shape(node.right)
    return ll + lr, 1 + max(dl, dr)


def predict(tree: RegressionTree, g) -> np.ndarray:
    """Route a gray value through the tree; returns the leaf mean, unrounded."""
    node = tree.root
    while isinstance(node, Internal):
        node = node.left if g <= node.threshold else node.right
    return node.mean.copy()


def prediction_table(tree: RegressionTree) -> np.ndarray:
    """(256, 4) float64 table of predict(tree, g) for every 8-bit gray value."""
    return np.stack([predict(tree, g) for g in range(256)])


def score_r2(tree: RegressionTree, ts) -> FitReport:
    """Per-output training R2 = 1 - SSE/SST, uniformly averaged over outputs.

    An output with zero label variance scores 1 when reproduced exactly and 0
    otherwise.
    """
    if len(ts) == 0:
        raise ValueError("cannot score on an empty training set")
    labels = ts.labels.astype(np.float64)
    preds = prediction_table(tree)[ts.features.astype(np.intp)]
    sse = ((labels - preds) ** 2).sum(axis=0)
    sst = ((labels - labels.mean(axis=0)) ** 2).sum(axis=0)
    r2 = np.empty(4, dtype=np.float64)
    for o in range(4):
        if sst[o] == 0.0:
            r2[o] = 1.0 if sse[o] == 0.0 else 0.0
        else:
            r2[o] = 1.0 - sse[o] / sst[o]
    return FitReport(
        r2_per_output=tuple(float(v) for v in r2),
        r2_uniform=float(r2.mean()),
        n_leaves=tree.n_leaves,
        depth=tree.depth,
        fit_time=tree.fit_seconds,
    )


def save_model(tree: RegressionTree, path) -> None:
    """Write the tree as versioned JSON with a preorder node array."""
    nodes = []

    def walk(node) -> None:
        if isinstance(node, Leaf):
            nodes.append({"kind": "leaf", "mean": [float(v) for v in node.mean], "count": node.count})
        else:
            nodes.append({"kind": "internal", "threshold": node.threshold})
            walk(node.left)
            walk(node.right)

    walk(tree.root)
    doc = {"format_version": MODEL_FORMAT_VERSION, "n_samples": tree.n_samples, "nodes": nodes}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="ascii")


def load_model(path) -> RegressionTree:
    """Read a model written by :func:`save_model`; validates structure."""
    try:
        doc = json.loads(Path(path).read_text(encoding="ascii"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"{path}: not valid model JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError(f"{path}: model document must be a JSON object")
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: format_version {version!r} unsupported, expected {MODEL_FORMAT_VERSION}"
        )
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise ModelFormatError(f"{path}: missing or empty node array")

    pos = 0

    def parse() -> Leaf | Internal:
        nonlocal pos
        if pos >= len(nodes):
            raise ModelFormatError(f"{path}: node array ended mid-tree")
        rec = nodes[pos]
        pos += 1
        if not isinstance(rec, dict):
            raise ModelFormatError(f"{path}: node {pos - 1} is not an object")
        kind = rec.get("kind")
        if kind == "leaf":
            mean = rec.get("mean")
            if not isinstance(mean, list) or len(mean) != 4:
                raise ModelFormatError(f"{path}: leaf node {pos - 1} needs a 4-element mean")
            count = rec.get("count")
            if not isinstance(count, int) or count < 1:
                raise ModelFormatError(f"{path}: leaf node {pos - 1} needs a count >= 1")
            arr = np.asarray(mean, dtype=np.float64)
            if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 255.0:
                raise ModelFormatError(f"{path}: leaf node {pos - 1} mean outside [0, 255]")
            return Leaf(mean=arr, count=count)
        if kind == "internal":
            threshold = rec.get("threshold")
            if not isinstance(threshold, (int, float)) or not np.isfinite(threshold):
                raise ModelFormatError(f"{path}: internal node {pos - 1} needs a finite threshold")
            left = parse()
            right = parse()
            return Internal(threshold=float(threshold), left=left, right=right)
        raise ModelFormatError(f"{path}: node {pos - 1} has unknown kind {kind!r}")

    root = parse()
    if pos != len(nodes):
        raise ModelFormatError(f"{path}: {len(nodes) - pos} trailing node records")
    n_samples = doc.get("n_samples")
    if not isinstance(n_samples, int) or n_samples < 1:
        raise ModelFormatError(f"{path}: n_samples must be a positive integer")
    n_leaves, depth = _shape(root)
    counted = _count_samples(root)
    if counted != n_samples:
        raise ModelFormatError(
            f"{path}: leaf counts sum to {counted}, header says {n_samples}"
        )
    return RegressionTree(root=root, n_samples=n_samples, n_leaves=n_leaves, depth=depth)


def _count_samples(node) -> int:
    if isinstance(node, Leaf):
        return node.count
    return _count_samples(node.left) + _count_samples(node.right)
