"""Supervised baseline: how predictable is a record's class from its meaning?

A multinomial logistic-regression head is trained by full-batch gradient
descent over frozen definition embeddings (zero-initialized weights, fixed
epoch count, L2 penalty on the weights only). Evaluation reports per-class,
macro- and micro-averaged F1 with the 0/0 -> 0 convention, a confusion
matrix, and aggregates over training repetitions with normal-approximation
95% confidence intervals. A probability-weighted random predictor provides
the reference floor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .classes import ClassLabel
from .embeddings import EmbeddingStore, text_key
from .records import LexicalRecord, definition_embedding_text

CI_CONVENTION = "mean ± 1.96·s/√n, s = sample std (ddof=1), normal approximation"
F1_CONVENTION = "precision/recall/F1 are 0 when their denominator is 0"


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.75
    seed: int = 0


@dataclass(frozen=True)
class TrainHyper:
    learning_rate: float = 0.5
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 0


@dataclass
class LinearClassifier:
    classes: list[ClassLabel]
    weights: np.ndarray  # (num_classes, dim)
    bias: np.ndarray  # (num_classes,)
    loss_history: list[float] = field(default_factory=list)

    def logits(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights.T + self.bias

    def predict(self, X: np.ndarray) -> np.ndarray:
        # np.argmax takes the first maximum: ties resolve by class list order
        return np.argmax(self.logits(X), axis=1)


@dataclass
class EvalReport:
    classes: list[ClassLabel]
    per_class_f1: dict[ClassLabel, float]
    macro_f1: float
    micro_f1: float
    confusion: np.ndarray  # rows true, columns predicted
    repetitions: int = 1
    ci95: dict[str, tuple[float, float]] = field(default_factory=dict)
    conventions: tuple[str, ...] = (F1_CONVENTION,)

    def to_json_dict(self) -> dict:
        return {
            "classes": [c.concord for c in self.classes],
            "per_class_f1": {c.concord: self.per_class_f1[c] for c in self.classes},
            "macro_f1": self.macro_f1,
            "micro_f1": self.micro_f1,
            "confusion": self.confusion.tolist(),
            "repetitions": self.repetitions,
            "ci95": {k: list(v) for k, v in sorted(self.ci95.items())},
            "conventions": list(self.conventions),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False, indent=2, sort_keys=True)


def featurize(records: Sequence[LexicalRecord], store: EmbeddingStore) -> dict[int, np.ndarray]:
    """Embedding vector per record id, keyed by the lowercased definition."""
    return {
        r.record_id: store.vector(text_key(definition_embedding_text(r.definition)))
        for r in records
    }


def split(record_ids: Sequence[int], spec: SplitSpec) -> tuple[list[int], list[int]]:
    """Deterministic unstratified shuffle split; |train| = round(f · N)."""
    ids = sorted(record_ids)
    n = len(ids)
    if n < 2:
        raise ValueError("need at least 2 records to split")
    if not 0.0 < spec.train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    n_train = int(spec.train_fraction * n + 0.5)  # round half up
    if n_train == 0 or n_train == n:
        raise ValueError(f"degenerate split sizes ({n_train}/{n - n_train}) for N={n}")
    perm = np.random.default_rng(spec.seed).permutation(n)
    shuffled = [ids[i] for i in perm]
    return sorted(shuffled[:n_train]), sorted(shuffled[n_train:])


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grad(
    weights: np.ndarray,
    bias: np.ndarray,
    X: np.ndarray,
    y: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Cross-entropy (mean) + 0.5·l2·||W||² and its analytic gradient."""
    n = X.shape[0]
    probs = _softmax(X @ weights.T + bias)
    data_loss = -float(np.mean(np.log(probs[np.arange(n), y])))
    loss = data_loss + 0.5 * l2 * float(np.sum(weights * weights))
    delta = probs
    delta[np.arange(n), y] -= 1.0
    grad_w = delta.T @ X / n + l2 * weights
    grad_b = delta.sum(axis=0) / n
    return loss, grad_w, grad_b


def train(
    train_ids: Sequence[int],
    features: Mapping[int, np.ndarray],
    labels: Mapping[int, ClassLabel],
    hyper: TrainHyper,
    classes: Sequence[ClassLabel] | None = None,
) -> LinearClassifier:
    """Full-batch gradient descent from zero weights for a fixed epoch count.

    The row order of the design matrix is shuffled by `hyper.seed`; with
    full-batch updates this only perturbs float summation order, which is
    what differentiates training repetitions.
    """
    if classes is None:
        classes = sorted(set(labels.values()))
    class_idx = {c: i for i, c in enumerate(classes)}
    ids = sorted(train_ids)
    order = np.random.default_rng(hyper.seed).permutation(len(ids))
    ids = [ids[i] for i in order]
    X = np.stack([np.asarray(features[i], dtype=np.float64) for i in ids])
    y = np.array([class_idx[labels[i]] for i in ids], dtype=np.intp)

    dim = X.shape[1]
    model = LinearClassifier(
        classes=list(classes),
        weights=np.zeros((len(classes), dim)),
        bias=np.zeros(len(classes)),
    )
    for epoch in range(hyper.epochs):
        loss, grad_w, grad_b = loss_and_grad(model.weights, model.bias, X, y, hyper.l2)
        if not np.isfinite(loss):
            raise ValueError(f"training loss became non-finite at epoch {epoch}")
        model.loss_history.append(loss)
        model.weights -= hyper.learning_rate * grad_w
        model.bias -= hyper.learning_rate * grad_b
    return model


def _report_from_predictions(
    classes: list[ClassLabel], y_true: np.ndarray, y_pred: np.ndarray
) -> EvalReport:
    C = len(classes)
    confusion = np.bincount(y_true * C + y_pred, minlength=C * C).reshape(C, C)
    per_class = _f1_from_confusion(confusion)
    macro = float(np.mean(per_class))
    micro = float(np.trace(confusion) / confusion.sum()) if confusion.sum() else 0.0
    return EvalReport(
        classes=classes,
        per_class_f1={c: float(per_class[i]) for i, c in enumerate(classes)},
        macro_f1=macro,
        micro_f1=micro,
        confusion=confusion,
    )


def _f1_from_confusion(confusion: np.ndarray) -> np.ndarray:
    tp = np.diag(confusion).astype(np.float64)
    fp = confusion.sum(axis=0) - tp
    fn = confusion.sum(axis=1) - tp
    denom = 2 * tp + fp + fn
    return np.divide(2 * tp, denom, out=np.zeros_like(tp), where=denom > 0)


def evaluate(
    model: LinearClassifier,
    eval_ids: Sequence[int],
    features: Mapping[int, np.ndarray],
    labels: Mapping[int, ClassLabel],
) -> EvalReport:
    """Argmax predictions on the eval split; micro F1 equals accuracy here."""
    ids = sorted(eval_ids)
    class_idx = {c: i for i, c in enumerate(model.classes)}
    X = np.stack([np.asarray(features[i], dtype=np.float64) for i in ids])
    y_true = np.array([class_idx[labels[i]] for i in ids], dtype=np.intp)
    y_pred = model.predict(X)
    return _report_from_predictions(model.classes, y_true, y_pred)


def _aggregate(reports: list[EvalReport], classes: list[ClassLabel]) -> EvalReport:
    n = len(reports)
    per_class = {
        c: float(np.mean([r.per_class_f1[c] for r in reports])) for c in classes
    }
    metric_series: dict[str, np.ndarray] = {
        "macro_f1": np.array([r.macro_f1 for r in reports]),
        "micro_f1": np.array([r.micro_f1 for r in reports]),
    }
    for c in classes:
        metric_series[f"f1:{c.concord}"] = np.array([r.per_class_f1[c] for r in reports])
    ci95 = {}
    for name, series in metric_series.items():
        mean = float(series.mean())
        hw = 1.96 * float(series.std(ddof=1)) / np.sqrt(n) if n > 1 else 0.0
        ci95[name] = (mean - hw, mean + hw)
    confusion = np.mean([r.confusion for r in reports], axis=0)
    return EvalReport(
        classes=classes,
        per_class_f1=per_class,
        macro_f1=float(metric_series["macro_f1"].mean()),
        micro_f1=float(metric_series["micro_f1"].mean()),
        confusion=confusion,
        repetitions=n,
        ci95=ci95,
        conventions=(F1_CONVENTION, CI_CONVENTION),
    )


def repeat_and_aggregate(
    record_ids: Sequence[int],
    features: Mapping[int, np.ndarray],
    labels: Mapping[int, ClassLabel],
    split_spec: SplitSpec,
    hyper: TrainHyper,
    n: int = 3,
) -> EvalReport:
    """Train n repetitions on one fixed split (seeds differ per repetition)."""
    if n < 2:
        raise ValueError("need at least 2 repetitions to aggregate")
    train_ids, eval_ids = split(record_ids, split_spec)
    classes = sorted(set(labels[i] for i in record_ids))
    reports = []
    for rep in range(n):
        rep_hyper = TrainHyper(
            learning_rate=hyper.learning_rate,
            epochs=hyper.epochs,
            l2=hyper.l2,
            seed=hyper.seed + rep,
        )
        model = train(train_ids, features, labels, rep_hyper, classes=classes)
        reports.append(evaluate(model, eval_ids, features, labels))
    return _aggregate(reports, classes)


def weighted_random_baseline(
    distribution: Mapping[ClassLabel, int], trials: int, seed: int = 0
) -> EvalReport:
    """Predictor drawing labels from the empirical class distribution.

    Input-independent by construction; the simulated truth is the
    distribution itself. Reports per-trial means (confusion is the mean
    matrix, so row sums still equal the true class counts).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    classes = sorted(distribution)
    counts = np.array([distribution[c] for c in classes], dtype=np.int64)
    if np.any(counts <= 0):
        raise ValueError("class counts must be positive")
    C = len(classes)
    N = int(counts.sum())
    p = counts / N
    y_true = np.repeat(np.arange(C), counts)
    rng = np.random.default_rng(seed)

    f1s = np.zeros((trials, C))
    macros = np.zeros(trials)
    micros = np.zeros(trials)
    confusion_sum = np.zeros((C, C))
    for t in range(trials):
        y_pred = rng.choice(C, size=N, p=p)
        cm = np.bincount(y_true * C + y_pred, minlength=C * C).reshape(C, C)
        per_class = _f1_from_confusion(cm)
        f1s[t] = per_class
        macros[t] = per_class.mean()
        micros[t] = np.trace(cm) / N
        confusion_sum += cm

    ci95 = {}
    for name, series in [("macro_f1", macros), ("micro_f1", micros)] + [
        (f"f1:{c.concord}", f1s[:, i]) for i, c in enumerate(classes)
    ]:
        mean = float(series.mean())
        hw = 1.96 * float(series.std(ddof=1)) / np.sqrt(trials) if trials > 1 else 0.0
        ci95[name] = (mean - hw, mean + hw)
    return EvalReport(
        classes=classes,
        per_class_f1={c: float(f1s[:, i].mean()) for i, c in enumerate(classes)},
        macro_f1=float(macros.mean()),
        micro_f1=float(micros.mean()),
        confusion=confusion_sum / trials,
        repetitions=trials,
        ci95=ci95,
        conventions=(F1_CONVENTION, CI_CONVENTION),
    )


def analytic_baseline_macro_f1(distribution: Mapping[ClassLabel, int]) -> float:
    """Expected macro F1 if per-class precision = recall = p(class): 1/K."""
    return 1.0 / len(distribution)
