"""Leave-one-subject-out training harness.

Each eligible subject serves exactly once as the validation fold.  The
held-out subject both drives early stopping and provides the reported
accuracy, so results are optimistic compared to a three-way split; this
protocol is intentional and documented in the README.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classifier import ConvNet1DClassifier
from .errors import InsufficientSubjectsError, InvalidValueError, LeakageError
from .ingest import DEFAULT_LABEL_MAP, SubjectRecording
from .pipeline import (
    DEFAULT_MAX_GAP,
    SignalCombination,
    WindowSet,
    build_subject_windows,
    eligible_subjects,
    standardize_pair,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hyperparams:
    """Training hyperparameters; defaults are the benchmark settings."""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    dropout_rate: float = 0.3
    batch_size: int = 64
    max_epochs: int = 3000
    patience: int = 50
    min_delta: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.dropout_rate < 1.0:
            raise InvalidValueError("dropout_rate", "must be in [0, 1)")
        if self.batch_size < 1:
            raise InvalidValueError("batch_size", "must be >= 1")
        if self.patience < 1:
            raise InvalidValueError("patience", "must be >= 1")
        if self.max_epochs < 1:
            raise InvalidValueError("max_epochs", "must be >= 1")
        if self.learning_rate <= 0.0:
            raise InvalidValueError("learning_rate", "must be > 0")
        if self.min_delta < 0.0:
            raise InvalidValueError("min_delta", "must be >= 0")


@dataclass(frozen=True)
class FoldSpec:
    fold_index: int
    train_subjects: tuple[int, ...]
    val_subject: int


@dataclass
class FoldResult:
    """Outcome of training one fold."""

    fold_index: int
    val_subject: int
    best_val_accuracy: float  # fraction in [0, 1], at the best-val-loss epoch
    best_val_loss: float
    best_epoch: int  # 1-based
    epochs_trained: int
    seed: int
    curve: np.ndarray  # (epochs, 3): train_loss, val_loss, val_accuracy


@dataclass
class ExperimentResult:
    """Per-combination fold results plus their aggregates."""

    combination: SignalCombination
    folds: list[FoldResult]
    norm_scope: str
    subsample: int
    mean_val_accuracy: float = field(init=False)
    std_val_accuracy: float = field(init=False)
    mean_epochs: float = field(init=False)
    std_epochs: float = field(init=False)

    def __post_init__(self):
        accs = np.array([f.best_val_accuracy for f in self.folds])
        epochs = np.array([f.epochs_trained for f in self.folds], dtype=np.float64)
        self.mean_val_accuracy = float(accs.mean())
        self.std_val_accuracy = float(accs.std())
        self.mean_epochs = float(epochs.mean())
        self.std_epochs = float(epochs.std())


def make_folds(subjects: Sequence[int]) -> list[FoldSpec]:
    """One fold per subject, ordered by subject id."""
    ordered = sorted(subjects)
    if len(ordered) < 2:
        raise InsufficientSubjectsError(f"need at least 2 subjects, got {len(ordered)}")
    if len(set(ordered)) != len(ordered):
        raise ValueError("duplicate subject ids")
    return [
        FoldSpec(i, tuple(s for s in ordered if s != val), val)
        for i, val in enumerate(ordered)
    ]


def train_fold(
    train: WindowSet,
    val: WindowSet,
    hyper: Hyperparams,
    fold_index: int = 0,
) -> FoldResult:
    """Train one fold and record its best-epoch metrics."""
    overlap = set(train.subjects.tolist()) & set(val.subjects.tolist())
    if overlap:
        raise LeakageError(f"subjects {sorted(overlap)} appear in train and validation")
    clf = ConvNet1DClassifier(
        learning_rate=hyper.learning_rate,
        beta1=hyper.beta1,
        beta2=hyper.beta2,
        epsilon=hyper.epsilon,
        dropout_rate=hyper.dropout_rate,
        batch_size=hyper.batch_size,
        max_epochs=hyper.max_epochs,
        patience=hyper.patience,
        min_delta=hyper.min_delta,
        seed=hyper.seed,
    )
    clf.fit(train.data, train.labels, validation=(val.data, val.labels))
    return FoldResult(
        fold_index=fold_index,
        val_subject=int(val.subjects[0]) if len(val) else -1,
        best_val_accuracy=clf.best_val_accuracy_,
        best_val_loss=clf.best_val_loss_,
        best_epoch=clf.best_epoch_,
        epochs_trained=clf.n_epochs_,
        seed=hyper.seed,
        curve=clf.history_,
    )


def run_experiment(
    recordings: Sequence[SubjectRecording],
    combo: SignalCombination,
    hyper: Hyperparams,
    norm_scope: str = "train",
    label_map: Mapping[int, int] = DEFAULT_LABEL_MAP,
    max_gap: int = DEFAULT_MAX_GAP,
    subsample: int = 1,
) -> ExperimentResult:
    """Train all leave-one-subject-out folds for one combination.

    Per-fold seeds are ``hyper.seed ^ fold_index`` so folds are independent
    and the whole run is reproducible from the base seed.
    """
    subjects = eligible_subjects(recordings, label_map, max_gap)
    folds = make_folds(subjects)
    assert sorted(f.val_subject for f in folds) == subjects  # each subject once

    by_subject = {
        rec.subject_id: build_subject_windows(rec, combo, label_map, max_gap).subsample(subsample)
        for rec in recordings
        if rec.subject_id in set(subjects)
    }
    fit_windows = None
    if norm_scope == "global":
        fit_windows = WindowSet.concat([by_subject[s] for s in subjects], combo.modality)

    results = []
    for fold in folds:
        train = WindowSet.concat([by_subject[s] for s in fold.train_subjects], combo.modality)
        val = by_subject[fold.val_subject]
        train, val, _ = standardize_pair(train, val, norm_scope, fit_windows)
        fold_hyper = replace(hyper, seed=hyper.seed ^ fold.fold_index)
        log.info(
            "combo %s fold %d: val subject %d, %d train / %d val windows",
            combo.id, fold.fold_index, fold.val_subject, len(train), len(val),
        )
        result = train_fold(train, val, fold_hyper, fold.fold_index)
        log.info(
            "combo %s fold %d: accuracy %.4f, loss %.4f, %d epochs",
            combo.id, fold.fold_index, result.best_val_accuracy,
            result.best_val_loss, result.epochs_trained,
        )
        results.append(result)
    return ExperimentResult(combo, results, norm_scope, subsample)


def group_by_modality(
    rows: Iterable[tuple[str, int, float, Sequence[float]]]
) -> dict[int, dict]:
    """Group (combo_id, modality, mean_accuracy, fold_accuracies) rows.

    Reports the mean of per-combination means plus min/quartiles/max of the
    pooled fold accuracies.  Empty groups are omitted.
    """
    buckets: dict[int, dict] = {}
    for combo_id, modality, mean_acc, fold_accs in sorted(rows):
        bucket = buckets.setdefault(modality, {"combos": [], "means": [], "fold_accuracies": []})
        bucket["combos"].append(combo_id)
        bucket["means"].append(float(mean_acc))
        bucket["fold_accuracies"].extend(float(a) for a in fold_accs)
    out: dict[int, dict] = {}
    for modality in sorted(buckets):
        bucket = buckets[modality]
        pooled = np.array(bucket["fold_accuracies"])
        q1, median, q3 = np.percentile(pooled, [25, 50, 75])
        out[modality] = {
            "combos": bucket["combos"],
            "mean_accuracy": float(np.mean(bucket["means"])),
            "fold_min": float(pooled.min()),
            "fold_q1": float(q1),
            "fold_median": float(median),
            "fold_q3": float(q3),
            "fold_max": float(pooled.max()),
        }
    return out


def modality_group_stats(results: Sequence[ExperimentResult]) -> dict[int, dict]:
    """Accuracy distribution per input modality over experiment results."""
    if not results:
        raise ValueError("need at least one experiment result")
    return group_by_modality(
        (
            r.combination.id,
            r.combination.modality,
            r.mean_val_accuracy,
            [f.best_val_accuracy for f in r.folds],
        )
        for r in results
    )
