"""Result serialization and Table-1-style report rendering.

Each combination gets one JSON summary (full precision, deterministic
layout).  Reports are re-rendered purely from those summaries, so the
``report`` command reproduces the ``run`` output byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Sequence

from .experiment import ExperimentResult, group_by_modality

SUMMARY_DIR = "summaries"
LOG_DIR = "logs"


def result_to_summary(result: ExperimentResult) -> dict:
    """Plain-dict form of an experiment result (accuracies as fractions)."""
    return {
        "combo": result.combination.id,
        "name": result.combination.name,
        "modality": result.combination.modality,
        "norm_scope": result.norm_scope,
        "subsample": result.subsample,
        "mean_val_accuracy": float(result.mean_val_accuracy),
        "std_val_accuracy": float(result.std_val_accuracy),
        "mean_epochs": float(result.mean_epochs),
        "std_epochs": float(result.std_epochs),
        "folds": [
            {
                "fold_index": f.fold_index,
                "val_subject": f.val_subject,
                "best_val_accuracy": float(f.best_val_accuracy),
                "best_val_loss": float(f.best_val_loss),
                "best_epoch": f.best_epoch,
                "epochs_trained": f.epochs_trained,
                "seed": f.seed,
            }
            for f in result.folds
        ],
    }


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def summary_path(out_dir: Path, combo_id: str) -> Path:
    return Path(out_dir) / SUMMARY_DIR / f"{combo_id}.json"


def write_summary(summary: dict, out_dir: Path) -> Path:
    path = summary_path(out_dir, summary["combo"])
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_dump_json(summary))
    return path


def read_summaries(out_dir: Path) -> list[dict]:
    """All stored per-combination summaries, in catalog (letter) order."""
    directory = Path(out_dir) / SUMMARY_DIR
    summaries = []
    if directory.is_dir():
        for path in sorted(directory.glob("*.json")):
            summaries.append(json.loads(path.read_text()))
    summaries.sort(key=lambda s: s["combo"])
    return summaries


def write_fold_logs(result: ExperimentResult, out_dir: Path) -> list[Path]:
    """Line-oriented per-fold training logs: epoch,train_loss,val_loss,val_acc."""
    directory = Path(out_dir) / LOG_DIR
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for fold in result.folds:
        path = directory / f"{result.combination.id}_fold{fold.fold_index}_s{fold.val_subject}.csv"
        lines = ["epoch,train_loss,val_loss,val_acc"]
        for epoch, (train_loss, val_loss, val_acc) in enumerate(fold.curve, start=1):
            lines.append(
                f"{epoch},{float(train_loss)!r},{float(val_loss)!r},{float(val_acc)!r}"
            )
        path.write_text("\n".join(lines) + "\n")
        paths.append(path)
    return paths


def _ranked(summaries: Sequence[dict]) -> list[dict]:
    return sorted(summaries, key=lambda s: (-s["mean_val_accuracy"], s["combo"]))


def render_csv(summaries: Sequence[dict]) -> str:
    """Accuracy table as CSV, percentages with 2 decimals, best first."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["combo", "name", "modality", "mean_val_acc", "std_val_acc", "mean_epochs", "std_epochs"]
    )
    for s in _ranked(summaries):
        writer.writerow(
            [
                s["combo"],
                s["name"],
                s["modality"],
                f"{100.0 * s['mean_val_accuracy']:.2f}",
                f"{100.0 * s['std_val_accuracy']:.2f}",
                f"{s['mean_epochs']:.2f}",
                f"{s['std_epochs']:.2f}",
            ]
        )
    return buf.getvalue()


def render_table(summaries: Sequence[dict]) -> str:
    """Human-readable aligned table, sorted by accuracy descending."""
    rows = [
        (
            f"{s['name']} ({s['combo']})",
            f"{100.0 * s['mean_val_accuracy']:.2f}",
            f"{100.0 * s['std_val_accuracy']:.2f}",
            f"{s['mean_epochs']:.2f}",
        )
        for s in _ranked(summaries)
    ]
    header = ("Input Data", "val_accuracy", "val_acc_std", "mean_epochs")
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(4)]

    def fmt(row):
        name = row[0].ljust(widths[0])
        numbers = "  ".join(row[i].rjust(widths[i]) for i in range(1, 4))
        return f"{name}  {numbers}"

    lines = [fmt(header), "-" * len(fmt(header))]
    lines.extend(fmt(row) for row in rows)
    subsampled = [s for s in _ranked(summaries) if s.get("subsample", 1) > 1]
    for s in subsampled:
        lines.append(
            f"note: {s['combo']} used every {s['subsample']}th window (subsampled)"
        )
    return "\n".join(lines) + "\n"


def build_report(summaries: Sequence[dict]) -> dict:
    """Aggregate structured summary: ranked results plus modality groups."""
    groups = group_by_modality(
        (
            s["combo"],
            s["modality"],
            s["mean_val_accuracy"],
            [f["best_val_accuracy"] for f in s["folds"]],
        )
        for s in summaries
    )
    return {
        "results": _ranked(summaries),
        "modality_groups": {str(m): stats for m, stats in groups.items()},
    }


def emit_report(summaries: Sequence[dict], out_dir: Path) -> dict[str, Path]:
    """Write report.csv, report.txt and summary.json under ``out_dir``."""
    if not summaries:
        raise ValueError("no summaries to report")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "csv": out_dir / "report.csv",
        "table": out_dir / "report.txt",
        "json": out_dir / "summary.json",
    }
    paths["csv"].write_text(render_csv(summaries))
    paths["table"].write_text(render_table(summaries))
    paths["json"].write_text(_dump_json(build_report(summaries)))
    return paths
