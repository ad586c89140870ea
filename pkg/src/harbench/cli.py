"""Command-line entry points: prepare, run, report, gradcheck.

Exit codes: 0 success, 1 usage/configuration, 2 data, 3 numerical.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import errors
from .cache import load_recordings
from .config import DATA_ROOT_ENV, RunConfig, load_config, write_config
from .experiment import run_experiment
from .ingest import CLASS_NAMES, DEFAULT_LABEL_MAP
from .net import gradient_check
from .pipeline import eligible_subjects, get_combination, subject_window_counts
from .report import (
    emit_report,
    read_summaries,
    result_to_summary,
    summary_path,
    write_fold_logs,
    write_summary,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

GRADCHECK_TOL = 1e-4

log = logging.getLogger(__name__)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key = value configuration file")
    parser.add_argument("--data-root", type=Path, help=f"dataset directory (or ${DATA_ROOT_ENV})")
    parser.add_argument("--combos", help="comma-separated combination ids, or 'all'")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--lr", dest="learning_rate", type=float)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--max-epochs", type=int)
    parser.add_argument("--patience", type=int)
    parser.add_argument("--min-delta", type=float)
    parser.add_argument("--norm-scope", choices=["train", "global"])
    parser.add_argument("--accel-range", choices=["16g", "6g"])
    parser.add_argument("--subsample", type=int, help="keep every k-th window")
    parser.add_argument("--out", dest="out_dir", type=Path)
    parser.add_argument(
        "--force", action="store_const", const=True, default=None,
        help="recompute combinations whose summaries already exist",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="harbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    p = sub.add_parser("prepare", help="parse raw subject files, build caches, print window counts")
    p.add_argument("--data-root", type=Path)
    p.add_argument("--out", dest="out_dir", type=Path)
    p.add_argument("--accel-range", choices=["16g", "6g"])
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("run", help="train the selected combinations and write reports")
    _add_run_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="re-render reports from stored summaries")
    p.add_argument("--out", dest="out_dir", type=Path, default=Path("results"))
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("gradcheck", help="verify analytic gradients against finite differences")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--seeds", type=int, default=3, help="number of seeds to check")
    p.add_argument("--modality", type=int, default=6)
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--samples", type=int, default=200, help="coordinates checked per array")
    p.set_defaults(func=cmd_gradcheck)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    keys = (
        "data_root", "combos", "seed", "learning_rate", "batch_size", "max_epochs",
        "patience", "min_delta", "norm_scope", "accel_range", "subsample",
        "out_dir", "force",
    )
    overrides = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    return load_config(getattr(args, "config", None), overrides)


def cmd_prepare(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data_root = config.resolved_data_root()
    cache_dir = Path(config.out_dir) / "cache"
    recordings = load_recordings(data_root, config.accel_range, cache_dir, refresh=True)

    short = {0: "sit", 1: "stand", 2: "walk", 3: "up", 4: "down"}
    print(f"{len(recordings)} subject file(s) parsed; cache written to {cache_dir}")
    header = "subject  samples  " + "  ".join(short[c].rjust(6) for c in sorted(short))
    print(header)
    for rec in recordings:
        counts = subject_window_counts(rec, DEFAULT_LABEL_MAP, config.max_gap)
        row = f"{rec.subject_id:>7}  {len(rec):>7}  " + "  ".join(
            str(counts.get(c, 0)).rjust(6) for c in sorted(short)
        )
        print(row)
    print("classes: " + ", ".join(f"{c}={name}" for c, name in enumerate(CLASS_NAMES)))
    subjects = eligible_subjects(recordings, DEFAULT_LABEL_MAP, config.max_gap)
    print(f"eligible subjects ({len(subjects)}): {', '.join(map(str, subjects))}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    data_root = config.resolved_data_root()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_config(config, out_dir / "config_resolved.cfg")

    recordings = load_recordings(data_root, config.accel_range, out_dir / "cache")
    hyper = config.hyperparams()
    for combo_id in config.combos:
        if summary_path(out_dir, combo_id).exists() and not config.force:
            log.info("combo %s: summary exists, skipping (use --force to recompute)", combo_id)
            continue
        result = run_experiment(
            recordings,
            get_combination(combo_id),
            hyper,
            norm_scope=config.norm_scope,
            max_gap=config.max_gap,
            subsample=config.subsample,
        )
        write_summary(result_to_summary(result), out_dir)
        write_fold_logs(result, out_dir)

    summaries = read_summaries(out_dir)
    paths = emit_report(summaries, out_dir)
    print(paths["table"].read_text(), end="")
    print(f"report written to {out_dir}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    summaries = read_summaries(args.out_dir)
    if not summaries:
        raise errors.EmptyInputError(f"no summaries under {args.out_dir}")
    paths = emit_report(summaries, args.out_dir)
    print(paths["table"].read_text(), end="")
    return EXIT_OK


def cmd_gradcheck(args: argparse.Namespace) -> int:
    worst = 0.0
    for seed in range(args.seed, args.seed + args.seeds):
        report = gradient_check(
            seed=seed,
            modality=args.modality,
            batch_size=args.batch_size,
            samples_per_array=args.samples,
        )
        print(
            f"seed {seed}: max relative error {report.max_rel_error:.3e} "
            f"over {report.n_checked} coordinates"
        )
        worst = max(worst, report.max_rel_error)
    verdict = "OK" if worst < GRADCHECK_TOL else "FAIL"
    print(f"max relative error {worst:.3e} (tolerance {GRADCHECK_TOL:.0e}): {verdict}")
    if worst >= GRADCHECK_TOL:
        raise errors.NonFiniteGradientError(
            f"gradient check failed: {worst:.3e} >= {GRADCHECK_TOL:.0e}"
        )
    return EXIT_OK


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (errors.UnknownKeyError, errors.InvalidValueError) as exc:
        print(f"harbench: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        errors.ShapeMismatchError,
        errors.NonFiniteInputError,
        errors.UnsupportedModalityError,
        errors.NonFiniteGradientError,
        errors.DivergedLossError,
    ) as exc:
        print(f"harbench: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (errors.HarbenchError, OSError) as exc:
        print(f"harbench: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
