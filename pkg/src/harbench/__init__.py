"""harbench: inertial signal-combination benchmark for activity recognition.

Parses PAMAP2 recordings, builds the 15 sensor/signal combinations,
trains a from-scratch 1D CNN under leave-one-subject-out cross-validation
and emits accuracy reports.
"""

from .channels import ALL_CHANNELS, Axis, ChannelId, Kind, Location
from .classifier import ConvNet1DClassifier, EarlyStopper
from .experiment import (
    ExperimentResult,
    FoldResult,
    FoldSpec,
    Hyperparams,
    make_folds,
    modality_group_stats,
    run_experiment,
    train_fold,
)
from .ingest import (
    ActivitySegment,
    CLASS_NAMES,
    DEFAULT_LABEL_MAP,
    SubjectRecording,
    extract_segments,
    load_subject_file,
    parse_subject_file,
)
from .pipeline import (
    SignalCombination,
    WindowSet,
    build_fold_datasets,
    build_subject_windows,
    clean_missing,
    combination_catalog,
    eligible_subjects,
    get_combination,
    segment_windows,
)
from .preprocessing import ChannelStandardizer

__version__ = "0.1.0"

__all__ = [
    "ALL_CHANNELS",
    "ActivitySegment",
    "Axis",
    "CLASS_NAMES",
    "ChannelId",
    "ChannelStandardizer",
    "ConvNet1DClassifier",
    "DEFAULT_LABEL_MAP",
    "EarlyStopper",
    "ExperimentResult",
    "FoldResult",
    "FoldSpec",
    "Hyperparams",
    "Kind",
    "Location",
    "SignalCombination",
    "SubjectRecording",
    "WindowSet",
    "build_fold_datasets",
    "build_subject_windows",
    "clean_missing",
    "combination_catalog",
    "eligible_subjects",
    "extract_segments",
    "get_combination",
    "load_subject_file",
    "make_folds",
    "modality_group_stats",
    "parse_subject_file",
    "run_experiment",
    "segment_windows",
    "train_fold",
    "__version__",
]
