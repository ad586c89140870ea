"""Run configuration: key=value files, CLI overrides, resolved-config echo."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Callable, Mapping

from .errors import InvalidValueError, UnknownKeyError
from .experiment import Hyperparams
from .ingest import ACCEL_RANGES
from .pipeline import COMBINATION_IDS, DEFAULT_MAX_GAP, NORM_SCOPES

DATA_ROOT_ENV = "HARBENCH_DATA_ROOT"


@dataclass
class RunConfig:
    """Fully resolved settings for one benchmark run."""

    data_root: Path | None = None
    out_dir: Path = Path("results")
    combos: tuple[str, ...] = COMBINATION_IDS
    seed: int = 42
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    dropout_rate: float = 0.3
    batch_size: int = 64
    max_epochs: int = 3000
    patience: int = 50
    min_delta: float = 1e-4
    norm_scope: str = "train"
    accel_range: str = "16g"
    subsample: int = 1
    max_gap: int = DEFAULT_MAX_GAP
    force: bool = False

    def hyperparams(self) -> Hyperparams:
        return Hyperparams(
            learning_rate=self.learning_rate,
            beta1=self.beta1,
            beta2=self.beta2,
            epsilon=self.epsilon,
            dropout_rate=self.dropout_rate,
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            min_delta=self.min_delta,
            seed=self.seed,
        )

    def resolved_data_root(self) -> Path:
        root = self.data_root
        if root is None:
            env = os.environ.get(DATA_ROOT_ENV)
            if env:
                root = Path(env)
        if root is None:
            raise InvalidValueError(
                "data_root", f"not set (use --data-root or ${DATA_ROOT_ENV})"
            )
        return Path(root)


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise InvalidValueError(key, f"expected a boolean, got {raw!r}")


def parse_combos(raw) -> tuple[str, ...]:
    """Normalize a combo selection: 'all', 'l,o,c', or an iterable of ids."""
    if isinstance(raw, str):
        if raw.strip().lower() == "all":
            return COMBINATION_IDS
        items = [part.strip() for part in raw.split(",") if part.strip()]
    else:
        items = list(raw)
    if not items:
        raise InvalidValueError("combos", "selection is empty")
    bad = [c for c in items if c not in COMBINATION_IDS]
    if bad:
        raise InvalidValueError("combos", f"unknown combination ids {bad}")
    # preserve order, drop duplicates
    return tuple(dict.fromkeys(items))


def _choice(options: tuple[str, ...]) -> Callable[[str, str], str]:
    def convert(key: str, raw: str) -> str:
        value = raw.strip()
        if value not in options:
            raise InvalidValueError(key, f"must be one of {', '.join(options)}")
        return value

    return convert


def _int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InvalidValueError(key, f"expected an integer, got {raw!r}") from None


def _float(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise InvalidValueError(key, f"expected a number, got {raw!r}") from None


_CONVERTERS: dict[str, Callable[[str, str], Any]] = {
    "data_root": lambda key, raw: Path(raw.strip()),
    "out_dir": lambda key, raw: Path(raw.strip()),
    "combos": lambda key, raw: parse_combos(raw),
    "seed": _int,
    "learning_rate": _float,
    "beta1": _float,
    "beta2": _float,
    "epsilon": _float,
    "dropout_rate": _float,
    "batch_size": _int,
    "max_epochs": _int,
    "patience": _int,
    "min_delta": _float,
    "norm_scope": _choice(NORM_SCOPES),
    "accel_range": _choice(ACCEL_RANGES),
    "subsample": _int,
    "max_gap": _int,
    "force": _parse_bool,
}


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment; later keys win."""
    values: dict[str, Any] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidValueError(line, "expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _CONVERTERS:
            raise UnknownKeyError(key)
        values[key] = _CONVERTERS[key](key, raw)
    return values


def load_config(path: Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Build a config from an optional file plus already-typed overrides.

    Override values (typically from CLI flags) win over file values; both
    win over defaults.  Validation of the hyperparameter invariants happens
    on the resulting config.
    """
    values: dict[str, Any] = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text()))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _CONVERTERS:
            raise UnknownKeyError(key)
        values[key] = value
    if "combos" in values:
        values["combos"] = parse_combos(values["combos"])
    config = RunConfig(**values)
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    config.hyperparams()  # enforces the hyperparameter invariants
    if config.subsample < 1:
        raise InvalidValueError("subsample", "must be >= 1")
    if config.max_gap < 0:
        raise InvalidValueError("max_gap", "must be >= 0")
    if not config.combos:
        raise InvalidValueError("combos", "selection is empty")
    if config.norm_scope not in NORM_SCOPES:
        raise InvalidValueError("norm_scope", f"must be one of {', '.join(NORM_SCOPES)}")
    if config.accel_range not in ACCEL_RANGES:
        raise InvalidValueError("accel_range", f"must be one of {', '.join(ACCEL_RANGES)}")


def config_text(config: RunConfig) -> str:
    """Render the resolved config in the same key=value format it is read from."""
    lines = []
    for f in fields(RunConfig):
        if f.name == "force":
            continue  # transient flag, not part of a reproducible run
        value = getattr(config, f.name)
        if f.name == "combos":
            value = ",".join(value)
        elif value is None:
            value = ""
        lines.append(f"{f.name} = {value}")
    return "\n".join(lines) + "\n"


def write_config(config: RunConfig, path: Path) -> None:
    Path(path).write_text(config_text(config))
