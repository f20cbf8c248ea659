"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Run configuration.

A RunConfig collects every option of one subcommand. Values come from
built-in defaults, then an optional JSON file, then command-line flags,
each layer overriding the previous one.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

from asymspec.exceptions import ConfigError
from asymspec.utils import parse_int_list

if TYPE_CHECKING:
    from collections.abc import Mapping

COMMANDS = ("spectrum", "maxeig", "pca", "joint", "mc-validate")

# Commands that read two price files
_NEEDS_INPUT = frozenset({"spectrum", "maxeig", "pca", "joint"})


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Options of one analysis run.

    Lag ranges left as None take per-command defaults: maxeig scans
    -50..400, pca scans 0..300.
    """

    command: str
    a: str | None = None
    b: str | None = None
    fmt: str = "auto"
    out: str = "."
    seed: int = 0
    threads: int | None = None
    tau: int = 0
    tau_min: int | None = None
    tau_max: int | None = None
    boot: int = 1
    subset: int | None = None
    free_q: bool = False
    bins: int | None = None
    window: int | None = None
    starts: tuple[int, ...] = ()
    reshuffle: bool = False
    top: int = 3
    n: int = 100
    t: int = 500
    reps: int = 50
    q_overlay: float | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command in _NEEDS_INPUT and (not self.a or not self.b):
            raise ConfigError(f"{self.command} needs two input files (--a and --b)")
        if self.fmt not in ("auto", "long_csv", "wide_csv"):
            raise ConfigError(f"unknown input format {self.fmt!r}")
        for name in ("boot", "top", "reps"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.subset is not None and self.subset < 2:
            raise ConfigError(f"subset must be >= 2, got {self.subset}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.window is not None and self.window < 3:
            raise ConfigError(f"window must be >= 3, got {self.window}")
        if self.n < 2 or self.t < 2:
            raise ConfigError(f"n and t must be >= 2, got {self.n} and {self.t}")
        if self.q_overlay is not None and not self.q_overlay > 0:
            raise ConfigError(f"q_overlay must be positive, got {self.q_overlay}")
        if self.tau_min is not None and self.tau_max is not None and self.tau_min > self.tau_max:
            raise ConfigError(f"tau_min {self.tau_min} exceeds tau_max {self.tau_max}")
        object.__setattr__(self, "starts", tuple(parse_int_list(self.starts)))

    @property
    def out_dir(self) -> Path:
        return Path(self.out)


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)} - {"command"}


def read_config_file(path: str | Path) -> dict[str, Any]:
    """Load a JSON object of RunConfig options.

    Keys may use dashes or underscores ("tau-max" and "tau_max" are equal).

    Raises:
        ConfigError: Unreadable file, invalid JSON, non-object or unknown keys
    """
    source = Path(path)
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {source}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {source}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {source} must hold a JSON object")

    options = {str(key).replace("-", "_"): value for key, value in data.items()}
    unknown = sorted(set(options) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys in {source}: {', '.join(unknown)}")
    return options


def build_config(
    command: str,
    *,
    config_file: str | Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Resolve defaults < config file < overrides into a RunConfig.

    Args:
        command: Subcommand name
        config_file: Optional JSON file of options
        overrides: Command-line values; None entries mean "not given"

    Raises:
        ConfigError: Unknown keys or invalid values
    """
    options: dict[str, Any] = {}
    if config_file is not None:
        options.update(read_config_file(config_file))
    for key, value in (overrides or {}).items():
        if key not in _FIELDS:
            raise ConfigError(f"unknown option {key!r}")
        if value is not None:
            options[key] = value
    try:
        return RunConfig(command, **options)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
