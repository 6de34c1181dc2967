"""Run configuration: built-in defaults, an optional ``key = value`` file, then flags."""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .aggregate import default_workers
from .errors import InvalidParameter
from .tolerance import Tolerance


def _positive_int(text) -> int:
    v = int(text)
    if v < 1:
        raise ValueError("must be at least 1")
    return v


def _positive_float(text) -> float:
    v = float(text)
    if not v > 0:
        raise ValueError("must be positive")
    return v


def _choice(*options):
    def conv(text):
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text

    return conv


# keys accepted in a config file, with their converters
FILE_KEYS = {
    "input": str,
    "backend": _choice("spt", "roof", "auto"),
    "mode": _choice("continuous", "discrete", "both"),
    "format": _choice("json", "table"),
    "threads": _positive_int,
    "seed": int,
    "tol_rel": _positive_float,
    "tol_abs": _positive_float,
    "allow_shortcut_edges": _choice("warn", "error"),
    "k": int,
    "n": _positive_int,
}

DEFAULTS = {
    "input": None,
    "backend": "spt",
    "mode": "both",
    "format": "json",
    "threads": None,  # resolved from CONTMEAN_THREADS, then the CPU count
    "seed": 0,
    "tol_rel": 1e-9,
    "tol_abs": 1e-12,
    "allow_shortcut_edges": "error",
}


@dataclass
class RunConfig:
    input: str | None
    backend: str
    mode: str
    format: str
    threads: int
    seed: int
    tol: Tolerance
    allow_shortcut_edges: str


def read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read(), source=path)
    except OSError as exc:
        raise InvalidParameter(f"--config: cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise InvalidParameter(f"--config: {exc}") from None
    out = {}
    for key, raw in parser["run"].items():
        key = key.replace("-", "_")
        if key not in FILE_KEYS:
            raise InvalidParameter(f"--config: unknown key {key!r}")
        try:
            out[key] = FILE_KEYS[key](raw.strip())
        except ValueError as exc:
            raise InvalidParameter(f"--config: {key} = {raw.strip()!r}: {exc}") from None
    return out


def resolve(args, file_values: dict) -> RunConfig:
    """Fill every option left unset on the command line from the file, then the defaults."""
    merged = {}
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in file_values:
            merged[key] = file_values[key]
        else:
            merged[key] = DEFAULTS[key]
    for key in ("k", "n"):
        if getattr(args, key, None) is None and key in file_values and hasattr(args, key):
            setattr(args, key, file_values[key])
    threads = merged["threads"] if merged["threads"] is not None else default_workers()
    return RunConfig(
        input=merged["input"],
        backend=merged["backend"],
        mode=merged["mode"],
        format=merged["format"],
        threads=threads,
        seed=merged["seed"],
        tol=Tolerance(rel=merged["tol_rel"], abs=merged["tol_abs"]),
        allow_shortcut_edges=merged["allow_shortcut_edges"],
    )
