"""Deterministic output: pinned number formatting, atomic writes, run records."""

from dataclasses import dataclass, field
import hashlib
import json
import math
import os
import tempfile

import numpy as np


def format_number(x):
    """Shortest round-trip decimal; locale independent."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _plain(value):
    """JSON-ready copy: numpy scalars and arrays unwrapped, non-finite floats as null."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    return value


def dumps_json(obj):
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False,
                      allow_nan=False) + "\n"


def canonical_hash(obj):
    text = json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def csv_text(columns):
    """Header plus rows from an ordered mapping of equal-length columns."""
    names = list(columns)
    data = [np.asarray(columns[name]).ravel() if not isinstance(columns[name], list)
            else columns[name] for name in names]
    lengths = {len(c) for c in data}
    if len(lengths) > 1:
        raise ValueError("columns differ in length")
    lines = [",".join(names)]
    for row in zip(*data):
        lines.append(",".join(format_number(v) if not isinstance(v, str) else v for v in row))
    return "\n".join(lines) + "\n"


def table_text(columns, fmt):
    if fmt == "json":
        return dumps_json({name: list(values) for name, values in columns.items()})
    return csv_text(columns)


def atomic_write(path, text):
    """Write via a temporary file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


STATUSES = ("ok", "aborted", "warning")


@dataclass
class RunReport:
    scalars: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)  # name -> {column: values}
    status: str = "ok"
    diagnostics: list = field(default_factory=list)

    def add_scalar(self, name, value):
        if name in self.scalars:
            raise KeyError(f"duplicate scalar {name!r}")
        self.scalars[name] = value

    def add_series(self, name, columns):
        if name in self.series:
            raise KeyError(f"duplicate series {name!r}")
        self.series[name] = columns

    def warn(self, message):
        self.diagnostics.append(message)
        if self.status == "ok":
            self.status = "warning"

    def abort(self, message):
        self.diagnostics.append(message)
        self.status = "aborted"

    def to_dict(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        return {
            "status": self.status,
            "scalars": self.scalars,
            "series": sorted(self.series),
            "diagnostics": list(self.diagnostics),
        }


@dataclass
class RunManifest:
    subcommand: str
    config_hash: str
    seed: int | None
    tool_version: str
    outputs: list = field(default_factory=list)
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)

    def record(self, path):
        if path in self.outputs:
            raise ValueError(f"{path} emitted twice")
        self.outputs.append(path)

    def to_dict(self):
        return {
            "subcommand": self.subcommand,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "outputs": list(self.outputs),
            "wall_time": self.wall_time,
            "config": self.config,
        }
