"""Tensor file format.

A tensor file is one JSON object::

    {
      "shape": [n1, n2, ..., nk],
      "data": [x0, x1, ...],
      "comment": "optional free text"
    }

``shape`` is a nonempty array of positive integers. ``data`` holds exactly
``prod(shape)`` finite numbers in row-major order (last index varies
fastest). ``comment`` is optional and ignored by every computation; any other
key is rejected so that typos do not pass silently. Writers emit the shortest
decimal form that round-trips to the same double.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .core import as_tensor
from .errors import InvalidArgument

_ALLOWED_KEYS = {"shape", "data", "comment"}


class TensorFileError(InvalidArgument):
    def __init__(self, source, message, line=None, column=None):
        where = str(source)
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.column = column


def parse_tensor(text: str, source: str = "<string>") -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFileError(source, exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict):
        raise TensorFileError(source, "top level must be an object with 'shape' and 'data'")
    extra = set(obj) - _ALLOWED_KEYS
    if extra:
        raise TensorFileError(source, f"unknown field(s): {', '.join(sorted(extra))}")
    for key in ("shape", "data"):
        if key not in obj:
            raise TensorFileError(source, f"missing field '{key}'")

    shape = obj["shape"]
    if not isinstance(shape, list) or not shape:
        raise TensorFileError(source, "field 'shape': expected a nonempty array of integers")
    for i, n in enumerate(shape):
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise TensorFileError(source, f"field 'shape'[{i}]: expected a positive integer, got {n!r}")

    data = obj["data"]
    if not isinstance(data, list):
        raise TensorFileError(source, "field 'data': expected an array of numbers")
    size = math.prod(shape)
    if len(data) != size:
        raise TensorFileError(source, f"field 'data': shape {shape} needs {size} values, got {len(data)}")
    for i, x in enumerate(data):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise TensorFileError(source, f"field 'data'[{i}]: expected a finite number, got {x!r}")

    return as_tensor(np.array(data, dtype=np.float64).reshape(shape))


def load_tensor(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TensorFileError(path, f"cannot read file: {exc.strerror}") from None
    return parse_tensor(text, str(path))


def dumps_tensor(a, comment: str | None = None) -> str:
    a = as_tensor(a)
    obj = {}
    if comment:
        obj["comment"] = comment
    obj["shape"] = list(a.shape)
    obj["data"] = [float(x) for x in a.ravel()]
    return json.dumps(obj) + "\n"


def save_tensor(path, a, comment: str | None = None) -> None:
    Path(path).write_text(dumps_tensor(a, comment))
