"""JSON instance and report documents.

Instance layout::

    {
      "characters": ["a", "b"],
      "dims": [2, 1],
      "operators": {
        "T": [ [[[0, 0], [1, 0]], [[0, 0], [0, 0]]],  [[[2, 0]]] ]
      },
      "cx": {"kind": "interval", "m": 101, "symbol": "identity"}
    }

Each operator is a list of blocks, one per character; a block is a list of
rows and every entry is an ``[re, im]`` pair (a bare real number is also
accepted). ``cx`` is optional; when it is present ``characters``, ``dims``
and ``operators`` may be omitted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .exceptions import InputError
from .module_space import ModuleShape
from .operators import ModuleOperator

REPORT_FORMAT = "modrange-report/1"


def _fail(path: str, msg: str):
    raise InputError(f"{path}: {msg}" if path else msg)


def _complex_entry(z, path: str) -> complex:
    if isinstance(z, bool):
        _fail(path, "expected an [re, im] pair, got a boolean")
    if isinstance(z, (int, float)):
        return complex(float(z), 0.0)
    if not isinstance(z, list) or len(z) != 2:
        _fail(path, f"expected an [re, im] pair, got {json.dumps(z)[:40]}")
    parts = []
    for k, v in enumerate(z):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            _fail(f"{path}[{k}]", f"expected a number, got {json.dumps(v)[:40]}")
        if not np.isfinite(v):
            _fail(f"{path}[{k}]", "entry is not finite")
        parts.append(float(v))
    return complex(parts[0], parts[1])


def parse_block(rows, d: int, path: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != d:
        got = len(rows) if isinstance(rows, list) else type(rows).__name__
        _fail(path, f"expected {d} rows, got {got}")
    out = np.zeros((d, d), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            got = len(row) if isinstance(row, list) else type(row).__name__
            _fail(f"{path}[{r}]", f"expected {d} entries, got {got}")
        for c, z in enumerate(row):
            out[r, c] = _complex_entry(z, f"{path}[{r}][{c}]")
    return out


def plain(obj):
    """Recursively convert numpy scalars, arrays and tuples to JSON types."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    return obj


def encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def encode_block(B: np.ndarray) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(B).tolist()]


def encode_operator(T: ModuleOperator) -> list:
    return [encode_block(B) for B in T.blocks]


@dataclass
class InstanceDocument:
    characters: list[str]
    dims: list[int]
    operators: dict[str, ModuleOperator]
    cx: dict | None = None
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def shape(self) -> ModuleShape:
        return ModuleShape.from_dims(self.dims, self.characters)

    def operator(self, name: str | None = None) -> tuple[str, ModuleOperator]:
        """Named operator, or the only one when ``name`` is omitted."""
        if name is None:
            if len(self.operators) == 1:
                name = next(iter(self.operators))
            elif "T" in self.operators:
                name = "T"
            else:
                _fail("operators", f"several operators {sorted(self.operators)}; pick one with --operator")
        if name not in self.operators:
            _fail("operators", f"no operator named {name!r}; available: {sorted(self.operators)}")
        return name, self.operators[name]

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "characters": list(self.characters),
            "dims": list(self.dims),
            "operators": {k: encode_operator(v) for k, v in sorted(self.operators.items())},
        }
        if self.cx is not None:
            d["cx"] = self.cx
        return d

    @classmethod
    def from_operator(cls, T: ModuleOperator, name: str = "T") -> "InstanceDocument":
        return cls(list(T.shape.space.labels), list(T.shape.dims), {name: T})


def parse_instance(data: Any) -> InstanceDocument:
    """Validate a decoded JSON object; errors name the offending field."""
    if not isinstance(data, dict):
        _fail("", "instance must be a JSON object")
    known = {"characters", "dims", "operators", "cx"}
    extra = sorted(set(data) - known)
    if extra:
        _fail(extra[0], f"unknown field; expected some of {sorted(known)}")
    cx = data.get("cx")
    if cx is not None:
        if not isinstance(cx, dict):
            _fail("cx", "must be an object")
        if "kind" not in cx:
            _fail("cx.kind", "missing")
        if "symbol" not in cx:
            _fail("cx.symbol", "missing")
        if ("m" in cx) == ("points" in cx):
            _fail("cx", "give exactly one of 'm' and 'points'")
    if cx is not None and "dims" not in data and "operators" not in data:
        return InstanceDocument([], [], {}, cx, data)

    for key in ("characters", "dims", "operators"):
        if key not in data:
            _fail(key, "missing")
    chars, dims, ops = data["characters"], data["dims"], data["operators"]
    if not isinstance(chars, list) or not all(isinstance(c, str) for c in chars):
        _fail("characters", "must be an array of strings")
    if not isinstance(dims, list) or not dims:
        _fail("dims", "must be a non-empty array of positive integers")
    for k, d in enumerate(dims):
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            _fail(f"dims[{k}]", f"must be a positive integer, got {json.dumps(d)}")
    if len(chars) != len(dims):
        _fail("dims", f"has {len(dims)} entries but characters has {len(chars)}")
    if len(set(chars)) != len(chars):
        _fail("characters", "labels must be distinct")
    if not isinstance(ops, dict) or not ops:
        _fail("operators", "must be a non-empty object mapping names to block lists")
    shape = ModuleShape.from_dims(dims, chars)
    parsed = {}
    for name, blocks in ops.items():
        path = f"operators.{name}"
        if not isinstance(blocks, list) or len(blocks) != len(dims):
            got = len(blocks) if isinstance(blocks, list) else type(blocks).__name__
            _fail(path, f"expected {len(dims)} blocks (one per character), got {got}")
        parsed[name] = ModuleOperator(
            shape, tuple(parse_block(b, d, f"{path}[{k}]") for k, (b, d) in enumerate(zip(blocks, dims)))
        )
    return InstanceDocument(list(chars), list(dims), parsed, cx, data)


def loads_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc


def load_instance(path: str) -> InstanceDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_instance(loads_json(text, path))


@dataclass
class ReportDocument:
    """Serializable outcome of one command.

    ``dumps`` is deterministic (sorted keys, fixed float repr, no clock), so
    two runs with the same inputs and seed give identical bytes.
    """

    command: str
    version: str
    seed: int | None
    instance: dict | None
    values: dict
    checks: list[dict] = field(default_factory=list)
    overall: bool | None = None

    def to_dict(self) -> dict:
        return plain({
            "format": REPORT_FORMAT,
            "command": self.command,
            "version": self.version,
            "seed": self.seed,
            "instance": self.instance,
            "values": self.values,
            "checks": self.checks,
            "overall": self.overall,
        })

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        if d.get("format") != REPORT_FORMAT:
            raise InputError(f"format: expected {REPORT_FORMAT!r}, got {d.get('format')!r}")
        return cls(d["command"], d["version"], d["seed"], d["instance"], d["values"],
                   d["checks"], d["overall"])

    @classmethod
    def loads(cls, text: str) -> "ReportDocument":
        return cls.from_dict(loads_json(text, "<report>"))

    def __eq__(self, other):
        if not isinstance(other, ReportDocument):
            return NotImplemented
        return self.to_dict() == other.to_dict()
