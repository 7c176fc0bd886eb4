"""Group specification files.

A spec file is a JSON object::

    {"name": "q8", "dimension": 2,
     "generators": [[[[0, 1], [0, 0]], [[0, 0], [0, -1]]], ...]}

with every matrix entry written as ``[re, im]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError, SpecParseError


@dataclass
class GroupSpec:
    name: str
    dimension: int
    generators: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "generators": [
                [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(g)]
                for g in self.generators
            ],
        }


def _reject_constant(token):
    raise SpecParseError(f"non-finite number {token} is not allowed")


def _number(x, where) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SpecParseError(f"{where}: expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise SpecParseError(f"{where}: non-finite number")
    return x


def parse_spec(data: dict) -> GroupSpec:
    if not isinstance(data, dict):
        raise SpecParseError("spec must be a JSON object")
    for key in ("name", "dimension", "generators"):
        if key not in data:
            raise SpecParseError(f"missing field {key!r}")
    name, n, gens = data["name"], data["dimension"], data["generators"]
    if not isinstance(name, str):
        raise SpecParseError("name must be a string")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SpecParseError(f"dimension must be a positive integer, got {n!r}")
    if not isinstance(gens, list):
        raise SpecParseError("generators must be a list")
    matrices = []
    for k, g in enumerate(gens):
        if not isinstance(g, list) or len(g) != n:
            raise SpecParseError(f"generator {k}: expected {n} rows")
        m = np.empty((n, n), dtype=np.complex128)
        for i, row in enumerate(g):
            if not isinstance(row, list) or len(row) != n:
                raise SpecParseError(f"generator {k} row {i}: expected {n} entries (ragged row)")
            for j, entry in enumerate(row):
                where = f"generator {k} entry ({i},{j})"
                if not isinstance(entry, list) or len(entry) != 2:
                    raise SpecParseError(f"{where}: expected [re, im]")
                m[i, j] = complex(_number(entry[0], where), _number(entry[1], where))
        matrices.append(m)
    return GroupSpec(name, n, matrices)


def loads(text: str) -> GroupSpec:
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}") from exc
    return parse_spec(data)


def dumps(spec: GroupSpec) -> str:
    return json.dumps(spec.to_dict(), indent=1) + "\n"


def read_spec(path) -> GroupSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"file not found: {path}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text)


def write_spec(spec: GroupSpec, path) -> None:
    Path(path).write_text(dumps(spec), encoding="utf-8")
