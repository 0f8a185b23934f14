"""Polygon input documents (JSON or CSV) and JSON report helpers."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .geom import EXACT, FLOAT, Mat3, Point2, Polygon, Scalar


class InputError(ValueError):
    pass


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_coordinate(value) -> Scalar:
    """JSON ints and "p/q" strings are exact; JSON floats stay floats."""
    if isinstance(value, bool):
        raise InputError(f"invalid coordinate {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InputError(f"non-finite coordinate {value!r}")
        return value
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL.match(text):
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                raise InputError(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den) if den else 1)
        try:
            return float(text)
        except ValueError:
            raise InputError(f"invalid coordinate {value!r}") from None
    raise InputError(f"invalid coordinate {value!r}")


def format_scalar(x):
    """Exact values become integers or "p/q" strings, floats stay JSON numbers."""
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def format_rational(x) -> str:
    return str(Fraction(x))


def format_point(p: Point2) -> list:
    return [format_scalar(p.x), format_scalar(p.y)]


def format_matrix(M: Mat3, as_float: bool = False) -> list:
    if as_float:
        return [[float(x) for x in row] for row in M.rows]
    return [[format_scalar(x) for x in row] for row in M.rows]


@dataclass(frozen=True)
class PolygonDocument:
    vertices: tuple
    name: Optional[str] = None
    mode: Optional[str] = None

    def __post_init__(self):
        verts = tuple((parse_coordinate(x), parse_coordinate(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise InputError(f"a polygon needs at least 3 vertices, got {len(verts)}")
        if self.mode not in (None, EXACT, FLOAT):
            raise InputError(f"unknown mode hint {self.mode!r}")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_dict(cls, data) -> "PolygonDocument":
        if isinstance(data, list):
            data = {"vertices": data}
        if not isinstance(data, dict) or "vertices" not in data:
            raise InputError('expected an object with a "vertices" array')
        verts = data["vertices"]
        if not isinstance(verts, list) or any(not isinstance(v, list) or len(v) != 2 for v in verts):
            raise InputError('"vertices" must be a list of [x, y] pairs')
        return cls(tuple(tuple(v) for v in verts), data.get("name"), data.get("mode"))

    @classmethod
    def from_json(cls, text: str) -> "PolygonDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def from_csv(cls, text: str, name: Optional[str] = None) -> "PolygonDocument":
        verts = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = [t for t in re.split(r"[,\s]+", line) if t]
            if len(tokens) != 2:
                raise InputError(f"line {lineno}: expected two coordinates, got {len(tokens)}")
            verts.append(tuple(tokens))
        return cls(tuple(verts), name)

    @classmethod
    def parse(cls, text: str, name: Optional[str] = None) -> "PolygonDocument":
        stripped = text.lstrip()
        if stripped.startswith("{") or stripped.startswith("["):
            doc = cls.from_json(text)
            if doc.name is None and name is not None:
                doc = cls(doc.vertices, name, doc.mode)
            return doc
        return cls.from_csv(text, name)

    def to_dict(self) -> dict:
        out = {}
        if self.name is not None:
            out["name"] = self.name
        if self.mode is not None:
            out["mode"] = self.mode
        out["vertices"] = [[_serialise(x), _serialise(y)] for x, y in self.vertices]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @property
    def resolved_mode(self) -> str:
        if self.mode is not None:
            return self.mode
        exact = all(isinstance(t, Fraction) for v in self.vertices for t in v)
        return EXACT if exact else FLOAT

    def to_polygon(self) -> Polygon:
        return Polygon.from_coords(self.vertices, mode=self.resolved_mode)

    def digest(self) -> str:
        canon = json.dumps(self.to_dict()["vertices"], separators=(",", ":"))
        return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()

    @classmethod
    def from_polygon(cls, A: Polygon, name: Optional[str] = None) -> "PolygonDocument":
        return cls(tuple((p.x, p.y) for p in A), name)


def _serialise(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
