"""Exact JSON encoding of scalars, points, chords and witnesses.

Scalars are ``[[num, den], [surd_num, surd_den], radicand]``; nothing is
ever written as a decimal.  Points are one-key objects tagged by model:
``{"p": scalar | "inf"}``, ``{"a": scalar}``, ``{"b": {...}}`` and
``{"t": {...}}``.  Blown-up and tree points need a :class:`DenjoyFrame`
to decode, which a report stores once under ``"frame"``.
"""

from __future__ import annotations

import re
from enum import Enum
from fractions import Fraction
from typing import Optional

from .circle import (
    INF,
    AnglePoint,
    BlownUpPoint,
    Chord,
    CirclePoint,
    DenjoyFrame,
    ProjectivePoint,
    TreePoint,
)
from .group import Word
from .multiquad import MultiSurd
from .scalar import QuadraticScalar, as_scalar, golden_angle

_TERM = re.compile(r"([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(?:sqrt\((\d+)\))?\s*")
_OVER = re.compile(r"^\((.*)\)\s*/\s*(\d+)$")


class FormatError(ValueError):
    """Malformed scenario or report content; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def parse_scalar_text(text: str) -> QuadraticScalar:
    """Exact scalar from text such as ``3/7``, ``-2``, ``sqrt(2)``, ``1/2 - 3*sqrt(5)``,
    ``(1+sqrt(5))/2``, ``phi`` (the golden ratio) or ``golden`` (its inverse).

    Decimals are rejected.
    """
    t = text.strip()
    if t == "golden":
        return golden_angle()
    if t == "phi":
        return golden_angle() + 1
    m = _OVER.match(t)
    if m:
        return parse_scalar_text(m.group(1)) * Fraction(1, int(m.group(2)))
    if not t or "." in t:
        raise ValueError(f"{text!r} is not an exact scalar (decimals are not accepted)")
    total = as_scalar(0)
    pos = 0
    while pos < len(t):
        m = _TERM.match(t, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ValueError(f"cannot parse {text!r} at {t[pos:]!r}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing operator in {text!r}")
        coef = Fraction(m.group(2) or 1)
        if m.group(1) == "-":
            coef = -coef
        total = total + (QuadraticScalar(0, coef, int(m.group(3))) if m.group(3) else as_scalar(coef))
        pos = m.end()
    return total


def scalar_to_json(x) -> list:
    return as_scalar(x).to_triple()


def scalar_from_json(data, path: str = "$") -> QuadraticScalar:
    """Accepts an int, ``[n, d]``, a full triple or text for :func:`parse_scalar_text`."""
    if isinstance(data, bool):
        raise FormatError(path, "booleans are not scalars")
    if isinstance(data, int):
        return as_scalar(data)
    if isinstance(data, str):
        try:
            return parse_scalar_text(data)
        except ValueError as e:
            raise FormatError(path, str(e)) from None
    if isinstance(data, list):
        try:
            if len(data) == 2 and all(type(v) is int for v in data):
                return as_scalar(Fraction(data[0], data[1]))
            (rn, rd), (sn, sd), d = data
            if not all(type(v) is int for v in (rn, rd, sn, sd, d)):
                raise TypeError
            return QuadraticScalar(Fraction(rn, rd), Fraction(sn, sd), d)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise FormatError(path, f"bad scalar {data!r}: {e}") from None
    raise FormatError(path, f"bad scalar {data!r}")


def frame_to_json(frame: DenjoyFrame) -> dict:
    return {"alpha": scalar_to_json(frame.alpha), "base": scalar_to_json(frame.base)}


def frame_from_json(data, path: str = "$.frame") -> DenjoyFrame:
    return DenjoyFrame(scalar_from_json(data["alpha"], path + ".alpha"),
                       scalar_from_json(data["base"], path + ".base"))


def point_to_json(p: CirclePoint) -> dict:
    if isinstance(p, ProjectivePoint):
        return {"p": "inf" if p.is_infinite else scalar_to_json(p.value)}
    if isinstance(p, AnglePoint):
        return {"a": scalar_to_json(p.value)}
    if isinstance(p, BlownUpPoint):
        if p.index is None:
            return {"b": {"base": scalar_to_json(p.base)}}
        return {"b": {"index": p.index, "t": [p.t.numerator, p.t.denominator]}}
    if isinstance(p, TreePoint):
        return {"t": {"address": list(p.address), "side": p.side, "end": p.end}}
    raise TypeError(f"cannot encode {p!r}")


def point_from_json(data, frame: Optional[DenjoyFrame] = None, path: str = "$") -> CirclePoint:
    if not isinstance(data, dict) or len(data) != 1:
        raise FormatError(path, "a point is a one-key object tagged p, a, b or t")
    (tag, v), = data.items()
    if tag == "p":
        return INF if v == "inf" else ProjectivePoint(scalar_from_json(v, path + ".p"))
    if tag == "a":
        return AnglePoint(scalar_from_json(v, path + ".a"))
    if tag in ("b", "t") and frame is None:
        raise FormatError(path, "blown-up and tree points need a frame")
    if tag == "b":
        if "base" in v:
            return BlownUpPoint(frame, base=scalar_from_json(v["base"], path + ".b.base"))
        return BlownUpPoint(frame, int(v["index"]), Fraction(*v["t"]))
    if tag == "t":
        return TreePoint(frame, tuple(v["address"]), int(v["side"]), int(v["end"]))
    raise FormatError(path, f"unknown point tag {tag!r}")


def chord_to_json(c: Chord) -> list:
    return [point_to_json(c.a), point_to_json(c.b)]


def chord_from_json(data, frame: Optional[DenjoyFrame] = None, path: str = "$") -> Chord:
    if not isinstance(data, list) or len(data) != 2:
        raise FormatError(path, "a chord is a list of two points")
    try:
        return Chord(point_from_json(data[0], frame, path + "[0]"),
                     point_from_json(data[1], frame, path + "[1]"))
    except FormatError:
        raise
    except (ValueError, TypeError) as e:
        raise FormatError(path, str(e)) from None


def to_json(obj):
    """Recursive encoder for witnesses and certificate details."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats never appear in exact payloads")
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, QuadraticScalar):
        return obj.to_triple()
    if isinstance(obj, MultiSurd):
        return obj.to_json()
    if isinstance(obj, CirclePoint):
        return {"point": point_to_json(obj)}
    if isinstance(obj, Chord):
        return {"chord": chord_to_json(obj)}
    if isinstance(obj, Word):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_json(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_json(obj, frame: Optional[DenjoyFrame] = None):
    """Inverse of :func:`to_json` for points and chords; other values pass through."""
    if isinstance(obj, dict):
        if set(obj) == {"point"}:
            return point_from_json(obj["point"], frame)
        if set(obj) == {"chord"}:
            return chord_from_json(obj["chord"], frame)
        return {k: from_json(v, frame) for k, v in obj.items()}
    if isinstance(obj, list):
        return [from_json(v, frame) for v in obj]
    return obj
