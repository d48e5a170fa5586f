"""Deterministic JSON emission.

Floats are written with 17 significant decimal digits so that every emitted
value parses back to the identical double; dict keys keep insertion order.
The output of :func:`dumps` is therefore byte-stable for identical inputs,
which the reproduction tooling relies on.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite float in JSON output: {x!r}")
    s = format(x, ".17g")
    # make sure the token stays a JSON number, not an integer literal
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dumps(obj) -> str:
    """Serialize ``obj`` (dict/list/str/int/float/bool/None/Fraction) to JSON."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return _escape(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, dict):
        items = (f"{_escape(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    # numpy scalars and similar
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")
