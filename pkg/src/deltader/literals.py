"""Text forms for elements, operators, scalars and index ranges.

Element grammar:  term (+- term)*  with  term = [coef*]e<i> | [coef*]f<i>
and coef a rational written ``p/q`` or an integer. Example: ``3/4*e-1 - f2``.

Operator literals: ``shift:t=2,w=3/4``, ``thin:a=[1,0,2];b=[0,5]`` (the beta
list starts at index 2), ``solv:a=[...]``, ``wab:a={-1:2,0:1};b={0:1}``,
``thin-delta``, ``solv-deltabar``, ``thin-nabla``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Tuple

from .algebras import BasisKey, E, F
from .exactlin import SparseVec
from .operators import (
    ShiftOp,
    SolvDeltaBar,
    SolvHalfDer,
    ThinHalfDer,
    ThinLocalDelta,
    ThinNabla,
    WabHalfDer,
)
from .algebras import AlgebraSpec


class ParseError(ValueError):
    """Malformed literal; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?P<kind>[ef])(?P<index>-?\d+)"
)


def parse_scalar(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.fullmatch(text):
        raise ParseError(f"not a rational: {text!r}", 0)
    return Fraction(text)


def format_scalar(value: Fraction) -> str:
    return str(value)


def parse_range(text: str) -> Tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\.\.(-?\d+)\s*", text)
    if not m:
        raise ParseError(f"not an index range lo..hi: {text!r}", 0)
    return int(m.group(1)), int(m.group(2))


def parse_element(text: str) -> SparseVec:
    """Parse an element literal into a sparse vector."""
    pos = 0
    entries = {}
    first = True
    n = len(text)
    while pos < n and text[pos].isspace():
        pos += 1
    if pos == n:
        raise ParseError("empty element", pos)
    while pos < n:
        m = _TERM.match(text, pos)
        if not m:
            raise ParseError("expected a term like 3/4*e-1", pos)
        sign = m.group("sign")
        if first and sign == "+":
            raise ParseError("leading + not allowed", pos)
        if not first and sign is None:
            raise ParseError("missing + or - between terms", pos)
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if sign == "-":
            coef = -coef
        key = BasisKey(m.group("kind"), int(m.group("index")))
        entries[key] = entries.get(key, Fraction(0)) + coef
        pos = m.end()
        first = False
        while pos < n and text[pos].isspace():
            pos += 1
    return SparseVec(entries)


def format_element(v: SparseVec) -> str:
    """Canonical form; round-trips through parse_element."""
    if v.is_zero():
        return "0*e0"
    parts = []
    for key, coef in v.items():
        mag = abs(coef)
        body = f"{key.kind}{key.index}" if mag == 1 else f"{mag}*{key.kind}{key.index}"
        if not parts:
            parts.append(body if coef > 0 else f"-{body}")
        else:
            parts.append(("+" if coef > 0 else "-") + body)
    return "".join(parts)


def _parse_list(text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"expected [..] list: {text!r}", 0)
    body = text[1:-1].strip()
    if not body:
        return ()
    return tuple(parse_scalar(p) for p in body.split(","))


def _parse_int_map(text: str) -> dict:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError(f"expected {{t:v,..}} map: {text!r}", 0)
    body = text[1:-1].strip()
    out = {}
    if not body:
        return out
    for part in body.split(","):
        if ":" not in part:
            raise ParseError(f"expected t:v entry: {part!r}", 0)
        t, v = part.split(":", 1)
        out[int(t.strip())] = parse_scalar(v)
    return out


def parse_operator(text: str, alg: AlgebraSpec = None):
    """Parse an operator literal; the algebra contextualizes shift operators."""
    text = text.strip()
    if text == "thin-delta":
        return ThinLocalDelta()
    if text == "solv-deltabar":
        return SolvDeltaBar()
    if text == "thin-nabla":
        return ThinNabla()
    if ":" not in text:
        raise ParseError(f"unknown operator literal: {text!r}", 0)
    head, body = text.split(":", 1)
    if head == "shift":
        fields = dict(p.split("=", 1) for p in body.split(","))
        t = int(fields.get("t", "0"))
        w = parse_scalar(fields.get("w", "1"))
        if alg is not None and alg.name in ("wittz", "wittpos", "witt1"):
            return ShiftOp(t, w, alg)
        return ShiftOp(t, w)
    sections = dict(
        part.split("=", 1) for part in body.split(";") if part
    )
    if head == "thin":
        return ThinHalfDer(
            alpha=_parse_list(sections.get("a", "[]")),
            beta=_parse_list(sections.get("b", "[]")),
        )
    if head == "solv":
        return SolvHalfDer(alpha=_parse_list(sections.get("a", "[]")))
    if head == "wab":
        return WabHalfDer(
            alpha=_parse_int_map(sections.get("a", "{}")),
            beta=_parse_int_map(sections.get("b", "{}")),
        )
    raise ParseError(f"unknown operator kind: {head!r}", 0)


def format_operator(op) -> str:
    """Canonical operator literal: kind tag plus sorted coefficient lists."""
    if isinstance(op, ThinLocalDelta):
        return "thin-delta"
    if isinstance(op, SolvDeltaBar):
        return "solv-deltabar"
    if isinstance(op, ThinNabla):
        return "thin-nabla"
    if isinstance(op, ShiftOp):
        return f"shift:t={op.t},w={op.weight}"
    if isinstance(op, ThinHalfDer):
        a = ",".join(str(x) for x in op.alpha)
        b = ",".join(str(x) for x in op.beta)
        return f"thin:a=[{a}];b=[{b}]"
    if isinstance(op, SolvHalfDer):
        a = ",".join(str(x) for x in op.alpha)
        return f"solv:a=[{a}]"
    if isinstance(op, WabHalfDer):
        a = ",".join(f"{t}:{v}" for t, v in sorted(op.alpha.items()))
        b = ",".join(f"{t}:{v}" for t, v in sorted(op.beta.items()))
        return f"wab:a={{{a}}};b={{{b}}}"
    raise TypeError(f"no literal form for {type(op).__name__}")
