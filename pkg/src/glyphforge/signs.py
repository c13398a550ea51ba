"""Sign composition on a 2-D canvas and its canonical file format.

Coordinates are glyph-center anchored, origin at canvas top-left, y down.
Overlap between placements is allowed and never diagnosed: glyphs overlap
by design (contact between hands). Signs are values: every operation
returns a new sign and never mutates its input.

The sign file is UTF-8 JSON with fields, in order: format_version,
sign_id, canvas_width, canvas_height, label, placements (sorted by
placement_id), components. The components field is written on save and
must equal the multiset derived from placements on load.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace

from glyphforge.codes import (
    GlyphCode,
    MalformedCode,
    ZeroField,
    format_glyph_code,
    parse_glyph_code,
)

FORMAT_VERSION = 1
DEFAULT_CANVAS = 400


class SignError(Exception):
    pass


class BadDimensions(SignError):
    pass


class OutOfBounds(SignError):
    pass


class NoSuchPlacement(SignError):
    pass


class ParseError(SignError):
    pass


class InvariantViolation(SignError):
    pass


@dataclass(frozen=True)
class PositionedGlyph:
    placement_id: int
    code: GlyphCode
    x: int
    y: int


@dataclass(frozen=True)
class Sign:
    canvas_width: int
    canvas_height: int
    placements: tuple[PositionedGlyph, ...] = ()
    sign_id: str = ""
    label: str | None = None
    format_version: int = FORMAT_VERSION
    # id counter is bookkeeping, not identity: excluded from equality so
    # remove(place(s, ...)) == s holds
    next_placement_id: int = field(default=1, compare=False)


def new_sign(canvas_width: int = DEFAULT_CANVAS, canvas_height: int = DEFAULT_CANVAS) -> Sign:
    if canvas_width <= 0 or canvas_height <= 0:
        raise BadDimensions(f"{canvas_width}x{canvas_height}")
    return Sign(canvas_width=canvas_width, canvas_height=canvas_height)


def _check_bounds(sign: Sign, x: int, y: int) -> None:
    if not (0 <= x <= sign.canvas_width and 0 <= y <= sign.canvas_height):
        raise OutOfBounds(
            f"({x}, {y}) outside {sign.canvas_width}x{sign.canvas_height}"
        )


def place(sign: Sign, code: GlyphCode, x: int, y: int) -> tuple[Sign, int]:
    """Add a placement; ids are assigned 1, 2, 3, ... in call order."""
    _check_bounds(sign, x, y)
    pid = sign.next_placement_id
    placed = PositionedGlyph(placement_id=pid, code=code, x=x, y=y)
    return (
        replace(sign, placements=sign.placements + (placed,), next_placement_id=pid + 1),
        pid,
    )


def move(sign: Sign, placement_id: int, x: int, y: int) -> Sign:
    """Change only the (x, y) of one placement."""
    _check_bounds(sign, x, y)
    if all(p.placement_id != placement_id for p in sign.placements):
        raise NoSuchPlacement(str(placement_id))
    moved = tuple(
        replace(p, x=x, y=y) if p.placement_id == placement_id else p
        for p in sign.placements
    )
    return replace(sign, placements=moved)


def remove(sign: Sign, placement_id: int) -> Sign:
    """Delete one placement; its id is never reused."""
    if all(p.placement_id != placement_id for p in sign.placements):
        raise NoSuchPlacement(str(placement_id))
    kept = tuple(p for p in sign.placements if p.placement_id != placement_id)
    return replace(sign, placements=kept)


def components(sign: Sign) -> dict[GlyphCode, int]:
    """The multiset of placed codes; positions discarded."""
    return dict(Counter(p.code for p in sign.placements))


def serialize(sign: Sign) -> str:
    """Canonical text form: fixed field order, placements by id, no variance."""
    doc = {
        "format_version": sign.format_version,
        "sign_id": sign.sign_id,
        "canvas_width": sign.canvas_width,
        "canvas_height": sign.canvas_height,
        "label": sign.label,
        "placements": [
            {
                "placement_id": p.placement_id,
                "code": format_glyph_code(p.code),
                "x": p.x,
                "y": p.y,
            }
            for p in sorted(sign.placements, key=lambda p: p.placement_id)
        ],
        "components": {
            format_glyph_code(code): count
            for code, count in sorted(components(sign).items())
        },
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def parse(text: str) -> Sign:
    """Parse and validate a sign file; inverse of serialize on valid signs."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise ParseError("sign file must be a JSON object")
    try:
        format_version = int(doc["format_version"])
        sign_id = doc["sign_id"]
        canvas_width = int(doc["canvas_width"])
        canvas_height = int(doc["canvas_height"])
        label = doc["label"]
        raw_placements = doc["placements"]
        raw_components = doc["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed field: {exc}") from exc
    if canvas_width <= 0 or canvas_height <= 0:
        raise InvariantViolation("non-positive canvas dimensions")
    if label is not None and not isinstance(label, str):
        raise ParseError("label must be text or null")

    placements = []
    for raw in raw_placements:
        try:
            pid = int(raw["placement_id"])
            code = parse_glyph_code(raw["code"])
            x = int(raw["x"])
            y = int(raw["y"])
        except (KeyError, TypeError, ValueError, MalformedCode, ZeroField) as exc:
            raise ParseError(f"bad placement: {exc}") from exc
        if pid <= 0:
            raise InvariantViolation(f"placement_id {pid} not positive")
        if not (0 <= x <= canvas_width and 0 <= y <= canvas_height):
            raise InvariantViolation(f"placement {pid} at ({x}, {y}) out of bounds")
        placements.append(PositionedGlyph(pid, code, x, y))

    ids = [p.placement_id for p in placements]
    if len(set(ids)) != len(ids):
        raise InvariantViolation("duplicate placement ids")

    sign = Sign(
        canvas_width=canvas_width,
        canvas_height=canvas_height,
        placements=tuple(sorted(placements, key=lambda p: p.placement_id)),
        sign_id=sign_id,
        label=label,
        format_version=format_version,
        next_placement_id=max(ids, default=0) + 1,
    )

    try:
        stored = {
            parse_glyph_code(code_text): int(count)
            for code_text, count in raw_components.items()
        }
    except (AttributeError, TypeError, ValueError, MalformedCode, ZeroField) as exc:
        raise ParseError(f"bad components field: {exc}") from exc
    if stored != components(sign):
        raise InvariantViolation("stored components disagree with placements")
    return sign
