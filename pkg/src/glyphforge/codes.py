"""Six-field decimal glyph codes and their canonical text form.

Canonical form is zero-padded and hyphen-separated: "CC-FF-BBB-VV-LL-RR".
All fields are 1-based; zero is never a legal value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

FIELD_NAMES = ("category", "family", "base", "variation", "fill", "rotation")
FIELD_WIDTHS = (2, 2, 3, 2, 2, 2)

_CODE_RE = re.compile(r"(\d{2})-(\d{2})-(\d{3})-(\d{2})-(\d{2})-(\d{2})\Z")


class MalformedCode(ValueError):
    """Text does not match the code grammar, or a field exceeds its width."""


class ZeroField(ValueError):
    """A code field is zero; all fields are 1-based."""


@dataclass(frozen=True, order=True)
class GlyphCode:
    category: int
    family: int
    base: int
    variation: int
    fill: int
    rotation: int

    def __post_init__(self) -> None:
        for name, width in zip(FIELD_NAMES, FIELD_WIDTHS):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise MalformedCode(f"field {name} must be an integer, got {value!r}")
            if value == 0:
                raise ZeroField(f"field {name} is zero")
            if value < 0 or value >= 10**width:
                raise MalformedCode(
                    f"field {name}={value} outside 1..{10 ** width - 1}"
                )

    def __str__(self) -> str:
        return format_glyph_code(self)


def parse_glyph_code(text: str) -> GlyphCode:
    """Parse a canonical code string; reject anything else.

    Raises MalformedCode for grammar failures and ZeroField for zero fields.
    """
    m = _CODE_RE.match(text)
    if m is None:
        raise MalformedCode(f"not a canonical glyph code: {text!r}")
    values = tuple(int(g) for g in m.groups())
    for name, value in zip(FIELD_NAMES, values):
        if value == 0:
            raise ZeroField(f"field {name} is zero in {text!r}")
    return GlyphCode(*values)


def format_glyph_code(code: GlyphCode) -> str:
    """Render the canonical zero-padded text form; inverse of parse_glyph_code."""
    return "{:02d}-{:02d}-{:03d}-{:02d}-{:02d}-{:02d}".format(
        code.category, code.family, code.base, code.variation, code.fill, code.rotation
    )
