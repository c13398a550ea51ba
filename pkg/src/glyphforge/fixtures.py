"""Deterministic desk fixtures and synthetic catalog generators.

DF-1 is the small catalog used throughout the test suite: 24 glyphs over
five categories, with two facet boxes for hands and one for movement.
The synthetic generator scales the same shape to arbitrary glyph counts
for load and latency budgets (the repo ships no real glyph imagery).
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from glyphforge.catalog import Catalog, Glyph, GlyphRole
from glyphforge.classification import (
    ClassificationSchema,
    Prototype,
    RuleSpec,
)
from glyphforge.codes import GlyphCode, format_glyph_code
from glyphforge.facets import FacetArea, FacetBox, FacetSchema

GLYPH_SIZE = 32

DF1_FACET_SCHEMA = FacetSchema(
    areas=(
        FacetArea(
            name="hand",
            role="hand_configuration",
            boxes=(
                FacetBox("fingers", ("1", "2", "3")),
                FacetBox("side", ("palm", "back")),
            ),
        ),
        FacetArea(
            name="movement",
            role="movement",
            boxes=(FacetBox("direction", ("up", "down")),),
        ),
        FacetArea(name="contact", role="contact", boxes=()),
        FacetArea(name="face", role="facial_expression", boxes=()),
        FacetArea(name="shoulders", role="shoulders", boxes=()),
    )
)

DF1_ROLE_MAP = {
    1: GlyphRole.HAND_CONFIGURATION,
    2: GlyphRole.MOVEMENT,
    3: GlyphRole.CONTACT,
    4: GlyphRole.FACIAL_EXPRESSION,
    5: GlyphRole.SHOULDERS,
}

DF1_LABEL_DICTIONARIES = {
    "category": {
        "01": "hands",
        "02": "movement",
        "03": "contact",
        "04": "face",
        "05": "shoulders",
    },
}


def _glyph(code: GlyphCode, facet_attrs: dict[str, str], label: str) -> Glyph:
    return Glyph(
        code=code,
        labels=(label,),
        image_ref=f"images/{format_glyph_code(code)}.png",
        width_px=GLYPH_SIZE,
        height_px=GLYPH_SIZE,
        facet_attrs=facet_attrs,
    )


def df1_catalog() -> Catalog:
    """The 24-glyph desk catalog, generated deterministically."""
    glyphs: dict[GlyphCode, Glyph] = {}
    # hands: families 01,02 x bases 001..003 x fills 01,02
    for family in (1, 2):
        for base in (1, 2, 3):
            for fill in (1, 2):
                code = GlyphCode(1, family, base, 1, fill, 1)
                side = "palm" if fill == 1 else "back"
                glyphs[code] = _glyph(
                    code, {"fingers": str(base), "side": side}, f"hand-{base}-{side}"
                )
    # movement: family 01 x bases 001..004 x rotations 01,02
    for base in (1, 2, 3, 4):
        for rotation in (1, 2):
            code = GlyphCode(2, 1, base, 1, 1, rotation)
            direction = "up" if rotation == 1 else "down"
            glyphs[code] = _glyph(code, {"direction": direction}, f"move-{base}-{direction}")
    # contact
    code = GlyphCode(3, 1, 1, 1, 1, 1)
    glyphs[code] = _glyph(code, {}, "contact")
    # facial expression: bases 001, 002
    for base in (1, 2):
        code = GlyphCode(4, 1, base, 1, 1, 1)
        glyphs[code] = _glyph(code, {}, f"face-{base}")
    # shoulders
    code = GlyphCode(5, 1, 1, 1, 1, 1)
    glyphs[code] = _glyph(code, {}, "shoulders")
    return Catalog(
        version_tag="ISWA-DF1",
        glyphs=glyphs,
        role_map=dict(DF1_ROLE_MAP),
        label_dictionaries={k: dict(v) for k, v in DF1_LABEL_DICTIONARIES.items()},
        facet_schema=DF1_FACET_SCHEMA,
    )


def df1_schema() -> ClassificationSchema:
    """Prototype/rule schema that classifies every DF-1 glyph exactly once."""
    prototypes = []
    for family in (1, 2):
        for base in (1, 2, 3):
            prototypes.append(
                Prototype(f"hand-{family:02d}-{base:03d}", 1, family, base, base)
            )
    for base in (1, 2, 3, 4):
        prototypes.append(Prototype(f"move-01-{base:03d}", 2, 1, base, base))
    prototypes.append(Prototype("contact-01-001", 3, 1, 1, 1))
    for base in (1, 2):
        prototypes.append(Prototype(f"face-01-{base:03d}", 4, 1, base, base))
    prototypes.append(Prototype("shoulders-01-001", 5, 1, 1, 1))
    rules = (
        RuleSpec("side", ("palm", "back"), frozenset({(1, 1), (1, 2)})),
        RuleSpec("direction", ("up", "down"), frozenset({(2, 1)})),
    )
    field_binding = (("direction", "rotation"), ("side", "fill"))
    return ClassificationSchema(tuple(prototypes), rules, field_binding)


SYNTH_FACET_SCHEMA = FacetSchema(
    areas=(
        FacetArea(
            name="hand",
            role="hand_configuration",
            boxes=(
                FacetBox("fingers", ("1", "2", "3", "4", "5")),
                FacetBox("side", ("palm", "back")),
                FacetBox("bend", ("straight", "curved", "hooked", "closed")),
            ),
        ),
        FacetArea(
            name="movement",
            role="movement",
            boxes=(FacetBox("direction", ("up", "down", "left", "right")),),
        ),
    )
)


def synthetic_catalog(n_glyphs: int, seed: int | None = None) -> Catalog:
    """A catalog of n unique glyphs over the synthetic facet schema.

    With a seed, facet options are drawn randomly (for oracle fuzzing);
    without one they derive from the code fields (for reproducible scale runs).
    """
    rng = random.Random(seed) if seed is not None else None
    hand = SYNTH_FACET_SCHEMA.areas[0]
    movement = SYNTH_FACET_SCHEMA.areas[1]
    glyphs: dict[GlyphCode, Glyph] = {}
    n_moves = n_glyphs // 10
    for i in range(n_glyphs - n_moves):
        code = GlyphCode(1, i // 999 + 1, i % 999 + 1, 1, 1, 1)
        if rng is not None:
            attrs = {b.name: rng.choice(b.options) for b in hand.boxes}
        else:
            attrs = {
                "fingers": hand.box("fingers").options[i % 5],
                "side": hand.box("side").options[i % 2],
                "bend": hand.box("bend").options[i % 4],
            }
        glyphs[code] = _glyph(code, attrs, f"hand-{i}")
    for i in range(n_moves):
        code = GlyphCode(2, i // 999 + 1, i % 999 + 1, 1, 1, 1)
        if rng is not None:
            attrs = {"direction": rng.choice(movement.box("direction").options)}
        else:
            attrs = {"direction": movement.box("direction").options[i % 4]}
        glyphs[code] = _glyph(code, attrs, f"move-{i}")
    return Catalog(
        version_tag=f"ISWA-SYNTH-{n_glyphs}",
        glyphs=glyphs,
        role_map={1: GlyphRole.HAND_CONFIGURATION, 2: GlyphRole.MOVEMENT},
        label_dictionaries={"category": {"01": "hands", "02": "movement"}},
        facet_schema=SYNTH_FACET_SCHEMA,
    )


def write_manifest(catalog: Catalog, path: str | Path, images: bool = False) -> Path:
    """Write a catalog as a JSON-lines manifest; optionally emit real PNGs."""
    path = Path(path)
    header = {
        "version_tag": catalog.version_tag,
        "role_map": {f"{cat:02d}": role.value for cat, role in catalog.role_map.items()},
        "label_dictionaries": catalog.label_dictionaries,
        "facet_schema": catalog.facet_schema.to_dict(),
    }
    lines = [json.dumps(header, ensure_ascii=False)]
    for code in sorted(catalog.glyphs):
        g = catalog.glyphs[code]
        lines.append(
            json.dumps(
                {
                    "code": format_glyph_code(code),
                    "labels": list(g.labels),
                    "image_ref": g.image_ref,
                    "width_px": g.width_px,
                    "height_px": g.height_px,
                    "facet_attrs": g.facet_attrs,
                },
                ensure_ascii=False,
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if images:
        from PIL import Image

        for code in catalog.glyphs:
            g = catalog.glyphs[code]
            img_path = path.parent / g.image_ref
            img_path.parent.mkdir(parents=True, exist_ok=True)
            Image.new("RGBA", (g.width_px, g.height_px), (0, 0, 0, 255)).save(img_path)
    return path
