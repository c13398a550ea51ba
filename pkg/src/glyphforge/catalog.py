"""Glyph catalog ingestion: manifest parsing, validation, and version migration.

A manifest is UTF-8 JSON-lines: one header object (version_tag, role_map,
label_dictionaries, facet_schema) followed by one object per glyph (code,
labels, image_ref, width_px, height_px, facet_attrs). Missing image files
are warnings, not errors; the engine stays usable headless.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

from glyphforge.codes import GlyphCode, format_glyph_code, parse_glyph_code
from glyphforge.facets import FacetSchema, SchemaMismatch, UnknownArea, UnknownBox


class CatalogError(Exception):
    pass


class EmptyCatalog(CatalogError):
    pass


class DuplicateCode(CatalogError):
    pass


class SchemaError(CatalogError):
    pass


class MalformedRow(CatalogError):
    pass


class NotFound(KeyError):
    pass


class Unmapped(KeyError):
    """Code absent from a version map's domain: retired or re-drawn glyph."""


class GlyphRole(enum.Enum):
    FACIAL_EXPRESSION = "facial_expression"
    SHOULDERS = "shoulders"
    HAND_CONFIGURATION = "hand_configuration"
    CONTACT = "contact"
    MOVEMENT = "movement"


@dataclass(frozen=True)
class Glyph:
    code: GlyphCode
    labels: tuple[str, ...]
    image_ref: str
    width_px: int
    height_px: int
    facet_attrs: dict[str, str]


@dataclass
class Catalog:
    version_tag: str
    glyphs: dict[GlyphCode, Glyph]
    role_map: dict[int, GlyphRole]
    label_dictionaries: dict[str, dict[str, str]]
    facet_schema: FacetSchema


@dataclass
class LoadReport:
    """Warnings never change the set of loaded glyphs."""

    warnings: list[str] = field(default_factory=list)


def _image_dimensions(path: Path) -> tuple[int, int] | None:
    try:
        from PIL import Image
    except ImportError:
        return None
    try:
        with Image.open(path) as img:
            return img.size
    except Exception:
        return None


def _parse_header(obj: dict) -> tuple[str, dict[int, GlyphRole], dict, FacetSchema]:
    try:
        version_tag = obj["version_tag"]
        role_map_raw = obj["role_map"]
        label_dictionaries = obj["label_dictionaries"]
        facet_schema = FacetSchema.from_dict(obj["facet_schema"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad manifest header: {exc}") from exc
    role_map: dict[int, GlyphRole] = {}
    for cat_text, role_name in role_map_raw.items():
        try:
            role = GlyphRole(role_name)
        except ValueError as exc:
            raise SchemaError(f"unknown role {role_name!r}") from exc
        role_map[int(cat_text)] = role
    for role in set(role_map.values()):
        try:
            facet_schema.area_for_role(role.value)
        except UnknownArea as exc:
            raise SchemaError(f"facet schema has no area for role {role.value}") from exc
    return version_tag, role_map, label_dictionaries, facet_schema


def _parse_row(obj: dict, lineno: int) -> Glyph:
    try:
        code = parse_glyph_code(obj["code"])
        labels = tuple(obj["labels"])
        image_ref = obj["image_ref"]
        width_px = int(obj["width_px"])
        height_px = int(obj["height_px"])
        facet_attrs = dict(obj["facet_attrs"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRow(f"line {lineno}: {exc}") from exc
    if width_px <= 0 or height_px <= 0:
        raise MalformedRow(f"line {lineno}: non-positive image dimensions")
    return Glyph(code, labels, image_ref, width_px, height_px, facet_attrs)


def load_catalog(manifest: str | Path) -> tuple[Catalog, LoadReport]:
    """Load and validate a manifest; loading is deterministic per file."""
    manifest = Path(manifest)
    report = LoadReport()
    header = None
    glyphs: dict[GlyphCode, Glyph] = {}
    with manifest.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRow(f"line {lineno}: invalid JSON: {exc}") from exc
            if header is None:
                header = _parse_header(obj)
                continue
            glyph = _parse_row(obj, lineno)
            if glyph.code in glyphs:
                raise DuplicateCode(format_glyph_code(glyph.code))
            glyphs[glyph.code] = glyph
    if header is None or not glyphs:
        raise EmptyCatalog(str(manifest))
    version_tag, role_map, label_dictionaries, facet_schema = header

    for code, glyph in glyphs.items():
        if code.category not in role_map:
            raise SchemaError(
                f"glyph {format_glyph_code(code)}: category {code.category} "
                "missing from role_map"
            )
        role = role_map[code.category]
        area = facet_schema.area_for_role(role.value)
        for attr, option in glyph.facet_attrs.items():
            try:
                box = area.box(attr)
            except UnknownBox:
                raise SchemaError(
                    f"glyph {format_glyph_code(code)}: facet attribute {attr!r} "
                    f"not declared for area {area.name!r}"
                ) from None
            if option not in box.options:
                raise SchemaError(
                    f"glyph {format_glyph_code(code)}: option {option!r} "
                    f"not declared for box {attr!r}"
                )
        image_path = manifest.parent / glyph.image_ref
        if not image_path.is_file():
            report.warnings.append(
                f"{format_glyph_code(code)}: image not found: {glyph.image_ref}"
            )
        else:
            dims = _image_dimensions(image_path)
            if dims is not None and dims != (glyph.width_px, glyph.height_px):
                report.warnings.append(
                    f"{format_glyph_code(code)}: image is {dims[0]}x{dims[1]}, "
                    f"manifest says {glyph.width_px}x{glyph.height_px}"
                )
    return (
        Catalog(version_tag, glyphs, role_map, label_dictionaries, facet_schema),
        report,
    )


def get_glyph(catalog: Catalog, code: GlyphCode) -> Glyph:
    try:
        return catalog.glyphs[code]
    except KeyError:
        raise NotFound(format_glyph_code(code)) from None


@dataclass
class VersionMap:
    """Cross-version code mapping; injective over its domain."""

    from_version: str
    to_version: str
    pairs: dict[GlyphCode, GlyphCode]

    def __post_init__(self) -> None:
        targets = set()
        for old, new in self.pairs.items():
            if new in targets:
                raise ValueError(
                    f"version map not injective: {format_glyph_code(new)} "
                    "mapped twice"
                )
            targets.add(new)

    def inverse(self) -> "VersionMap":
        return VersionMap(
            from_version=self.to_version,
            to_version=self.from_version,
            pairs={v: k for k, v in self.pairs.items()},
        )


def load_version_map(path: str | Path) -> VersionMap:
    with Path(path).open(encoding="utf-8") as fh:
        obj = json.load(fh)
    pairs = {
        parse_glyph_code(p["from"]): parse_glyph_code(p["to"]) for p in obj["pairs"]
    }
    return VersionMap(obj["from_version"], obj["to_version"], pairs)


def migrate_code(vmap: VersionMap, code: GlyphCode) -> GlyphCode:
    try:
        return vmap.pairs[code]
    except KeyError:
        raise Unmapped(format_glyph_code(code)) from None


__all__ = [
    "Catalog",
    "CatalogError",
    "DuplicateCode",
    "EmptyCatalog",
    "Glyph",
    "GlyphRole",
    "LoadReport",
    "MalformedRow",
    "NotFound",
    "SchemaError",
    "SchemaMismatch",
    "Unmapped",
    "VersionMap",
    "get_glyph",
    "load_catalog",
    "load_version_map",
    "migrate_code",
]
