"""Sign-composition engine: glyph catalogs, faceted search, sign storage, corpus statistics."""

from glyphforge.codes import GlyphCode, format_glyph_code, parse_glyph_code

__all__ = ["GlyphCode", "parse_glyph_code", "format_glyph_code"]
