"""Linguistic statistics over a persisted corpus of signs.

All statistics read the stored component lists (validated against the
placements at load), never canvas geometry, and are invariant under
corpus iteration order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from glyphforge import signs as sign_model
from glyphforge.catalog import Catalog, GlyphRole
from glyphforge.codes import GlyphCode, format_glyph_code
from glyphforge.signs import InvariantViolation, Sign


class UnknownCode(KeyError):
    """Corpus code absent from the catalog: version skew; remediate with migrate_code."""


class EmptyPattern(ValueError):
    pass


@dataclass
class Corpus:
    signs: dict[str, Sign] = field(default_factory=dict)


def load_corpus(corpus_dir: str | Path) -> Corpus:
    """Load every <id>.sign.json in a directory; component lists are re-validated."""
    corpus = Corpus()
    for path in sorted(Path(corpus_dir).glob("*.sign.json")):
        sign = sign_model.parse(path.read_text(encoding="utf-8"))
        expected_id = path.name[: -len(".sign.json")]
        if sign.sign_id != expected_id:
            raise InvariantViolation(
                f"{path.name}: sign_id {sign.sign_id!r} does not match filename"
            )
        corpus.signs[sign.sign_id] = sign
    return corpus


@dataclass
class FrequencyTable:
    by_code: dict[GlyphCode, int]  # token count over all placements
    by_code_signwise: dict[GlyphCode, int]  # distinct signs containing the code


@dataclass
class CooccurrenceTable:
    pairs: dict[tuple[GlyphCode, GlyphCode], int]  # key ordered (min, max), a != b


def frequency(corpus: Corpus) -> FrequencyTable:
    by_code: Counter[GlyphCode] = Counter()
    signwise: Counter[GlyphCode] = Counter()
    for sign in corpus.signs.values():
        comps = sign_model.components(sign)
        for code, count in comps.items():
            by_code[code] += count
            signwise[code] += 1
    return FrequencyTable(by_code=dict(by_code), by_code_signwise=dict(signwise))


def cooccurrence(corpus: Corpus) -> CooccurrenceTable:
    """Sign-level co-occurrence of distinct codes; absent pairs are omitted."""
    pairs: Counter[tuple[GlyphCode, GlyphCode]] = Counter()
    for sign in corpus.signs.values():
        codes = sorted(set(sign_model.components(sign)))
        for a, b in combinations(codes, 2):
            pairs[(a, b)] += 1
    return CooccurrenceTable(pairs=dict(pairs))


def category_distribution(corpus: Corpus, catalog: Catalog) -> dict[GlyphRole, int]:
    """Token counts grouped by role via the catalog's category map."""
    out: dict[GlyphRole, int] = {role: 0 for role in catalog.role_map.values()}
    for sign in corpus.signs.values():
        for code, count in sign_model.components(sign).items():
            if code not in catalog.glyphs:
                raise UnknownCode(format_glyph_code(code))
            out[catalog.role_map[code.category]] += count
    return out


def find_signs_with(corpus: Corpus, pattern: set[GlyphCode]) -> list[str]:
    """Ids of signs whose components contain every pattern code, sorted."""
    if not pattern:
        raise EmptyPattern("pattern must name at least one code")
    hits = [
        sign_id
        for sign_id, sign in corpus.signs.items()
        if pattern <= set(sign_model.components(sign))
    ]
    return sorted(hits)
