"""Progressive faceted glyph search.

A search starts from a body area, then narrows through feature boxes.
One choice is allowed per box; choosing again in the same box replaces
the earlier choice. The index answers both the matching glyph set and,
per box, which options would still yield a non-empty result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping

from glyphforge.codes import GlyphCode, format_glyph_code

if TYPE_CHECKING:
    from glyphforge.catalog import Catalog


class UnknownArea(KeyError):
    pass


class UnknownBox(KeyError):
    pass


class UnknownOption(KeyError):
    pass


class SchemaMismatch(ValueError):
    """A glyph carries a facet attribute or option absent from the schema."""


@dataclass(frozen=True)
class FacetBox:
    name: str
    options: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.options)) != len(self.options):
            raise ValueError(f"duplicate options in box {self.name!r}")


@dataclass(frozen=True)
class FacetArea:
    name: str
    role: str
    boxes: tuple[FacetBox, ...]

    def __post_init__(self) -> None:
        names = [b.name for b in self.boxes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate box names in area {self.name!r}")

    def box(self, name: str) -> FacetBox:
        for b in self.boxes:
            if b.name == name:
                return b
        raise UnknownBox(name)


@dataclass(frozen=True)
class FacetSchema:
    areas: tuple[FacetArea, ...]

    def area(self, name: str) -> FacetArea:
        for a in self.areas:
            if a.name == name:
                return a
        raise UnknownArea(name)

    def area_for_role(self, role: str) -> FacetArea:
        for a in self.areas:
            if a.role == role:
                return a
        raise UnknownArea(f"no area for role {role!r}")

    @staticmethod
    def from_dict(data: dict) -> "FacetSchema":
        areas = []
        for a in data["areas"]:
            boxes = tuple(
                FacetBox(name=b["name"], options=tuple(b["options"]))
                for b in a.get("boxes", [])
            )
            areas.append(FacetArea(name=a["name"], role=a["role"], boxes=boxes))
        return FacetSchema(areas=tuple(areas))

    def to_dict(self) -> dict:
        return {
            "areas": [
                {
                    "name": a.name,
                    "role": a.role,
                    "boxes": [
                        {"name": b.name, "options": list(b.options)} for b in a.boxes
                    ],
                }
                for a in self.areas
            ]
        }


@dataclass(frozen=True)
class SelectionState:
    """A value: select/clear return new states, never mutate."""

    area: str
    choices: tuple[tuple[str, str], ...] = ()

    def choice_map(self) -> dict[str, str]:
        return dict(self.choices)


def select(
    schema: FacetSchema, state: SelectionState, box: str, option: str
) -> SelectionState:
    """Choose an option in a box, replacing any earlier choice in that box."""
    area = schema.area(state.area)
    b = area.box(box)
    if option not in b.options:
        raise UnknownOption(f"{option!r} not in box {box!r}")
    kept = tuple((k, v) for k, v in state.choices if k != box)
    return SelectionState(area=state.area, choices=kept + ((box, option),))


def clear(state: SelectionState, box: str) -> SelectionState:
    """Drop the choice in a box; no-op when the box has no choice."""
    if all(k != box for k, _ in state.choices):
        return state
    return SelectionState(
        area=state.area, choices=tuple((k, v) for k, v in state.choices if k != box)
    )


@dataclass
class FacetIndex:
    """Inverted index over facet attributes.

    Queries run on integer ids into a per-area code list pre-sorted by
    canonical text, so result ordering is an integer sort and intersections
    are small-set-first. The code-level views (universes, posting) exist
    for inspection and invariant checks.
    """

    schema: FacetSchema
    universes: dict[str, frozenset[GlyphCode]] = field(default_factory=dict)
    posting: dict[tuple[str, str, str], frozenset[GlyphCode]] = field(
        default_factory=dict
    )
    _codes: dict[str, tuple[GlyphCode, ...]] = field(default_factory=dict, repr=False)
    _universe_ids: dict[str, frozenset[int]] = field(default_factory=dict, repr=False)
    _posting_ids: dict[tuple[str, str, str], frozenset[int]] = field(
        default_factory=dict, repr=False
    )


def build_index(catalog: "Catalog") -> FacetIndex:
    """Build per-(area, box, option) code sets from the catalog's facet attributes."""
    schema = catalog.facet_schema
    universes: dict[str, set[GlyphCode]] = {a.name: set() for a in schema.areas}
    posting: dict[tuple[str, str, str], set[GlyphCode]] = {}
    for code, glyph in catalog.glyphs.items():
        role = catalog.role_map[code.category]
        area = schema.area_for_role(role.value)
        universes[area.name].add(code)
        for attr, option in glyph.facet_attrs.items():
            try:
                box = area.box(attr)
            except UnknownBox:
                raise SchemaMismatch(
                    f"glyph {format_glyph_code(code)}: attribute {attr!r} "
                    f"not a box of area {area.name!r}"
                ) from None
            if option not in box.options:
                raise SchemaMismatch(
                    f"glyph {format_glyph_code(code)}: option {option!r} "
                    f"not in box {attr!r}"
                )
            posting.setdefault((area.name, attr, option), set()).add(code)

    codes = {name: tuple(sorted(members)) for name, members in universes.items()}
    id_of = {
        name: {code: i for i, code in enumerate(members)}
        for name, members in codes.items()
    }
    universe_ids = {
        name: frozenset(range(len(members))) for name, members in codes.items()
    }
    posting_ids = {
        (area_name, box, opt): frozenset(id_of[area_name][c] for c in members)
        for (area_name, box, opt), members in posting.items()
    }
    return FacetIndex(
        schema=schema,
        universes={k: frozenset(v) for k, v in universes.items()},
        posting={k: frozenset(v) for k, v in posting.items()},
        _codes=codes,
        _universe_ids=universe_ids,
        _posting_ids=posting_ids,
    )


def _id_result(index: FacetIndex, state: SelectionState) -> frozenset[int] | set[int]:
    sets = [index._universe_ids.get(state.area, frozenset())]
    for box, option in state.choices:
        sets.append(index._posting_ids.get((state.area, box, option), frozenset()))
    sets.sort(key=len)
    result = sets[0]
    for other in sets[1:]:
        result = result & other
        if not result:
            break
    return result


def _validate_state(index: FacetIndex, state: SelectionState) -> None:
    area = index.schema.area(state.area)
    for box, option in state.choices:
        b = area.box(box)
        if option not in b.options:
            raise UnknownOption(f"{option!r} not in box {box!r}")


def query(index: FacetIndex, state: SelectionState) -> list[GlyphCode]:
    """Intersect the area universe with every chosen option set.

    Empty result is a legal answer, not an error. Output is ordered by
    canonical code text ascending.
    """
    _validate_state(index, state)
    codes = index._codes.get(state.area, ())
    return [codes[i] for i in sorted(_id_result(index, state))]


def available(index: FacetIndex, state: SelectionState) -> dict[str, set[str]]:
    """Per box, which options would still yield a non-empty result.

    The box's own choice is evaluated as if the box were cleared first,
    so switching options within a box is always possible.
    """
    _validate_state(index, state)
    area = index.schema.area(state.area)
    out: dict[str, set[str]] = {}
    for box in area.boxes:
        base = _id_result(index, clear(state, box.name))
        out[box.name] = {
            opt
            for opt in box.options
            if not base.isdisjoint(
                index._posting_ids.get((state.area, box.name, opt), frozenset())
            )
        }
    return out
