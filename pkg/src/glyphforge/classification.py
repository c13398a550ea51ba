"""Prototype-plus-rules glyph taxonomy.

Every glyph is the unique combination of a prototype (category, family,
sub-family) and one option per applicable declension rule. Rules have no
exceptions: declension is purely schema-driven and never consults the
catalog. Rule options bind to the variation/fill/rotation code fields;
category/family/base are prototype identity. Unbound fields are 1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from glyphforge.catalog import Catalog
from glyphforge.codes import GlyphCode, format_glyph_code

BINDABLE_FIELDS = ("variation", "fill", "rotation")


class ClassificationError(Exception):
    pass


class IncompleteAssignment(ClassificationError):
    pass


class InapplicableRule(ClassificationError):
    pass


class OptionOutOfDomain(ClassificationError):
    pass


class Unclassified(ClassificationError):
    pass


@dataclass(frozen=True)
class RuleSpec:
    """A named declension rule with an ordered option domain.

    Options map to consecutive integers starting at 1; the first option is
    the identity value, so a prototype's own code is its identity declension.
    """

    name: str
    domain: tuple[str, ...]
    applies_to: frozenset[tuple[int, int]]  # (category, family) pairs

    def __post_init__(self) -> None:
        if not self.domain:
            raise ValueError(f"rule {self.name!r} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError(f"rule {self.name!r} has duplicate options")

    def option_value(self, option: str) -> int:
        try:
            return self.domain.index(option) + 1
        except ValueError:
            raise OptionOutOfDomain(
                f"{option!r} not in domain of rule {self.name!r}"
            ) from None


@dataclass(frozen=True)
class Prototype:
    id: str
    category: int
    family: int
    sub_family: int
    base: int


@dataclass(frozen=True)
class RuleAssignment:
    values: tuple[tuple[str, str], ...]  # (rule name, chosen option)

    def __post_init__(self) -> None:
        # canonical order so equal assignments compare equal
        object.__setattr__(self, "values", tuple(sorted(self.values)))

    def value_map(self) -> dict[str, str]:
        return dict(self.values)

    @staticmethod
    def of(values: dict[str, str]) -> "RuleAssignment":
        return RuleAssignment(tuple(sorted(values.items())))


@dataclass(frozen=True)
class ClassificationSchema:
    prototypes: tuple[Prototype, ...]
    rules: tuple[RuleSpec, ...]
    field_binding: tuple[tuple[str, str], ...]  # rule name -> code field

    def __post_init__(self) -> None:
        keys = [(p.category, p.family, p.base) for p in self.prototypes]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (category, family, base) among prototypes")
        binding = dict(self.field_binding)
        bound_fields = list(binding.values())
        if len(set(bound_fields)) != len(bound_fields):
            raise ValueError("field_binding not injective")
        for rule_field in bound_fields:
            if rule_field not in BINDABLE_FIELDS:
                raise ValueError(f"cannot bind rule to field {rule_field!r}")
        rule_names = {r.name for r in self.rules}
        for name in binding:
            if name not in rule_names:
                raise ValueError(f"field_binding names unknown rule {name!r}")
        for rule in self.rules:
            if rule.name not in binding:
                raise ValueError(f"rule {rule.name!r} has no field binding")

    def rule(self, name: str) -> RuleSpec:
        for r in self.rules:
            if r.name == name:
                return r
        raise InapplicableRule(f"unknown rule {name!r}")

    def applicable_rules(self, proto: Prototype) -> list[RuleSpec]:
        return [
            r for r in self.rules if (proto.category, proto.family) in r.applies_to
        ]

    def prototype_for(self, code: GlyphCode) -> Prototype | None:
        for p in self.prototypes:
            if (p.category, p.family, p.base) == (code.category, code.family, code.base):
                return p
        return None

    def bound_field(self, rule_name: str) -> str:
        return dict(self.field_binding)[rule_name]

    @staticmethod
    def from_dict(data: dict) -> "ClassificationSchema":
        prototypes = tuple(
            Prototype(
                id=p["id"],
                category=p["category"],
                family=p["family"],
                sub_family=p["sub_family"],
                base=p["base"],
            )
            for p in data["prototypes"]
        )
        rules = tuple(
            RuleSpec(
                name=r["name"],
                domain=tuple(r["domain"]),
                applies_to=frozenset((c, f) for c, f in r["applies_to"]),
            )
            for r in data["rules"]
        )
        binding = tuple(sorted(data["field_binding"].items()))
        return ClassificationSchema(prototypes, rules, binding)

    def to_dict(self) -> dict:
        return {
            "prototypes": [
                {
                    "id": p.id,
                    "category": p.category,
                    "family": p.family,
                    "sub_family": p.sub_family,
                    "base": p.base,
                }
                for p in self.prototypes
            ],
            "rules": [
                {
                    "name": r.name,
                    "domain": list(r.domain),
                    "applies_to": sorted([c, f] for c, f in r.applies_to),
                }
                for r in self.rules
            ],
            "field_binding": dict(self.field_binding),
        }


def load_schema(path: str | Path) -> ClassificationSchema:
    with Path(path).open(encoding="utf-8") as fh:
        return ClassificationSchema.from_dict(json.load(fh))


def decline(
    schema: ClassificationSchema, proto: Prototype, assignment: RuleAssignment
) -> GlyphCode:
    """Produce the code for a prototype under a rule assignment.

    Injective over (prototype, assignment) pairs: bound fields carry the
    option integers, unbound fields stay 1.
    """
    applicable = {r.name: r for r in schema.applicable_rules(proto)}
    given = assignment.value_map()
    missing = set(applicable) - set(given)
    if missing:
        raise IncompleteAssignment(f"missing rules: {sorted(missing)}")
    extra = set(given) - set(applicable)
    if extra:
        raise InapplicableRule(
            f"rules {sorted(extra)} do not apply to prototype {proto.id}"
        )
    fields = {"variation": 1, "fill": 1, "rotation": 1}
    for name, option in given.items():
        fields[schema.bound_field(name)] = applicable[name].option_value(option)
    return GlyphCode(
        category=proto.category,
        family=proto.family,
        base=proto.base,
        **fields,
    )


def decompose(
    schema: ClassificationSchema, code: GlyphCode
) -> tuple[Prototype, RuleAssignment]:
    """Invert decline: recover the unique (prototype, assignment) for a code."""
    proto = schema.prototype_for(code)
    if proto is None:
        raise Unclassified(f"no prototype for {format_glyph_code(code)}")
    applicable = schema.applicable_rules(proto)
    bound = {schema.bound_field(r.name): r for r in applicable}
    values: dict[str, str] = {}
    for code_field in BINDABLE_FIELDS:
        value = getattr(code, code_field)
        rule = bound.get(code_field)
        if rule is None:
            if value != 1:
                raise Unclassified(
                    f"{format_glyph_code(code)}: field {code_field}={value} "
                    "has no governing rule"
                )
            continue
        if value > len(rule.domain):
            raise Unclassified(
                f"{format_glyph_code(code)}: field {code_field}={value} "
                f"outside domain of rule {rule.name!r}"
            )
        values[rule.name] = rule.domain[value - 1]
    return proto, RuleAssignment.of(values)


def reachable_codes(schema: ClassificationSchema) -> set[GlyphCode]:
    """All codes decline can produce, by enumerating every assignment."""
    out: set[GlyphCode] = set()
    for proto in schema.prototypes:
        rules = schema.applicable_rules(proto)
        domains = [[(r.name, opt) for opt in r.domain] for r in rules]
        for combo in itertools.product(*domains):
            out.add(decline(schema, proto, RuleAssignment(tuple(sorted(combo)))))
    return out


@dataclass
class AuditReport:
    """Pure data: the same audit backs the CLI and the service endpoint."""

    classified: dict[GlyphCode, tuple[str, RuleAssignment]] = field(
        default_factory=dict
    )
    unclassified: list[GlyphCode] = field(default_factory=list)
    family_counts: dict[tuple[int, int], int] = field(default_factory=dict)
    sub_family_counts: dict[tuple[int, int, int], int] = field(default_factory=dict)
    missing_codes: list[GlyphCode] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "classified": {
                format_glyph_code(c): {
                    "prototype": proto_id,
                    "assignment": assignment.value_map(),
                }
                for c, (proto_id, assignment) in sorted(self.classified.items())
            },
            "unclassified": [format_glyph_code(c) for c in self.unclassified],
            "family_counts": {
                f"{cat:02d}-{fam:02d}": n
                for (cat, fam), n in sorted(self.family_counts.items())
            },
            "sub_family_counts": {
                f"{cat:02d}-{fam:02d}-{sub:02d}": n
                for (cat, fam, sub), n in sorted(self.sub_family_counts.items())
            },
            "missing_codes": [format_glyph_code(c) for c in self.missing_codes],
            "summary": {
                "classified": len(self.classified),
                "unclassified": len(self.unclassified),
                "missing": len(self.missing_codes),
            },
        }


def audit_schema(schema: ClassificationSchema, catalog: Catalog) -> AuditReport:
    """Check every catalog glyph against the schema and find unreached codes."""
    report = AuditReport()
    for code in sorted(catalog.glyphs):
        try:
            proto, assignment = decompose(schema, code)
        except Unclassified:
            report.unclassified.append(code)
            continue
        report.classified[code] = (proto.id, assignment)
        fam_key = (proto.category, proto.family)
        report.family_counts[fam_key] = report.family_counts.get(fam_key, 0) + 1
        sub_key = (proto.category, proto.family, proto.sub_family)
        report.sub_family_counts[sub_key] = report.sub_family_counts.get(sub_key, 0) + 1
    report.missing_codes = sorted(reachable_codes(schema) - set(catalog.glyphs))
    return report
