"""Command-line entry points: serve, ingest, audit, migrate, stats."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from glyphforge import corpus as corpus_stats
from glyphforge import signs as sign_model
from glyphforge.catalog import (
    CatalogError,
    Unmapped,
    load_catalog,
    load_version_map,
    migrate_code,
)
from glyphforge.classification import audit_schema, load_schema
from glyphforge.codes import format_glyph_code
from glyphforge.service import ServiceConfig, run


@click.group()
def main() -> None:
    """Sign-composition engine for coded glyph catalogs."""


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", required=True, type=click.Path(path_type=Path))
def ingest(manifest: Path, out: Path) -> None:
    """Load and validate a manifest, writing a single-document catalog cache."""
    try:
        catalog, report = load_catalog(manifest)
    except CatalogError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    cache = {
        "version_tag": catalog.version_tag,
        "role_map": {f"{c:02d}": r.value for c, r in catalog.role_map.items()},
        "label_dictionaries": catalog.label_dictionaries,
        "facet_schema": catalog.facet_schema.to_dict(),
        "glyphs": [
            {
                "code": format_glyph_code(code),
                "labels": list(g.labels),
                "image_ref": g.image_ref,
                "width_px": g.width_px,
                "height_px": g.height_px,
                "facet_attrs": g.facet_attrs,
            }
            for code, g in sorted(catalog.glyphs.items())
        ],
    }
    out.write_text(json.dumps(cache, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"ingested {len(catalog.glyphs)} glyphs -> {out}")


@main.command()
@click.option("--schema", "schema_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--manifest", required=True, type=click.Path(exists=True, path_type=Path))
def audit(schema_path: Path, manifest: Path) -> None:
    """Audit a catalog against a classification schema; report as JSON."""
    schema = load_schema(schema_path)
    catalog, _ = load_catalog(manifest)
    report = audit_schema(schema, catalog)
    click.echo(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))


@main.command()
@click.option("--map", "map_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
def migrate(map_path: Path, in_path: Path, out_path: Path) -> None:
    """Rewrite a sign file's codes through a version map."""
    vmap = load_version_map(map_path)
    try:
        sign = sign_model.parse(in_path.read_text(encoding="utf-8"))
    except (sign_model.ParseError, sign_model.InvariantViolation) as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    try:
        migrated = tuple(
            sign_model.PositionedGlyph(
                p.placement_id, migrate_code(vmap, p.code), p.x, p.y
            )
            for p in sign.placements
        )
    except Unmapped as exc:
        click.echo(f"error: Unmapped: no migration for code {exc}", err=True)
        sys.exit(1)
    out_sign = sign_model.Sign(
        canvas_width=sign.canvas_width,
        canvas_height=sign.canvas_height,
        placements=migrated,
        sign_id=sign.sign_id,
        label=sign.label,
        format_version=sign.format_version,
        next_placement_id=sign.next_placement_id,
    )
    out_path.write_text(sign_model.serialize(out_sign), encoding="utf-8")
    click.echo(f"migrated {len(migrated)} placements -> {out_path}")


@main.command()
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--catalog", "manifest", type=click.Path(exists=True, path_type=Path))
def stats(corpus_dir: Path, manifest: Path | None) -> None:
    """Emit frequency, co-occurrence, and (with a catalog) category tables."""
    corpus = corpus_stats.load_corpus(corpus_dir)
    freq = corpus_stats.frequency(corpus)
    cooc = corpus_stats.cooccurrence(corpus)
    out = {
        "signs": len(corpus.signs),
        "frequency": {
            "by_code": {format_glyph_code(c): n for c, n in sorted(freq.by_code.items())},
            "by_code_signwise": {
                format_glyph_code(c): n for c, n in sorted(freq.by_code_signwise.items())
            },
        },
        "cooccurrence": [
            {"a": format_glyph_code(a), "b": format_glyph_code(b), "count": n}
            for (a, b), n in sorted(cooc.pairs.items())
        ],
    }
    if manifest is not None:
        catalog, _ = load_catalog(manifest)
        dist = corpus_stats.category_distribution(corpus, catalog)
        out["categories"] = {
            role.value: n for role, n in sorted(dist.items(), key=lambda kv: kv[0].value)
        }
    click.echo(json.dumps(out, ensure_ascii=False, indent=2))


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--manifest", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--schema", "schema_path", type=click.Path(exists=True, path_type=Path))
@click.option("--corpus-dir", type=click.Path(path_type=Path), default=None)
@click.option("--log-dir", required=True, type=click.Path(path_type=Path))
@click.option("--static-dir", type=click.Path(path_type=Path))
def serve(
    port: int | None,
    manifest: Path,
    schema_path: Path | None,
    corpus_dir: Path | None,
    log_dir: Path,
    static_dir: Path | None,
) -> None:
    """Run the editor service. Flags win over GLYPHFORGE_* env overrides."""
    if port is None:
        port = int(os.environ.get("GLYPHFORGE_PORT", "8000"))
    if corpus_dir is None:
        env_dir = os.environ.get("GLYPHFORGE_CORPUS_DIR")
        if env_dir is None:
            click.echo("error: --corpus-dir or GLYPHFORGE_CORPUS_DIR required", err=True)
            sys.exit(1)
        corpus_dir = Path(env_dir)
    config = ServiceConfig(
        catalog_manifest=manifest,
        corpus_dir=corpus_dir,
        log_dir=log_dir,
        schema_path=schema_path,
        static_dir=static_dir,
        port=port,
    )
    try:
        run(config)
    except (CatalogError, OSError) as exc:
        click.echo(f"startup error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
