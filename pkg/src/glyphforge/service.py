"""HTTP service binding catalog, search, sign CRUD, statistics, and event logging.

Catalog, schema, and index are built once at startup and shared immutably
across request handlers. Sign writes are atomic (temp file then rename)
and serialized behind a store lock; the event log is append-only with one
append channel per file.
"""

from __future__ import annotations

import json
import os
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles

from glyphforge import corpus as corpus_stats
from glyphforge import facets, signs as sign_model
from glyphforge.catalog import load_catalog
from glyphforge.classification import ClassificationSchema, audit_schema, load_schema
from glyphforge.codes import MalformedCode, ZeroField, format_glyph_code, parse_glyph_code
from glyphforge.corpus import EmptyPattern, UnknownCode
from glyphforge.signs import InvariantViolation, ParseError

EVENT_KINDS = frozenset(
    {
        "task_start",
        "task_end",
        "search_select",
        "search_clear",
        "glyph_placed",
        "glyph_moved",
        "glyph_removed",
        "sign_saved",
        "error_shown",
    }
)


@dataclass
class ServiceConfig:
    catalog_manifest: Path
    corpus_dir: Path
    log_dir: Path
    schema_path: Path | None = None
    static_dir: Path | None = None
    port: int = 8000


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def canonical_json(payload) -> bytes:
    """The one JSON encoding used for computed payloads, so identical states
    produce identical bytes."""
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def error_response(status_code: int, error: str, detail: str) -> Response:
    return json_response({"error": error, "detail": detail}, status_code=status_code)


class EventLog:
    """Append-only JSON-lines log; each append is atomic and durable."""

    def __init__(self, log_dir: Path) -> None:
        log_dir.mkdir(parents=True, exist_ok=True)
        self.path = log_dir / "events.jsonl"
        self._lock = threading.Lock()

    def append(self, session_id: str, kind: str, payload) -> dict:
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        entry = {
            "session_id": session_id,
            "at": _utc_now(),
            "kind": kind,
            "payload": payload,
        }
        line = json.dumps(entry, ensure_ascii=False) + "\n"
        with self._lock:
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(line)
                fh.flush()
                os.fsync(fh.fileno())
        return entry


class SignStore:
    """One file per sign under corpus_dir; the directory listing is the index.

    Timestamps live in a sidecar meta file so the sign files themselves stay
    directly usable by the stats CLI.
    """

    def __init__(self, corpus_dir: Path) -> None:
        corpus_dir.mkdir(parents=True, exist_ok=True)
        self.dir = corpus_dir
        self._lock = threading.Lock()

    def _sign_path(self, sign_id: str) -> Path:
        return self.dir / f"{sign_id}.sign.json"

    def _meta_path(self, sign_id: str) -> Path:
        return self.dir / f"{sign_id}.meta.json"

    def _atomic_write(self, path: Path, text: str) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        with tmp.open("w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        tmp.rename(path)

    def exists(self, sign_id: str) -> bool:
        return self._sign_path(sign_id).is_file()

    def create(self, sign: sign_model.Sign) -> str:
        with self._lock:
            sign_id = sign.sign_id or secrets.token_hex(16)
            if self.exists(sign_id):
                raise FileExistsError(sign_id)
            stamped = sign_model.Sign(
                canvas_width=sign.canvas_width,
                canvas_height=sign.canvas_height,
                placements=sign.placements,
                sign_id=sign_id,
                label=sign.label,
                format_version=sign.format_version,
                next_placement_id=sign.next_placement_id,
            )
            now = _utc_now()
            self._atomic_write(self._sign_path(sign_id), sign_model.serialize(stamped))
            self._atomic_write(
                self._meta_path(sign_id),
                json.dumps({"created_at": now, "modified_at": now}) + "\n",
            )
            return sign_id

    def update(self, sign_id: str, sign: sign_model.Sign) -> None:
        with self._lock:
            if not self.exists(sign_id):
                raise FileNotFoundError(sign_id)
            stamped = sign_model.Sign(
                canvas_width=sign.canvas_width,
                canvas_height=sign.canvas_height,
                placements=sign.placements,
                sign_id=sign_id,
                label=sign.label,
                format_version=sign.format_version,
                next_placement_id=sign.next_placement_id,
            )
            meta = self._read_meta(sign_id)
            meta["modified_at"] = _utc_now()
            self._atomic_write(self._sign_path(sign_id), sign_model.serialize(stamped))
            self._atomic_write(self._meta_path(sign_id), json.dumps(meta) + "\n")

    def _read_meta(self, sign_id: str) -> dict:
        path = self._meta_path(sign_id)
        if path.is_file():
            return json.loads(path.read_text(encoding="utf-8"))
        mtime = datetime.fromtimestamp(
            self._sign_path(sign_id).stat().st_mtime, tz=timezone.utc
        ).isoformat()
        return {"created_at": mtime, "modified_at": mtime}

    def read_text(self, sign_id: str) -> str:
        path = self._sign_path(sign_id)
        if not path.is_file():
            raise FileNotFoundError(sign_id)
        return path.read_text(encoding="utf-8")

    def delete(self, sign_id: str) -> None:
        with self._lock:
            path = self._sign_path(sign_id)
            if not path.is_file():
                raise FileNotFoundError(sign_id)
            path.unlink()
            self._meta_path(sign_id).unlink(missing_ok=True)

    def list_ids(self) -> list[str]:
        entries = []
        for path in self.dir.glob("*.sign.json"):
            sign_id = path.name[: -len(".sign.json")]
            entries.append((self._read_meta(sign_id)["created_at"], sign_id))
        return [sign_id for _, sign_id in sorted(entries)]


def search_payload(index: facets.FacetIndex, state: facets.SelectionState) -> dict:
    """The search endpoint's body; also used in-process for parity checks."""
    results = [format_glyph_code(c) for c in facets.query(index, state)]
    avail = facets.available(index, state)
    area = index.schema.area(state.area)
    return {
        "results": results,
        "available": {
            box.name: sorted(avail.get(box.name, set())) for box in area.boxes
        },
    }


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the application; raises on fatal load errors (empty catalog, bad paths)."""
    catalog, load_report = load_catalog(config.catalog_manifest)
    index = facets.build_index(catalog)
    schema: ClassificationSchema | None = None
    if config.schema_path is not None:
        schema = load_schema(config.schema_path)
    store = SignStore(Path(config.corpus_dir))
    events = EventLog(Path(config.log_dir))
    # fail at startup, not first write
    probe = Path(config.corpus_dir) / ".write-probe"
    probe.write_text("")
    probe.unlink()

    app = FastAPI(title="glyphforge", openapi_url=None)
    app.state.catalog = catalog
    app.state.index = index
    app.state.load_report = load_report

    @app.get("/health")
    def health() -> Response:
        return json_response({"status": "ok", "glyphs": len(catalog.glyphs)})

    @app.get("/areas")
    def areas() -> Response:
        return json_response(catalog.facet_schema.to_dict())

    @app.get("/search")
    def search(request: Request) -> Response:
        params = dict(request.query_params)
        area_name = params.pop("area", None)
        if area_name is None:
            return error_response(400, "UnknownArea", "missing area parameter")
        try:
            index.schema.area(area_name)
        except facets.UnknownArea:
            return error_response(400, "UnknownArea", f"no area {area_name!r}")
        state = facets.SelectionState(area=area_name)
        for box, option in params.items():
            try:
                state = facets.select(index.schema, state, box, option)
            except facets.UnknownBox:
                return error_response(400, "UnknownBox", f"no box {box!r} in {area_name!r}")
            except facets.UnknownOption:
                return error_response(
                    400, "UnknownOption", f"no option {option!r} in box {box!r}"
                )
        return json_response(search_payload(index, state))

    @app.get("/glyphs/{code_text}.png")
    def glyph_image(code_text: str) -> Response:
        try:
            code = parse_glyph_code(code_text)
        except (MalformedCode, ZeroField) as exc:
            return error_response(400, type(exc).__name__, str(exc))
        glyph = catalog.glyphs.get(code)
        if glyph is None:
            return error_response(404, "NotFound", code_text)
        image_path = Path(config.catalog_manifest).parent / glyph.image_ref
        if not image_path.is_file():
            return error_response(404, "NotFound", f"no image for {code_text}")
        return FileResponse(
            image_path,
            media_type="image/png",
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.get("/glyphs/{code_text}")
    def glyph_record(code_text: str) -> Response:
        try:
            code = parse_glyph_code(code_text)
        except (MalformedCode, ZeroField) as exc:
            return error_response(400, type(exc).__name__, str(exc))
        glyph = catalog.glyphs.get(code)
        if glyph is None:
            return error_response(404, "NotFound", code_text)
        return json_response(
            {
                "code": format_glyph_code(code),
                "labels": list(glyph.labels),
                "image_ref": glyph.image_ref,
                "width_px": glyph.width_px,
                "height_px": glyph.height_px,
                "facet_attrs": glyph.facet_attrs,
                "role": catalog.role_map[code.category].value,
            }
        )

    async def _parse_sign_body(request: Request) -> sign_model.Sign:
        body = await request.body()
        return sign_model.parse(body.decode("utf-8"))

    @app.post("/signs")
    async def create_sign(request: Request) -> Response:
        try:
            sign = await _parse_sign_body(request)
        except (ParseError, InvariantViolation) as exc:
            return error_response(400, type(exc).__name__, str(exc))
        try:
            sign_id = store.create(sign)
        except FileExistsError:
            return error_response(409, "Conflict", f"sign {sign.sign_id!r} exists")
        return json_response({"sign_id": sign_id}, status_code=201)

    @app.get("/signs")
    def list_signs() -> Response:
        return json_response({"signs": store.list_ids()})

    @app.get("/signs/search")
    def signs_search(contains: str = "") -> Response:
        try:
            pattern = {
                parse_glyph_code(t) for t in contains.split(",") if t
            }
        except (MalformedCode, ZeroField) as exc:
            return error_response(400, type(exc).__name__, str(exc))
        corpus = corpus_stats.load_corpus(store.dir)
        try:
            hits = corpus_stats.find_signs_with(corpus, pattern)
        except EmptyPattern as exc:
            return error_response(400, "EmptyPattern", str(exc))
        return json_response({"signs": hits})

    @app.get("/signs/{sign_id}")
    def get_sign(sign_id: str) -> Response:
        try:
            text = store.read_text(sign_id)
        except FileNotFoundError:
            return error_response(404, "NotFound", sign_id)
        try:
            sign_model.parse(text)  # corruption detector: recompute components
        except (ParseError, InvariantViolation) as exc:
            return error_response(500, "CorruptRecord", f"{sign_id}: {exc}")
        return Response(content=text, media_type="application/json")

    @app.put("/signs/{sign_id}")
    async def put_sign(sign_id: str, request: Request) -> Response:
        try:
            sign = await _parse_sign_body(request)
        except (ParseError, InvariantViolation) as exc:
            return error_response(400, type(exc).__name__, str(exc))
        try:
            store.update(sign_id, sign)
        except FileNotFoundError:
            return error_response(404, "NotFound", sign_id)
        return json_response({"sign_id": sign_id})

    @app.delete("/signs/{sign_id}")
    def delete_sign(sign_id: str) -> Response:
        try:
            store.delete(sign_id)
        except FileNotFoundError:
            return error_response(404, "NotFound", sign_id)
        return json_response({"deleted": sign_id})

    @app.get("/stats/frequency")
    def stats_frequency() -> Response:
        table = corpus_stats.frequency(corpus_stats.load_corpus(store.dir))
        return json_response(
            {
                "by_code": {
                    format_glyph_code(c): n for c, n in sorted(table.by_code.items())
                },
                "by_code_signwise": {
                    format_glyph_code(c): n
                    for c, n in sorted(table.by_code_signwise.items())
                },
            }
        )

    @app.get("/stats/cooccurrence")
    def stats_cooccurrence() -> Response:
        table = corpus_stats.cooccurrence(corpus_stats.load_corpus(store.dir))
        return json_response(
            {
                "pairs": [
                    {
                        "a": format_glyph_code(a),
                        "b": format_glyph_code(b),
                        "count": n,
                    }
                    for (a, b), n in sorted(table.pairs.items())
                ]
            }
        )

    @app.get("/stats/categories")
    def stats_categories() -> Response:
        corpus = corpus_stats.load_corpus(store.dir)
        try:
            dist = corpus_stats.category_distribution(corpus, catalog)
        except UnknownCode as exc:
            return error_response(400, "UnknownCode", str(exc))
        return json_response(
            {role.value: n for role, n in sorted(dist.items(), key=lambda kv: kv[0].value)}
        )

    @app.post("/events")
    async def post_event(request: Request) -> Response:
        try:
            body = json.loads(await request.body())
            session_id = body["session_id"]
            kind = body["kind"]
            payload = body.get("payload")
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            return error_response(400, "BadEvent", str(exc))
        try:
            events.append(session_id, kind, payload)
        except ValueError as exc:
            return error_response(400, "UnknownKind", str(exc))
        return json_response({"status": "ok"})

    if schema is not None:

        @app.get("/audit")
        def audit() -> Response:
            return json_response(audit_schema(schema, catalog).to_dict())

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def run(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=config.port)
