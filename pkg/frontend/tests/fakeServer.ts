// In-memory implementation of the editor service HTTP contract, used as a
// fetch replacement in tests. Mirrors the documented API surface: /areas,
// /search (linear filter over a small catalog), sign CRUD with canonical
// re-serialization and component validation, and /events.

import type { FacetArea, FetchLike, Placement, SignDoc } from "../src/api.js";

interface GlyphRow {
  code: string;
  area: string;
  attrs: Record<string, string>;
}

export const AREAS: FacetArea[] = [
  {
    name: "hand",
    role: "hand_configuration",
    boxes: [
      { name: "fingers", options: ["1", "2", "3"] },
      { name: "side", options: ["palm", "back"] },
    ],
  },
  {
    name: "movement",
    role: "movement",
    boxes: [{ name: "direction", options: ["up", "down"] }],
  },
];

function buildCatalog(): GlyphRow[] {
  const rows: GlyphRow[] = [];
  for (const family of [1, 2]) {
    for (const base of [1, 2, 3]) {
      for (const fill of [1, 2]) {
        const code = `01-0${family}-00${base}-01-0${fill}-01`;
        rows.push({
          code,
          area: "hand",
          attrs: { fingers: String(base), side: fill === 1 ? "palm" : "back" },
        });
      }
    }
  }
  for (const base of [1, 2, 3, 4]) {
    for (const rotation of [1, 2]) {
      const code = `02-01-00${base}-01-01-0${rotation}`;
      rows.push({
        code,
        area: "movement",
        attrs: { direction: rotation === 1 ? "up" : "down" },
      });
    }
  }
  return rows;
}

export interface LoggedEvent {
  session_id: string;
  kind: string;
  payload: unknown;
}

export class FakeServer {
  catalog = buildCatalog();
  signs = new Map<string, SignDoc>();
  events: LoggedEvent[] = [];
  searchLog: string[] = [];
  failNextSearch = false;
  private nextId = 1;

  fetch: FetchLike = (input, init) => this.route(input, init);

  private json(body: unknown, status = 200): Promise<Response> {
    return Promise.resolve(
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      }),
    );
  }

  private error(status: number, error: string, detail: string): Promise<Response> {
    return this.json({ error, detail }, status);
  }

  private componentsOf(placements: Placement[]): Record<string, number> {
    const counts: Record<string, number> = {};
    for (const p of placements) counts[p.code] = (counts[p.code] ?? 0) + 1;
    return counts;
  }

  private validateSign(doc: SignDoc): string | null {
    const ids = new Set<number>();
    for (const p of doc.placements) {
      if (ids.has(p.placement_id)) return "duplicate placement ids";
      ids.add(p.placement_id);
      if (p.x < 0 || p.x > doc.canvas_width || p.y < 0 || p.y > doc.canvas_height) {
        return "placement out of bounds";
      }
    }
    const derived = this.componentsOf(doc.placements);
    const stored = doc.components ?? {};
    const keys = new Set([...Object.keys(derived), ...Object.keys(stored)]);
    for (const key of keys) {
      if (derived[key] !== stored[key]) return "stored components disagree with placements";
    }
    return null;
  }

  private canonical(doc: SignDoc, signId: string): SignDoc {
    return {
      format_version: doc.format_version,
      sign_id: signId,
      canvas_width: doc.canvas_width,
      canvas_height: doc.canvas_height,
      label: doc.label,
      placements: [...doc.placements].sort((a, b) => a.placement_id - b.placement_id),
      components: this.componentsOf(doc.placements),
    };
  }

  private route(input: string, init?: RequestInit): Promise<Response> {
    const url = new URL(input, "http://test");
    const method = init?.method ?? "GET";
    const path = url.pathname;

    if (path === "/areas") return this.json({ areas: AREAS });

    if (path === "/search") {
      this.searchLog.push(`${url.pathname}${url.search}`);
      if (this.failNextSearch) {
        this.failNextSearch = false;
        return Promise.reject(new TypeError("network failure"));
      }
      const areaName = url.searchParams.get("area");
      const area = AREAS.find((a) => a.name === areaName);
      if (!area) return this.error(400, "UnknownArea", `no area ${areaName}`);
      const choices: Record<string, string> = {};
      for (const [key, value] of url.searchParams) {
        if (key === "area") continue;
        const box = area.boxes.find((b) => b.name === key);
        if (!box) return this.error(400, "UnknownBox", key);
        if (!box.options.includes(value)) return this.error(400, "UnknownOption", value);
        choices[key] = value;
      }
      const results = this.catalog
        .filter(
          (g) =>
            g.area === area.name &&
            Object.entries(choices).every(([box, opt]) => g.attrs[box] === opt),
        )
        .map((g) => g.code)
        .sort();
      const available: Record<string, string[]> = {};
      for (const box of area.boxes) {
        const others = Object.entries(choices).filter(([b]) => b !== box.name);
        available[box.name] = box.options.filter((opt) =>
          this.catalog.some(
            (g) =>
              g.area === area.name &&
              g.attrs[box.name] === opt &&
              others.every(([b, o]) => g.attrs[b] === o),
          ),
        );
      }
      return this.json({ results, available });
    }

    if (path === "/signs" && method === "POST") {
      const doc = JSON.parse(String(init?.body)) as SignDoc;
      const problem = this.validateSign(doc);
      if (problem) return this.error(400, "InvariantViolation", problem);
      if (doc.sign_id && this.signs.has(doc.sign_id)) {
        return this.error(409, "Conflict", doc.sign_id);
      }
      const signId = doc.sign_id || `sign-${this.nextId++}`;
      this.signs.set(signId, this.canonical(doc, signId));
      return this.json({ sign_id: signId }, 201);
    }

    if (path === "/signs" && method === "GET") {
      return this.json({ signs: [...this.signs.keys()] });
    }

    const signMatch = path.match(/^\/signs\/([^/]+)$/);
    if (signMatch) {
      const signId = signMatch[1];
      if (method === "GET") {
        const doc = this.signs.get(signId);
        if (!doc) return this.error(404, "NotFound", signId);
        return this.json(doc);
      }
      if (method === "PUT") {
        if (!this.signs.has(signId)) return this.error(404, "NotFound", signId);
        const doc = JSON.parse(String(init?.body)) as SignDoc;
        const problem = this.validateSign(doc);
        if (problem) return this.error(400, "InvariantViolation", problem);
        this.signs.set(signId, this.canonical(doc, signId));
        return this.json({ sign_id: signId });
      }
      if (method === "DELETE") {
        if (!this.signs.delete(signId)) return this.error(404, "NotFound", signId);
        return this.json({ deleted: signId });
      }
    }

    if (path === "/events" && method === "POST") {
      const body = JSON.parse(String(init?.body)) as LoggedEvent;
      this.events.push(body);
      return this.json({ status: "ok" });
    }

    return this.error(404, "NotFound", path);
  }
}
