// Typed client for the editor service HTTP API. The UI talks to the
// backend exclusively through this module.

export interface FacetBox {
  name: string;
  options: string[];
}

export interface FacetArea {
  name: string;
  role: string;
  boxes: FacetBox[];
}

export interface AreasResponse {
  areas: FacetArea[];
}

export interface SearchResponse {
  results: string[];
  available: Record<string, string[]>;
}

export interface Placement {
  placement_id: number;
  code: string;
  x: number;
  y: number;
}

export interface SignDoc {
  format_version: number;
  sign_id: string;
  canvas_width: number;
  canvas_height: number;
  label: string | null;
  placements: Placement[];
  components: Record<string, number>;
}

export type EventKind =
  | "task_start"
  | "task_end"
  | "search_select"
  | "search_clear"
  | "glyph_placed"
  | "glyph_moved"
  | "glyph_removed"
  | "sign_saved"
  | "error_shown";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function expectJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let code = "HttpError";
    let detail = String(resp.status);
    try {
      const body = (await resp.json()) as { error?: string; detail?: string };
      code = body.error ?? code;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, code, detail);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(
    private base = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  async areas(): Promise<AreasResponse> {
    return expectJson(await this.fetchFn(`${this.base}/areas`));
  }

  // One request per option click, carrying the full selection.
  async search(area: string, choices: Record<string, string>): Promise<SearchResponse> {
    const params = new URLSearchParams({ area, ...choices });
    return expectJson(await this.fetchFn(`${this.base}/search?${params.toString()}`));
  }

  async createSign(doc: SignDoc): Promise<string> {
    const resp = await this.fetchFn(`${this.base}/signs`, {
      method: "POST",
      body: JSON.stringify(doc),
    });
    const body = await expectJson<{ sign_id: string }>(resp);
    return body.sign_id;
  }

  async updateSign(signId: string, doc: SignDoc): Promise<void> {
    await expectJson(
      await this.fetchFn(`${this.base}/signs/${signId}`, {
        method: "PUT",
        body: JSON.stringify(doc),
      }),
    );
  }

  async getSign(signId: string): Promise<SignDoc> {
    return expectJson(await this.fetchFn(`${this.base}/signs/${signId}`));
  }

  async listSigns(): Promise<string[]> {
    const body = await expectJson<{ signs: string[] }>(
      await this.fetchFn(`${this.base}/signs`),
    );
    return body.signs;
  }

  async postEvent(sessionId: string, kind: EventKind, payload: unknown): Promise<void> {
    await expectJson(
      await this.fetchFn(`${this.base}/events`, {
        method: "POST",
        body: JSON.stringify({ session_id: sessionId, kind, payload }),
      }),
    );
  }

  glyphImageUrl(code: string): string {
    return `${this.base}/glyphs/${code}.png`;
  }
}
