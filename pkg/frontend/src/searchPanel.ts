// Faceted search panel: area picker, one-choice-per-box facet boxes, and
// the result grid. The grid is always rendered from the last /search
// response; the panel never filters locally. A newer search supersedes the
// rendering of any older in-flight response.

import type { ApiClient, FacetArea, SearchResponse } from "./api.js";
import { applyChoice, clearChoice, type Selection } from "./session.js";

export interface SearchPanelHooks {
  onResultClick: (code: string) => void;
  onEvent: (kind: "search_select" | "search_clear" | "error_shown", payload: unknown) => void;
}

export class SearchPanel {
  area: FacetArea | null = null;
  selection: Selection = {};
  lastResponse: SearchResponse | null = null;

  private requestSeq = 0;
  private areasEl: HTMLElement;
  private boxesEl: HTMLElement;
  private gridEl: HTMLElement;
  private statusEl: HTMLElement;

  constructor(
    root: HTMLElement,
    private api: ApiClient,
    private allAreas: FacetArea[],
    private hooks: SearchPanelHooks,
  ) {
    this.areasEl = document.createElement("div");
    this.areasEl.className = "area-picker";
    this.boxesEl = document.createElement("div");
    this.boxesEl.className = "facet-boxes";
    this.gridEl = document.createElement("div");
    this.gridEl.className = "result-grid";
    this.statusEl = document.createElement("div");
    this.statusEl.className = "search-status";
    root.append(this.areasEl, this.boxesEl, this.statusEl, this.gridEl);
    this.renderAreas();
  }

  private renderAreas(): void {
    this.areasEl.replaceChildren();
    for (const area of this.allAreas) {
      const btn = document.createElement("button");
      btn.className = "icon-btn area-btn";
      btn.dataset.area = area.name;
      btn.title = area.name;
      btn.setAttribute("aria-label", area.name);
      btn.classList.toggle("selected", this.area?.name === area.name);
      btn.addEventListener("click", () => this.pickArea(area));
      this.areasEl.appendChild(btn);
    }
  }

  pickArea(area: FacetArea): void {
    this.area = area;
    this.selection = {};
    this.renderAreas();
    this.hooks.onEvent("search_select", { area: area.name });
    void this.runSearch();
  }

  pickOption(box: string, option: string): void {
    if (!this.area) return;
    // replacement, never accumulation: re-clicking the selected option
    // re-issues the same selection
    this.selection = applyChoice(this.selection, box, option);
    this.hooks.onEvent("search_select", { area: this.area.name, box, option });
    void this.runSearch();
  }

  clearBox(box: string): void {
    if (!this.area) return;
    this.selection = clearChoice(this.selection, box);
    this.hooks.onEvent("search_clear", { area: this.area.name, box });
    void this.runSearch();
  }

  async runSearch(): Promise<void> {
    if (!this.area) return;
    const seq = ++this.requestSeq;
    try {
      const response = await this.api.search(this.area.name, this.selection);
      if (seq !== this.requestSeq) return; // superseded by a newer search
      this.lastResponse = response;
      this.statusEl.replaceChildren();
      this.renderBoxes(response);
      this.renderGrid(response);
    } catch (err) {
      if (seq !== this.requestSeq) return;
      this.hooks.onEvent("error_shown", { where: "search", message: String(err) });
      this.renderRetry();
    }
  }

  private renderBoxes(response: SearchResponse): void {
    this.boxesEl.replaceChildren();
    if (!this.area) return;
    for (const box of this.area.boxes) {
      const group = document.createElement("fieldset");
      group.className = "facet-box";
      group.dataset.box = box.name;
      const available = new Set(response.available[box.name] ?? []);
      for (const option of box.options) {
        const btn = document.createElement("button");
        btn.className = "icon-btn option-btn";
        btn.dataset.box = box.name;
        btn.dataset.option = option;
        btn.title = `${box.name}: ${option}`;
        btn.setAttribute("aria-label", `${box.name} ${option}`);
        btn.disabled = !available.has(option);
        btn.classList.toggle("selected", this.selection[box.name] === option);
        btn.addEventListener("click", () => this.pickOption(box.name, option));
        group.appendChild(btn);
      }
      this.boxesEl.appendChild(group);
    }
  }

  private renderGrid(response: SearchResponse): void {
    this.gridEl.replaceChildren();
    if (response.results.length === 0) {
      const empty = document.createElement("div");
      empty.className = "empty-state-icon";
      empty.title = "no glyphs match";
      this.gridEl.appendChild(empty);
      return;
    }
    for (const code of response.results) {
      const cell = document.createElement("button");
      cell.className = "result-cell";
      cell.dataset.code = code;
      const img = document.createElement("img");
      img.src = this.api.glyphImageUrl(code);
      img.alt = code;
      cell.appendChild(img);
      cell.addEventListener("click", () => this.hooks.onResultClick(code));
      this.gridEl.appendChild(cell);
    }
  }

  private renderRetry(): void {
    this.statusEl.replaceChildren();
    const retry = document.createElement("button");
    retry.className = "icon-btn retry-btn";
    retry.title = "retry";
    retry.setAttribute("aria-label", "retry");
    retry.addEventListener("click", () => void this.runSearch());
    this.statusEl.appendChild(retry);
  }

  renderedCodes(): string[] {
    return Array.from(this.gridEl.querySelectorAll<HTMLElement>(".result-cell")).map(
      (el) => el.dataset.code ?? "",
    );
  }
}
