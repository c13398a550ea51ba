// Composition canvas: click a search result to place the glyph at canvas
// center, drag to reposition (committed on mouse release, snapping back on
// out-of-bounds drops), click the delete affordance to remove. Every edit
// emits an instrumentation event.

import type { ApiClient } from "./api.js";
import { moveGlyph, placeGlyph, removeGlyph, type SignMirror } from "./session.js";

export interface CanvasHooks {
  onEvent: (kind: "glyph_placed" | "glyph_moved" | "glyph_removed", payload: unknown) => void;
  onDragStateChange: (active: boolean) => void;
}

interface DragState {
  placementId: number;
  el: HTMLElement;
  startX: number;
  startY: number;
  lastValidX: number;
  lastValidY: number;
}

export class SignCanvas {
  private drag: DragState | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    public sign: SignMirror,
    private hooks: CanvasHooks,
  ) {
    root.classList.add("sign-canvas");
    root.style.width = `${sign.canvasWidth}px`;
    root.style.height = `${sign.canvasHeight}px`;
    root.addEventListener("mousemove", (e) => this.onMouseMove(e));
    root.addEventListener("mouseup", (e) => this.onMouseUp(e));
    this.render();
  }

  setSign(sign: SignMirror): void {
    this.sign = sign;
    this.render();
  }

  placeFromSearch(code: string): void {
    const placement = placeGlyph(this.sign, code);
    this.hooks.onEvent("glyph_placed", {
      placement_id: placement.placement_id,
      code,
      x: placement.x,
      y: placement.y,
    });
    this.render();
  }

  deletePlacement(placementId: number): void {
    if (removeGlyph(this.sign, placementId)) {
      this.hooks.onEvent("glyph_removed", { placement_id: placementId });
      this.render();
    }
  }

  render(): void {
    this.root.replaceChildren();
    for (const p of this.sign.placements) {
      const el = document.createElement("div");
      el.className = "placed-glyph";
      el.dataset.placementId = String(p.placement_id);
      el.dataset.code = p.code;
      el.style.left = `${p.x}px`;
      el.style.top = `${p.y}px`;
      const img = document.createElement("img");
      img.src = this.api.glyphImageUrl(p.code);
      img.alt = p.code;
      img.draggable = false;
      el.appendChild(img);
      const del = document.createElement("button");
      del.className = "icon-btn delete-btn";
      del.title = "delete";
      del.setAttribute("aria-label", "delete");
      del.addEventListener("click", (e) => {
        e.stopPropagation();
        this.deletePlacement(p.placement_id);
      });
      el.appendChild(del);
      el.addEventListener("mousedown", (e) => this.onMouseDown(e, p.placement_id, el));
      this.root.appendChild(el);
    }
  }

  private onMouseDown(e: MouseEvent, placementId: number, el: HTMLElement): void {
    const placement = this.sign.placements.find((p) => p.placement_id === placementId);
    if (!placement) return;
    this.drag = {
      placementId,
      el,
      startX: e.clientX,
      startY: e.clientY,
      lastValidX: placement.x,
      lastValidY: placement.y,
    };
    this.hooks.onDragStateChange(true);
  }

  private dragTarget(e: MouseEvent): { x: number; y: number } | null {
    if (!this.drag) return null;
    const placement = this.sign.placements.find(
      (p) => p.placement_id === this.drag!.placementId,
    );
    if (!placement) return null;
    return {
      x: this.drag.lastValidX + (e.clientX - this.drag.startX),
      y: this.drag.lastValidY + (e.clientY - this.drag.startY),
    };
  }

  private onMouseMove(e: MouseEvent): void {
    const target = this.dragTarget(e);
    if (!this.drag || !target) return;
    // track continuously; commit happens on release
    this.drag.el.style.left = `${target.x}px`;
    this.drag.el.style.top = `${target.y}px`;
  }

  private onMouseUp(e: MouseEvent): void {
    const drag = this.drag;
    const target = this.dragTarget(e);
    if (!drag) return;
    this.drag = null;
    this.hooks.onDragStateChange(false);
    if (!target) return;
    const moved = moveGlyph(this.sign, drag.placementId, target.x, target.y);
    if (moved) {
      this.hooks.onEvent("glyph_moved", {
        placement_id: drag.placementId,
        x: target.x,
        y: target.y,
      });
    }
    // out-of-bounds drop: snap back to last valid position
    this.render();
  }
}
