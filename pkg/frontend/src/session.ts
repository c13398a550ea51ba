// Client-side mirrors of the engine's sign and selection values. The UI
// mirrors but never trusts this state: saving re-serializes it and the
// service re-validates; search results always come from the server.

import type { Placement, SignDoc } from "./api.js";

export interface SignMirror {
  signId: string;
  canvasWidth: number;
  canvasHeight: number;
  label: string | null;
  placements: Placement[];
  nextPlacementId: number;
}

export function newSign(canvasWidth = 400, canvasHeight = 400): SignMirror {
  return {
    signId: "",
    canvasWidth,
    canvasHeight,
    label: null,
    placements: [],
    nextPlacementId: 1,
  };
}

export function placeGlyph(sign: SignMirror, code: string): Placement {
  const placement: Placement = {
    placement_id: sign.nextPlacementId,
    code,
    // placed-at-center default; draggable afterwards
    x: Math.floor(sign.canvasWidth / 2),
    y: Math.floor(sign.canvasHeight / 2),
  };
  sign.placements.push(placement);
  sign.nextPlacementId += 1;
  return placement;
}

export function moveGlyph(sign: SignMirror, placementId: number, x: number, y: number): boolean {
  const placement = sign.placements.find((p) => p.placement_id === placementId);
  if (!placement) return false;
  if (x < 0 || x > sign.canvasWidth || y < 0 || y > sign.canvasHeight) return false;
  placement.x = x;
  placement.y = y;
  return true;
}

export function removeGlyph(sign: SignMirror, placementId: number): boolean {
  const before = sign.placements.length;
  sign.placements = sign.placements.filter((p) => p.placement_id !== placementId);
  return sign.placements.length < before;
}

export function componentsOf(placements: Placement[]): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const p of placements) {
    counts[p.code] = (counts[p.code] ?? 0) + 1;
  }
  return counts;
}

export function toDoc(sign: SignMirror): SignDoc {
  const placements = [...sign.placements].sort((a, b) => a.placement_id - b.placement_id);
  return {
    format_version: 1,
    sign_id: sign.signId,
    canvas_width: sign.canvasWidth,
    canvas_height: sign.canvasHeight,
    label: sign.label,
    placements,
    components: componentsOf(placements),
  };
}

export function fromDoc(doc: SignDoc): SignMirror {
  const maxId = doc.placements.reduce((m, p) => Math.max(m, p.placement_id), 0);
  return {
    signId: doc.sign_id,
    canvasWidth: doc.canvas_width,
    canvasHeight: doc.canvas_height,
    label: doc.label,
    placements: doc.placements.map((p) => ({ ...p })),
    nextPlacementId: maxId + 1,
  };
}

// Selection mirror: at most one option per box, replacement on re-select.
export type Selection = Record<string, string>;

export function applyChoice(selection: Selection, box: string, option: string): Selection {
  return { ...selection, [box]: option };
}

export function clearChoice(selection: Selection, box: string): Selection {
  const next = { ...selection };
  delete next[box];
  return next;
}

export function randomSessionId(): string {
  const bytes = new Uint8Array(16);
  crypto.getRandomValues(bytes);
  return Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
}
