// Wires the editor together: icon-driven home bar (new sign, open sign,
// search panel toggle, save), the faceted search panel, and the canvas.
// Text is minimized: controls are icons with hover-activated hint
// animations; the only free-text input is the optional sign label.

import { ApiClient, type EventKind } from "./api.js";
import { SignCanvas } from "./canvas.js";
import { HintController } from "./hints.js";
import { SearchPanel } from "./searchPanel.js";
import { fromDoc, newSign, randomSessionId, toDoc } from "./session.js";

export interface App {
  panel: SearchPanel;
  canvas: SignCanvas;
  sessionId: string;
  save: () => Promise<string>;
  open: (signId: string) => Promise<void>;
  reset: () => void;
}

export async function initApp(
  root: HTMLElement,
  api: ApiClient = new ApiClient(),
): Promise<App> {
  const sessionId = randomSessionId();
  const hints = new HintController();

  const emit = (kind: EventKind, payload: unknown): void => {
    // instrumentation must never break the editor
    void api.postEvent(sessionId, kind, payload).catch(() => undefined);
  };

  const homeBar = document.createElement("nav");
  homeBar.className = "home-bar";
  const panelHost = document.createElement("section");
  panelHost.className = "search-panel";
  const canvasHost = document.createElement("section");
  const labelInput = document.createElement("input");
  labelInput.className = "sign-label";
  labelInput.placeholder = "";
  root.append(homeBar, panelHost, canvasHost, labelInput);

  const { areas } = await api.areas();

  const canvas = new SignCanvas(canvasHost, api, newSign(), {
    onEvent: emit,
    onDragStateChange: (active) => hints.setDragActive(active),
  });

  const panel = new SearchPanel(panelHost, api, areas, {
    onResultClick: (code) => canvas.placeFromSearch(code),
    onEvent: emit,
  });

  const app: App = {
    panel,
    canvas,
    sessionId,
    async save() {
      const sign = canvas.sign;
      sign.label = labelInput.value || null;
      const doc = toDoc(sign);
      try {
        if (sign.signId) {
          await api.updateSign(sign.signId, doc);
        } else {
          sign.signId = await api.createSign(doc);
        }
      } catch (err) {
        emit("error_shown", { where: "save", message: String(err) });
        throw err;
      }
      emit("sign_saved", { sign_id: sign.signId });
      return sign.signId;
    },
    async open(signId: string) {
      const doc = await api.getSign(signId);
      canvas.setSign(fromDoc(doc));
      labelInput.value = doc.label ?? "";
    },
    reset() {
      canvas.setSign(newSign());
      labelInput.value = "";
    },
  };

  const makeIcon = (name: string, onClick: () => void): HTMLButtonElement => {
    const btn = document.createElement("button");
    btn.className = `icon-btn home-btn ${name}-btn`;
    btn.title = name;
    btn.setAttribute("aria-label", name);
    btn.addEventListener("click", onClick);
    hints.attach(btn);
    homeBar.appendChild(btn);
    return btn;
  };

  makeIcon("new-sign", () => app.reset());
  makeIcon("open-sign", () => {
    void api.listSigns().then((ids) => {
      if (ids.length > 0) void app.open(ids[ids.length - 1]);
    });
  });
  makeIcon("search-toggle", () => panelHost.classList.toggle("hidden"));
  makeIcon("save", () => void app.save().catch(() => undefined));

  emit("task_start", { session_id: sessionId });
  return app;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void initApp(document.getElementById("app") as HTMLElement);
}
