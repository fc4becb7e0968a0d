/** Application wiring: one editor, one in-flight request at a time. */

import { submitHint } from "./api.js";
import {
  applyError,
  applyResponse,
  emptyState,
  loadInstance,
  setHintAutomaton,
  setMode,
  setSide,
  toggleHintCell,
  type EditorState,
} from "./state.js";
import { debounce, renderEditor } from "./render.js";
import type { Mode, Side } from "./types.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8571";

let state: EditorState = emptyState();
let inFlight = false;

function mounts() {
  return {
    relation: document.getElementById("relation")!,
    hint: document.getElementById("hint")!,
    complement: document.getElementById("complement")!,
    verdict: document.getElementById("verdict")!,
    error: document.getElementById("error")!,
  };
}

function redraw(): void {
  renderEditor(state, mounts(), {
    onToggle(row, col) {
      state = toggleHintCell(state, row, col);
      redraw();
      scheduleSubmit();
    },
  });
}

async function submit(): Promise<void> {
  if (inFlight) return;
  if (state.kind === "explicit" && !state.explicit) return;
  if (state.kind === "automatic" && (!state.automatic || !state.hintAutomaton)) return;
  inFlight = true;
  try {
    const response = await submitHint(SERVICE_URL, state);
    state = applyResponse(state, response);
  } catch (err) {
    state = applyError(state, err instanceof Error ? err.message : String(err));
  } finally {
    inFlight = false;
    redraw();
  }
}

const scheduleSubmit = debounce(() => void submit(), 250);

function wireControls(): void {
  const fileInput = document.getElementById("instance-file") as HTMLInputElement;
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    state = loadInstance(await file.text());
    redraw();
  });

  const hintInput = document.getElementById("hint-file") as HTMLInputElement;
  hintInput.addEventListener("change", async () => {
    const file = hintInput.files?.[0];
    if (!file) return;
    try {
      state = setHintAutomaton(state, JSON.parse(await file.text()));
    } catch {
      state = applyError(state, "hint file is not valid JSON");
    }
    redraw();
  });

  const sideSelect = document.getElementById("side") as HTMLSelectElement;
  sideSelect.addEventListener("change", () => {
    state = setSide(state, sideSelect.value as Side);
    redraw();
  });

  const modeSelect = document.getElementById("mode") as HTMLSelectElement;
  modeSelect.addEventListener("change", () => {
    state = setMode(state, modeSelect.value as Mode);
    redraw();
  });

  document.getElementById("check")!.addEventListener("click", () => void submit());
}

wireControls();
redraw();
