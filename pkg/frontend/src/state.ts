/**
 * Editor state and its pure transitions.
 *
 * The state machine enforces one invariant above all: a verdict on screen
 * always belongs to the hint on screen.  Every edit that could change the
 * answer marks the previous verdict stale; only a fresh server response
 * clears the flag.  The UI never computes verdicts locally.
 */

import type {
  AutomaticInstance,
  ExplicitInstance,
  HintResponse,
  Mode,
  Side,
} from "./types.js";

export interface VerdictView {
  verdict: "feasible" | "infeasible";
  /** Cells of the maximal complement grid, as [row, column] symbol pairs. */
  complementCells: [string, string][];
  /** Highlighted counterexample: grid cells for explicit instances. */
  counterexampleCells: [string, string][];
  /** Counterexample word (one letter per row) for automatic instances. */
  counterexampleWord: string[][] | null;
  reason: string | null;
}

export interface EditorState {
  kind: "explicit" | "automatic";
  explicit: ExplicitInstance | null;
  automatic: AutomaticInstance | null;
  side: Side;
  mode: Mode;
  /** Toggled hint cells (explicit editing only), insertion-ordered. */
  hintCells: [string, string][];
  /** Uploaded hint automaton (automatic instances only). */
  hintAutomaton: object | null;
  verdict: VerdictView | null;
  /** True when the hint changed after the verdict arrived. */
  stale: boolean;
  error: string | null;
}

export function emptyState(): EditorState {
  return {
    kind: "explicit",
    explicit: null,
    automatic: null,
    side: "r1",
    mode: "td",
    hintCells: [],
    hintAutomaton: null,
    verdict: null,
    stale: false,
    error: null,
  };
}

function isStringArray(v: unknown): v is string[] {
  return Array.isArray(v) && v.every((s) => typeof s === "string");
}

function isPairArray(v: unknown): v is [string, string][] {
  return (
    Array.isArray(v) &&
    v.every(
      (p) =>
        Array.isArray(p) &&
        p.length === 2 &&
        typeof p[0] === "string" &&
        typeof p[1] === "string",
    )
  );
}

/** Parse an uploaded instance file into a fresh editor state. */
export function loadInstance(text: string): EditorState {
  const state = emptyState();
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return { ...state, error: "not valid JSON" };
  }
  if (typeof data !== "object" || data === null) {
    return { ...state, error: "instance file must hold a JSON object" };
  }
  const obj = data as Record<string, unknown>;
  if (obj.mode !== "td" && obj.mode !== "pd") {
    return { ...state, error: 'instance needs "mode": "td" or "pd"' };
  }
  if ("pairs" in obj) {
    if (
      !isStringArray(obj.input) ||
      !isStringArray(obj.output) ||
      !isStringArray(obj.intermediate) ||
      !isPairArray(obj.pairs)
    ) {
      return { ...state, error: "malformed explicit instance" };
    }
    return {
      ...state,
      kind: "explicit",
      mode: obj.mode,
      explicit: {
        input: obj.input,
        output: obj.output,
        intermediate: obj.intermediate,
        pairs: obj.pairs,
        mode: obj.mode,
      },
    };
  }
  if ("relation" in obj) {
    if (
      !isStringArray(obj.sigma_i) ||
      !isStringArray(obj.sigma_b) ||
      !isStringArray(obj.sigma_o)
    ) {
      return { ...state, error: "malformed automatic instance" };
    }
    return {
      ...state,
      kind: "automatic",
      mode: obj.mode,
      automatic: obj as unknown as AutomaticInstance,
    };
  }
  return { ...state, error: "unrecognized instance format" };
}

/** Grid dimensions for the hint editor under the current side. */
export function hintGridAxes(state: EditorState): [string[], string[]] {
  const inst = state.explicit;
  if (!inst) return [[], []];
  return state.side === "r1"
    ? [inst.input, inst.intermediate]
    : [inst.intermediate, inst.output];
}

export function hasHintCell(state: EditorState, row: string, col: string): boolean {
  return state.hintCells.some(([r, c]) => r === row && c === col);
}

/** Flip one hint cell; any verdict on display becomes stale. */
export function toggleHintCell(
  state: EditorState,
  row: string,
  col: string,
): EditorState {
  const [rows, cols] = hintGridAxes(state);
  if (!rows.includes(row) || !cols.includes(col)) {
    return { ...state, error: `cell (${row}, ${col}) is outside the grid` };
  }
  const cells = hasHintCell(state, row, col)
    ? state.hintCells.filter(([r, c]) => !(r === row && c === col))
    : [...state.hintCells, [row, col] as [string, string]];
  return { ...state, hintCells: cells, stale: state.verdict !== null, error: null };
}

/** Switching sides invalidates the hint outright: the grid changes shape. */
export function setSide(state: EditorState, side: Side): EditorState {
  if (side === state.side) return state;
  return { ...state, side, hintCells: [], verdict: null, stale: false, error: null };
}

export function setMode(state: EditorState, mode: Mode): EditorState {
  if (mode === state.mode) return state;
  const explicit = state.explicit ? { ...state.explicit, mode } : null;
  const automatic = state.automatic ? { ...state.automatic, mode } : null;
  return {
    ...state,
    mode,
    explicit,
    automatic,
    stale: state.verdict !== null,
    error: null,
  };
}

export function setHintAutomaton(state: EditorState, hint: object): EditorState {
  return { ...state, hintAutomaton: hint, stale: state.verdict !== null, error: null };
}

/** Interpret a server response as what the verdict panel displays. */
export function verdictFromResponse(response: HintResponse): VerdictView {
  const complement: [string, string][] = [];
  const cells: [string, string][] = [];
  let word: string[][] | null = null;
  let reason: string | null = null;
  if ("max_complement" in response) {
    complement.push(...response.max_complement);
    if (response.counterexample) {
      reason = response.counterexample.reason;
      const value = response.counterexample.value;
      if (Array.isArray(value)) cells.push(value as [string, string]);
    }
  } else if (response.counterexample) {
    word = response.counterexample;
  }
  return {
    verdict: response.verdict,
    complementCells: complement,
    counterexampleCells: cells,
    counterexampleWord: word,
    reason,
  };
}

/** A fresh response replaces the verdict and clears staleness. */
export function applyResponse(state: EditorState, response: HintResponse): EditorState {
  return { ...state, verdict: verdictFromResponse(response), stale: false, error: null };
}

/** Server or network failures surface inline and keep the grid intact. */
export function applyError(state: EditorState, message: string): EditorState {
  return { ...state, error: message };
}
