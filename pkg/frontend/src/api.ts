/**
 * HTTP client for the decomposition service.
 *
 * The UI computes nothing itself: every verdict comes from a round trip
 * through these calls.
 */

import type { EditorState } from "./state.js";
import type { ErrorResponse, HintResponse } from "./types.js";

export interface HintRequest {
  endpoint: "/api/explicit/hint" | "/api/automatic/hint";
  body: object;
}

/** Build the request the current editor state stands for. */
export function buildHintRequest(state: EditorState): HintRequest {
  if (state.kind === "explicit") {
    if (!state.explicit) throw new Error("no instance loaded");
    return {
      endpoint: "/api/explicit/hint",
      body: {
        instance: state.explicit,
        hint: state.hintCells,
        side: state.side,
      },
    };
  }
  if (!state.automatic) throw new Error("no instance loaded");
  if (!state.hintAutomaton) throw new Error("no hint automaton uploaded");
  return {
    endpoint: "/api/automatic/hint",
    body: {
      instance: state.automatic,
      hint: state.hintAutomaton,
      side: state.side,
    },
  };
}

export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export async function submitHint(
  baseUrl: string,
  state: EditorState,
  fetchFn: typeof fetch = fetch,
): Promise<HintResponse> {
  const request = buildHintRequest(state);
  const response = await fetchFn(baseUrl + request.endpoint, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request.body),
  });
  const payload = (await response.json()) as HintResponse | ErrorResponse;
  if (!response.ok || "error" in payload) {
    const message = "error" in payload ? payload.error : `HTTP ${response.status}`;
    throw new ServiceError(message, response.status);
  }
  return payload;
}

export async function health(
  baseUrl: string,
  fetchFn: typeof fetch = fetch,
): Promise<boolean> {
  try {
    const response = await fetchFn(baseUrl + "/api/health");
    const body = (await response.json()) as { ok?: boolean };
    return response.ok && body.ok === true;
  } catch {
    return false;
  }
}
