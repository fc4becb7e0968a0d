/** Wire formats shared with the decomposition service. */

export type Mode = "td" | "pd";
export type Side = "r1" | "r2";

export interface ExplicitInstance {
  input: string[];
  output: string[];
  intermediate: string[];
  pairs: [string, string][];
  mode: Mode;
}

export interface AutomatonJson {
  tracks: [string, string[]][];
  states: number;
  initial: number;
  accepting: number[];
  transitions: [number, string[], number][];
}

export interface AutomaticInstance {
  sigma_i: string[];
  sigma_b: string[];
  sigma_o: string[];
  relation: AutomatonJson;
  mode: Mode;
}

export interface ExplicitHintResponse {
  verdict: "feasible" | "infeasible";
  witness: { r1: [string, string][]; r2: [string, string][] } | null;
  counterexample: { reason: string; value: string | [string, string] } | null;
  max_complement: [string, string][];
  stats: Record<string, unknown>;
}

export interface AutomaticHintResponse {
  verdict: "feasible" | "infeasible";
  witness: { r1: AutomatonJson; r2: AutomatonJson } | null;
  counterexample: string[][] | null;
  stats: Record<string, unknown>;
}

export type HintResponse = ExplicitHintResponse | AutomaticHintResponse;

export interface ErrorResponse {
  error: string;
}
