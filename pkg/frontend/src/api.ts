// Thin client for the analysis service. All statistics displayed by the UI
// come from these endpoints; the client never computes any itself. Requests
// are keyed so that a newer request for the same view cancels the in-flight
// one.

import type { ViewState } from "./state.js";

export interface DatasetInfo {
  algId: string;
  funcId: string;
  DIM: number;
  runs: number;
  budget: number;
  "best reached": number;
}

export interface SessionSummary {
  datasets: DatasetInfo[];
  algorithms: string[];
  functions: string[];
  dimensions: number[];
  parameters: string[];
  direction: string | null;
}

export type StatsRow = Record<string, number | string | null>;

export interface EcdfCurvePayload {
  algId: string;
  t: number[];
  proportion: number[];
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();

  constructor(public base: string = "") {}

  /** GET a JSON endpoint, aborting any in-flight request with the same key. */
  async getJson(key: string, path: string): Promise<unknown> {
    this.controllers.get(key)?.abort();
    const controller = new AbortController();
    this.controllers.set(key, controller);
    const response = await fetch(this.base + path, { signal: controller.signal });
    if (!response.ok) {
      throw new ApiError(response.status, await extractDetail(response));
    }
    return response.json();
  }

  async upload(file: File | Blob, name: string): Promise<{ sessionId: string; summary: SessionSummary }> {
    const body = new FormData();
    body.append("archive", file, name);
    const response = await fetch(this.base + "/api/sessions", { method: "POST", body });
    if (!response.ok) {
      throw new ApiError(response.status, await extractDetail(response));
    }
    return (await response.json()) as { sessionId: string; summary: SessionSummary };
  }

  summary(sessionId: string) {
    return this.getJson("summary", `/api/sessions/${sessionId}`) as Promise<{
      sessionId: string;
      summary: SessionSummary;
    }>;
  }

  sessionPath(state: ViewState, endpoint: string, params: URLSearchParams): string {
    return `/api/sessions/${state.sessionId}/${endpoint}?${params.toString()}`;
  }
}

async function extractDetail(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (body && body.detail !== undefined) return String(body.detail);
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

function rangeParams(state: ViewState, params: URLSearchParams): void {
  const { min, max, step, count, scale } = state.range;
  if (min !== null && max !== null) {
    params.set("min", String(min));
    params.set("max", String(max));
    if (step !== null) params.set("step", String(step));
    else if (count !== null) params.set("count", String(count));
    if (scale !== "auto") params.set("scale", scale);
  }
}

function selectionParams(state: ViewState, params: URLSearchParams): void {
  if (state.func !== null) params.set("func", state.func);
  if (state.dim !== null) params.set("dim", String(state.dim));
  if (state.algs.length) params.set("algs", state.algs.join(","));
}

export function statsQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  selectionParams(state, params);
  params.set("perspective", state.perspective);
  rangeParams(state, params);
  return params;
}

export function overviewQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.func !== null) params.set("func", state.func);
  if (state.dim !== null) params.set("dim", String(state.dim));
  return params;
}

export function ecdfQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.targetMap) {
    if (state.dim !== null) params.set("dim", String(state.dim));
    if (state.algs.length) params.set("algs", state.algs.join(","));
    params.set("target_map", JSON.stringify(state.targetMap));
    return params;
  }
  selectionParams(state, params);
  params.set("perspective", state.perspective);
  rangeParams(state, params);
  return params;
}

export function aucQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.targetMap) {
    if (state.dim !== null) params.set("dim", String(state.dim));
    params.set("target_map", JSON.stringify(state.targetMap));
    return params;
  }
  selectionParams(state, params);
  return params;
}

export function densityQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  selectionParams(state, params);
  params.set("perspective", state.perspective);
  if (state.anchor !== null) params.set("anchor", String(state.anchor));
  return params;
}

export function paramsQuery(state: ViewState): URLSearchParams {
  const params = statsQuery(state);
  if (state.param !== null) params.set("param", state.param);
  return params;
}

export function testQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  selectionParams(state, params);
  params.set("alpha", String(state.alpha));
  return params;
}

export function rankQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.dim !== null) params.set("dim", String(state.dim));
  if (state.algs.length) params.set("algs", state.algs.join(","));
  params.set("perspective", state.perspective);
  params.set("rounds", String(state.rounds));
  params.set("seed", String(state.seed));
  return params;
}

export function radarQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.dim !== null) params.set("dim", String(state.dim));
  if (state.algs.length) params.set("algs", state.algs.join(","));
  return params;
}
