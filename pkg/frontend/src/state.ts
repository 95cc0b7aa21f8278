// View state and its URL-fragment serialization. Every interactive control
// maps to one field here; the fragment keeps only non-default values so
// views stay shareable and reloadable.

export type TabName =
  | "overview"
  | "stats"
  | "ert-curve"
  | "density"
  | "ecdf"
  | "params"
  | "test"
  | "rank"
  | "radar";

export const TABS: TabName[] = [
  "overview",
  "stats",
  "ert-curve",
  "density",
  "ecdf",
  "params",
  "test",
  "rank",
  "radar",
];

export type ScaleName = "linear" | "log" | "auto";

export interface RangeState {
  min: number | null;
  max: number | null;
  step: number | null;
  count: number | null;
  scale: ScaleName;
}

export interface ViewState {
  sessionId: string | null;
  tab: TabName;
  perspective: "target" | "budget";
  func: string | null;
  dim: number | null;
  algs: string[]; // empty = all algorithms
  range: RangeState;
  logX: boolean;
  logY: boolean;
  showMean: boolean;
  showMedian: boolean;
  hidden: string[]; // curves switched off via the legend
  anchor: number | null; // density tab: target or budget to inspect
  param: string | null;
  targetMap: Record<string, number[]> | null; // multi-function ECDF targets
  alpha: number;
  rounds: number;
  seed: number;
}

export function defaultState(): ViewState {
  return {
    sessionId: null,
    tab: "overview",
    perspective: "target",
    func: null,
    dim: null,
    algs: [],
    range: { min: null, max: null, step: null, count: null, scale: "auto" },
    logX: false,
    logY: false,
    showMean: true,
    showMedian: false,
    hidden: [],
    anchor: null,
    param: null,
    targetMap: null,
    alpha: 0.01,
    rounds: 25,
    seed: 0,
  };
}

/** Client-side range validation; returns an error message or null. A range
 * with only one bound set is legal but not sent to the service. */
export function validateRange(range: RangeState): string | null {
  const { min, max, step, count } = range;
  if (min !== null && max !== null && !(min < max)) return "min must be below max";
  if (step !== null && !(step > 0)) return "step must be positive";
  if (count !== null && !(count >= 2)) return "count must be at least 2";
  if (step !== null && count !== null) return "set either step or count, not both";
  if (range.scale === "log" && min !== null && min <= 0) return "log scale needs min > 0";
  return null;
}

const NUMERIC_KEYS = ["min", "max", "step", "count"] as const;

export function encodeState(state: ViewState): string {
  const d = defaultState();
  const params = new URLSearchParams();
  if (state.sessionId) params.set("session", state.sessionId);
  if (state.tab !== d.tab) params.set("tab", state.tab);
  if (state.perspective !== d.perspective) params.set("persp", state.perspective);
  if (state.func !== null) params.set("func", state.func);
  if (state.dim !== null) params.set("dim", String(state.dim));
  if (state.algs.length) params.set("algs", state.algs.join(","));
  for (const key of NUMERIC_KEYS) {
    const value = state.range[key];
    if (value !== null) params.set(key, String(value));
  }
  if (state.range.scale !== "auto") params.set("scale", state.range.scale);
  if (state.logX) params.set("logx", "1");
  if (state.logY) params.set("logy", "1");
  if (!state.showMean) params.set("mean", "0");
  if (state.showMedian) params.set("median", "1");
  if (state.hidden.length) params.set("hidden", state.hidden.join(","));
  if (state.anchor !== null) params.set("anchor", String(state.anchor));
  if (state.param !== null) params.set("param", state.param);
  if (state.targetMap) params.set("tmap", JSON.stringify(state.targetMap));
  if (state.alpha !== d.alpha) params.set("alpha", String(state.alpha));
  if (state.rounds !== d.rounds) params.set("rounds", String(state.rounds));
  if (state.seed !== d.seed) params.set("seed", String(state.seed));
  return params.toString();
}

export function decodeState(fragment: string): ViewState {
  const state = defaultState();
  const params = new URLSearchParams(fragment.replace(/^#/, ""));
  const get = (key: string) => params.get(key);

  state.sessionId = get("session");
  const tab = get("tab");
  if (tab && (TABS as string[]).includes(tab)) state.tab = tab as TabName;
  if (get("persp") === "budget") state.perspective = "budget";
  state.func = get("func");
  state.dim = numberOrNull(get("dim"));
  const algs = get("algs");
  if (algs) state.algs = algs.split(",").filter(Boolean);
  for (const key of NUMERIC_KEYS) {
    state.range[key] = numberOrNull(get(key));
  }
  const scale = get("scale");
  if (scale === "linear" || scale === "log") state.range.scale = scale;
  state.logX = get("logx") === "1";
  state.logY = get("logy") === "1";
  if (get("mean") === "0") state.showMean = false;
  if (get("median") === "1") state.showMedian = true;
  const hidden = get("hidden");
  if (hidden) state.hidden = hidden.split(",").filter(Boolean);
  state.anchor = numberOrNull(get("anchor"));
  state.param = get("param");
  const tmap = get("tmap");
  if (tmap) {
    try {
      state.targetMap = JSON.parse(tmap);
    } catch {
      state.targetMap = null;
    }
  }
  state.alpha = numberOr(get("alpha"), state.alpha);
  state.rounds = numberOr(get("rounds"), state.rounds);
  state.seed = numberOr(get("seed"), state.seed);
  return state;
}

function numberOrNull(raw: string | null): number | null {
  if (raw === null || raw === "") return null;
  const value = Number(raw);
  return Number.isFinite(value) ? value : null;
}

function numberOr(raw: string | null, fallback: number): number {
  const value = numberOrNull(raw);
  return value === null ? fallback : value;
}
