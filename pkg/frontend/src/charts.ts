// Framework-free SVG renderers: multi-series line/step charts with a
// clickable legend, a histogram-plus-density panel, a decision matrix and a
// radar chart. Charts only draw numbers handed to them.

import { fmt } from "./format.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 360;
const MARGIN = { top: 16, right: 16, bottom: 42, left: 64 };

export const PALETTE = [
  "#316bbe",
  "#b4418e",
  "#2f9e73",
  "#d1642f",
  "#7b52ab",
  "#946800",
  "#c13b3b",
  "#3a8ba6",
];

export interface Series {
  label: string;
  xs: number[];
  ys: (number | null)[];
  dashed?: boolean;
  color?: string;
}

export interface CurveChartOptions {
  logX?: boolean;
  logY?: boolean;
  step?: boolean; // step-after interpolation (ECDF style)
  xLabel?: string;
  yLabel?: string;
  hidden?: Set<string>;
  onLegendToggle?: (label: string) => void;
}

function el<K extends keyof SVGElementTagNameMap>(
  name: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

class Scale {
  constructor(
    private lo: number,
    private hi: number,
    private outLo: number,
    private outHi: number,
    private log: boolean,
  ) {
    if (log) {
      this.lo = Math.log10(Math.max(lo, 1e-300));
      this.hi = Math.log10(Math.max(hi, 1e-300));
    }
    if (this.hi === this.lo) this.hi = this.lo + 1;
  }

  at(value: number): number {
    const v = this.log ? Math.log10(Math.max(value, 1e-300)) : value;
    return this.outLo + ((v - this.lo) / (this.hi - this.lo)) * (this.outHi - this.outLo);
  }

  ticks(n = 5): number[] {
    const out: number[] = [];
    for (let i = 0; i <= n; i++) {
      const v = this.lo + ((this.hi - this.lo) * i) / n;
      out.push(this.log ? Math.pow(10, v) : v);
    }
    return out;
  }
}

function seriesExtent(series: Series[], hidden: Set<string>, pickY: boolean, log: boolean) {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    if (hidden.has(s.label)) continue;
    const values = pickY ? s.ys : s.xs;
    for (const raw of values) {
      if (raw === null || typeof raw !== "number" || !Number.isFinite(raw)) continue;
      if (log && raw <= 0) continue;
      lo = Math.min(lo, raw);
      hi = Math.max(hi, raw);
    }
  }
  if (!Number.isFinite(lo)) return { lo: 0, hi: 1 };
  if (lo === hi) return { lo: lo - 0.5, hi: hi + 0.5 };
  return { lo, hi };
}

export function renderCurveChart(
  container: HTMLElement,
  series: Series[],
  options: CurveChartOptions = {},
): SVGSVGElement {
  const hidden = options.hidden ?? new Set<string>();
  const svg = el("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: WIDTH,
    height: HEIGHT,
    class: "chart",
  });
  const xExt = seriesExtent(series, hidden, false, !!options.logX);
  const yExt = seriesExtent(series, hidden, true, !!options.logY);
  const x = new Scale(xExt.lo, xExt.hi, MARGIN.left, WIDTH - MARGIN.right, !!options.logX);
  const y = new Scale(yExt.lo, yExt.hi, HEIGHT - MARGIN.bottom, MARGIN.top, !!options.logY);

  drawAxes(svg, x, y, options);

  series.forEach((s, index) => {
    const color = s.color ?? PALETTE[index % PALETTE.length];
    const path = el("path", {
      d: pathData(s, x, y, !!options.step),
      fill: "none",
      stroke: color,
      "stroke-width": 2,
      "stroke-dasharray": s.dashed ? "6 4" : "none",
      "data-series": s.label,
      class: "curve",
    });
    if (hidden.has(s.label)) path.style.display = "none";
    svg.appendChild(path);
  });

  drawLegend(svg, series, hidden, options.onLegendToggle);
  container.appendChild(svg);
  return svg;
}

function pathData(s: Series, x: Scale, y: Scale, step: boolean): string {
  const parts: string[] = [];
  let pen = false;
  let lastY: number | null = null;
  for (let i = 0; i < s.xs.length; i++) {
    const yv = s.ys[i];
    if (yv === null || !Number.isFinite(yv)) {
      pen = false;
      lastY = null;
      continue;
    }
    const px = x.at(s.xs[i]);
    const py = y.at(yv);
    if (!pen) {
      parts.push(`M${px.toFixed(2)},${py.toFixed(2)}`);
      pen = true;
    } else if (step && lastY !== null) {
      parts.push(`H${px.toFixed(2)}`, `V${py.toFixed(2)}`);
    } else {
      parts.push(`L${px.toFixed(2)},${py.toFixed(2)}`);
    }
    lastY = py;
  }
  return parts.join(" ");
}

function drawAxes(svg: SVGSVGElement, x: Scale, y: Scale, options: CurveChartOptions): void {
  const axis = el("g", { class: "axes", stroke: "#888", "stroke-width": 1 });
  axis.appendChild(
    el("line", {
      x1: MARGIN.left,
      y1: HEIGHT - MARGIN.bottom,
      x2: WIDTH - MARGIN.right,
      y2: HEIGHT - MARGIN.bottom,
    }),
  );
  axis.appendChild(
    el("line", { x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left, y2: HEIGHT - MARGIN.bottom }),
  );
  svg.appendChild(axis);

  for (const tick of x.ticks()) {
    const label = el("text", {
      x: x.at(tick),
      y: HEIGHT - MARGIN.bottom + 16,
      "text-anchor": "middle",
      class: "tick",
    });
    label.textContent = fmt(Number(tick.toPrecision(3)));
    svg.appendChild(label);
  }
  for (const tick of y.ticks()) {
    const label = el("text", {
      x: MARGIN.left - 8,
      y: y.at(tick) + 4,
      "text-anchor": "end",
      class: "tick",
    });
    label.textContent = fmt(Number(tick.toPrecision(3)));
    svg.appendChild(label);
  }
  if (options.xLabel) {
    const label = el("text", {
      x: (MARGIN.left + WIDTH - MARGIN.right) / 2,
      y: HEIGHT - 6,
      "text-anchor": "middle",
      class: "axis-label",
    });
    label.textContent = options.xLabel;
    svg.appendChild(label);
  }
  if (options.yLabel) {
    const label = el("text", {
      x: 14,
      y: (MARGIN.top + HEIGHT - MARGIN.bottom) / 2,
      "text-anchor": "middle",
      class: "axis-label",
      transform: `rotate(-90 14 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})`,
    });
    label.textContent = options.yLabel;
    svg.appendChild(label);
  }
}

function drawLegend(
  svg: SVGSVGElement,
  series: Series[],
  hidden: Set<string>,
  onToggle?: (label: string) => void,
): void {
  const seen = new Set<string>();
  let slot = 0;
  for (const [index, s] of series.entries()) {
    if (seen.has(s.label)) continue;
    seen.add(s.label);
    const color = s.color ?? PALETTE[index % PALETTE.length];
    const group = el("g", { class: "legend-item", "data-series": s.label });
    const cx = MARGIN.left + 12 + slot * 150;
    group.appendChild(el("rect", { x: cx, y: 2, width: 12, height: 12, fill: color }));
    const text = el("text", { x: cx + 16, y: 12, class: "legend-label" });
    text.textContent = s.label;
    group.appendChild(text);
    if (hidden.has(s.label)) group.setAttribute("opacity", "0.35");
    if (onToggle) {
      (group as unknown as HTMLElement).style.cursor = "pointer";
      group.addEventListener("click", () => onToggle(s.label));
    }
    svg.appendChild(group);
    slot += 1;
  }
}

export interface HistogramPayload {
  edges: number[];
  counts: number[];
  width: number;
}

export function renderHistogram(
  container: HTMLElement,
  label: string,
  histogram: HistogramPayload,
  density: { support: number[]; density: number[] } | null,
  color: string,
): SVGSVGElement {
  const svg = el("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: WIDTH,
    height: HEIGHT,
    class: "chart histogram",
    "data-series": label,
  });
  const total = histogram.counts.reduce((a, b) => a + b, 0) || 1;
  const binDensity = histogram.counts.map((c) => c / (total * histogram.width));
  const maxDensity = Math.max(...binDensity, ...(density ? density.density : [0]), 1e-12);
  const x = new Scale(
    histogram.edges[0],
    histogram.edges[histogram.edges.length - 1],
    MARGIN.left,
    WIDTH - MARGIN.right,
    false,
  );
  const y = new Scale(0, maxDensity, HEIGHT - MARGIN.bottom, MARGIN.top, false);

  drawAxes(svg, x, y, { xLabel: label, yLabel: "density" });
  binDensity.forEach((value, i) => {
    svg.appendChild(
      el("rect", {
        x: x.at(histogram.edges[i]),
        y: y.at(value),
        width: Math.max(x.at(histogram.edges[i + 1]) - x.at(histogram.edges[i]) - 1, 1),
        height: Math.max(y.at(0) - y.at(value), 0),
        fill: color,
        opacity: 0.55,
        class: "bin",
      }),
    );
  });
  if (density) {
    svg.appendChild(
      el("path", {
        d: pathData(
          { label: "kde", xs: density.support, ys: density.density },
          x,
          y,
          false,
        ),
        fill: "none",
        stroke: color,
        "stroke-width": 2,
        class: "kde",
      }),
    );
  }
  container.appendChild(svg);
  return svg;
}

export function renderDecisionMatrix(
  container: HTMLElement,
  algorithms: string[],
  decision: number[][],
  pCorrected: (number | string | null)[][],
): void {
  const table = document.createElement("table");
  table.className = "matrix";
  const head = table.insertRow();
  head.insertCell().textContent = "";
  for (const alg of algorithms) head.insertCell().textContent = alg;
  algorithms.forEach((rowAlg, i) => {
    const row = table.insertRow();
    row.insertCell().textContent = rowAlg;
    algorithms.forEach((_, j) => {
      const cell = row.insertCell();
      if (i === j) {
        cell.className = "self";
        return;
      }
      const verdict = decision[i][j];
      cell.className = verdict > 0 ? "win" : verdict < 0 ? "loss" : "tie";
      cell.title = `corrected p = ${fmt(pCorrected[i][j])}`;
      cell.textContent = verdict > 0 ? ">" : verdict < 0 ? "<" : "=";
    });
  });
  container.appendChild(table);
}

export function renderDominanceGraph(
  container: HTMLElement,
  nodes: string[],
  edges: [string, string][],
): SVGSVGElement {
  const size = 300;
  const svg = el("svg", {
    viewBox: `0 0 ${size} ${size}`,
    width: size,
    height: size,
    class: "chart graph",
  });
  const marker = el("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: 24,
    refY: 5,
    markerWidth: 7,
    markerHeight: 7,
    orient: "auto-start-reverse",
  });
  marker.appendChild(el("path", { d: "M0,0 L10,5 L0,10 z", fill: "#444" }));
  const defs = el("defs");
  defs.appendChild(marker);
  svg.appendChild(defs);

  const center = size / 2;
  const radius = size / 2 - 40;
  const position = new Map<string, [number, number]>();
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / nodes.length - Math.PI / 2;
    position.set(node, [center + radius * Math.cos(angle), center + radius * Math.sin(angle)]);
  });
  for (const [winner, loser] of edges) {
    const [x1, y1] = position.get(winner)!;
    const [x2, y2] = position.get(loser)!;
    svg.appendChild(
      el("line", {
        x1,
        y1,
        x2,
        y2,
        stroke: "#444",
        "stroke-width": 1.5,
        "marker-end": "url(#arrow)",
        "data-edge": `${winner}->${loser}`,
      }),
    );
  }
  for (const node of nodes) {
    const [cx, cy] = position.get(node)!;
    svg.appendChild(el("circle", { cx, cy, r: 18, fill: "#eef2fb", stroke: "#316bbe" }));
    const text = el("text", { x: cx, y: cy + 4, "text-anchor": "middle", class: "node-label" });
    text.textContent = node.length > 6 ? node.slice(0, 6) + "…" : node;
    svg.appendChild(text);
  }
  container.appendChild(svg);
  return svg;
}

export interface RadarPayload {
  targets: Record<string, number>;
  series: { algId: string; ert: Record<string, number | string | null> }[];
}

/** Radar chart of per-function expected running times. The radial axis is
 * inverted via reciprocal rank so that better (smaller) values span a larger
 * area; infinite values sit at the center. */
export function renderRadar(
  container: HTMLElement,
  payload: RadarPayload,
  hidden: Set<string>,
  onToggle?: (label: string) => void,
): SVGSVGElement {
  const size = 420;
  const svg = el("svg", {
    viewBox: `0 0 ${size} ${size + 30}`,
    width: size,
    height: size + 30,
    class: "chart radar",
  });
  const funcs = Object.keys(payload.targets);
  const center = size / 2;
  const radius = size / 2 - 50;
  const angle = (i: number) => (2 * Math.PI * i) / funcs.length - Math.PI / 2;

  funcs.forEach((func, i) => {
    svg.appendChild(
      el("line", {
        x1: center,
        y1: center,
        x2: center + radius * Math.cos(angle(i)),
        y2: center + radius * Math.sin(angle(i)),
        stroke: "#ccc",
      }),
    );
    const label = el("text", {
      x: center + (radius + 18) * Math.cos(angle(i)),
      y: center + (radius + 18) * Math.sin(angle(i)),
      "text-anchor": "middle",
      class: "tick",
    });
    label.textContent = `f${func}`;
    svg.appendChild(label);
  });

  // reciprocal rank per axis: rank 1 (best ERT) -> radius 1
  const radsByAlg = new Map<string, number[]>();
  funcs.forEach((func, axis) => {
    const values = payload.series.map((s) => toNumber(s.ert[func]));
    const sorted = [...new Set(values.filter((v) => Number.isFinite(v)))].sort((a, b) => a - b);
    payload.series.forEach((s, si) => {
      const value = values[si];
      const rank = Number.isFinite(value) ? sorted.indexOf(value) + 1 : sorted.length + 1;
      const rad = 1 / rank;
      if (!radsByAlg.has(s.algId)) radsByAlg.set(s.algId, new Array(funcs.length).fill(0));
      radsByAlg.get(s.algId)![axis] = rad;
    });
  });

  payload.series.forEach((s, index) => {
    const color = PALETTE[index % PALETTE.length];
    const rads = radsByAlg.get(s.algId)!;
    const points = rads
      .map((rad, i) => {
        const px = center + radius * rad * Math.cos(angle(i));
        const py = center + radius * rad * Math.sin(angle(i));
        return `${px.toFixed(1)},${py.toFixed(1)}`;
      })
      .join(" ");
    const polygon = el("polygon", {
      points,
      fill: color,
      "fill-opacity": 0.25,
      stroke: color,
      "stroke-width": 2,
      "data-series": s.algId,
      class: "curve",
    });
    if (hidden.has(s.algId)) polygon.style.display = "none";
    svg.appendChild(polygon);
  });

  const legendSeries = payload.series.map((s, i) => ({
    label: s.algId,
    xs: [],
    ys: [],
    color: PALETTE[i % PALETTE.length],
  }));
  drawLegend(svg, legendSeries, hidden, onToggle);
  container.appendChild(svg);
  return svg;
}

function toNumber(value: number | string | null): number {
  if (typeof value === "number") return value;
  if (value === "Inf") return Infinity;
  return NaN;
}
