// Application shell: upload, sidebar controls, tab bar, and per-tab views.
// Every displayed number comes from a service response; interactions mutate
// the view state, mirror it into the URL fragment, and trigger exactly one
// refetch for the active view.

import {
  ApiClient,
  ApiError,
  SessionSummary,
  StatsRow,
  aucQuery,
  densityQuery,
  ecdfQuery,
  overviewQuery,
  paramsQuery,
  radarQuery,
  rankQuery,
  statsQuery,
  testQuery,
} from "./api.js";
import {
  PALETTE,
  RadarPayload,
  Series,
  renderCurveChart,
  renderDecisionMatrix,
  renderDominanceGraph,
  renderHistogram,
  renderRadar,
} from "./charts.js";
import { downloadPng, downloadServed, downloadSvg } from "./download.js";
import { fmt } from "./format.js";
import { renderTable, rowsFromObjects } from "./tables.js";
import {
  TABS,
  ViewState,
  decodeState,
  defaultState,
  encodeState,
  validateRange,
} from "./state.js";

const QUANTILE_KEYS = ["Q2%", "Q5%", "Q10%", "Q25%", "Q50%", "Q75%", "Q90%", "Q95%", "Q98%"];

export class App {
  state: ViewState = defaultState();
  summary: SessionSummary | null = null;

  private controlsEl!: HTMLElement;
  private contentEl!: HTMLElement;
  private statusEl!: HTMLElement;
  private chartEl: SVGSVGElement | null = null;
  private appliedFragment = "";
  private readonly onHashChange = () => {
    const incoming = decodeState(window.location.hash);
    if (encodeState(incoming) === this.appliedFragment) return; // our own write
    this.state = incoming;
    this.appliedFragment = encodeState(this.state);
    this.renderControls();
    void this.refresh();
  };

  constructor(private root: HTMLElement, private api: ApiClient = new ApiClient()) {}

  dispose(): void {
    window.removeEventListener("hashchange", this.onHashChange);
  }

  async init(): Promise<void> {
    this.state = decodeState(window.location.hash);
    this.appliedFragment = encodeState(this.state);
    this.buildSkeleton();
    window.addEventListener("hashchange", this.onHashChange);
    if (this.state.sessionId) {
      try {
        const body = await this.api.summary(this.state.sessionId);
        this.adoptSummary(body.summary);
      } catch (error) {
        this.showError(error);
        return;
      }
      this.renderControls();
      await this.refresh();
    } else {
      this.renderControls();
    }
  }

  // ------------------------------------------------------------------ state

  private update(patch: Partial<ViewState>, refetch = true): void {
    Object.assign(this.state, patch);
    this.syncUrl();
    this.renderControls();
    if (refetch) void this.refresh();
  }

  private syncUrl(): void {
    this.appliedFragment = encodeState(this.state);
    const fragment = "#" + this.appliedFragment;
    if (window.history && window.history.replaceState) {
      window.history.replaceState(null, "", fragment);
    } else {
      window.location.hash = fragment;
    }
  }

  private adoptSummary(summary: SessionSummary): void {
    this.summary = summary;
    if (this.state.dim === null && summary.dimensions.length) {
      this.state.dim = summary.dimensions[0];
    }
    if (this.state.func === null && summary.functions.length) {
      this.state.func = summary.functions[0];
    }
    if (this.state.param === null && summary.parameters.length) {
      this.state.param = summary.parameters[0];
    }
    this.syncUrl();
  }

  // -------------------------------------------------------------------- dom

  private buildSkeleton(): void {
    this.root.innerHTML = "";
    const upload = document.createElement("section");
    upload.className = "upload";
    upload.innerHTML = `
      <label class="upload-label">Trace archive
        <input type="file" data-role="archive-input" accept=".zip,.tar,.gz,.bz2,.xz" />
      </label>
      <button data-role="upload-button">Upload</button>
      <span data-role="session-label" class="session-label"></span>`;
    const schemeLabel = document.createElement("label");
    schemeLabel.className = "scheme-label";
    schemeLabel.textContent = "Colors";
    const scheme = document.createElement("select");
    scheme.dataset.role = "color-scheme";
    for (const name of ["light", "dark"]) {
      const option = document.createElement("option");
      option.value = option.textContent = name;
      scheme.appendChild(option);
    }
    schemeLabel.appendChild(scheme);
    upload.appendChild(schemeLabel);
    this.root.appendChild(upload);
    scheme.value = loadColorScheme();
    applyColorScheme(scheme.value);
    scheme.addEventListener("change", () => {
      applyColorScheme(scheme.value);
      try {
        window.localStorage.setItem(COLOR_SCHEME_KEY, scheme.value);
      } catch {
        // storage may be unavailable; the choice just won't persist
      }
    });

    const tabs = document.createElement("nav");
    tabs.className = "tabs";
    for (const tab of TABS) {
      const button = document.createElement("button");
      button.textContent = tab;
      button.dataset.tab = tab;
      button.addEventListener("click", () => this.update({ tab }));
      tabs.appendChild(button);
    }
    this.root.appendChild(tabs);

    const main = document.createElement("div");
    main.className = "main";
    this.controlsEl = document.createElement("aside");
    this.controlsEl.className = "controls";
    this.contentEl = document.createElement("section");
    this.contentEl.className = "content";
    main.appendChild(this.controlsEl);
    main.appendChild(this.contentEl);
    this.root.appendChild(main);

    this.statusEl = document.createElement("div");
    this.statusEl.className = "status";
    this.root.appendChild(this.statusEl);

    upload
      .querySelector('[data-role="upload-button"]')!
      .addEventListener("click", () => void this.upload());
  }

  private async upload(): Promise<void> {
    const input = this.root.querySelector<HTMLInputElement>('[data-role="archive-input"]')!;
    const file = input.files && input.files[0];
    if (!file) {
      this.setStatus("choose an archive first");
      return;
    }
    this.setStatus("uploading…");
    try {
      const body = await this.api.upload(file, file.name);
      this.state = { ...defaultState(), sessionId: body.sessionId };
      this.adoptSummary(body.summary);
      this.setStatus("");
      this.renderControls();
      await this.refresh();
    } catch (error) {
      this.showError(error);
    }
  }

  // --------------------------------------------------------------- controls

  private renderControls(): void {
    const label = this.root.querySelector('[data-role="session-label"]');
    if (label) {
      label.textContent = this.state.sessionId ? `session ${this.state.sessionId.slice(0, 8)}` : "";
    }
    this.root.querySelectorAll<HTMLButtonElement>(".tabs button").forEach((button) => {
      button.classList.toggle("active", button.dataset.tab === this.state.tab);
    });

    const c = this.controlsEl;
    c.innerHTML = "";
    if (!this.summary) {
      c.textContent = "Upload an archive to begin.";
      return;
    }

    c.appendChild(this.selector("dimension", "dim-select", this.summary.dimensions.map(String),
      this.state.dim === null ? "" : String(this.state.dim),
      (value) => this.update({ dim: value ? Number(value) : null })));
    c.appendChild(this.selector("function", "func-select", this.summary.functions,
      this.state.func ?? "", (value) => this.update({ func: value || null })));
    c.appendChild(this.algPicker());
    c.appendChild(this.perspectiveToggle());
    c.appendChild(this.rangeInputs());
    c.appendChild(this.axisToggles());
    c.appendChild(this.tabSpecificControls());
  }

  private selector(
    label: string,
    role: string,
    options: string[],
    selected: string,
    onChange: (value: string) => void,
  ): HTMLElement {
    const wrap = document.createElement("label");
    wrap.className = "control";
    wrap.textContent = label;
    const select = document.createElement("select");
    select.dataset.role = role;
    for (const option of options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option;
      if (option === selected) el.selected = true;
      select.appendChild(el);
    }
    select.addEventListener("change", () => onChange(select.value));
    wrap.appendChild(select);
    return wrap;
  }

  private algPicker(): HTMLElement {
    const wrap = document.createElement("fieldset");
    wrap.className = "control algs";
    const legend = document.createElement("legend");
    legend.textContent = "algorithms";
    wrap.appendChild(legend);
    for (const alg of this.summary!.algorithms) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = alg;
      box.checked = !this.state.algs.length || this.state.algs.includes(alg);
      box.addEventListener("change", () => {
        const chosen = Array.from(
          wrap.querySelectorAll<HTMLInputElement>("input:checked"),
        ).map((el) => el.value);
        const all = chosen.length === this.summary!.algorithms.length;
        this.update({ algs: all ? [] : chosen });
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(alg));
      wrap.appendChild(label);
    }
    return wrap;
  }

  private perspectiveToggle(): HTMLElement {
    return this.selector(
      "perspective",
      "perspective-select",
      ["target", "budget"],
      this.state.perspective,
      (value) => this.update({ perspective: value as ViewState["perspective"] }),
    );
  }

  private rangeInputs(): HTMLElement {
    const wrap = document.createElement("fieldset");
    wrap.className = "control range";
    const legend = document.createElement("legend");
    legend.textContent = this.state.perspective === "target" ? "target range" : "budget range";
    wrap.appendChild(legend);
    const fields: [keyof ViewState["range"], string][] = [
      ["min", "min"],
      ["max", "max"],
      ["step", "step"],
      ["count", "count"],
    ];
    for (const [key, label] of fields) {
      const el = document.createElement("label");
      el.textContent = label;
      const input = document.createElement("input");
      input.type = "number";
      input.dataset.role = `range-${key}`;
      const current = this.state.range[key];
      input.value = current === null ? "" : String(current);
      input.addEventListener("change", () => {
        const range = { ...this.state.range, [key]: input.value === "" ? null : Number(input.value) };
        const problem = validateRange(range);
        if (problem) {
          this.setStatus(`invalid range: ${problem}`);
          return;
        }
        this.setStatus("");
        this.update({ range });
      });
      el.appendChild(input);
      wrap.appendChild(el);
    }
    const scale = this.selector("scale", "range-scale", ["auto", "linear", "log"],
      this.state.range.scale, (value) => {
        const range = { ...this.state.range, scale: value as ViewState["range"]["scale"] };
        const problem = validateRange(range);
        if (problem) {
          this.setStatus(`invalid range: ${problem}`);
          return;
        }
        this.update({ range });
      });
    wrap.appendChild(scale);
    return wrap;
  }

  private axisToggles(): HTMLElement {
    const wrap = document.createElement("fieldset");
    wrap.className = "control axes-toggles";
    const legend = document.createElement("legend");
    legend.textContent = "display";
    wrap.appendChild(legend);
    const toggles: [string, keyof ViewState][] = [
      ["log x", "logX"],
      ["log y", "logY"],
      ["mean", "showMean"],
      ["median", "showMedian"],
    ];
    for (const [label, key] of toggles) {
      const el = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.dataset.role = `toggle-${key}`;
      box.checked = Boolean(this.state[key]);
      box.addEventListener("change", () => {
        this.update({ [key]: box.checked } as unknown as Partial<ViewState>);
      });
      el.appendChild(box);
      el.appendChild(document.createTextNode(label));
      wrap.appendChild(el);
    }
    return wrap;
  }

  private tabSpecificControls(): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "control tab-controls";
    const tab = this.state.tab;
    if (tab === "density") {
      const label = document.createElement("label");
      label.textContent = this.state.perspective === "target" ? "target" : "budget";
      const input = document.createElement("input");
      input.type = "number";
      input.dataset.role = "anchor-input";
      input.value = this.state.anchor === null ? "" : String(this.state.anchor);
      input.addEventListener("change", () => {
        this.update({ anchor: input.value === "" ? null : Number(input.value) });
      });
      label.appendChild(input);
      wrap.appendChild(label);
    }
    if (tab === "params" && this.summary) {
      wrap.appendChild(
        this.selector("parameter", "param-select", this.summary.parameters,
          this.state.param ?? "", (value) => this.update({ param: value || null })),
      );
    }
    if (tab === "test") {
      wrap.appendChild(this.numberInput("alpha", "alpha-input", this.state.alpha, (v) =>
        this.update({ alpha: v })));
    }
    if (tab === "rank") {
      wrap.appendChild(this.numberInput("rounds", "rounds-input", this.state.rounds, (v) =>
        this.update({ rounds: Math.max(1, Math.round(v)) })));
      wrap.appendChild(this.numberInput("seed", "seed-input", this.state.seed, (v) =>
        this.update({ seed: Math.round(v) })));
    }
    if (tab === "ecdf") {
      wrap.appendChild(this.targetMapEditor());
    }
    return wrap;
  }

  private numberInput(
    label: string,
    role: string,
    value: number,
    onChange: (value: number) => void,
  ): HTMLElement {
    const el = document.createElement("label");
    el.textContent = label;
    const input = document.createElement("input");
    input.type = "number";
    input.dataset.role = role;
    input.value = String(value);
    input.addEventListener("change", () => {
      const parsed = Number(input.value);
      if (Number.isFinite(parsed)) onChange(parsed);
    });
    el.appendChild(input);
    return el;
  }

  private targetMapEditor(): HTMLElement {
    const wrap = document.createElement("fieldset");
    wrap.className = "control target-map";
    const legend = document.createElement("legend");
    legend.textContent = "per-function targets (multi-function aggregation)";
    wrap.appendChild(legend);
    const area = document.createElement("textarea");
    area.dataset.role = "target-map-input";
    area.rows = 4;
    area.placeholder = "funcId: target, target… (one line per function)";
    area.value = this.state.targetMap
      ? Object.entries(this.state.targetMap)
          .map(([func, targets]) => `${func}: ${targets.join(", ")}`)
          .join("\n")
      : "";
    wrap.appendChild(area);
    const apply = document.createElement("button");
    apply.dataset.role = "target-map-apply";
    apply.textContent = "Apply targets";
    apply.addEventListener("click", () => {
      const parsed = parseTargetMapText(area.value);
      if (typeof parsed === "string") {
        this.setStatus(`invalid targets: ${parsed}`);
        return;
      }
      this.setStatus("");
      this.update({ targetMap: parsed });
    });
    wrap.appendChild(apply);
    const clear = document.createElement("button");
    clear.textContent = "Single function";
    clear.addEventListener("click", () => this.update({ targetMap: null }));
    wrap.appendChild(clear);
    return wrap;
  }

  // ------------------------------------------------------------------ views

  private setStatus(text: string): void {
    this.statusEl.textContent = text;
  }

  private showError(error: unknown): void {
    if (error instanceof DOMException && error.name === "AbortError") return;
    if (error instanceof ApiError) {
      this.setStatus(`service error (${error.status}): ${error.message}`);
    } else {
      this.setStatus(String(error));
    }
  }

  async refresh(): Promise<void> {
    if (!this.state.sessionId || !this.summary) return;
    this.contentEl.innerHTML = "";
    this.chartEl = null;
    try {
      await this.renderActiveTab();
      this.setStatus("");
    } catch (error) {
      this.showError(error);
    }
  }

  private hiddenSet(): Set<string> {
    return new Set(this.state.hidden);
  }

  private toggleCurve(label: string): void {
    const hidden = new Set(this.state.hidden);
    if (hidden.has(label)) hidden.delete(label);
    else hidden.add(label);
    this.state.hidden = [...hidden].sort();
    this.syncUrl();
    // visibility is client-side: flip the rendered elements, no refetch
    this.contentEl
      .querySelectorAll<SVGElement>(`[data-series]`)
      .forEach((node) => {
        const name = node.getAttribute("data-series")!;
        if (node.classList.contains("curve")) {
          node.style.display = this.state.hidden.includes(name) ? "none" : "";
        }
        if (node.classList.contains("legend-item")) {
          node.setAttribute("opacity", this.state.hidden.includes(name) ? "0.35" : "1");
        }
      });
  }

  private async renderActiveTab(): Promise<void> {
    switch (this.state.tab) {
      case "overview":
        return this.renderOverview();
      case "stats":
        return this.renderStats();
      case "ert-curve":
        return this.renderErtCurve();
      case "density":
        return this.renderDensity();
      case "ecdf":
        return this.renderEcdf();
      case "params":
        return this.renderParams();
      case "test":
        return this.renderTest();
      case "rank":
        return this.renderRank();
      case "radar":
        return this.renderRadarTab();
    }
  }

  private tableDownloads(endpoint: string, params: URLSearchParams): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "downloads";
    for (const format of ["csv", "latex"] as const) {
      const button = document.createElement("button");
      button.textContent = format.toUpperCase();
      button.addEventListener("click", () => {
        const query = new URLSearchParams(params);
        query.set("format", format);
        const url = this.api.sessionPath(this.state, endpoint, query);
        void downloadServed(url, `${endpoint}.${format === "latex" ? "tex" : "csv"}`).catch(
          (error) => this.showError(error),
        );
      });
      bar.appendChild(button);
    }
    return bar;
  }

  private chartDownloads(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "downloads";
    const svgButton = document.createElement("button");
    svgButton.textContent = "SVG";
    svgButton.addEventListener("click", () => {
      if (this.chartEl) downloadSvg(`${this.state.tab}.svg`, this.chartEl);
    });
    const pngButton = document.createElement("button");
    pngButton.textContent = "PNG";
    pngButton.addEventListener("click", () => {
      if (this.chartEl) void downloadPng(`${this.state.tab}.png`, this.chartEl).catch(
        (error) => this.showError(error),
      );
    });
    svgButton.disabled = pngButton.disabled = this.chartEl === null;
    bar.appendChild(svgButton);
    bar.appendChild(pngButton);
    return bar;
  }

  private async renderOverview(): Promise<void> {
    const params = overviewQuery(this.state);
    params.set("format", "json");
    const body = (await this.api.getJson(
      "overview",
      this.api.sessionPath(this.state, "overview", params),
    )) as { header: string[]; rows: (number | string | null)[][] };
    renderTable(this.contentEl, body.header, body.rows);
    this.contentEl.appendChild(this.tableDownloads("overview", overviewQuery(this.state)));
  }

  private statsHeader(): string[] {
    const anchorKey = this.state.perspective === "target" ? "target" : "budget";
    const base = ["algId", anchorKey, "mean", "median", "sd", ...QUANTILE_KEYS];
    if (this.state.perspective === "target") base.push("ert", "runs", "succ", "rate");
    else base.push("runs");
    return base;
  }

  private async renderStats(): Promise<void> {
    const body = (await this.api.getJson(
      "stats",
      this.api.sessionPath(this.state, "stats", statsQuery(this.state)),
    )) as { rows: StatsRow[] };
    const header = this.statsHeader();
    renderTable(this.contentEl, header, rowsFromObjects(header, body.rows));
    this.contentEl.appendChild(this.tableDownloads("stats", statsQuery(this.state)));
  }

  private async renderErtCurve(): Promise<void> {
    const body = (await this.api.getJson(
      "stats",
      this.api.sessionPath(this.state, "stats", statsQuery(this.state)),
    )) as { anchors: number[]; rows: StatsRow[] };
    const anchorKey = this.state.perspective === "target" ? "target" : "budget";
    const byAlg = new Map<string, StatsRow[]>();
    for (const row of body.rows) {
      const alg = String(row.algId);
      if (!byAlg.has(alg)) byAlg.set(alg, []);
      byAlg.get(alg)!.push(row);
    }
    const series: Series[] = [];
    let colorIndex = 0;
    for (const [alg, rows] of byAlg) {
      const color = PALETTE[colorIndex++ % PALETTE.length];
      const xs = rows.map((row) => Number(row[anchorKey]));
      if (this.state.perspective === "target") {
        series.push({ label: alg, xs, ys: rows.map((row) => finiteOrNull(row.ert)), color });
      }
      if (this.state.showMean || this.state.perspective === "budget") {
        series.push({
          label: alg,
          xs,
          ys: rows.map((row) => finiteOrNull(row.mean)),
          dashed: this.state.perspective === "target",
          color,
        });
      }
      if (this.state.showMedian) {
        series.push({
          label: alg,
          xs,
          ys: rows.map((row) => finiteOrNull(row.median)),
          dashed: true,
          color,
        });
      }
    }
    this.chartEl = renderCurveChart(this.contentEl, series, {
      logX: this.state.logX,
      logY: this.state.logY,
      xLabel: anchorKey,
      yLabel: this.state.perspective === "target" ? "evaluations" : "best value",
      hidden: this.hiddenSet(),
      onLegendToggle: (label) => this.toggleCurve(label),
    });
    this.contentEl.appendChild(this.chartDownloads());
  }

  private async renderDensity(): Promise<void> {
    if (this.state.anchor === null) {
      this.contentEl.textContent = "Set a target (or budget) to inspect its distribution.";
      return;
    }
    const body = (await this.api.getJson(
      "density",
      this.api.sessionPath(this.state, "density", densityQuery(this.state)),
    )) as {
      series: {
        algId: string;
        histogram?: { edges: number[]; counts: number[]; width: number };
        density?: { support: number[]; density: number[] };
      }[];
    };
    body.series.forEach((entry, index) => {
      const title = document.createElement("h3");
      title.textContent = entry.algId;
      this.contentEl.appendChild(title);
      if (!entry.histogram) {
        const note = document.createElement("p");
        note.textContent = "not enough finite samples";
        this.contentEl.appendChild(note);
        return;
      }
      this.chartEl = renderHistogram(
        this.contentEl,
        entry.algId,
        entry.histogram,
        entry.density ?? null,
        PALETTE[index % PALETTE.length],
      );
    });
    this.contentEl.appendChild(this.chartDownloads());
  }

  private async renderEcdf(): Promise<void> {
    const body = (await this.api.getJson(
      "ecdf",
      this.api.sessionPath(this.state, "ecdf", ecdfQuery(this.state)),
    )) as { curves: { algId: string; t: number[]; proportion: number[] }[] };
    const series: Series[] = body.curves.map((curve, index) => ({
      label: curve.algId,
      xs: curve.t,
      ys: curve.proportion,
      color: PALETTE[index % PALETTE.length],
    }));
    this.chartEl = renderCurveChart(this.contentEl, series, {
      logX: this.state.logX,
      logY: false,
      step: true,
      xLabel: this.state.perspective === "target" ? "evaluations" : "best value",
      yLabel: "proportion",
      hidden: this.hiddenSet(),
      onLegendToggle: (label) => this.toggleCurve(label),
    });
    this.contentEl.appendChild(this.chartDownloads());
    if (this.state.perspective === "target") {
      try {
        const auc = (await this.api.getJson(
          "auc",
          this.api.sessionPath(this.state, "auc", aucQuery(this.state)),
        )) as { tMin: number; tMax: number; auc: Record<string, number> };
        const title = document.createElement("h3");
        title.textContent = `area under the curve, log-scaled over [${fmt(auc.tMin)}, ${fmt(auc.tMax)}]`;
        this.contentEl.appendChild(title);
        renderTable(
          this.contentEl,
          ["algId", "auc"],
          Object.entries(auc.auc).map(([alg, value]) => [alg, value]),
        );
      } catch (error) {
        this.showError(error);
      }
    }
  }

  private async renderParams(): Promise<void> {
    const rows = (await this.api.getJson(
      "params",
      this.api.sessionPath(this.state, "params", paramsQuery(this.state)),
    )) as Record<string, number | string | null>[];
    const anchorKey = this.state.perspective === "target" ? "target" : "budget";
    const header = ["algId", "param", anchorKey, "mean", "median", "sd", ...QUANTILE_KEYS, "runs"];
    renderTable(this.contentEl, header, rowsFromObjects(header, rows));
    this.contentEl.appendChild(this.tableDownloads("params", paramsQuery(this.state)));
  }

  private async renderTest(): Promise<void> {
    const body = (await this.api.getJson(
      "test",
      this.api.sessionPath(this.state, "test", testQuery(this.state)),
    )) as {
      target: number;
      alpha: number;
      algorithms: string[];
      pCorrected: (number | string | null)[][];
      decision: number[][];
      edges: [string, string][];
    };
    const title = document.createElement("h3");
    title.textContent = `pairwise tests at target ${fmt(body.target)} (corrected α = ${fmt(body.alpha)})`;
    this.contentEl.appendChild(title);
    renderDecisionMatrix(this.contentEl, body.algorithms, body.decision, body.pCorrected);
    const graphTitle = document.createElement("h3");
    graphTitle.textContent = "dominance (arrow = significantly better)";
    this.contentEl.appendChild(graphTitle);
    this.chartEl = renderDominanceGraph(this.contentEl, body.algorithms, body.edges);
    this.contentEl.appendChild(this.chartDownloads());
    this.contentEl.appendChild(this.tableDownloads("test", testQuery(this.state)));
  }

  private async renderRank(): Promise<void> {
    const body = (await this.api.getJson(
      "rank",
      this.api.sessionPath(this.state, "rank", rankQuery(this.state)),
    )) as { ranking: Record<string, number | string | null>[] };
    const header = ["rank", "algId", "rating", "deviation", "volatility"];
    renderTable(this.contentEl, header, rowsFromObjects(header, body.ranking));
    this.contentEl.appendChild(this.tableDownloads("rank", rankQuery(this.state)));
  }

  private async renderRadarTab(): Promise<void> {
    const body = (await this.api.getJson(
      "radar",
      this.api.sessionPath(this.state, "radar", radarQuery(this.state)),
    )) as RadarPayload;
    this.chartEl = renderRadar(this.contentEl, body, this.hiddenSet(), (label) =>
      this.toggleCurve(label),
    );
    const note = document.createElement("p");
    note.className = "note";
    note.textContent =
      "axes are inverted by reciprocal rank: the best algorithm per function reaches the rim";
    this.contentEl.appendChild(note);
    this.contentEl.appendChild(this.chartDownloads());
  }
}

const COLOR_SCHEME_KEY = "ioha-color-scheme";

export function loadColorScheme(): string {
  try {
    return window.localStorage.getItem(COLOR_SCHEME_KEY) ?? "light";
  } catch {
    return "light";
  }
}

export function applyColorScheme(scheme: string): void {
  document.body.dataset.theme = scheme === "dark" ? "dark" : "light";
}

function finiteOrNull(value: number | string | null | undefined): number | null {
  return typeof value === "number" && Number.isFinite(value) ? value : null;
}

/** Parse "funcId: t1, t2" lines; returns an error string on bad input. */
export function parseTargetMapText(
  text: string,
): Record<string, number[]> | null | string {
  const out: Record<string, number[]> = {};
  for (const rawLine of text.split("\n")) {
    const line = rawLine.trim();
    if (!line) continue;
    const colon = line.indexOf(":");
    if (colon < 1) return `expected "funcId: targets" in ${JSON.stringify(line)}`;
    const func = line.slice(0, colon).trim();
    const targets = line
      .slice(colon + 1)
      .split(",")
      .map((token) => token.trim())
      .filter(Boolean)
      .map(Number);
    if (!targets.length || targets.some((t) => !Number.isFinite(t))) {
      return `bad target list for function ${func}`;
    }
    out[func] = targets;
  }
  return Object.keys(out).length ? out : null;
}

export function mountApp(root: HTMLElement, api?: ApiClient): App {
  const app = new App(root, api);
  void app.init();
  return app;
}
