// Interaction tests against a mocked service: the UI must fetch rather than
// compute, re-render on control changes, and restore itself from the URL.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { App } from "../src/app.js";
import { ApiClient } from "../src/api.js";

const SESSION = "abc123def456";

const SUMMARY = {
  datasets: [
    { algId: "GA", funcId: "19", DIM: 16, runs: 5, budget: 16001, "best reached": 32 },
    { algId: "RLS", funcId: "19", DIM: 16, runs: 5, budget: 16001, "best reached": 31 },
  ],
  algorithms: ["GA", "RLS"],
  functions: ["19"],
  dimensions: [16],
  parameters: ["parameter"],
  direction: "maximize",
};

const STATS = {
  perspective: "target",
  scale: "auto",
  anchors: [4, 10, 16],
  valueTarget: null,
  rows: [
    { algId: "GA", target: 4, runs: 5, mean: 31.2, median: 30, sd: 2.5,
      "Q2%": 4, "Q5%": 5, "Q10%": 6, "Q25%": 8, "Q50%": 30, "Q75%": 40,
      "Q90%": 44, "Q95%": 46, "Q98%": 48, ert: 65.5, succ: 5, rate: 1 },
    { algId: "RLS", target: 4, runs: 5, mean: 57.25, median: 50, sd: 4.75,
      "Q2%": 4, "Q5%": 5, "Q10%": 6, "Q25%": 8, "Q50%": 50, "Q75%": 60,
      "Q90%": 64, "Q95%": 66, "Q98%": 68, ert: "Inf", succ: 0, rate: 0 },
  ],
};

const ECDF = {
  scope: "multi-target",
  targets: [30, 32],
  dim: 16,
  func: "19",
  curves: [
    { algId: "GA", t: [1, 10, 100], proportion: [0.1, 0.5, 1.0] },
    { algId: "RLS", t: [1, 10, 100], proportion: [0.0, 0.2, 0.6] },
  ],
};

const AUC = { tMin: 1, tMax: 16001, scope: "multi-target", targets: [30, 32],
  auc: { GA: 0.75, RLS: 0.4 } };

const OVERVIEW = {
  header: ["algId", "runs", "best reached"],
  rows: [["GA", 5, 32], ["RLS", 5, 31]],
  caption: "",
};

let calls: string[] = [];

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

function installFetchMock(): void {
  calls = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL) => {
      const url = String(input);
      calls.push(url);
      const path = url.split("?")[0];
      if (path === `/api/sessions/${SESSION}`) {
        return jsonResponse({ sessionId: SESSION, summary: SUMMARY });
      }
      if (path.endsWith("/stats")) return jsonResponse(STATS);
      if (path.endsWith("/ecdf")) return jsonResponse(ECDF);
      if (path.endsWith("/auc")) return jsonResponse(AUC);
      if (path.endsWith("/overview")) return jsonResponse(OVERVIEW);
      return new Response(JSON.stringify({ detail: `no route for ${url}` }), { status: 404 });
    }),
  );
}

function statsCalls(): string[] {
  return calls.filter((url) => url.split("?")[0].endsWith("/stats"));
}

async function settled(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}

const mounted: App[] = [];

async function mountOnHash(hash: string): Promise<{ app: App; root: HTMLElement }> {
  window.location.hash = hash;
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = new App(root, new ApiClient(""));
  mounted.push(app);
  await app.init();
  await settled();
  return { app, root };
}

beforeEach(() => {
  installFetchMock();
  document.body.innerHTML = "";
});

afterEach(() => {
  while (mounted.length) mounted.pop()!.dispose();
  vi.unstubAllGlobals();
  window.location.hash = "";
});

describe("stats view", () => {
  it("renders exactly the numbers returned by the service", async () => {
    const { root } = await mountOnHash(`#session=${SESSION}&tab=stats&func=19&dim=16`);
    const cells = Array.from(root.querySelectorAll("td[data-col]"));
    expect(cells.length).toBeGreaterThan(0);
    const byCol = (alg: string, col: string) => {
      const row = Array.from(root.querySelectorAll("tbody tr")).find(
        (tr) => tr.querySelector("td")!.textContent === alg,
      )!;
      return Array.from(row.querySelectorAll("td")).find(
        (td) => (td as HTMLElement).dataset.col === col,
      )!.textContent;
    };
    expect(byCol("GA", "mean")).toBe("31.2");
    expect(byCol("GA", "ert")).toBe("65.5");
    expect(byCol("RLS", "ert")).toBe("Inf");
    expect(byCol("RLS", "sd")).toBe("4.75");
  });

  it("issues exactly one new stats request when the range changes", async () => {
    const { root } = await mountOnHash(`#session=${SESSION}&tab=stats&func=19&dim=16`);
    const before = statsCalls().length;
    expect(before).toBe(1);

    const minInput = root.querySelector<HTMLInputElement>('[data-role="range-min"]')!;
    const maxInput = root.querySelector<HTMLInputElement>('[data-role="range-max"]')!;
    maxInput.value = "16";
    maxInput.dispatchEvent(new Event("change"));
    await settled();
    minInput.value = "4";
    minInput.dispatchEvent(new Event("change"));
    await settled();

    const after = statsCalls();
    expect(after.length).toBe(before + 2); // one request per committed edit
    const last = new URL("http://x" + after[after.length - 1]);
    expect(last.searchParams.get("min")).toBe("4");
    expect(last.searchParams.get("max")).toBe("16");
    expect(root.querySelectorAll("tbody tr").length).toBe(2);
  });

  it("does not fetch when the range is invalid", async () => {
    const { root } = await mountOnHash(`#session=${SESSION}&tab=stats&func=19&dim=16&min=4&max=16`);
    const before = statsCalls().length;
    const minInput = root.querySelector<HTMLInputElement>('[data-role="range-min"]')!;
    minInput.value = "99"; // above max
    minInput.dispatchEvent(new Event("change"));
    await settled();
    expect(statsCalls().length).toBe(before);
    expect(document.querySelector(".status")!.textContent).toMatch(/invalid range/);
  });
});

describe("ecdf view", () => {
  it("hides a curve when its legend entry is clicked, without refetching", async () => {
    const { root } = await mountOnHash(`#session=${SESSION}&tab=ecdf&func=19&dim=16`);
    const curvesBefore = calls.filter((u) => u.includes("/ecdf")).length;
    expect(curvesBefore).toBe(1);

    const path = root.querySelector<SVGPathElement>('path.curve[data-series="RLS"]')!;
    expect(path.style.display).not.toBe("none");
    const legend = root.querySelector<SVGGElement>('.legend-item[data-series="RLS"]')!;
    legend.dispatchEvent(new Event("click"));
    await settled();

    expect(path.style.display).toBe("none");
    expect(calls.filter((u) => u.includes("/ecdf")).length).toBe(curvesBefore);
    expect(window.location.hash).toContain("hidden=RLS");
  });

  it("sends the per-function target map after an editor apply", async () => {
    const { root } = await mountOnHash(`#session=${SESSION}&tab=ecdf&func=19&dim=16`);
    const area = root.querySelector<HTMLTextAreaElement>('[data-role="target-map-input"]')!;
    area.value = "19: 30, 32";
    root.querySelector<HTMLButtonElement>('[data-role="target-map-apply"]')!.click();
    await settled();
    const last = calls.filter((u) => u.includes("/ecdf")).pop()!;
    const params = new URL("http://x" + last).searchParams;
    expect(JSON.parse(params.get("target_map")!)).toEqual({ "19": [30, 32] });
  });
});

describe("URL round trip", () => {
  it("restores the same rendered view from the fragment", async () => {
    const first = await mountOnHash(`#session=${SESSION}&tab=stats&func=19&dim=16`);
    const maxInput = first.root.querySelector<HTMLInputElement>('[data-role="range-max"]')!;
    maxInput.value = "16";
    maxInput.dispatchEvent(new Event("change"));
    await settled();
    const minInput = first.root.querySelector<HTMLInputElement>('[data-role="range-min"]')!;
    minInput.value = "4";
    minInput.dispatchEvent(new Event("change"));
    await settled();
    const fragment = window.location.hash;
    expect(fragment).toContain("min=4");
    const firstTable = first.root.querySelector(".content")!.innerHTML;
    const firstState = JSON.parse(JSON.stringify(first.app.state));
    first.root.remove();

    const second = await mountOnHash(fragment);
    expect(JSON.parse(JSON.stringify(second.app.state))).toEqual(firstState);
    expect(second.root.querySelector(".content")!.innerHTML).toBe(firstTable);
    expect(second.root.querySelector<HTMLInputElement>('[data-role="range-min"]')!.value).toBe("4");
    expect(
      second.root.querySelector<HTMLButtonElement>('.tabs button[data-tab="stats"]')!.className,
    ).toContain("active");
  });
});

describe("upload flow", () => {
  it("creates a session and renders the overview", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
        const url = String(input);
        calls.push(url);
        if (url === "/api/sessions" && init?.method === "POST") {
          return jsonResponse({ sessionId: SESSION, summary: SUMMARY });
        }
        if (url.split("?")[0].endsWith("/overview")) return jsonResponse(OVERVIEW);
        return jsonResponse(STATS);
      }),
    );
    window.location.hash = "";
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = new App(root, new ApiClient(""));
    mounted.push(app);
    await app.init();

    const input = root.querySelector<HTMLInputElement>('[data-role="archive-input"]')!;
    const file = new File([new Uint8Array([80, 75, 3, 4])], "runs.zip");
    Object.defineProperty(input, "files", { value: [file] });
    root.querySelector<HTMLButtonElement>('[data-role="upload-button"]')!.click();
    await settled();
    await settled();

    expect(app.state.sessionId).toBe(SESSION);
    expect(window.location.hash).toContain(`session=${SESSION}`);
    expect(root.querySelectorAll("tbody tr").length).toBe(2);
  });
});

describe("error surfacing", () => {
  it("shows the service detail message inline", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async (input: RequestInfo | URL) => {
        const url = String(input);
        if (url === `/api/sessions/${SESSION}`) {
          return jsonResponse({ sessionId: SESSION, summary: SUMMARY });
        }
        return new Response(JSON.stringify({ detail: "NoMatchingData: nothing here" }), {
          status: 422,
        });
      }),
    );
    await mountOnHash(`#session=${SESSION}&tab=stats&func=99&dim=16`);
    expect(document.querySelector(".status")!.textContent).toMatch(/NoMatchingData/);
  });
});

describe("color scheme picker", () => {
  it("applies and persists the chosen scheme", async () => {
    window.localStorage.removeItem("ioha-color-scheme");
    const { root } = await mountOnHash(`#session=${SESSION}&tab=overview&func=19&dim=16`);
    const picker = root.querySelector<HTMLSelectElement>('[data-role="color-scheme"]')!;
    expect(document.body.dataset.theme).toBe("light");
    picker.value = "dark";
    picker.dispatchEvent(new Event("change"));
    expect(document.body.dataset.theme).toBe("dark");
    expect(window.localStorage.getItem("ioha-color-scheme")).toBe("dark");

    const again = await mountOnHash(`#session=${SESSION}&tab=overview&func=19&dim=16`);
    expect(again.root.querySelector<HTMLSelectElement>('[data-role="color-scheme"]')!.value).toBe("dark");
    expect(document.body.dataset.theme).toBe("dark");
  });
});
