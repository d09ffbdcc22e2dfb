/** @vitest-environment jsdom */
import { ChildProcess, spawn } from "node:child_process";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { installAppShell, texts, waitFor } from "./dom.js";

const PORT = 19000 + Math.floor(Math.random() * 20000);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let serverLog = "";
let app: App;

async function serverUp(): Promise<void> {
  const deadline = Date.now() + 25000;
  while (Date.now() < deadline) {
    try {
      const probe = await fetch(`${BASE}/api/series?q=&size=1`);
      if (probe.ok) {
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error(`backend never came up on ${PORT}\n${serverLog}`);
}

function searchBox(): HTMLInputElement {
  return document.getElementById("search") as HTMLInputElement;
}

function hitCount(): string {
  return document.getElementById("hit-count")?.textContent ?? "";
}

function cards(): HTMLElement[] {
  return [...document.querySelectorAll<HTMLElement>("#gallery .card")];
}

function facetRow(field: string, value: string): HTMLElement {
  const section = document.querySelector(`.facet-chart[data-field="${field}"]`);
  if (!section) {
    throw new Error(`no chart for ${field}`);
  }
  for (const row of section.querySelectorAll<HTMLElement>(".facet-row")) {
    if (row.querySelector(".facet-label")?.textContent === value) {
      return row;
    }
  }
  throw new Error(`no ${value} bucket under ${field}`);
}

async function apiTotal(query: string): Promise<number> {
  const response = await fetch(`${BASE}/api/series?q=${encodeURIComponent(query)}&size=1`);
  expect(response.ok).toBe(true);
  return (await response.json()).total;
}

async function resetView(): Promise<void> {
  (document.getElementById("clear-selection") as HTMLButtonElement).click();
  app.setQuery("");
  await waitFor(() => hitCount() === "15 series" && cards().length === 15, "full corpus view");
  await waitFor(
    () => document.querySelectorAll(".facet-chart .facet-row").length > 0,
    "dashboard charts",
  );
}

beforeAll(async () => {
  server = spawn("python3", [join(process.cwd(), "tests", "seed_server.py"), "--port", String(PORT)], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  server.stdout?.on("data", (chunk) => (serverLog += chunk));
  server.stderr?.on("data", (chunk) => (serverLog += chunk));
  const died = new Promise<never>((_, reject) => {
    server.on("exit", (code) => reject(new Error(`seed server exited ${code}\n${serverLog}`)));
  });
  await Promise.race([serverUp(), died]);

  installAppShell();
  app = new App(new ApiClient(BASE));
  app.mount();
  await waitFor(() => cards().length > 0, "initial gallery");
});

afterAll(() => {
  server?.kill();
});

describe("gallery against the seeded backend", () => {
  it("shows the seeded hit count", async () => {
    await resetView();
    expect(hitCount()).toBe("15 series");
    expect(cards()).toHaveLength(15);
    expect(await apiTotal("")).toBe(15);
  });

  it("narrows on a facet click and restores the exact query on toggle", async () => {
    await resetView();
    app.setQuery("Modality:CT");
    await waitFor(() => hitCount() === "12 series", "CT subset");
    await waitFor(() => {
      try {
        return facetRow("ConvolutionKernel", "B30f") !== null;
      } catch {
        return false;
      }
    }, "kernel chart");

    facetRow("ConvolutionKernel", "B30f").click();
    expect(searchBox().value).toBe('Modality:CT AND ConvolutionKernel:"B30f"');
    await waitFor(() => hitCount() === "9 series", "narrowed result");
    expect(cards()).toHaveLength(9);
    expect(await apiTotal('Modality:CT AND ConvolutionKernel:"B30f"')).toBe(9);

    await waitFor(
      () => facetRow("ConvolutionKernel", "B30f").classList.contains("active"),
      "active bucket marker",
    );
    facetRow("ConvolutionKernel", "B30f").click();
    expect(searchBox().value).toBe("Modality:CT");
    await waitFor(() => hitCount() === "12 series", "restored result");
  });

  it("bulk-tags three selected cards and the chips match a fresh API read", async () => {
    await resetView();
    const picked = cards().slice(0, 3);
    const uids = picked.map((card) => card.dataset.uid as string);
    for (const card of picked) {
      (card.querySelector(".card-check") as HTMLInputElement).click();
    }
    await waitFor(
      () => document.getElementById("selection-count")?.textContent === "3 selected",
      "selection counter",
    );

    document.body.dispatchEvent(new KeyboardEvent("keydown", { key: "t", bubbles: true }));
    const input = document.querySelector(".tag-input") as HTMLInputElement;
    expect(input.disabled).toBe(false);
    input.value = "reviewed";
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));

    await waitFor(() => document.querySelector(".modal-overlay") === null, "dialog closing");
    await waitFor(
      () =>
        uids.every((uid) => {
          const card = document.querySelector(`.card[data-uid="${uid}"]`);
          return card !== null && texts(".chip", card).includes("reviewed");
        }),
      "chips on tagged cards",
    );

    for (const uid of uids) {
      const response = await fetch(`${BASE}/api/series/${encodeURIComponent(uid)}`);
      expect(response.ok).toBe(true);
      const apiTags: string[] = (await response.json()).tags;
      expect(apiTags).toContain("reviewed");
      const card = document.querySelector(`.card[data-uid="${uid}"]`) as HTMLElement;
      expect(texts(".chip", card)).toEqual(apiTags);
    }
    const untouched = cards().filter((card) => !uids.includes(card.dataset.uid as string));
    for (const card of untouched) {
      expect(texts(".chip", card)).not.toContain("reviewed");
    }
  });

  it("suggests the stored tag with its count while typing in the tag dialog", async () => {
    await resetView();
    (cards()[0].querySelector(".card-check") as HTMLInputElement).click();
    document.body.dispatchEvent(new KeyboardEvent("keydown", { key: "t", bubbles: true }));
    const input = document.querySelector(".tag-input") as HTMLInputElement;
    input.value = "rev";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    await waitFor(() => document.querySelectorAll(".suggestions li").length > 0, "tag suggestions");
    expect(document.querySelector(".suggestions li")?.textContent).toBe("reviewed (3)");
    (document.querySelector(".modal-overlay") as HTMLElement).remove();
  });

  it("downloads a CSV whose bytes equal the API response", async () => {
    await resetView();
    let captured: Blob | null = null;
    (URL as unknown as { createObjectURL: (b: Blob) => string }).createObjectURL = (blob) => {
      captured = blob;
      return "blob:capture";
    };
    (URL as unknown as { revokeObjectURL: (u: string) => void }).revokeObjectURL = () => undefined;

    const section = document.querySelector('.facet-chart[data-field="ConvolutionKernel"]');
    (section?.querySelector(".csv-button") as HTMLButtonElement).click();
    await waitFor(() => captured !== null, "captured csv blob");

    const downloaded = new Uint8Array(await (captured as unknown as Blob).arrayBuffer());
    const direct = await fetch(`${BASE}/api/aggregate.csv?q=&field=ConvolutionKernel`);
    expect(direct.ok).toBe(true);
    const expected = new Uint8Array(await direct.arrayBuffer());

    expect(downloaded.length).toBeGreaterThan(0);
    expect([...downloaded]).toEqual([...expected]);
    const text = new TextDecoder().decode(downloaded);
    expect(text.startsWith("value,count\n")).toBe(true);
    expect(text).toContain("B30f,9");
  });

  it("opens a detail pane that scrolls the advertised slice range", async () => {
    await resetView();
    const multi = document.querySelector('.card[data-uid="1.2.826.0.1.901.0"]') as HTMLElement;
    multi.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await waitFor(() => document.querySelector("#sidebar .scroller") !== null, "detail pane");

    const pane = document.querySelector("#sidebar .scroller") as HTMLElement;
    expect(pane.querySelector(".slice-counter")?.textContent).toBe("1 / 4");
    for (let i = 0; i < 6; i++) {
      pane.dispatchEvent(new WheelEvent("wheel", { deltaY: 120, bubbles: true, cancelable: true }));
    }
    expect(pane.dataset.position).toBe("3");
    expect(pane.querySelector(".slice-counter")?.textContent).toBe("4 / 4");

    const search = document.querySelector(".meta-search") as HTMLInputElement;
    search.value = "kernel";
    search.dispatchEvent(new Event("input", { bubbles: true }));
    expect(texts(".meta-key", document.querySelector("#sidebar") as HTMLElement)).toEqual([
      "ConvolutionKernel",
    ]);

    (document.querySelector(".close-button") as HTMLButtonElement).click();
    await waitFor(() => document.querySelector(".facet-chart") !== null, "dashboard restored");
  });
});
