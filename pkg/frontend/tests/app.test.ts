/** @vitest-environment jsdom */
import { beforeEach, describe, expect, it } from "vitest";
import { AggregateResponse, ApiClient, SearchHit, SearchResponse } from "../src/api.js";
import { App } from "../src/app.js";
import { installAppShell, waitFor } from "./dom.js";

interface Deferred<T> {
  promise: Promise<T>;
  resolve: (value: T) => void;
  reject: (reason: Error) => void;
}

function deferred<T>(): Deferred<T> {
  let resolve!: (value: T) => void;
  let reject!: (reason: Error) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

function hit(uid: string): SearchHit {
  return {
    series_uid: uid,
    study_uid: "1.2",
    patient_id: "P001",
    modality: "CT",
    fields: {},
    instance_count: 1,
    has_pixel_data: false,
    tags: [],
    anatomical_structures: [],
    body_part: null,
    ingest_time: 0,
    warnings: [],
    field_conflicts: {},
    score: 1,
  };
}

function results(uids: string[]): SearchResponse {
  return { total: uids.length, from: 0, size: 60, hits: uids.map(hit), warnings: [] };
}

const EMPTY_AGGREGATE: AggregateResponse = { fields: {}, warnings: [] };

class FakeApi {
  searches: Deferred<SearchResponse>[] = [];
  aggregates: Deferred<AggregateResponse>[] = [];
  searchQueries: string[] = [];

  search(q: string): Promise<SearchResponse> {
    this.searchQueries.push(q);
    const d = deferred<SearchResponse>();
    this.searches.push(d);
    return d.promise;
  }

  aggregate(): Promise<AggregateResponse> {
    const d = deferred<AggregateResponse>();
    this.aggregates.push(d);
    return d.promise;
  }

  autocomplete = async (): Promise<never[]> => [];

  thumbnailUrl(uid: string): string {
    return `http://fake/api/series/${uid}/thumbnail.png`;
  }

  sliceUrl(uid: string, position: number): string {
    return `http://fake/api/series/${uid}/slices/${position}.png`;
  }
}

function mountApp(): { app: App; api: FakeApi } {
  installAppShell();
  const api = new FakeApi();
  const app = new App(api as unknown as ApiClient);
  app.mount();
  return { app, api };
}

function hitCount(): string {
  return document.getElementById("hit-count")?.textContent ?? "";
}

beforeEach(() => {
  document.querySelectorAll(".modal-overlay").forEach((n) => n.remove());
});

describe("stale response handling", () => {
  it("discards a slow search result that a newer query superseded", async () => {
    const { app, api } = mountApp();
    expect(api.searches).toHaveLength(1);

    app.setQuery("Modality:CT");
    expect(api.searches).toHaveLength(2);

    api.searches[1].resolve(results(["new.1", "new.2"]));
    await waitFor(() => hitCount() === "2 series", "fresh result to render");

    api.searches[0].resolve(results(["stale.1"]));
    await new Promise((r) => setTimeout(r, 60));
    expect(hitCount()).toBe("2 series");
    expect(document.querySelectorAll(".card")).toHaveLength(2);
    expect(document.querySelector(".card")?.getAttribute("data-uid")).toBe("new.1");
  });
});

describe("failure handling", () => {
  it("shows an inline retry banner instead of a blank gallery, and retry recovers", async () => {
    const { api } = mountApp();
    api.searches[0].reject(new Error("backend down"));
    await waitFor(() => document.querySelector("#gallery .retry-banner") !== null, "retry banner");
    expect(document.querySelector("#gallery .retry-banner button")?.textContent).toBe("Retry");

    (document.querySelector("#gallery .retry-banner button") as HTMLButtonElement).click();
    expect(api.searches).toHaveLength(2);
    api.searches[1].resolve(results(["1.2.0"]));
    await waitFor(() => document.querySelectorAll(".card").length === 1, "recovered gallery");
    expect(document.querySelector("#gallery .retry-banner")).toBeNull();
  });

  it("banners the dashboard independently of the gallery", async () => {
    const { api } = mountApp();
    api.searches[0].resolve(results([]));
    api.aggregates[0].reject(new Error("aggregate down"));
    await waitFor(() => document.querySelector("#sidebar .retry-banner") !== null, "sidebar banner");
    expect(document.querySelector("#gallery .retry-banner")).toBeNull();
  });
});

describe("dashboard", () => {
  it("renders a no-data placeholder per chart on an empty index", async () => {
    const { api } = mountApp();
    api.searches[0].resolve(results([]));
    api.aggregates[0].resolve(EMPTY_AGGREGATE);
    await waitFor(() => document.querySelectorAll(".facet-chart").length > 0, "charts");

    const charts = document.querySelectorAll(".facet-chart");
    expect(charts).toHaveLength(5);
    for (const chart of charts) {
      expect(chart.querySelector(".empty-note")?.textContent).toBe("no data");
    }
  });

  it("toggles a facet filter into and out of the query string", async () => {
    const { app, api } = mountApp();
    api.searches[0].resolve(results(["a", "b"]));
    api.aggregates[0].resolve({
      fields: { Modality: { buckets: [{ value: "CT", count: 2 }], missing_count: 0 } },
      warnings: [],
    });
    await waitFor(() => document.querySelector(".facet-row.clickable") !== null, "facet row");

    (document.querySelector(".facet-row.clickable") as HTMLElement).click();
    expect(app.currentQuery()).toBe('Modality:"CT"');
    expect((document.getElementById("search") as HTMLInputElement).value).toBe('Modality:"CT"');

    api.searches[1].resolve(results(["a"]));
    api.aggregates[1].resolve({
      fields: { Modality: { buckets: [{ value: "CT", count: 2 }], missing_count: 0 } },
      warnings: [],
    });
    await waitFor(
      () => document.querySelector(".facet-row.active") !== null,
      "active facet marker",
    );

    (document.querySelector(".facet-row.clickable") as HTMLElement).click();
    expect(app.currentQuery()).toBe("");
  });
});

describe("keyboard shortcuts", () => {
  it("opens the tag dialog on t and focuses search on /", async () => {
    mountApp();
    document.body.dispatchEvent(new KeyboardEvent("keydown", { key: "t", bubbles: true }));
    const overlay = document.querySelector(".modal-overlay") as HTMLElement;
    expect(overlay.dataset.dialog).toBe("tags");
    expect(overlay.querySelector(".dialog-hint")).not.toBeNull();
    overlay.remove();

    document.body.dispatchEvent(new KeyboardEvent("keydown", { key: "/", bubbles: true }));
    expect(document.activeElement?.id).toBe("search");
  });

  it("ignores shortcuts while the user is typing", () => {
    mountApp();
    const search = document.getElementById("search") as HTMLInputElement;
    search.dispatchEvent(new KeyboardEvent("keydown", { key: "t", bubbles: true }));
    expect(document.querySelector(".modal-overlay")).toBeNull();
  });
});
