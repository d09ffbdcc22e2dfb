/** Facet dashboard: one bar chart per field, filtered by the current query. */

import { AggregateResponse, ApiClient } from "./api.js";
import { Bar, barsFor } from "./charts.js";
import { canFilter } from "./query.js";
import { toast } from "./toast.js";

export const DASHBOARD_FIELDS = [
  "Modality",
  "Manufacturer",
  "ConvolutionKernel",
  "body_part",
  "tags",
];

export interface DashboardHandlers {
  onToggleFacet: (field: string, value: string) => void;
}

function saveBlob(bytes: Uint8Array, filename: string): void {
  if (typeof URL.createObjectURL !== "function") {
    return;
  }
  const url = URL.createObjectURL(new Blob([bytes as BlobPart], { type: "text/csv" }));
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

function renderBar(field: string, bar: Bar, active: boolean, handlers: DashboardHandlers): HTMLElement {
  const row = document.createElement("div");
  row.className = "facet-row";
  const label = document.createElement("span");
  label.className = "facet-label";
  label.textContent = bar.value === "__missing__" ? "(missing)" : bar.value;
  const track = document.createElement("div");
  track.className = "facet-track";
  const fill = document.createElement("div");
  fill.className = "facet-fill";
  fill.style.width = `${(bar.fraction * 100).toFixed(2)}%`;
  track.appendChild(fill);
  const count = document.createElement("span");
  count.className = "facet-count";
  count.textContent = String(bar.count);
  row.append(label, track, count);

  if (canFilter(bar.value)) {
    row.classList.add("clickable");
    if (active) {
      row.classList.add("active");
    }
    row.addEventListener("click", () => handlers.onToggleFacet(field, bar.value));
  }
  return row;
}

function renderChart(
  api: ApiClient,
  query: string,
  field: string,
  bars: Bar[],
  isActive: (field: string, value: string) => boolean,
  handlers: DashboardHandlers,
): HTMLElement {
  const section = document.createElement("section");
  section.className = "facet-chart";
  section.dataset.field = field;

  const head = document.createElement("header");
  const title = document.createElement("h3");
  title.textContent = field;
  const download = document.createElement("button");
  download.type = "button";
  download.className = "csv-button";
  download.textContent = "CSV";
  download.addEventListener("click", () => {
    api
      .aggregateCsv(query, field)
      .then((bytes) => saveBlob(bytes, `${field}.csv`))
      .catch(() => toast(`CSV export failed for ${field}`, "error"));
  });
  head.append(title, download);
  section.appendChild(head);

  if (bars.length === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-note";
    empty.textContent = "no data";
    section.appendChild(empty);
    return section;
  }
  for (const bar of bars) {
    section.appendChild(renderBar(field, bar, isActive(field, bar.value), handlers));
  }
  return section;
}

export function renderDashboard(
  host: HTMLElement,
  api: ApiClient,
  query: string,
  aggregate: AggregateResponse,
  isActive: (field: string, value: string) => boolean,
  handlers: DashboardHandlers,
): void {
  host.replaceChildren();
  for (const field of DASHBOARD_FIELDS) {
    const facet = aggregate.fields[field];
    const bars = facet ? barsFor(facet.buckets, facet.missing_count) : [];
    host.appendChild(renderChart(api, query, field, bars, isActive, handlers));
  }
}
