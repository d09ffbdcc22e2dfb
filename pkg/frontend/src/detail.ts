/** Series detail pane: slice scroller plus a searchable metadata table. */

import { ApiClient, SeriesDetail } from "./api.js";

interface MetaRow {
  key: string;
  value: string;
}

export function metadataRows(detail: SeriesDetail): MetaRow[] {
  const rows: MetaRow[] = [
    { key: "SeriesInstanceUID", value: detail.series_uid },
    { key: "StudyInstanceUID", value: detail.study_uid },
    { key: "PatientID", value: detail.patient_id },
    { key: "Modality", value: detail.modality },
    { key: "instance_count", value: String(detail.instance_count) },
    { key: "body_part", value: detail.body_part ?? "" },
    { key: "tags", value: detail.tags.join(", ") },
    { key: "anatomical_structures", value: detail.anatomical_structures.join(", ") },
  ];
  const named = Object.keys(detail.fields).sort();
  for (const name of named) {
    rows.push({ key: name, value: detail.fields[name].values.map(String).join(", ") });
  }
  return rows;
}

export function filterRows(rows: MetaRow[], needle: string): MetaRow[] {
  const folded = needle.trim().toLowerCase();
  if (!folded) {
    return rows;
  }
  return rows.filter(
    (row) => row.key.toLowerCase().includes(folded) || row.value.toLowerCase().includes(folded),
  );
}

function renderTable(body: HTMLElement, rows: MetaRow[]): void {
  body.replaceChildren();
  for (const row of rows) {
    const tr = document.createElement("tr");
    const key = document.createElement("td");
    key.className = "meta-key";
    key.textContent = row.key;
    const value = document.createElement("td");
    value.className = "meta-value";
    value.textContent = row.value;
    tr.append(key, value);
    body.appendChild(tr);
  }
}

function renderScroller(api: ApiClient, detail: SeriesDetail): HTMLElement {
  const pane = document.createElement("div");
  pane.className = "scroller";
  pane.tabIndex = 0;

  if (detail.slice_count === 0) {
    const note = document.createElement("div");
    note.className = "empty-note";
    note.textContent = "No pixel data in this series.";
    pane.appendChild(note);
    return pane;
  }

  let position = 0;
  const img = document.createElement("img");
  img.className = "slice";
  img.alt = "";
  const counter = document.createElement("div");
  counter.className = "slice-counter";

  const show = () => {
    img.src = api.sliceUrl(detail.series_uid, position);
    counter.textContent = `${position + 1} / ${detail.slice_count}`;
    pane.dataset.position = String(position);
  };
  const step = (delta: number) => {
    const next = Math.min(detail.slice_count - 1, Math.max(0, position + delta));
    if (next !== position) {
      position = next;
      show();
    }
  };

  pane.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    step(ev.deltaY > 0 ? 1 : -1);
  });
  pane.addEventListener("keydown", (ev) => {
    if (ev.key === "ArrowDown" || ev.key === "ArrowRight") {
      ev.preventDefault();
      step(1);
    } else if (ev.key === "ArrowUp" || ev.key === "ArrowLeft") {
      ev.preventDefault();
      step(-1);
    }
  });

  pane.append(img, counter);
  show();
  return pane;
}

export function renderDetail(
  host: HTMLElement,
  api: ApiClient,
  detail: SeriesDetail,
  onClose: () => void,
): void {
  host.replaceChildren();

  const head = document.createElement("header");
  head.className = "detail-head";
  const title = document.createElement("h3");
  title.textContent = detail.series_uid;
  const close = document.createElement("button");
  close.type = "button";
  close.className = "close-button";
  close.textContent = "×";
  close.addEventListener("click", onClose);
  head.append(title, close);
  host.appendChild(head);

  host.appendChild(renderScroller(api, detail));

  const search = document.createElement("input");
  search.type = "search";
  search.className = "meta-search";
  search.placeholder = "Filter metadata";
  host.appendChild(search);

  const table = document.createElement("table");
  table.className = "meta-table";
  const body = document.createElement("tbody");
  table.appendChild(body);
  host.appendChild(table);

  const rows = metadataRows(detail);
  renderTable(body, rows);
  search.addEventListener("input", () => renderTable(body, filterRows(rows, search.value)));
}
