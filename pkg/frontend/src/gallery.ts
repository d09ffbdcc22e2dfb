/** Result grid: one card per search hit. */

import { ApiClient, SearchHit } from "./api.js";
import { displayValue } from "./charts.js";

export interface GalleryHandlers {
  /** Plain click on a card body. */
  onOpen: (uid: string) => void;
  /** Ctrl/cmd click, or checkbox click. */
  onToggleSelect: (uid: string) => void;
  /** Shift click. */
  onRangeSelect: (uid: string) => void;
}

const observer: IntersectionObserver | null =
  typeof IntersectionObserver === "undefined"
    ? null
    : new IntersectionObserver((entries, obs) => {
        for (const entry of entries) {
          if (!entry.isIntersecting) {
            continue;
          }
          const img = entry.target as HTMLImageElement;
          const src = img.dataset.src;
          if (src) {
            img.src = src;
            delete img.dataset.src;
          }
          obs.unobserve(img);
        }
      });

function thumbnail(api: ApiClient, uid: string): HTMLElement {
  const frame = document.createElement("div");
  frame.className = "thumb";
  const img = document.createElement("img");
  img.alt = "";
  img.addEventListener("error", () => {
    // Missing or unreadable pixels: swap in a placeholder glyph.
    const glyph = document.createElement("div");
    glyph.className = "thumb-placeholder";
    glyph.textContent = "∅";
    frame.replaceChildren(glyph);
  });
  const src = api.thumbnailUrl(uid);
  if (observer) {
    img.dataset.src = src;
    observer.observe(img);
  } else {
    img.src = src;
  }
  frame.appendChild(img);
  return frame;
}

function chipRow(tags: string[]): HTMLElement {
  const row = document.createElement("div");
  row.className = "chips";
  for (const tag of tags) {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.textContent = tag;
    row.appendChild(chip);
  }
  return row;
}

export function renderCard(
  api: ApiClient,
  hit: SearchHit,
  columns: string[],
  selected: boolean,
  handlers: GalleryHandlers,
): HTMLElement {
  const card = document.createElement("article");
  card.className = selected ? "card selected" : "card";
  card.dataset.uid = hit.series_uid;

  const check = document.createElement("input");
  check.type = "checkbox";
  check.className = "card-check";
  check.checked = selected;
  check.addEventListener("click", (ev) => {
    ev.stopPropagation();
    if (ev.shiftKey) {
      handlers.onRangeSelect(hit.series_uid);
    } else {
      handlers.onToggleSelect(hit.series_uid);
    }
  });
  card.appendChild(check);

  card.appendChild(thumbnail(api, hit.series_uid));

  const meta = document.createElement("div");
  meta.className = "card-meta";
  for (const column of columns) {
    const line = document.createElement("div");
    line.className = "meta-line";
    const label = document.createElement("span");
    label.className = "meta-label";
    label.textContent = column;
    const value = document.createElement("span");
    value.className = "meta-value";
    value.textContent = displayValue(hit, column);
    line.append(label, value);
    meta.appendChild(line);
  }
  card.appendChild(meta);

  card.appendChild(chipRow(hit.tags));

  card.addEventListener("click", (ev) => {
    if (ev.shiftKey) {
      handlers.onRangeSelect(hit.series_uid);
    } else if (ev.ctrlKey || ev.metaKey) {
      handlers.onToggleSelect(hit.series_uid);
    } else {
      handlers.onOpen(hit.series_uid);
    }
  });
  return card;
}

export function renderGallery(
  host: HTMLElement,
  api: ApiClient,
  hits: SearchHit[],
  columns: string[],
  selected: ReadonlySet<string>,
  handlers: GalleryHandlers,
): void {
  host.replaceChildren();
  if (hits.length === 0) {
    const empty = document.createElement("div");
    empty.className = "empty-note";
    empty.textContent = "No series match this query.";
    host.appendChild(empty);
    return;
  }
  for (const hit of hits) {
    host.appendChild(renderCard(api, hit, columns, selected.has(hit.series_uid), handlers));
  }
}
