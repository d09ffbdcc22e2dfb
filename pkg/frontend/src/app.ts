/** Application controller: owns query, selection, columns, and sidebar state. */

import { AggregateResponse, ApiClient, ApiError, RequestGate, SearchResponse } from "./api.js";
import { loadColumns, saveColumns } from "./columns.js";
import { DASHBOARD_FIELDS, renderDashboard } from "./dashboard.js";
import { renderDetail } from "./detail.js";
import { openDatasetDialog, openTagDialog } from "./dialogs.js";
import { renderGallery } from "./gallery.js";
import { applyCompletion, completableTail, hasFilter, toggleFilter } from "./query.js";
import { clearSelection, EMPTY_SELECTION, Selection, selectRange, toggleOne } from "./selection.js";
import { showRetryBanner, toast } from "./toast.js";

type SidebarMode = { kind: "dashboard" } | { kind: "detail"; uid: string };

const PAGE_SIZE = 60;

function mustGet(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function isTyping(ev: KeyboardEvent): boolean {
  const target = ev.target;
  return (
    target instanceof HTMLInputElement ||
    target instanceof HTMLTextAreaElement ||
    target instanceof HTMLSelectElement
  );
}

export class App {
  readonly api: ApiClient;
  private query = "";
  private from = 0;
  private selection: Selection = EMPTY_SELECTION;
  private columns: string[];
  private sidebar: SidebarMode = { kind: "dashboard" };
  private lastResponse: SearchResponse | null = null;

  private searchGate = new RequestGate();
  private aggregateGate = new RequestGate();
  private suggestGate = new RequestGate();

  private searchInput!: HTMLInputElement;
  private galleryHost!: HTMLElement;
  private sidebarHost!: HTMLElement;

  constructor(api: ApiClient) {
    this.api = api;
    this.columns = loadColumns();
  }

  mount(): void {
    this.searchInput = mustGet("search") as HTMLInputElement;
    this.galleryHost = mustGet("gallery");
    this.sidebarHost = mustGet("sidebar");

    this.searchInput.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        ev.preventDefault();
        this.setQuery(this.searchInput.value);
      }
    });
    this.searchInput.addEventListener("input", () => this.suggest());
    mustGet("search-go").addEventListener("click", () => this.setQuery(this.searchInput.value));

    mustGet("prev").addEventListener("click", () => this.page(-1));
    mustGet("next").addEventListener("click", () => this.page(1));

    mustGet("tag-button").addEventListener("click", () => this.openTags());
    mustGet("dataset-button").addEventListener("click", () => this.openDatasets());
    mustGet("clear-selection").addEventListener("click", () => {
      this.selection = clearSelection();
      this.renderResults();
    });
    mustGet("columns-button").addEventListener("click", () => this.toggleColumnEditor());

    document.addEventListener("keydown", (ev) => {
      if (isTyping(ev) || ev.ctrlKey || ev.metaKey || ev.altKey) {
        return;
      }
      if (ev.key === "t") {
        ev.preventDefault();
        this.openTags();
      } else if (ev.key === "d") {
        ev.preventDefault();
        this.openDatasets();
      } else if (ev.key === "/") {
        ev.preventDefault();
        this.searchInput.focus();
      }
    });

    this.refresh();
  }

  currentQuery(): string {
    return this.query;
  }

  selectedUids(): string[] {
    return [...this.selection.selected].sort();
  }

  setQuery(query: string): void {
    this.query = query.trim();
    this.searchInput.value = this.query;
    this.from = 0;
    mustGet("search-suggestions").replaceChildren();
    this.refresh();
  }

  refresh(): void {
    this.runSearch();
    this.refreshSidebar();
  }

  private refreshSidebar(): void {
    if (this.sidebar.kind === "dashboard") {
      this.runAggregate();
    } else {
      this.openDetail(this.sidebar.uid);
    }
  }

  private runSearch(): void {
    const ticket = this.searchGate.issue();
    this.api
      .search(this.query, this.from, PAGE_SIZE)
      .then((response) => {
        if (!this.searchGate.isCurrent(ticket)) {
          return;
        }
        this.lastResponse = response;
        this.renderResults();
      })
      .catch((err) => {
        if (!this.searchGate.isCurrent(ticket)) {
          return;
        }
        const message = err instanceof ApiError ? err.message : "Search request failed";
        showRetryBanner(this.galleryHost, message, () => this.runSearch());
      });
  }

  private renderResults(): void {
    const response = this.lastResponse;
    if (!response) {
      return;
    }
    renderGallery(this.galleryHost, this.api, response.hits, this.columns, this.selection.selected, {
      onOpen: (uid) => this.toggleDetail(uid),
      onToggleSelect: (uid) => {
        this.selection = toggleOne(this.selection, uid);
        this.renderResults();
      },
      onRangeSelect: (uid) => {
        const order = response.hits.map((hit) => hit.series_uid);
        this.selection = selectRange(this.selection, order, uid);
        this.renderResults();
      },
    });

    mustGet("hit-count").textContent = `${response.total} series`;
    const last = Math.min(response.from + response.hits.length, response.total);
    mustGet("page-note").textContent =
      response.total === 0 ? "" : `${response.from + 1}–${last} of ${response.total}`;
    (mustGet("prev") as HTMLButtonElement).disabled = response.from === 0;
    (mustGet("next") as HTMLButtonElement).disabled = last >= response.total;
    mustGet("selection-count").textContent =
      this.selection.selected.size === 0 ? "" : `${this.selection.selected.size} selected`;

    const warnings = mustGet("warnings");
    warnings.replaceChildren();
    for (const warning of response.warnings) {
      const note = document.createElement("div");
      note.className = "warning";
      note.textContent = warning;
      warnings.appendChild(note);
    }
  }

  private runAggregate(): void {
    const ticket = this.aggregateGate.issue();
    this.api
      .aggregate(this.query, DASHBOARD_FIELDS)
      .then((aggregate: AggregateResponse) => {
        if (!this.aggregateGate.isCurrent(ticket) || this.sidebar.kind !== "dashboard") {
          return;
        }
        renderDashboard(
          this.sidebarHost,
          this.api,
          this.query,
          aggregate,
          (field, value) => hasFilter(this.query, field, value),
          { onToggleFacet: (field, value) => this.setQuery(toggleFilter(this.query, field, value)) },
        );
      })
      .catch((err) => {
        if (!this.aggregateGate.isCurrent(ticket) || this.sidebar.kind !== "dashboard") {
          return;
        }
        const message = err instanceof ApiError ? err.message : "Aggregation request failed";
        showRetryBanner(this.sidebarHost, message, () => this.runAggregate());
      });
  }

  private toggleDetail(uid: string): void {
    if (this.sidebar.kind === "detail" && this.sidebar.uid === uid) {
      this.closeDetail();
    } else {
      this.sidebar = { kind: "detail", uid };
      this.openDetail(uid);
    }
  }

  private closeDetail(): void {
    this.sidebar = { kind: "dashboard" };
    this.runAggregate();
  }

  private openDetail(uid: string): void {
    this.api
      .series(uid)
      .then((detail) => {
        if (this.sidebar.kind !== "detail" || this.sidebar.uid !== uid) {
          return;
        }
        renderDetail(this.sidebarHost, this.api, detail, () => this.closeDetail());
      })
      .catch((err) => {
        if (err instanceof ApiError && err.status === 404) {
          toast(`Series ${uid} no longer exists`, "error");
          this.closeDetail();
        } else {
          showRetryBanner(this.sidebarHost, "Could not load series", () => this.openDetail(uid));
        }
      });
  }

  private page(direction: number): void {
    const total = this.lastResponse?.total ?? 0;
    const next = this.from + direction * PAGE_SIZE;
    if (next < 0 || next >= total) {
      return;
    }
    this.from = next;
    this.runSearch();
  }

  private openTags(): void {
    openTagDialog(this.api, this.selectedUids(), () => this.refresh());
  }

  private openDatasets(): void {
    openDatasetDialog(this.api, this.selectedUids(), () => this.refresh());
  }

  private suggest(): void {
    const host = mustGet("search-suggestions");
    const tail = completableTail(this.searchInput.value);
    if (!tail) {
      host.replaceChildren();
      return;
    }
    const ticket = this.suggestGate.issue();
    this.api
      .autocomplete(tail.field, tail.prefix)
      .then((completions) => {
        if (!this.suggestGate.isCurrent(ticket)) {
          return;
        }
        host.replaceChildren();
        for (const completion of completions) {
          const item = document.createElement("li");
          item.textContent = `${completion.value} (${completion.count})`;
          item.addEventListener("click", () => {
            this.searchInput.value = applyCompletion(this.searchInput.value, tail.field, completion.value);
            host.replaceChildren();
            this.searchInput.focus();
          });
          host.appendChild(item);
        }
      })
      .catch(() => host.replaceChildren());
  }

  private toggleColumnEditor(): void {
    const editor = mustGet("column-editor");
    if (editor.childElementCount > 0) {
      editor.replaceChildren();
      return;
    }
    const input = document.createElement("input");
    input.type = "text";
    input.value = this.columns.join(", ");
    const apply = document.createElement("button");
    apply.type = "button";
    apply.textContent = "Apply";
    apply.addEventListener("click", () => {
      this.columns = saveColumns(input.value.split(","));
      editor.replaceChildren();
      this.renderResults();
    });
    editor.append(input, apply);
    input.focus();
  }
}
