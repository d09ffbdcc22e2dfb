/** Modal dialogs for bulk tagging and dataset membership. */

import { ApiClient } from "./api.js";
import { toast } from "./toast.js";

function modalShell(title: string): { overlay: HTMLElement; body: HTMLElement; close: () => void } {
  const overlay = document.createElement("div");
  overlay.className = "modal-overlay";
  const modal = document.createElement("div");
  modal.className = "modal";
  const head = document.createElement("header");
  const heading = document.createElement("h3");
  heading.textContent = title;
  head.appendChild(heading);
  const body = document.createElement("div");
  body.className = "modal-body";
  modal.append(head, body);
  overlay.appendChild(modal);

  const close = () => overlay.remove();
  overlay.addEventListener("click", (ev) => {
    if (ev.target === overlay) {
      close();
    }
  });
  overlay.addEventListener("keydown", (ev) => {
    if (ev.key === "Escape") {
      close();
    }
  });
  document.body.appendChild(overlay);
  return { overlay, body, close };
}

function reportOutcome(verb: string, ok: number, failed: number): void {
  if (failed > 0) {
    toast(`${failed} series could not be ${verb}`, "error");
  }
  if (ok > 0) {
    toast(`${verb} ${ok} series`.replace(/^./, (c) => c.toUpperCase()));
  }
}

export function openTagDialog(api: ApiClient, uids: string[], onApplied: () => void): HTMLElement {
  const { overlay, body, close } = modalShell(`Tag ${uids.length} selected`);
  overlay.dataset.dialog = "tags";

  if (uids.length === 0) {
    const hint = document.createElement("p");
    hint.className = "dialog-hint";
    hint.textContent = "Select at least one series first.";
    body.appendChild(hint);
  }

  const input = document.createElement("input");
  input.type = "text";
  input.className = "tag-input";
  input.placeholder = "Tag name";
  input.disabled = uids.length === 0;
  body.appendChild(input);

  const suggestions = document.createElement("ul");
  suggestions.className = "suggestions";
  body.appendChild(suggestions);

  input.addEventListener("input", () => {
    const prefix = input.value.trim();
    if (!prefix) {
      suggestions.replaceChildren();
      return;
    }
    api
      .autocomplete("tags", prefix)
      .then((completions) => {
        suggestions.replaceChildren();
        for (const completion of completions) {
          const item = document.createElement("li");
          item.textContent = `${completion.value} (${completion.count})`;
          item.dataset.value = completion.value;
          item.addEventListener("click", () => {
            input.value = completion.value;
            suggestions.replaceChildren();
            input.focus();
          });
          suggestions.appendChild(item);
        }
      })
      .catch(() => suggestions.replaceChildren());
  });

  const apply = document.createElement("button");
  apply.type = "button";
  apply.className = "apply-button";
  apply.textContent = "Apply";
  apply.disabled = uids.length === 0;
  body.appendChild(apply);

  const submit = () => {
    const tags = input.value
      .split(",")
      .map((part) => part.trim())
      .filter((part) => part.length > 0);
    if (tags.length === 0) {
      return;
    }
    api
      .bulkTag(uids, tags, [])
      .then((report) => {
        const ok = report.filter((entry) => entry.status === "ok").length;
        reportOutcome("tagged", ok, report.length - ok);
        close();
        onApplied();
      })
      .catch(() => toast("Tagging failed", "error"));
  };
  apply.addEventListener("click", submit);
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") {
      ev.preventDefault();
      submit();
    }
  });

  input.focus();
  return overlay;
}

export function openDatasetDialog(api: ApiClient, uids: string[], onApplied: () => void): HTMLElement {
  const { overlay, body, close } = modalShell(`Add ${uids.length} selected to dataset`);
  overlay.dataset.dialog = "datasets";

  if (uids.length === 0) {
    const hint = document.createElement("p");
    hint.className = "dialog-hint";
    hint.textContent = "Select at least one series first.";
    body.appendChild(hint);
  }

  const picker = document.createElement("select");
  picker.className = "dataset-picker";
  const none = document.createElement("option");
  none.value = "";
  none.textContent = "(create new)";
  picker.appendChild(none);
  body.appendChild(picker);

  api
    .datasets()
    .then((list) => {
      for (const dataset of list) {
        const option = document.createElement("option");
        option.value = dataset.id;
        option.textContent = `${dataset.name} (${dataset.size})`;
        picker.appendChild(option);
      }
    })
    .catch(() => toast("Could not load datasets", "error"));

  const name = document.createElement("input");
  name.type = "text";
  name.className = "dataset-name";
  name.placeholder = "New dataset name";
  body.appendChild(name);

  const apply = document.createElement("button");
  apply.type = "button";
  apply.className = "apply-button";
  apply.textContent = "Add";
  apply.disabled = uids.length === 0;
  body.appendChild(apply);

  const submit = async () => {
    try {
      let id = picker.value;
      if (!id) {
        const label = name.value.trim();
        if (!label) {
          toast("Pick a dataset or name a new one", "error");
          return;
        }
        const created = await api.createDataset(label);
        id = created.id;
      }
      const outcome = await api.addToDataset(id, uids);
      reportOutcome("added", outcome.added, outcome.ignored.length);
      close();
      onApplied();
    } catch (err) {
      toast(err instanceof Error ? err.message : "Dataset update failed", "error");
    }
  };
  apply.addEventListener("click", () => {
    void submit();
  });
  name.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") {
      ev.preventDefault();
      void submit();
    }
  });

  return overlay;
}
