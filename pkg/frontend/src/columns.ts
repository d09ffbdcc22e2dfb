/** Which metadata lines each gallery card shows, persisted in the browser. */

const STORAGE_KEY = "curator.columns";

export const DEFAULT_COLUMNS = ["Modality", "PatientID", "instance_count", "tags"];

type ColumnStore = Pick<Storage, "getItem" | "setItem">;

export function loadColumns(storage: ColumnStore = localStorage): string[] {
  try {
    const raw = storage.getItem(STORAGE_KEY);
    if (!raw) {
      return [...DEFAULT_COLUMNS];
    }
    const parsed = JSON.parse(raw);
    if (Array.isArray(parsed) && parsed.length > 0 && parsed.every((c) => typeof c === "string")) {
      return parsed;
    }
  } catch {
    // fall through to the default on any damage
  }
  return [...DEFAULT_COLUMNS];
}

/** Persist a new column list; empty lists are rejected to keep cards legible. */
export function saveColumns(columns: string[], storage: ColumnStore = localStorage): string[] {
  const cleaned = columns.map((c) => c.trim()).filter((c) => c.length > 0);
  if (cleaned.length === 0) {
    return loadColumns(storage);
  }
  storage.setItem(STORAGE_KEY, JSON.stringify(cleaned));
  return cleaned;
}
