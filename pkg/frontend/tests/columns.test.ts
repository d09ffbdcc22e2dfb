import { describe, expect, it } from "vitest";
import { DEFAULT_COLUMNS, loadColumns, saveColumns } from "../src/columns.js";

function fakeStorage(): { getItem(k: string): string | null; setItem(k: string, v: string): void } {
  const bag = new Map<string, string>();
  return {
    getItem: (k) => bag.get(k) ?? null,
    setItem: (k, v) => void bag.set(k, v),
  };
}

describe("column persistence", () => {
  it("falls back to the defaults on first run", () => {
    expect(loadColumns(fakeStorage())).toEqual(DEFAULT_COLUMNS);
  });

  it("round-trips a saved configuration", () => {
    const storage = fakeStorage();
    saveColumns(["Modality", "SliceThickness"], storage);
    expect(loadColumns(storage)).toEqual(["Modality", "SliceThickness"]);
  });

  it("trims entries and drops blanks", () => {
    const storage = fakeStorage();
    expect(saveColumns([" Modality ", "", "  ", "tags"], storage)).toEqual(["Modality", "tags"]);
  });

  it("rejects an empty configuration and keeps the previous one", () => {
    const storage = fakeStorage();
    saveColumns(["Modality"], storage);
    expect(saveColumns(["", "  "], storage)).toEqual(["Modality"]);
    expect(loadColumns(storage)).toEqual(["Modality"]);
  });

  it("ignores damaged stored state", () => {
    const storage = fakeStorage();
    storage.setItem("curator.columns", "{not json");
    expect(loadColumns(storage)).toEqual(DEFAULT_COLUMNS);
    storage.setItem("curator.columns", "[]");
    expect(loadColumns(storage)).toEqual(DEFAULT_COLUMNS);
  });
});
