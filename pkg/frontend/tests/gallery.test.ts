/** @vitest-environment jsdom */
import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient, SearchHit } from "../src/api.js";
import { renderGallery } from "../src/gallery.js";
import { texts } from "./dom.js";

const api = new ApiClient("http://backend");

function hit(uid: string, tags: string[] = []): SearchHit {
  return {
    series_uid: uid,
    study_uid: "1.2",
    patient_id: "P001",
    modality: "CT",
    fields: { ConvolutionKernel: { kind: "kw", values: ["B30f"] } },
    instance_count: 3,
    has_pixel_data: true,
    tags,
    anatomical_structures: [],
    body_part: null,
    ingest_time: 0,
    warnings: [],
    field_conflicts: {},
    score: 1,
  };
}

function handlers() {
  return {
    onOpen: vi.fn(),
    onToggleSelect: vi.fn(),
    onRangeSelect: vi.fn(),
  };
}

describe("renderGallery", () => {
  let host: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<section id="gallery"></section>';
    host = document.getElementById("gallery") as HTMLElement;
  });

  it("renders one card per hit", () => {
    const hits = Array.from({ length: 7 }, (_, i) => hit(`1.2.${i}`));
    renderGallery(host, api, hits, ["Modality"], new Set(), handlers());
    expect(host.querySelectorAll(".card")).toHaveLength(7);
  });

  it("shows an empty note instead of a blank grid", () => {
    renderGallery(host, api, [], ["Modality"], new Set(), handlers());
    expect(host.querySelector(".empty-note")?.textContent).toContain("No series");
  });

  it("marks selected cards and checks their boxes", () => {
    renderGallery(host, api, [hit("1.2.0"), hit("1.2.1")], ["Modality"], new Set(["1.2.1"]), handlers());
    const cards = host.querySelectorAll(".card");
    expect(cards[0].classList.contains("selected")).toBe(false);
    expect(cards[1].classList.contains("selected")).toBe(true);
    expect((cards[1].querySelector(".card-check") as HTMLInputElement).checked).toBe(true);
  });

  it("renders the configured metadata columns in order", () => {
    renderGallery(host, api, [hit("1.2.0")], ["Modality", "ConvolutionKernel"], new Set(), handlers());
    expect(texts(".meta-label", host)).toEqual(["Modality", "ConvolutionKernel"]);
    expect(texts(".card-meta .meta-value", host)).toEqual(["CT", "B30f"]);
  });

  it("renders tag chips", () => {
    renderGallery(host, api, [hit("1.2.0", ["reviewed", "qc:pass"])], ["Modality"], new Set(), handlers());
    expect(texts(".chip", host)).toEqual(["reviewed", "qc:pass"]);
  });

  it("routes plain, ctrl, and shift clicks to the right handlers", () => {
    const h = handlers();
    renderGallery(host, api, [hit("1.2.0")], ["Modality"], new Set(), h);
    const card = host.querySelector(".card") as HTMLElement;

    card.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(h.onOpen).toHaveBeenCalledWith("1.2.0");

    card.dispatchEvent(new MouseEvent("click", { bubbles: true, ctrlKey: true }));
    expect(h.onToggleSelect).toHaveBeenCalledWith("1.2.0");

    card.dispatchEvent(new MouseEvent("click", { bubbles: true, shiftKey: true }));
    expect(h.onRangeSelect).toHaveBeenCalledWith("1.2.0");
  });

  it("treats the checkbox as select, not open", () => {
    const h = handlers();
    renderGallery(host, api, [hit("1.2.0")], ["Modality"], new Set(), h);
    const check = host.querySelector(".card-check") as HTMLInputElement;
    check.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(h.onToggleSelect).toHaveBeenCalledWith("1.2.0");
    expect(h.onOpen).not.toHaveBeenCalled();
  });

  it("swaps a failed thumbnail for a placeholder glyph", () => {
    renderGallery(host, api, [hit("1.2.0")], ["Modality"], new Set(), handlers());
    const img = host.querySelector(".thumb img") as HTMLImageElement;
    img.dispatchEvent(new Event("error"));
    expect(host.querySelector(".thumb img")).toBeNull();
    expect(host.querySelector(".thumb-placeholder")?.textContent).toBe("∅");
  });

  it("points thumbnails at the documented endpoint", () => {
    renderGallery(host, api, [hit("1.2.0")], ["Modality"], new Set(), handlers());
    const img = host.querySelector(".thumb img") as HTMLImageElement;
    expect(img.src).toBe("http://backend/api/series/1.2.0/thumbnail.png");
  });
});
