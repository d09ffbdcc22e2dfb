/** Pure geometry for the sidebar bar charts: linear scale, widest bar 100%. */

import type { FacetBucket } from "./api.js";

export interface Bar {
  value: string;
  count: number;
  /** 0..1 fraction of the widest bucket (linear, so 90 vs 10 reads as 9x) */
  fraction: number;
}

export function barsFor(buckets: FacetBucket[], missingCount = 0): Bar[] {
  const rows: { value: string; count: number }[] = [...buckets];
  if (missingCount > 0) {
    rows.push({ value: "__missing__", count: missingCount });
  }
  const max = rows.reduce((m, b) => Math.max(m, b.count), 0);
  if (max === 0) {
    return [];
  }
  return rows.map((b) => ({ value: b.value, count: b.count, fraction: b.count / max }));
}

/** Extract metadata values for a card line; joins multi-valued fields. */
export function displayValue(
  doc: {
    series_uid: string;
    modality: string;
    patient_id: string;
    instance_count: number;
    tags: string[];
    anatomical_structures: string[];
    body_part: string | null;
    fields: Record<string, { values: (string | number)[] }>;
  },
  column: string,
): string {
  switch (column.toLowerCase()) {
    case "series_uid":
      return doc.series_uid;
    case "modality":
      return doc.modality;
    case "patientid":
    case "patient_id":
      return doc.patient_id;
    case "instance_count":
      return String(doc.instance_count);
    case "tags":
      return doc.tags.join(", ");
    case "anatomical_structures":
      return doc.anatomical_structures.join(", ");
    case "body_part":
      return doc.body_part ?? "";
    default:
      break;
  }
  for (const [name, fv] of Object.entries(doc.fields)) {
    if (name.toLowerCase() === column.toLowerCase()) {
      return fv.values.map(String).join(", ");
    }
  }
  return "";
}
