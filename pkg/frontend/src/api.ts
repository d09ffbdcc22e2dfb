/**
 * Typed client for the curator HTTP API.
 *
 * Reads flow through two guards: identical in-flight GETs share one
 * promise, and callers that re-issue a request (typing in the search box,
 * clicking facets quickly) get a sequence ticket so a slow old response
 * can never clobber a newer one.
 */

export interface FieldValue {
  kind: "kw" | "text" | "pn" | "date" | "num";
  values: (string | number)[];
}

export interface SeriesDocument {
  series_uid: string;
  study_uid: string;
  patient_id: string;
  modality: string;
  fields: Record<string, FieldValue>;
  instance_count: number;
  has_pixel_data: boolean;
  tags: string[];
  anatomical_structures: string[];
  body_part: string | null;
  ingest_time: number;
  warnings: string[];
  field_conflicts: string[];
}

export interface SeriesDetail extends SeriesDocument {
  slice_count: number;
}

export interface SearchHit extends SeriesDocument {
  score: number;
}

export interface SearchResponse {
  total: number;
  from: number;
  size: number;
  hits: SearchHit[];
  warnings: string[];
}

export interface FacetBucket {
  value: string;
  count: number;
}

export interface AggregateResponse {
  fields: Record<string, { buckets: FacetBucket[]; missing_count: number }>;
  warnings: string[];
}

export interface Completion {
  value: string;
  count: number;
}

export interface TagReportEntry {
  series_uid: string;
  status: "ok" | "unknown_series";
  tags: string[];
}

export interface DatasetSummary {
  id: string;
  name: string;
  size: number;
}

export interface DatasetDetail {
  id: string;
  name: string;
  created: number;
  series: string[];
}

export interface ApiFailure {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}

/** Thrown for any non-2xx response; carries the server's error body. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details?: Record<string, unknown>;

  constructor(status: number, body: ApiFailure) {
    super(body.message || `request failed with ${status}`);
    this.status = status;
    this.code = body.code || "unknown";
    this.details = body.details;
  }
}

/** Monotonic ticket dispenser; only the newest ticket is "current". */
export class RequestGate {
  private seq = 0;

  issue(): number {
    return ++this.seq;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }
}

export class ApiClient {
  readonly base: string;
  private inflight = new Map<string, Promise<unknown>>();

  constructor(base = "") {
    this.base = base.replace(/\/$/, "");
  }

  private url(path: string, params?: Record<string, string | number>): string {
    let full = this.base + path;
    if (params) {
      const qs = new URLSearchParams();
      for (const [key, value] of Object.entries(params)) {
        qs.set(key, String(value));
      }
      full += "?" + qs.toString();
    }
    return full;
  }

  private async getJson<T>(path: string, params?: Record<string, string | number>): Promise<T> {
    const url = this.url(path, params);
    const pending = this.inflight.get(url);
    if (pending) {
      return pending as Promise<T>;
    }
    const promise = (async () => {
      try {
        const response = await fetch(url);
        return await decode<T>(response);
      } finally {
        this.inflight.delete(url);
      }
    })();
    this.inflight.set(url, promise);
    return promise;
  }

  private async send<T>(method: string, path: string, body: unknown): Promise<T> {
    const response = await fetch(this.url(path), {
      method,
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return decode<T>(response);
  }

  search(q: string, from = 0, size = 60, sort?: string): Promise<SearchResponse> {
    const params: Record<string, string | number> = { q, from, size };
    if (sort) {
      params.sort = sort;
    }
    return this.getJson("/api/series", params);
  }

  series(uid: string): Promise<SeriesDetail> {
    return this.getJson(`/api/series/${encodeURIComponent(uid)}`);
  }

  aggregate(q: string, fields: string[]): Promise<AggregateResponse> {
    return this.getJson("/api/aggregate", { q, fields: fields.join(",") });
  }

  async aggregateCsv(q: string, field: string): Promise<Uint8Array> {
    const response = await fetch(this.url("/api/aggregate.csv", { q, field }));
    if (!response.ok) {
      throw new ApiError(response.status, await failureBody(response));
    }
    return new Uint8Array(await response.arrayBuffer());
  }

  async autocomplete(field: string, prefix: string, limit = 10): Promise<Completion[]> {
    const body = await this.getJson<{ completions: Completion[] }>(
      "/api/autocomplete", { field, prefix, limit });
    return body.completions;
  }

  async bulkTag(uids: string[], add: string[], remove: string[]): Promise<TagReportEntry[]> {
    const body = await this.send<{ report: TagReportEntry[] }>(
      "POST", "/api/tags/bulk", { uids, add, remove });
    return body.report;
  }

  async datasets(): Promise<DatasetSummary[]> {
    const body = await this.getJson<{ datasets: DatasetSummary[] }>("/api/datasets");
    return body.datasets;
  }

  createDataset(name: string): Promise<DatasetDetail> {
    return this.send("POST", "/api/datasets", { name });
  }

  addToDataset(id: string, uids: string[]): Promise<{ added: number; removed: number; ignored: string[] }> {
    return this.send("PATCH", `/api/datasets/${encodeURIComponent(id)}/series`,
      { add: uids, remove: [] });
  }

  thumbnailUrl(uid: string): string {
    return this.url(`/api/series/${encodeURIComponent(uid)}/thumbnail.png`);
  }

  sliceUrl(uid: string, position: number): string {
    return this.url(`/api/series/${encodeURIComponent(uid)}/slices/${position}.png`);
  }
}

async function failureBody(response: Response): Promise<ApiFailure> {
  try {
    return (await response.json()) as ApiFailure;
  } catch {
    return { code: "unreachable", message: `HTTP ${response.status}` };
  }
}

async function decode<T>(response: Response): Promise<T> {
  if (!response.ok) {
    throw new ApiError(response.status, await failureBody(response));
  }
  return (await response.json()) as T;
}
