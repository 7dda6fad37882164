/** Thin typed client for the read-only HTTP API. */

import type {
  LayerEntry,
  ModelSummary,
  NapRecord,
  NapSetDoc,
  SamplesDoc,
  TraceDoc,
} from "./types";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

/** Overridable for tests; empty means same-origin (the normal deployment). */
let baseUrl = "";

export function setBaseUrl(url: string): void {
  baseUrl = url.replace(/\/$/, "");
}

async function getJson<T>(path: string): Promise<T> {
  const response = await fetch(baseUrl + path);
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const message =
      body && typeof body.error === "string"
        ? body.error
        : `request failed with status ${response.status}`;
    throw new ApiError(response.status, message);
  }
  return body as T;
}

export interface NapFilters {
  label?: string;
  prediction?: string;
  mispredicted?: boolean;
}

export function napsQuery(filters: NapFilters): string {
  const params = new URLSearchParams();
  if (filters.label !== undefined && filters.label !== "") {
    params.set("label", filters.label);
  }
  if (filters.prediction !== undefined && filters.prediction !== "") {
    params.set("prediction", filters.prediction);
  }
  if (filters.mispredicted !== undefined) {
    params.set("mispredicted", String(filters.mispredicted));
  }
  const query = params.toString();
  return query ? `?${query}` : "";
}

export const api = {
  models(): Promise<ModelSummary[]> {
    return getJson("/api/models");
  },

  layers(model: string): Promise<LayerEntry[]> {
    return getJson(`/api/models/${encodeURIComponent(model)}/layers`);
  },

  samples(model: string): Promise<SamplesDoc> {
    return getJson(`/api/models/${encodeURIComponent(model)}/samples`);
  },

  naps(model: string, layer: string, filters: NapFilters = {}): Promise<NapSetDoc> {
    return getJson(
      `/api/models/${encodeURIComponent(model)}/layers/${encodeURIComponent(layer)}/naps` +
        napsQuery(filters),
    );
  },

  nap(model: string, layer: string, clusterLabel: number): Promise<NapRecord> {
    return getJson(
      `/api/naps/${encodeURIComponent(model)}/${encodeURIComponent(layer)}/${clusterLabel}`,
    );
  },

  trace(sampleId: number, model?: string): Promise<TraceDoc> {
    const query = model ? `?model=${encodeURIComponent(model)}` : "";
    return getJson(`/api/samples/${sampleId}/trace${query}`);
  },
};

export function assetUrl(imageRef: string): string {
  // image refs may contain subdirectories; encode each segment alone
  const encoded = imageRef.split("/").map(encodeURIComponent).join("/");
  return `${baseUrl}/assets/${encoded}`;
}
