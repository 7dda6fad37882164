/** Single application store; every view renders from this state alone. */

import type { NapRecord } from "./types";

export type ViewName = "overview" | "compare" | "image";

export interface Filters {
  label: string;
  prediction: string;
  mispredictedOnly: boolean;
}

/** A pinned pattern carries everything Compare needs, so pins survive
 * navigation anywhere (other layers, other models). */
export interface PinnedNap {
  model: string;
  layer: string;
  featureNames: string[];
  nap: NapRecord;
}

export interface ViewState {
  view: ViewName;
  model: string | null;
  layer: string | null;
  filters: Filters;
  pins: PinnedNap[];
  sampleId: number | null;
  topK: number;
}

export function initialState(): ViewState {
  return {
    view: "overview",
    model: null,
    layer: null,
    filters: { label: "", prediction: "", mispredictedOnly: false },
    pins: [],
    sampleId: null,
    topK: 5,
  };
}

/** Pins are unique per (model, nap_id): the same pattern from two models can
 * be pinned side by side. */
export function pinKey(model: string, napId: string): string {
  return JSON.stringify([model, napId]);
}

type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState;
  private listeners: Listener[] = [];

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  isPinned(model: string, napId: string): boolean {
    const key = pinKey(model, napId);
    return this.state.pins.some((p) => pinKey(p.model, p.nap.nap_id) === key);
  }

  pin(entry: PinnedNap): void {
    if (this.isPinned(entry.model, entry.nap.nap_id)) return;
    this.update({ pins: [...this.state.pins, entry] });
  }

  unpin(model: string, napId: string): void {
    const key = pinKey(model, napId);
    this.update({
      pins: this.state.pins.filter((p) => pinKey(p.model, p.nap.nap_id) !== key),
    });
  }
}
