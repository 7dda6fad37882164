/** Overview: one layer's patterns as a filterable, windowed card grid.
 *
 * Pure renderer — everything shown comes from the arguments; filtering is
 * done by the server (the filters here only describe the query to send).
 */

import type { NapFilters } from "../api";
import { napCard, type CardContext, type SampleIndex } from "../cards";
import type { Filters, Store } from "../state";
import type { LayerEntry, NapSetDoc, SampleRecord } from "../types";
import { mountVirtualGrid } from "../virtual";

export interface OverviewData {
  model: string;
  layers: LayerEntry[];
  layer: string;
  napSet: NapSetDoc;
  samples: SampleRecord[];
  sampleIndex: SampleIndex;
}

export interface OverviewHandlers {
  onLayerChange(layer: string): void;
  onFiltersChange(filters: Filters): void;
  onTopKChange(topK: number): void;
}

/** Store filters → query parameters; empty selections send nothing. */
export function filtersToQuery(filters: Filters): NapFilters {
  return {
    label: filters.label || undefined,
    prediction: filters.prediction || undefined,
    mispredicted: filters.mispredictedOnly ? true : undefined,
  };
}

export function filterSummary(filters: Filters): string {
  const parts: string[] = [];
  if (filters.label) parts.push(`label=${filters.label}`);
  if (filters.prediction) parts.push(`prediction=${filters.prediction}`);
  if (filters.mispredictedOnly) parts.push("mispredicted only");
  return parts.join(" · ");
}

function uniqueSorted(values: (string | undefined)[]): string[] {
  return [...new Set(values.filter((v): v is string => v !== undefined))].sort();
}

function labeledSelect(
  cssClass: string,
  caption: string,
  options: string[],
  selected: string,
  onChange: (value: string) => void,
): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "toolbar-field";
  wrap.append(caption + " ");
  const select = document.createElement("select");
  select.className = cssClass;
  const any = document.createElement("option");
  any.value = "";
  any.textContent = "(any)";
  select.appendChild(any);
  for (const value of options) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value;
    select.appendChild(option);
  }
  select.value = selected;
  select.addEventListener("change", () => onChange(select.value));
  wrap.appendChild(select);
  return wrap;
}

function layerTabs(data: OverviewData, handlers: OverviewHandlers): HTMLElement {
  const tabs = document.createElement("nav");
  tabs.className = "layer-tabs";
  const ordered = [...data.layers].sort((a, b) => a.order - b.order);
  for (const layer of ordered) {
    const tab = document.createElement("button");
    tab.type = "button";
    tab.className = "layer-tab";
    tab.dataset.layerId = layer.layer_id;
    tab.textContent = `${layer.layer_id} (${layer.n_naps})`;
    if (layer.layer_id === data.layer) tab.classList.add("active");
    tab.addEventListener("click", () => handlers.onLayerChange(layer.layer_id));
    tabs.appendChild(tab);
  }
  return tabs;
}

function toolbar(
  data: OverviewData,
  filters: Filters,
  topK: number,
  handlers: OverviewHandlers,
): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "overview-toolbar";

  bar.appendChild(
    labeledSelect(
      "filter-label",
      "label",
      uniqueSorted(data.samples.map((s) => s.label)),
      filters.label,
      (value) => handlers.onFiltersChange({ ...filters, label: value }),
    ),
  );
  bar.appendChild(
    labeledSelect(
      "filter-prediction",
      "prediction",
      uniqueSorted(data.samples.map((s) => s.prediction)),
      filters.prediction,
      (value) => handlers.onFiltersChange({ ...filters, prediction: value }),
    ),
  );

  const mis = document.createElement("label");
  mis.className = "toolbar-field";
  const checkbox = document.createElement("input");
  checkbox.type = "checkbox";
  checkbox.className = "filter-mispredicted";
  checkbox.checked = filters.mispredictedOnly;
  checkbox.addEventListener("change", () =>
    handlers.onFiltersChange({ ...filters, mispredictedOnly: checkbox.checked }),
  );
  mis.append(checkbox, " mispredicted only");
  bar.appendChild(mis);

  const topk = document.createElement("label");
  topk.className = "toolbar-field";
  const input = document.createElement("input");
  input.type = "number";
  input.className = "topk-input";
  input.min = "1";
  input.max = "50";
  input.value = String(topK);
  input.addEventListener("change", () => {
    const value = Number(input.value);
    if (Number.isInteger(value) && value >= 1) handlers.onTopKChange(value);
  });
  topk.append("images per card ", input);
  bar.appendChild(topk);

  return bar;
}

function activeFilterChip(filters: Filters, handlers: OverviewHandlers): HTMLElement | null {
  const summary = filterSummary(filters);
  if (!summary) return null;
  const chip = document.createElement("span");
  chip.className = "filter-chip";
  chip.append(summary + " ");
  const clear = document.createElement("button");
  clear.type = "button";
  clear.className = "filter-clear";
  clear.textContent = "×";
  clear.title = "clear filters";
  clear.addEventListener("click", () =>
    handlers.onFiltersChange({ label: "", prediction: "", mispredictedOnly: false }),
  );
  chip.appendChild(clear);
  return chip;
}

const CARD_ROW_HEIGHT = 248;
const CARD_MIN_WIDTH = 300;

export function renderOverview(
  root: HTMLElement,
  data: OverviewData,
  store: Store,
  handlers: OverviewHandlers,
): void {
  const state = store.get();
  root.replaceChildren();
  root.appendChild(layerTabs(data, handlers));
  root.appendChild(toolbar(data, state.filters, state.topK, handlers));

  const chip = activeFilterChip(state.filters, handlers);
  if (chip) root.appendChild(chip);

  const summary = document.createElement("div");
  summary.className = "overview-summary";
  summary.textContent =
    `${data.napSet.naps.length} patterns · ` +
    `${data.napSet.noise_sample_ids.length} noise samples · ` +
    `${data.napSet.n_samples} samples total`;
  root.appendChild(summary);

  const scroller = document.createElement("div");
  scroller.className = "nap-scroller";
  root.appendChild(scroller);

  const ctx: CardContext = {
    model: data.model,
    layer: data.layer,
    featureNames: data.napSet.feature_names,
    samples: data.sampleIndex,
    topK: state.topK,
    store,
  };
  const grid = mountVirtualGrid(scroller, {
    rowHeight: CARD_ROW_HEIGHT,
    minColumnWidth: CARD_MIN_WIDTH,
    renderItem: (index) => {
      const nap = data.napSet.naps[index];
      if (!nap) return document.createElement("div");
      return napCard(nap, ctx);
    },
  });
  grid.setTotal(data.napSet.naps.length);
}
