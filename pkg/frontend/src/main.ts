/** Application shell and controller.
 *
 * All data fetching lives here; the view modules are pure renderers. The
 * store is the single source of truth, and every render derives from
 * (fetched API documents, store state) alone.
 */

import { api, napsQuery, type NapFilters } from "./api";
import { buildSampleIndex, type SampleIndex } from "./cards";
import { pinKey, Store, type ViewName } from "./state";
import type {
  LayerEntry,
  ModelSummary,
  NapSetDoc,
  SampleRecord,
  TraceStep,
} from "./types";
import { renderCompare } from "./views/compare";
import { renderImageView } from "./views/imageview";
import { filtersToQuery, renderOverview } from "./views/overview";

interface ModelData {
  layers: LayerEntry[];
  samples: SampleRecord[];
  sampleIndex: SampleIndex;
}

const VIEW_LABELS: Record<ViewName, string> = {
  overview: "Overview",
  compare: "Compare",
  image: "Image",
};

class App {
  private readonly store = new Store();
  private models: ModelSummary[] = [];
  private readonly modelData = new Map<string, ModelData>();
  private readonly napSets = new Map<string, NapSetDoc>();
  private renderSeq = 0;
  private lastViewKey = "";

  private readonly modelSelect: HTMLSelectElement;
  private readonly tabButtons = new Map<ViewName, HTMLButtonElement>();
  private readonly pinBadge: HTMLSpanElement;
  private readonly errorBanner: HTMLElement;
  private readonly viewRoot: HTMLElement;

  constructor(private readonly host: HTMLElement) {
    const header = document.createElement("header");
    header.className = "app-header";

    const title = document.createElement("h1");
    title.className = "app-title";
    title.textContent = "Activation Pattern Explorer";
    header.appendChild(title);

    const modelField = document.createElement("label");
    modelField.className = "toolbar-field";
    this.modelSelect = document.createElement("select");
    this.modelSelect.className = "model-select";
    this.modelSelect.addEventListener("change", () => {
      void this.switchModel(this.modelSelect.value);
    });
    modelField.append("model ", this.modelSelect);
    header.appendChild(modelField);

    const tabs = document.createElement("nav");
    tabs.className = "view-tabs";
    this.pinBadge = document.createElement("span");
    this.pinBadge.className = "pin-badge";
    for (const view of ["overview", "compare", "image"] as const) {
      const tab = document.createElement("button");
      tab.type = "button";
      tab.className = "view-tab";
      tab.dataset.view = view;
      tab.textContent = VIEW_LABELS[view];
      if (view === "compare") tab.appendChild(this.pinBadge);
      tab.addEventListener("click", () => this.store.update({ view }));
      tabs.appendChild(tab);
      this.tabButtons.set(view, tab);
    }
    header.appendChild(tabs);

    this.errorBanner = document.createElement("div");
    this.errorBanner.className = "error-banner";
    this.errorBanner.hidden = true;

    this.viewRoot = document.createElement("main");
    this.viewRoot.className = "view-root";

    host.replaceChildren(header, this.errorBanner, this.viewRoot);
    this.store.subscribe(() => void this.render());
    window.addEventListener("hashchange", () => this.applyHash());
  }

  async boot(): Promise<void> {
    try {
      this.models = await api.models();
    } catch (err) {
      this.showError(err);
      return;
    }
    if (this.models.length === 0) {
      this.showError(new Error("the export contains no models"));
      return;
    }
    this.modelSelect.replaceChildren(
      ...this.models.map((m) => {
        const option = document.createElement("option");
        option.value = m.model_id;
        option.textContent = m.model_id;
        return option;
      }),
    );
    this.applyHash();
    const state = this.store.get();
    const model = state.model ?? this.models[0]?.model_id ?? null;
    if (model === null) return;
    const data = await this.ensureModelData(model);
    const firstLayer = data.layers[0]?.layer_id ?? null;
    this.store.update({ model, layer: this.store.get().layer ?? firstLayer });
  }

  private async switchModel(model: string): Promise<void> {
    try {
      const data = await this.ensureModelData(model);
      this.store.update({
        model,
        layer: data.layers[0]?.layer_id ?? null,
        sampleId: null,
      });
    } catch (err) {
      this.showError(err);
    }
  }

  private async ensureModelData(model: string): Promise<ModelData> {
    const cached = this.modelData.get(model);
    if (cached) return cached;
    const [layers, samplesDoc] = await Promise.all([
      api.layers(model),
      api.samples(model),
    ]);
    const ordered = [...layers].sort((a, b) => a.order - b.order);
    const data: ModelData = {
      layers: ordered,
      samples: samplesDoc.samples,
      sampleIndex: buildSampleIndex(samplesDoc.samples),
    };
    this.modelData.set(model, data);
    return data;
  }

  private async napSet(
    model: string,
    layer: string,
    filters: NapFilters,
  ): Promise<NapSetDoc> {
    const key = `${model}|${layer}|${napsQuery(filters)}`;
    const cached = this.napSets.get(key);
    if (cached) return cached;
    const doc = await api.naps(model, layer, filters);
    this.napSets.set(key, doc);
    return doc;
  }

  private showError(err: unknown): void {
    const message = err instanceof Error ? err.message : String(err);
    this.errorBanner.textContent = `Something went wrong: ${message}`;
    this.errorBanner.hidden = false;
  }

  private clearError(): void {
    this.errorBanner.hidden = true;
  }

  /** What the active view depends on; unchanged key → skip re-render so a
   * pin made in the overview doesn't reset its scroll position. */
  private viewKey(): string {
    const state = this.store.get();
    switch (state.view) {
      case "overview":
        return JSON.stringify([
          "o",
          state.model,
          state.layer,
          state.filters,
          state.topK,
        ]);
      case "compare":
        return JSON.stringify([
          "c",
          state.pins.map((p) => pinKey(p.model, p.nap.nap_id)),
        ]);
      case "image":
        return JSON.stringify(["i", state.model, state.sampleId]);
    }
  }

  private syncChrome(): void {
    const state = this.store.get();
    for (const [view, tab] of this.tabButtons) {
      tab.classList.toggle("active", view === state.view);
    }
    this.pinBadge.textContent = state.pins.length > 0 ? String(state.pins.length) : "";
    if (state.model && this.modelSelect.value !== state.model) {
      this.modelSelect.value = state.model;
    }
    const hash = this.stateToHash();
    if (window.location.hash !== hash) {
      window.history.replaceState(null, "", hash);
    }
  }

  private stateToHash(): string {
    const state = this.store.get();
    const params = new URLSearchParams();
    params.set("view", state.view);
    if (state.model) params.set("model", state.model);
    if (state.layer) params.set("layer", state.layer);
    if (state.sampleId !== null) params.set("sample", String(state.sampleId));
    return "#" + params.toString();
  }

  private applyHash(): void {
    const raw = window.location.hash.replace(/^#/, "");
    if (!raw) return;
    const params = new URLSearchParams(raw);
    const patch: Parameters<Store["update"]>[0] = {};
    const view = params.get("view");
    if (view === "overview" || view === "compare" || view === "image") {
      patch.view = view;
    }
    const model = params.get("model");
    if (model) patch.model = model;
    const layer = params.get("layer");
    if (layer) patch.layer = layer;
    const sample = params.get("sample");
    if (sample !== null && Number.isInteger(Number(sample))) {
      patch.sampleId = Number(sample);
    }
    if (Object.keys(patch).length > 0) this.store.update(patch);
  }

  private async pinFromTrace(step: TraceStep): Promise<void> {
    const state = this.store.get();
    if (!state.model) return;
    try {
      const doc = await this.napSet(state.model, step.layer_id, {});
      const nap = doc.naps.find((n) => n.nap_id === step.nap_id);
      if (!nap) return;
      this.store.pin({
        model: state.model,
        layer: step.layer_id,
        featureNames: doc.feature_names,
        nap,
      });
    } catch (err) {
      this.showError(err);
    }
  }

  private async render(): Promise<void> {
    this.syncChrome();
    const key = this.viewKey();
    if (key === this.lastViewKey) return;
    const seq = ++this.renderSeq;
    const state = this.store.get();
    if (!state.model) return;

    try {
      switch (state.view) {
        case "compare": {
          this.lastViewKey = key;
          renderCompare(this.viewRoot, state.pins, this.store);
          break;
        }
        case "overview": {
          const data = await this.ensureModelData(state.model);
          const layer = state.layer ?? data.layers[0]?.layer_id;
          if (layer === undefined) {
            this.showError(new Error("the model has no analyzed layers"));
            return;
          }
          const napSet = await this.napSet(
            state.model,
            layer,
            filtersToQuery(state.filters),
          );
          if (seq !== this.renderSeq) return;
          this.lastViewKey = key;
          renderOverview(
            this.viewRoot,
            {
              model: state.model,
              layers: data.layers,
              layer,
              napSet,
              samples: data.samples,
              sampleIndex: data.sampleIndex,
            },
            this.store,
            {
              onLayerChange: (next) => this.store.update({ layer: next }),
              onFiltersChange: (filters) => this.store.update({ filters }),
              onTopKChange: (topK) => this.store.update({ topK }),
            },
          );
          break;
        }
        case "image": {
          const data = await this.ensureModelData(state.model);
          let trace: TraceStep[] | null = null;
          let sample: SampleRecord | null = null;
          if (state.sampleId !== null) {
            sample = data.sampleIndex.get(state.sampleId) ?? {
              sample_id: state.sampleId,
            };
            const doc = await api.trace(state.sampleId, state.model);
            trace = doc.trace;
          }
          if (seq !== this.renderSeq) return;
          this.lastViewKey = key;
          renderImageView(
            this.viewRoot,
            { model: state.model, layers: data.layers, sample, trace },
            {
              onSampleChange: (sampleId) => this.store.update({ sampleId }),
              onPinTrace: (step) => void this.pinFromTrace(step),
            },
          );
          break;
        }
      }
      this.clearError();
    } catch (err) {
      if (seq !== this.renderSeq) return;
      this.lastViewKey = "";
      this.showError(err);
    }
  }
}

const host = document.getElementById("app");
if (host) {
  void new App(host).boot();
}
