/** Image view: one sample's path through the network.
 *
 * Shows the sample itself, then a left-to-right strip of layers in model
 * order (earliest layer leftmost). Each layer cell names the pattern the
 * sample belongs to there — clickable, to pin it into Compare — or marks
 * the sample as noise in that layer.
 */

import { assetUrl } from "../api";
import { shortNapId } from "../format";
import { isMispredicted } from "../types";
import type { LayerEntry, SampleRecord, TraceStep } from "../types";

export interface ImageViewData {
  model: string;
  layers: LayerEntry[];
  sample: SampleRecord | null;
  /** null while nothing is selected; [] means noise in every layer. */
  trace: TraceStep[] | null;
}

export interface ImageViewHandlers {
  onSampleChange(sampleId: number): void;
  onPinTrace(step: TraceStep): void;
}

function samplePicker(
  data: ImageViewData,
  handlers: ImageViewHandlers,
): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "sample-picker";
  const field = document.createElement("label");
  field.className = "toolbar-field";
  const input = document.createElement("input");
  input.type = "number";
  input.className = "sample-input";
  input.min = "0";
  if (data.sample) input.value = String(data.sample.sample_id);
  const load = (): void => {
    const value = Number(input.value);
    if (Number.isInteger(value) && value >= 0) handlers.onSampleChange(value);
  };
  input.addEventListener("change", load);
  field.append("sample id ", input);
  bar.appendChild(field);

  const step = (delta: number): void => {
    const current = data.sample ? data.sample.sample_id : 0;
    handlers.onSampleChange(Math.max(0, current + delta));
  };
  const prev = document.createElement("button");
  prev.type = "button";
  prev.className = "sample-prev";
  prev.textContent = "◀";
  prev.addEventListener("click", () => step(-1));
  const next = document.createElement("button");
  next.type = "button";
  next.className = "sample-next";
  next.textContent = "▶";
  next.addEventListener("click", () => step(1));
  bar.append(prev, next);
  return bar;
}

function sampleCard(sample: SampleRecord): HTMLElement {
  const card = document.createElement("div");
  card.className = "sample-card";
  if (sample.image_ref) {
    const img = document.createElement("img");
    img.className = "sample-image";
    img.src = assetUrl(sample.image_ref);
    img.alt = `sample ${sample.sample_id}`;
    img.addEventListener("error", () => img.remove());
    card.appendChild(img);
  }
  const facts = document.createElement("div");
  facts.className = "sample-facts";
  const bits = [`sample ${sample.sample_id}`];
  if (sample.label !== undefined) bits.push(`label ${sample.label}`);
  if (sample.prediction !== undefined) bits.push(`predicted ${sample.prediction}`);
  facts.textContent = bits.join(" · ");
  if (isMispredicted(sample)) {
    const icon = document.createElement("span");
    icon.className = "mispredict-icon";
    icon.textContent = " ⚠";
    icon.title = "prediction disagrees with label";
    facts.appendChild(icon);
  }
  card.appendChild(facts);
  return card;
}

function traceStrip(data: ImageViewData, handlers: ImageViewHandlers): HTMLElement {
  const strip = document.createElement("div");
  strip.className = "trace-strip";
  const byLayer = new Map((data.trace ?? []).map((step) => [step.layer_id, step]));
  const ordered = [...data.layers].sort((a, b) => a.order - b.order);
  for (const layer of ordered) {
    const cell = document.createElement("div");
    cell.className = "trace-cell";
    cell.dataset.layerId = layer.layer_id;

    const name = document.createElement("div");
    name.className = "trace-layer-name";
    name.textContent = layer.layer_id;
    cell.appendChild(name);

    const step = byLayer.get(layer.layer_id);
    if (step) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "trace-step";
      chip.dataset.napId = step.nap_id;
      chip.textContent = shortNapId(step.nap_id);
      chip.title = "pin this pattern into Compare";
      chip.addEventListener("click", () => handlers.onPinTrace(step));
      cell.appendChild(chip);
    } else {
      const noise = document.createElement("span");
      noise.className = "trace-noise";
      noise.textContent = "noise";
      cell.appendChild(noise);
    }
    strip.appendChild(cell);
  }
  return strip;
}

export function renderImageView(
  root: HTMLElement,
  data: ImageViewData,
  handlers: ImageViewHandlers,
): void {
  root.replaceChildren();
  root.appendChild(samplePicker(data, handlers));

  if (!data.sample || data.trace === null) {
    const hint = document.createElement("div");
    hint.className = "image-hint";
    hint.textContent = "Enter a sample id to trace it through the model's layers.";
    root.appendChild(hint);
    return;
  }

  root.appendChild(sampleCard(data.sample));

  if (data.trace.length === 0) {
    const empty = document.createElement("div");
    empty.className = "trace-empty";
    empty.textContent =
      "This sample belongs to no pattern — it is noise in every analyzed layer.";
    root.appendChild(empty);
    return;
  }
  root.appendChild(traceStrip(data, handlers));
}
