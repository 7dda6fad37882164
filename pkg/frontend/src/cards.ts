/** Pattern cards: the unit of display in the overview grid.
 *
 * A card shows a pattern exactly as the API describes it — member thumbnails
 * in member order, persistence, the label make-up — plus a pin button that
 * sends it to the Compare view.
 */

import { assetUrl } from "./api";
import { formatPersistence } from "./format";
import { shortNapId } from "./format";
import type { Store } from "./state";
import { isMispredicted } from "./types";
import type { NapRecord, SampleRecord } from "./types";

export type SampleIndex = Map<number, SampleRecord>;

export function buildSampleIndex(samples: SampleRecord[]): SampleIndex {
  return new Map(samples.map((s) => [s.sample_id, s]));
}

export interface CardContext {
  model: string;
  layer: string;
  featureNames: string[];
  samples: SampleIndex;
  topK: number;
  store: Store;
}

/** ⚠ marker for a sample whose prediction disagrees with its label. */
function mispredictIcon(sample: SampleRecord): HTMLElement {
  const icon = document.createElement("span");
  icon.className = "mispredict-icon";
  icon.textContent = "⚠";
  icon.title = `label ${sample.label} ≠ prediction ${sample.prediction}`;
  return icon;
}

/** Thumbnail for one member sample; placeholder when it has no image. */
export function memberThumb(sampleId: number, index: SampleIndex): HTMLElement {
  const sample = index.get(sampleId);
  const cell = document.createElement("figure");
  cell.className = "thumb";
  cell.dataset.sampleId = String(sampleId);

  if (sample?.image_ref) {
    const img = document.createElement("img");
    img.src = assetUrl(sample.image_ref);
    img.alt = `sample ${sampleId}`;
    img.loading = "lazy";
    img.addEventListener("error", () => {
      const fallback = document.createElement("div");
      fallback.className = "thumb-placeholder";
      fallback.textContent = `#${sampleId}`;
      img.replaceWith(fallback);
    });
    cell.appendChild(img);
  } else {
    const placeholder = document.createElement("div");
    placeholder.className = "thumb-placeholder";
    placeholder.textContent = `#${sampleId}`;
    cell.appendChild(placeholder);
  }
  if (sample && isMispredicted(sample)) {
    cell.appendChild(mispredictIcon(sample));
  }
  const caption = document.createElement("figcaption");
  caption.textContent = sample?.label ?? `#${sampleId}`;
  cell.appendChild(caption);
  return cell;
}

/** Member thumbnails, preserving the API's member order. */
export function memberStrip(
  memberIds: number[],
  index: SampleIndex,
  topK: number,
): HTMLElement {
  const strip = document.createElement("div");
  strip.className = "member-strip";
  for (const sampleId of memberIds.slice(0, topK)) {
    strip.appendChild(memberThumb(sampleId, index));
  }
  if (memberIds.length > topK) {
    const more = document.createElement("span");
    more.className = "member-more";
    more.textContent = `+${memberIds.length - topK}`;
    strip.appendChild(more);
  }
  return strip;
}

/** Label histogram as chips, most frequent first (ties by label). */
export function labelChips(histogram: Record<string, number>): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "label-chips";
  const entries = Object.entries(histogram).sort(
    (a, b) => b[1] - a[1] || a[0].localeCompare(b[0]),
  );
  for (const [label, count] of entries) {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.dataset.label = label;
    chip.textContent = `${label} ×${count}`;
    wrap.appendChild(chip);
  }
  return wrap;
}

export function pinButton(nap: NapRecord, ctx: CardContext): HTMLButtonElement {
  const btn = document.createElement("button");
  btn.className = "pin-btn";
  btn.type = "button";
  const sync = (): void => {
    const pinned = ctx.store.isPinned(ctx.model, nap.nap_id);
    btn.textContent = pinned ? "Unpin" : "Pin";
    btn.classList.toggle("pinned", pinned);
  };
  btn.addEventListener("click", () => {
    if (ctx.store.isPinned(ctx.model, nap.nap_id)) {
      ctx.store.unpin(ctx.model, nap.nap_id);
    } else {
      ctx.store.pin({
        model: ctx.model,
        layer: ctx.layer,
        featureNames: ctx.featureNames,
        nap,
      });
    }
    sync();
  });
  sync();
  return btn;
}

export function napCard(nap: NapRecord, ctx: CardContext): HTMLElement {
  const card = document.createElement("article");
  card.className = "nap-card";
  card.dataset.napId = nap.nap_id;

  const header = document.createElement("header");
  header.className = "nap-card-header";

  const title = document.createElement("strong");
  title.className = "nap-title";
  title.textContent = shortNapId(nap.nap_id);
  header.appendChild(title);

  const persistence = document.createElement("span");
  persistence.className = "nap-persistence";
  persistence.title = "persistence";
  persistence.textContent = `π ${formatPersistence(nap.persistence)}`;
  header.appendChild(persistence);

  const size = document.createElement("span");
  size.className = "nap-size";
  size.textContent = `${nap.n_members} samples`;
  header.appendChild(size);

  header.appendChild(pinButton(nap, ctx));
  card.appendChild(header);

  card.appendChild(memberStrip(nap.member_sample_ids, ctx.samples, ctx.topK));
  card.appendChild(labelChips(nap.label_histogram));

  if (nap.misprediction_count > 0) {
    const note = document.createElement("div");
    note.className = "mispredict-note";
    note.textContent = `⚠ ${nap.misprediction_count} mispredicted`;
    card.appendChild(note);
  }
  return card;
}
