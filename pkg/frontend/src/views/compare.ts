/** Compare: pinned patterns side by side.
 *
 * Each pin already carries its pattern record and feature names, so this
 * view renders entirely from state — pins stay comparable while the user
 * navigates other layers or even other models.
 */

import { featureMarkRows } from "../boxmark";
import { labelChips } from "../cards";
import { formatPersistence } from "../format";
import { pinKey, type PinnedNap, type Store } from "../state";

const FEATURES_SHOWN = 16;

function comparePanel(pin: PinnedNap, store: Store): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "compare-panel";
  panel.dataset.pinKey = pinKey(pin.model, pin.nap.nap_id);

  const header = document.createElement("header");
  header.className = "compare-header";

  const title = document.createElement("strong");
  title.className = "compare-title";
  title.textContent = `${pin.model} · ${pin.nap.layer_id}/${pin.nap.cluster_label}`;
  header.appendChild(title);

  const facts = document.createElement("span");
  facts.className = "compare-facts";
  facts.textContent =
    `π ${formatPersistence(pin.nap.persistence)} · ${pin.nap.n_members} samples` +
    (pin.nap.misprediction_count > 0 ? ` · ⚠ ${pin.nap.misprediction_count}` : "");
  header.appendChild(facts);

  const unpin = document.createElement("button");
  unpin.type = "button";
  unpin.className = "unpin-btn";
  unpin.textContent = "Unpin";
  unpin.addEventListener("click", () => store.unpin(pin.model, pin.nap.nap_id));
  header.appendChild(unpin);

  panel.appendChild(header);
  panel.appendChild(featureMarkRows(pin.featureNames, pin.nap.stats, FEATURES_SHOWN));
  panel.appendChild(labelChips(pin.nap.label_histogram));
  return panel;
}

export function renderCompare(root: HTMLElement, pins: PinnedNap[], store: Store): void {
  root.replaceChildren();
  if (pins.length === 0) {
    const empty = document.createElement("div");
    empty.className = "compare-empty";
    empty.textContent =
      "Nothing pinned yet. Pin patterns from the overview or from an image trace to compare them here.";
    root.appendChild(empty);
    return;
  }
  const rail = document.createElement("div");
  rail.className = "compare-rail";
  for (const pin of pins) {
    rail.appendChild(comparePanel(pin, store));
  }
  root.appendChild(rail);
}
