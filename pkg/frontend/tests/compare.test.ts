import { describe, expect, it } from "vitest";

import { pinKey, Store, type PinnedNap } from "../src/state";
import { renderCompare } from "../src/views/compare";
import { FEATURE_NAMES, makeNap } from "./fixtures";

function pinOf(model: string, clusterLabel: number): PinnedNap {
  const nap = makeNap(clusterLabel, {
    nap_id: `${model}/dense/${clusterLabel}`,
  });
  return { model, layer: "dense", featureNames: FEATURE_NAMES, nap };
}

function render(store: Store): HTMLElement {
  const root = document.createElement("div");
  renderCompare(root, store.get().pins, store);
  return root;
}

describe("renderCompare", () => {
  it("explains itself when nothing is pinned", () => {
    const root = render(new Store());
    expect(root.querySelector(".compare-empty")?.textContent).toContain("Nothing pinned");
    expect(root.querySelectorAll(".compare-panel")).toHaveLength(0);
  });

  it("renders one panel per pin, side by side in pin order", () => {
    const store = new Store();
    store.pin(pinOf("bars-toy", 3));
    store.pin(pinOf("bars-toy", 1));
    const root = render(store);
    const panels = [...root.querySelectorAll(".compare-panel")] as HTMLElement[];
    expect(panels.map((p) => p.dataset.pinKey)).toEqual([
      pinKey("bars-toy", "bars-toy/dense/3"),
      pinKey("bars-toy", "bars-toy/dense/1"),
    ]);
  });

  it("accepts pins from different models", () => {
    const store = new Store();
    store.pin(pinOf("model-a", 0));
    store.pin(pinOf("model-b", 0));
    const root = render(store);
    const titles = [...root.querySelectorAll(".compare-title")].map(
      (t) => t.textContent,
    );
    expect(titles[0]).toContain("model-a");
    expect(titles[1]).toContain("model-b");
  });

  it("draws each feature's five-number marks with the API's values", () => {
    const store = new Store();
    const pin = pinOf("bars-toy", 0);
    store.pin(pin);
    const root = render(store);
    const rows = [...root.querySelectorAll(".feature-row")];
    expect(rows.map((row) => (row as HTMLElement).dataset.feature)).toEqual(
      FEATURE_NAMES,
    );
    rows.forEach((row, i) => {
      const svg = row.querySelector(".boxmark")!;
      expect(Number(svg.getAttribute("data-min"))).toBe(pin.nap.stats.min[i]);
      expect(Number(svg.getAttribute("data-q1"))).toBe(pin.nap.stats.q1[i]);
      expect(Number(svg.getAttribute("data-median"))).toBe(pin.nap.stats.median[i]);
      expect(Number(svg.getAttribute("data-q3"))).toBe(pin.nap.stats.q3[i]);
      expect(Number(svg.getAttribute("data-max"))).toBe(pin.nap.stats.max[i]);
    });
  });

  it("unpin removes only the clicked pattern", () => {
    const store = new Store();
    store.pin(pinOf("bars-toy", 3));
    store.pin(pinOf("bars-toy", 1));
    let root = render(store);
    const firstUnpin = root.querySelector(".unpin-btn") as HTMLButtonElement;
    firstUnpin.click();

    expect(store.get().pins).toHaveLength(1);
    expect(store.get().pins[0]?.nap.nap_id).toBe("bars-toy/dense/1");

    root = render(store);
    const panels = [...root.querySelectorAll(".compare-panel")] as HTMLElement[];
    expect(panels).toHaveLength(1);
    expect(panels[0]?.dataset.pinKey).toBe(pinKey("bars-toy", "bars-toy/dense/1"));
  });

  it("shows persistence, member count, and labels in each panel", () => {
    const store = new Store();
    store.pin(pinOf("bars-toy", 0));
    const root = render(store);
    const facts = root.querySelector(".compare-facts")?.textContent ?? "";
    expect(facts).toContain("π 1.50");
    expect(facts).toContain("7 samples");
    expect(root.querySelector(".chip")?.textContent).toBe("red-h ×7");
  });
});
