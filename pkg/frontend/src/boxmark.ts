/** Box-style five-number marks for per-feature activation distributions.
 *
 * Every number drawn comes straight from the API's stats arrays — the raw
 * values are also stamped onto data attributes so tests (and curious users
 * via devtools) can check the rendering against the API verbatim.
 */

import type { FeatureStatsDoc } from "./types";

export interface FiveNumber {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

export function fiveNumberAt(stats: FeatureStatsDoc, index: number): FiveNumber {
  return {
    min: stats.min[index] ?? 0,
    q1: stats.q1[index] ?? 0,
    median: stats.median[index] ?? 0,
    q3: stats.q3[index] ?? 0,
    max: stats.max[index] ?? 0,
  };
}

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 120;
const HEIGHT = 14;

/** Normalized activations live in [-1, 1]; that is the fixed drawing domain. */
export const DOMAIN: readonly [number, number] = [-1, 1];

function xScale(value: number): number {
  const [lo, hi] = DOMAIN;
  const clamped = Math.min(hi, Math.max(lo, value));
  return ((clamped - lo) / (hi - lo)) * WIDTH;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attrs)) {
    el.setAttribute(name, value);
  }
  return el;
}

export function boxMarkSvg(five: FiveNumber): SVGSVGElement {
  const svg = svgElement("svg", {
    class: "boxmark",
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    preserveAspectRatio: "none",
    "data-min": String(five.min),
    "data-q1": String(five.q1),
    "data-median": String(five.median),
    "data-q3": String(five.q3),
    "data-max": String(five.max),
  });
  const mid = HEIGHT / 2;

  // zero axis for orientation
  svg.appendChild(
    svgElement("line", {
      class: "boxmark-zero",
      x1: String(xScale(0)),
      x2: String(xScale(0)),
      y1: "0",
      y2: String(HEIGHT),
    }),
  );
  // min..max whisker
  svg.appendChild(
    svgElement("line", {
      class: "boxmark-whisker",
      x1: String(xScale(five.min)),
      x2: String(xScale(five.max)),
      y1: String(mid),
      y2: String(mid),
    }),
  );
  // q1..q3 box (kept at least faintly visible when q1 == q3)
  const x1 = xScale(five.q1);
  const x3 = xScale(five.q3);
  svg.appendChild(
    svgElement("rect", {
      class: "boxmark-box",
      x: String(x1),
      y: "2",
      width: String(Math.max(x3 - x1, 0.75)),
      height: String(HEIGHT - 4),
    }),
  );
  // median tick
  svg.appendChild(
    svgElement("line", {
      class: "boxmark-median",
      x1: String(xScale(five.median)),
      x2: String(xScale(five.median)),
      y1: "1",
      y2: String(HEIGHT - 1),
    }),
  );
  return svg;
}

/** One labeled row per feature: name on the left, box mark on the right. */
export function featureMarkRows(
  featureNames: string[],
  stats: FeatureStatsDoc,
  limit: number = featureNames.length,
): HTMLElement {
  const list = document.createElement("div");
  list.className = "feature-marks";
  const n = Math.min(limit, featureNames.length);
  for (let i = 0; i < n; i++) {
    const row = document.createElement("div");
    row.className = "feature-row";
    row.dataset.feature = featureNames[i] ?? String(i);

    const name = document.createElement("span");
    name.className = "feature-name";
    name.textContent = featureNames[i] ?? String(i);
    row.appendChild(name);

    row.appendChild(boxMarkSvg(fiveNumberAt(stats, i)));
    list.appendChild(row);
  }
  if (featureNames.length > n) {
    const more = document.createElement("div");
    more.className = "feature-more";
    more.textContent = `… ${featureNames.length - n} more features`;
    list.appendChild(more);
  }
  return list;
}
