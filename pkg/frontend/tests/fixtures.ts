/** Shared fixture builders mirroring the documents the HTTP API serves. */

import type {
  FeatureStatsDoc,
  LayerEntry,
  NapRecord,
  NapSetDoc,
  SampleRecord,
} from "../src/types";

export function makeStats(nFeatures: number): FeatureStatsDoc {
  const ramp = (base: number): number[] =>
    Array.from({ length: nFeatures }, (_, i) => Number((base + i * 0.01).toFixed(4)));
  return {
    mean: ramp(0.05),
    min: ramp(-0.9),
    max: ramp(0.6),
    q1: ramp(-0.4),
    median: ramp(0.0),
    q3: ramp(0.35),
  };
}

export const FEATURE_NAMES = ["unit0.mean", "unit1.mean", "unit2.mean"];

export function makeNap(
  clusterLabel: number,
  overrides: Partial<NapRecord> = {},
): NapRecord {
  const members = overrides.member_sample_ids ?? [3, 1, 4, 1 + 4, 9, 2, 6];
  return {
    nap_id: `bars-toy/dense/${clusterLabel}`,
    layer_id: "dense",
    cluster_label: clusterLabel,
    member_sample_ids: members,
    member_strengths: members.map(() => 1.0),
    n_members: members.length,
    persistence: 1.5,
    stats: makeStats(FEATURE_NAMES.length),
    label_histogram: { "red-h": members.length },
    prediction_histogram: { "red-h": members.length },
    misprediction_count: 0,
    ...overrides,
  };
}

export function makeNapSet(naps: NapRecord[], overrides: Partial<NapSetDoc> = {}): NapSetDoc {
  return {
    model_id: "bars-toy",
    layer_id: "dense",
    aggregation: "mean",
    params: { min_cluster_size: 5, min_samples: 5, selection: "leaf" },
    feature_names: FEATURE_NAMES,
    n_samples: 10,
    naps,
    noise_sample_ids: [0, 8],
    ...overrides,
  };
}

/** Samples 0..9: sample 2 is mispredicted, sample 5 has no image. */
export function makeSamples(): SampleRecord[] {
  return Array.from({ length: 10 }, (_, i) => {
    const label = i % 2 === 0 ? "red-h" : "green-v";
    const record: SampleRecord = {
      sample_id: i,
      label,
      prediction: i === 2 ? "green-v" : label,
    };
    if (i !== 5) record.image_ref = `images/${i}.png`;
    return record;
  });
}

export function makeLayer(
  layerId: string,
  order: number,
  overrides: Partial<LayerEntry> = {},
): LayerEntry {
  return {
    layer_id: layerId,
    order,
    aggregation: "mean",
    params: { min_cluster_size: 5, min_samples: 5, selection: "leaf" },
    naps_file: `naps/${layerId}.json`,
    scales_file: `scales/${layerId}.json`,
    n_features: FEATURE_NAMES.length,
    n_samples: 10,
    n_naps: 3,
    n_noise: 2,
    ...overrides,
  };
}
