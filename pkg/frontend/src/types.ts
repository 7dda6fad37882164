/** Document shapes served by the HTTP API (see docs/export-format.md). */

export interface ModelSummary {
  model_id: string;
  created_at: string | null;
  input_fingerprint: string | null;
  n_layers: number;
}

export interface ClusterParamsDoc {
  min_cluster_size: number;
  min_samples: number;
  selection: string;
}

export interface LayerEntry {
  layer_id: string;
  order: number;
  aggregation: string;
  params: ClusterParamsDoc;
  naps_file: string;
  scales_file: string;
  n_features: number;
  n_samples: number;
  n_naps: number;
  n_noise: number;
}

export interface FeatureStatsDoc {
  mean: number[];
  min: number[];
  max: number[];
  q1: number[];
  median: number[];
  q3: number[];
}

export interface NapRecord {
  nap_id: string;
  layer_id: string;
  cluster_label: number;
  member_sample_ids: number[];
  member_strengths: number[];
  n_members: number;
  persistence: number | null; // null encodes infinity
  stats: FeatureStatsDoc;
  label_histogram: Record<string, number>;
  prediction_histogram: Record<string, number>;
  misprediction_count: number;
}

export interface NapSetDoc {
  model_id: string;
  layer_id: string;
  aggregation: string;
  params: ClusterParamsDoc;
  feature_names: string[];
  n_samples: number;
  naps: NapRecord[];
  noise_sample_ids: number[];
}

export interface SampleRecord {
  sample_id: number;
  label?: string;
  prediction?: string;
  image_ref?: string;
}

export interface SamplesDoc {
  model_id: string;
  samples: SampleRecord[];
}

export interface TraceStep {
  layer_id: string;
  nap_id: string;
}

export interface TraceDoc {
  model_id: string;
  sample_id: number;
  trace: TraceStep[];
}

/** A sample is mispredicted when label and prediction exist and disagree. */
export function isMispredicted(s: SampleRecord): boolean {
  return s.label !== undefined && s.prediction !== undefined && s.label !== s.prediction;
}
