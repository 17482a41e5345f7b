// Wire types mirrored from the service's JSON documents and event streams.

export interface RateJson {
  value: number;
  unit: "per_hour" | "per_million_hours";
}

export interface ComponentJson {
  name: string;
  kind: string;
  quantity: number;
  params: Record<string, unknown>;
  environment?: string;
  quality?: string;
  life_model?: { family: string; beta?: number };
}

export interface SubModuleJson {
  name: string;
  components: ComponentJson[];
}

export interface ModuleJson {
  name: string;
  submodules: SubModuleJson[];
}

export type ConfigNode =
  | { type: "leaf"; ref: string }
  | { type: "series" | "parallel"; children: ConfigNode[] };

export interface ModelDocument {
  schema_version: number;
  name: string;
  unit_preferences?: { speed_unit?: string; time_unit?: string };
  life_model_default?: { family: string; beta?: number };
  modules: ModuleJson[];
  excluded?: string[];
  configuration?: ConfigNode;
}

// One line on any of the three event streams.
export interface StreamEvent {
  seq: number;
  wall: number;
  t: number;
  nominal: number | null;
  sensor: number | null;
  failed: boolean;
  kind?: string;
  task_id?: string;
  dropped: number;
}

export interface PredictResponse {
  task_id: string;
  task_time: number;
  task_positions: number[][];
  predicted_duration_hours: number;
  predicted_potc_nominal: number;
  predicted_potc_sensor: number;
  elapsed_hours_at_predict: number;
}

export interface BindingJson {
  sensor_id: string;
  target_path: string;
  target_factor: string;
  curve: [number, number][];
}

export interface StatusJson {
  state: "idle" | "running" | "stopped";
  tick_period: number;
  time_scale: number;
  elapsed_hours: number;
  snapshot_count: number;
  bindings: number;
  model: string;
}
