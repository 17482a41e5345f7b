// Thin fetch wrappers over the service endpoints.  The console talks to the
// service through these and the event streams only.

import type {
  BindingJson,
  ModelDocument,
  PredictResponse,
  StatusJson,
} from "./types.js";

async function check(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new Error(detail);
  }
  return response;
}

export async function getModel(): Promise<ModelDocument> {
  const response = await check(await fetch("/api/model"));
  return response.json();
}

export async function putModel(doc: ModelDocument): Promise<void> {
  await check(
    await fetch("/api/model", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    }),
  );
}

export async function validateModel(
  doc: ModelDocument,
): Promise<{ ok: boolean; diagnostics: string[] }> {
  const response = await check(
    await fetch("/api/model/validate", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(doc),
    }),
  );
  return response.json();
}

export async function getStatus(): Promise<StatusJson> {
  const response = await check(await fetch("/api/analysis/status"));
  return response.json();
}

export async function startAnalysis(tickPeriod?: number): Promise<StatusJson> {
  const body = tickPeriod === undefined ? {} : { tick_period: tickPeriod };
  const response = await check(
    await fetch("/api/analysis/start", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }),
  );
  return response.json();
}

export async function stopAnalysis(): Promise<StatusJson> {
  const response = await check(
    await fetch("/api/analysis/stop", { method: "POST" }),
  );
  return response.json();
}

export async function predictTask(request: {
  task_id: string;
  task_time?: number;
  distance?: number;
  distance_unit?: string;
  speed?: number;
  speed_unit?: string;
}): Promise<PredictResponse> {
  const response = await check(
    await fetch("/api/task/predict", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    }),
  );
  return response.json();
}

export async function taskHistory(): Promise<{ robot_task_list: unknown[] }> {
  const response = await check(await fetch("/api/task/history"));
  return response.json();
}

export async function postBinding(binding: BindingJson): Promise<void> {
  await check(
    await fetch("/api/sensor/binding", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(binding),
    }),
  );
}

export async function listBindings(): Promise<{ bindings: BindingJson[] }> {
  const response = await check(await fetch("/api/sensor/bindings"));
  return response.json();
}

export async function getRul(
  threshold: number,
): Promise<{ rul_nominal_hours: number | null; rul_sensor_hours: number | null }> {
  const response = await check(
    await fetch(`/api/rul?threshold=${encodeURIComponent(threshold)}`),
  );
  return response.json();
}
