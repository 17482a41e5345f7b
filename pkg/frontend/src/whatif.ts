// Task what-if tab: submit a candidate task, display the service's POTC
// prediction verbatim, and keep a prognostic list whose cumulative value is
// the client-side chained product -- explicitly labeled an estimate.

import { predictTask } from "./api.js";
import { chainedEstimate, formatPotc } from "./potc_math.js";
import type { PredictResponse } from "./types.js";

interface PlannedTask {
  response: PredictResponse;
}

export class WhatIfPanel {
  private readonly root: HTMLElement;
  private readonly tasks: PlannedTask[] = [];
  private lastResponse: PredictResponse | null = null;
  private counter = 0;

  constructor(root: HTMLElement) {
    this.root = root;
    this.render();
  }

  private async predict(addToList: boolean): Promise<void> {
    const mode = (this.root.querySelector("#task-mode") as HTMLSelectElement).value;
    const valueInput = this.root.querySelector("#task-value") as HTMLInputElement;
    const speedInput = this.root.querySelector("#task-speed") as HTMLInputElement;
    const value = Number(valueInput.value);
    this.counter += 1;
    const request =
      mode === "duration"
        ? { task_id: `whatif-${this.counter}`, task_time: value }
        : {
            task_id: `whatif-${this.counter}`,
            distance: value,
            distance_unit: mode === "distance-km" ? "km" : "m",
            speed: Number(speedInput.value),
            speed_unit: mode === "distance-km" ? "km/h" : "m/s",
          };
    try {
      const response = await predictTask(request);
      this.lastResponse = response;
      if (addToList) this.tasks.push({ response });
      this.render();
    } catch (err) {
      this.toast(String(err instanceof Error ? err.message : err));
    }
  }

  private toast(message: string): void {
    const note = this.root.querySelector("#whatif-toast") as HTMLElement;
    note.textContent = message;
    note.className = "notice error";
    setTimeout(() => {
      note.textContent = "";
      note.className = "notice";
    }, 4000);
  }

  private render(): void {
    const previous = {
      mode: (this.root.querySelector("#task-mode") as HTMLSelectElement | null)?.value,
      value: (this.root.querySelector("#task-value") as HTMLInputElement | null)?.value,
      speed: (this.root.querySelector("#task-speed") as HTMLInputElement | null)?.value,
    };
    this.root.textContent = "";

    const form = document.createElement("div");
    form.className = "whatif-form";
    form.innerHTML = `
      <label>task
        <select id="task-mode">
          <option value="duration">duration (seconds)</option>
          <option value="distance-m">distance (m at m/s)</option>
          <option value="distance-km">distance (km at km/h)</option>
        </select>
      </label>
      <label>value <input id="task-value" type="number" value="${previous.value ?? "3600"}"></label>
      <label>speed <input id="task-speed" type="number" value="${previous.speed ?? "1.0"}"></label>
      <button id="task-predict">predict</button>
      <button id="task-add">predict + add to list</button>
      <div id="whatif-toast" class="notice"></div>
    `;
    this.root.append(form);
    if (previous.mode) {
      (form.querySelector("#task-mode") as HTMLSelectElement).value = previous.mode;
    }
    form.querySelector("#task-predict")!.addEventListener("click", () => {
      void this.predict(false);
    });
    form.querySelector("#task-add")!.addEventListener("click", () => {
      void this.predict(true);
    });

    const result = document.createElement("div");
    result.className = "whatif-result";
    if (this.lastResponse) {
      const r = this.lastResponse;
      result.innerHTML = `
        <h3>latest prediction (raw service values)</h3>
        <table>
          <tr><td>POTC nominal</td><td id="potc-nominal">${formatPotc(r.predicted_potc_nominal)}</td></tr>
          <tr><td>POTC sensor-based</td><td id="potc-sensor">${formatPotc(r.predicted_potc_sensor)}</td></tr>
          <tr><td>predicted duration</td><td>${r.predicted_duration_hours.toExponential(6)} h</td></tr>
          <tr><td>elapsed at predict</td><td>${r.elapsed_hours_at_predict.toExponential(6)} h</td></tr>
        </table>`;
    } else {
      result.textContent = "no prediction yet";
    }
    this.root.append(result);

    const list = document.createElement("div");
    list.className = "prognostic-list";
    const title = document.createElement("h3");
    title.textContent = `prognostic task list (${this.tasks.length})`;
    list.append(title);
    for (const task of this.tasks) {
      const row = document.createElement("div");
      row.className = "prognostic-row";
      row.textContent =
        `${task.response.task_id}: nominal ${formatPotc(task.response.predicted_potc_nominal)}` +
        ` / sensor ${formatPotc(task.response.predicted_potc_sensor)}`;
      list.append(row);
    }
    if (this.tasks.length > 0) {
      const nominalChain = chainedEstimate(
        this.tasks.map((t) => t.response.predicted_potc_nominal));
      const sensorChain = chainedEstimate(
        this.tasks.map((t) => t.response.predicted_potc_sensor));
      const chain = document.createElement("div");
      chain.className = "chain";
      chain.id = "chained-estimate";
      chain.textContent =
        `cumulative chained POTC (estimate): nominal ${formatPotc(nominalChain)}` +
        ` / sensor ${formatPotc(sensorChain)}`;
      list.append(chain);
    }
    this.root.append(list);
  }
}
