// Binding tab: attach sensors to component factors with a two-knot linear
// curve; the service validates paths and factor names.

import { listBindings, postBinding } from "./api.js";
import type { BindingJson } from "./types.js";

export class BindingPanel {
  private readonly root: HTMLElement;
  private bindings: BindingJson[] = [];
  private componentPaths: string[] = [];

  constructor(root: HTMLElement) {
    this.root = root;
  }

  setComponentPaths(paths: string[]): void {
    this.componentPaths = paths;
    this.render();
  }

  async refresh(): Promise<void> {
    try {
      this.bindings = (await listBindings()).bindings;
    } catch {
      this.bindings = [];
    }
    this.render();
  }

  private async submit(): Promise<void> {
    const get = (id: string) =>
      (this.root.querySelector(`#${id}`) as HTMLInputElement | HTMLSelectElement).value;
    const binding: BindingJson = {
      sensor_id: get("bind-sensor"),
      target_path: get("bind-path"),
      target_factor: get("bind-factor"),
      curve: [
        [Number(get("bind-x0")), Number(get("bind-m0"))],
        [Number(get("bind-x1")), Number(get("bind-m1"))],
      ],
    };
    const note = this.root.querySelector("#bind-note") as HTMLElement;
    try {
      await postBinding(binding);
      note.className = "notice ok";
      note.textContent = "binding registered";
      await this.refresh();
    } catch (err) {
      note.className = "notice error";
      note.textContent = String(err instanceof Error ? err.message : err);
    }
  }

  private render(): void {
    this.root.textContent = "";
    const form = document.createElement("div");
    form.className = "binding-form";
    const options = this.componentPaths
      .map((p) => `<option value="${p}">${p}</option>`)
      .join("");
    form.innerHTML = `
      <label>sensor id <input id="bind-sensor" value="temp-1"></label>
      <label>component <select id="bind-path">${options}</select></label>
      <label>factor <input id="bind-factor" value="piT"></label>
      <fieldset><legend>curve (reading : multiplier)</legend>
        <input id="bind-x0" type="number" value="20"> :
        <input id="bind-m0" type="number" value="1.0">
        <input id="bind-x1" type="number" value="60"> :
        <input id="bind-m1" type="number" value="2.0">
      </fieldset>
      <button id="bind-submit">bind</button>
      <div id="bind-note" class="notice"></div>
    `;
    form.querySelector("#bind-submit")!.addEventListener("click", () => {
      void this.submit();
    });
    this.root.append(form);

    const list = document.createElement("div");
    list.innerHTML = `<h3>active bindings (${this.bindings.length})</h3>`;
    for (const b of this.bindings) {
      const row = document.createElement("div");
      row.className = "binding-row";
      row.textContent =
        `${b.sensor_id} -> ${b.target_path} [${b.target_factor}] ` +
        `curve ${JSON.stringify(b.curve)}`;
      list.append(row);
    }
    this.root.append(list);
  }
}
