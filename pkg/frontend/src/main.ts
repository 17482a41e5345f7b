// Console entry point: tab wiring, stream subscriptions, chart refresh.
// Charts render only values received on the event streams; the console does
// no reliability arithmetic beyond the labeled chained-POTC estimate.

import { getModel, getStatus, startAnalysis, stopAnalysis } from "./api.js";
import { BindingPanel } from "./bindings.js";
import { LineChart, SeriesStore } from "./charts.js";
import { ModelEditor } from "./model_editor.js";
import { componentPaths } from "./model_ops.js";
import { subscribeStream } from "./stream.js";
import { WhatIfPanel } from "./whatif.js";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function wireTabs(): void {
  const tabs = Array.from(document.querySelectorAll<HTMLElement>(".tab"));
  const panels = Array.from(document.querySelectorAll<HTMLElement>(".panel"));
  for (const tab of tabs) {
    tab.addEventListener("click", () => {
      for (const other of tabs) other.classList.toggle("active", other === tab);
      for (const panel of panels) {
        panel.classList.toggle("active", panel.id === `panel-${tab.dataset.panel}`);
      }
    });
  }
}

async function refreshStatus(): Promise<void> {
  try {
    const status = await getStatus();
    byId("status-line").textContent =
      `${status.model} - ${status.state} - ${status.elapsed_hours.toFixed(4)} usage hours` +
      ` - ${status.snapshot_count} snapshots - ${status.bindings} bindings`;
  } catch (err) {
    byId("status-line").textContent = `status unavailable: ${String(err)}`;
  }
}

function main(): void {
  wireTabs();

  const editor = new ModelEditor(byId("model-tree"), byId("model-errors"));
  void editor.load();

  const hazardStore = new SeriesStore();
  const reliabilityStore = new SeriesStore();
  const potcStore = new SeriesStore();
  const hazardChart = new LineChart(
    byId<HTMLCanvasElement>("chart-hazard"), "hazard rate (per hour)");
  const reliabilityChart = new LineChart(
    byId<HTMLCanvasElement>("chart-reliability"), "reliability");
  const potcChart = new LineChart(
    byId<HTMLCanvasElement>("chart-potc"), "probability of task completion");

  subscribeStream("/api/stream/hazard", (event) => {
    hazardStore.append(event.t, event.nominal, event.sensor);
  }, (up) => setStreamState("hazard", up));
  subscribeStream("/api/stream/reliability", (event) => {
    reliabilityStore.append(event.t, event.nominal, event.sensor);
  }, (up) => setStreamState("reliability", up));
  subscribeStream("/api/stream/potc", (event) => {
    potcStore.append(event.t, event.nominal, event.sensor);
  }, (up) => setStreamState("potc", up));

  function setStreamState(name: string, connected: boolean): void {
    const node = byId(`stream-${name}`);
    node.textContent = `${name}: ${connected ? "live" : "reconnecting"}`;
    node.className = connected ? "stream ok" : "stream down";
  }

  setInterval(() => {
    hazardChart.render(hazardStore);
    reliabilityChart.render(reliabilityStore);
    potcChart.render(potcStore);
  }, 500);
  setInterval(() => void refreshStatus(), 2000);
  void refreshStatus();

  byId("start-analysis").addEventListener("click", () => {
    void startAnalysis().then(refreshStatus).catch((err) => {
      byId("status-line").textContent = String(err);
    });
  });
  byId("stop-analysis").addEventListener("click", () => {
    void stopAnalysis().then(refreshStatus).catch((err) => {
      byId("status-line").textContent = String(err);
    });
  });

  new WhatIfPanel(byId("whatif-root"));

  const bindingPanel = new BindingPanel(byId("binding-root"));
  void bindingPanel.refresh();
  void getModel().then((doc) => bindingPanel.setComponentPaths(componentPaths(doc)));
}

document.addEventListener("DOMContentLoaded", main);
