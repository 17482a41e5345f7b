// Robot design tab: tree editing over the model document, saved with PUT.
// Server-side validation failures surface inline at the top of the panel;
// the document in the editor is always the client's working copy.

import { getModel, putModel, validateModel } from "./api.js";
import {
  addComponent,
  addModule,
  addSubmodule,
  deleteComponent,
  describeConfig,
  toggleGroupMode,
  updateComponent,
} from "./model_ops.js";
import type { ComponentJson, ConfigNode, ModelDocument } from "./types.js";

export class ModelEditor {
  private doc: ModelDocument | null = null;
  private readonly root: HTMLElement;
  private readonly errors: HTMLElement;
  private dirty = false;

  constructor(root: HTMLElement, errors: HTMLElement) {
    this.root = root;
    this.errors = errors;
  }

  async load(): Promise<void> {
    this.doc = await getModel();
    this.dirty = false;
    this.render();
  }

  private apply(next: ModelDocument): void {
    this.doc = next;
    this.dirty = true;
    this.render();
  }

  private async save(): Promise<void> {
    if (!this.doc) return;
    this.errors.textContent = "";
    try {
      const verdict = await validateModel(this.doc);
      if (!verdict.ok) {
        this.showErrors(verdict.diagnostics);
        return;
      }
      await putModel(this.doc);
      await this.load();
      this.errors.textContent = "saved";
      this.errors.className = "notice ok";
    } catch (err) {
      this.showErrors([String(err instanceof Error ? err.message : err)]);
    }
  }

  private showErrors(diagnostics: string[]): void {
    this.errors.className = "notice error";
    this.errors.textContent = diagnostics.join("\n");
  }

  private render(): void {
    const doc = this.doc;
    this.root.textContent = "";
    if (!doc) {
      this.root.textContent = "loading model...";
      return;
    }

    const header = el("div", "editor-header");
    header.append(el("h3", "", `${doc.name} - ${doc.modules.length} modules`));
    const saveButton = button(this.dirty ? "save changes" : "saved", () => this.save());
    saveButton.disabled = !this.dirty;
    const addModuleButton = button("add module", () => {
      const name = prompt("module name");
      if (name) this.apply(addModule(doc, name));
    });
    header.append(saveButton, addModuleButton);
    this.root.append(header);

    for (const mod of doc.modules) {
      const modBox = el("div", "module");
      modBox.append(el("div", "module-name", mod.name));
      const addSubButton = button("+ submodule", () => {
        const name = prompt("submodule name");
        if (name) this.apply(addSubmodule(doc, mod.name, name));
      });
      modBox.append(addSubButton);
      for (const sub of mod.submodules) {
        const subBox = el("div", "submodule");
        subBox.append(el("div", "submodule-name", sub.name));
        subBox.append(button("+ component", () => {
          const comp = promptComponent();
          if (comp) this.apply(addComponent(doc, mod.name, sub.name, comp));
        }));
        for (const comp of sub.components) {
          subBox.append(this.componentRow(doc, mod.name, sub.name, comp));
        }
        modBox.append(subBox);
      }
      this.root.append(modBox);
    }

    const configBox = el("div", "config");
    configBox.append(el("div", "module-name", "configuration"));
    configBox.append(el("pre", "config-text", describeConfig(doc.configuration)));
    this.root.append(configBox);
    if (doc.configuration && doc.configuration.type !== "leaf") {
      this.renderConfigToggles(configBox, doc.configuration, []);
    }
  }

  private renderConfigToggles(
    parent: HTMLElement,
    node: ConfigNode,
    indexPath: number[],
  ): void {
    if (node.type === "leaf") return;
    const row = el("div", "config-toggle");
    row.append(
      button(`${node.type} group [${indexPath.join(".") || "root"}] - toggle`, () => {
        if (this.doc) this.apply(toggleGroupMode(this.doc, indexPath));
      }),
    );
    parent.append(row);
    node.children.forEach((child, i) => {
      this.renderConfigToggles(parent, child, [...indexPath, i]);
    });
  }

  private componentRow(
    doc: ModelDocument,
    moduleName: string,
    submoduleName: string,
    comp: ComponentJson,
  ): HTMLElement {
    const path = `${moduleName}/${submoduleName}/${comp.name}`;
    const row = el("div", "component");
    row.append(el("span", "component-name", comp.name));
    row.append(el("span", "component-kind", comp.kind));

    const quantity = document.createElement("input");
    quantity.type = "number";
    quantity.min = "1";
    quantity.value = String(comp.quantity);
    quantity.addEventListener("change", () => {
      const value = parseInt(quantity.value, 10);
      if (Number.isFinite(value) && value >= 1) {
        this.apply(updateComponent(doc, path, { quantity: value }));
      }
    });
    row.append(quantity);
    row.append(button("delete", () => this.apply(deleteComponent(doc, path))));
    return row;
  }
}

function promptComponent(): ComponentJson | null {
  const name = prompt("component name");
  if (!name) return null;
  const rate = prompt("base failure rate (per hour)", "1e-6");
  if (!rate) return null;
  return {
    name,
    kind: "custom",
    quantity: 1,
    params: { base_rate: { value: Number(rate), unit: "per_hour" } },
  };
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(label: string, onClick: () => void): HTMLButtonElement {
  const node = document.createElement("button");
  node.textContent = label;
  node.addEventListener("click", onClick);
  return node;
}
