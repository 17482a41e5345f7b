// Pure edit operations on model documents.  Every operation returns a new
// document (structural sharing is fine); the server remains the validator
// of record -- these only keep the document well-formed enough to edit.

import type {
  ComponentJson,
  ConfigNode,
  ModelDocument,
  ModuleJson,
} from "./types.js";

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function componentPaths(doc: ModelDocument): string[] {
  const paths: string[] = [];
  for (const mod of doc.modules) {
    for (const sub of mod.submodules) {
      for (const comp of sub.components) {
        paths.push(`${mod.name}/${sub.name}/${comp.name}`);
      }
    }
  }
  return paths;
}

export function addModule(doc: ModelDocument, name: string): ModelDocument {
  const next = clone(doc);
  next.modules.push({ name, submodules: [] });
  return next;
}

export function addSubmodule(
  doc: ModelDocument,
  moduleName: string,
  name: string,
): ModelDocument {
  const next = clone(doc);
  const mod = next.modules.find((m: ModuleJson) => m.name === moduleName);
  if (!mod) throw new Error(`no module named ${moduleName}`);
  mod.submodules.push({ name, components: [] });
  return next;
}

export function addComponent(
  doc: ModelDocument,
  moduleName: string,
  submoduleName: string,
  component: ComponentJson,
): ModelDocument {
  const next = clone(doc);
  const mod = next.modules.find((m: ModuleJson) => m.name === moduleName);
  const sub = mod?.submodules.find((s) => s.name === submoduleName);
  if (!sub) throw new Error(`no submodule ${moduleName}/${submoduleName}`);
  sub.components.push(component);
  const path = `${moduleName}/${submoduleName}/${component.name}`;
  next.configuration = appendLeaf(next.configuration, path);
  return next;
}

export function deleteComponent(doc: ModelDocument, path: string): ModelDocument {
  const next = clone(doc);
  const [moduleName, submoduleName, componentName] = path.split("/");
  for (const mod of next.modules) {
    if (mod.name !== moduleName) continue;
    for (const sub of mod.submodules) {
      if (sub.name !== submoduleName) continue;
      sub.components = sub.components.filter((c) => c.name !== componentName);
    }
  }
  if (next.configuration) {
    next.configuration = removeLeaf(next.configuration, path) ?? undefined;
  }
  if (next.excluded) {
    next.excluded = next.excluded.filter((p) => p !== path);
    if (next.excluded.length === 0) delete next.excluded;
  }
  return next;
}

export function updateComponent(
  doc: ModelDocument,
  path: string,
  changes: Partial<ComponentJson>,
): ModelDocument {
  const next = clone(doc);
  const [moduleName, submoduleName, componentName] = path.split("/");
  for (const mod of next.modules) {
    if (mod.name !== moduleName) continue;
    for (const sub of mod.submodules) {
      if (sub.name !== submoduleName) continue;
      for (let i = 0; i < sub.components.length; i++) {
        if (sub.components[i].name === componentName) {
          sub.components[i] = { ...sub.components[i], ...changes };
        }
      }
    }
  }
  return next;
}

function appendLeaf(config: ConfigNode | undefined, ref: string): ConfigNode {
  const leaf: ConfigNode = { type: "leaf", ref };
  if (!config) return { type: "series", children: [leaf] };
  if (config.type === "leaf") return { type: "series", children: [config, leaf] };
  return { ...config, children: [...config.children, leaf] };
}

function removeLeaf(node: ConfigNode, ref: string): ConfigNode | null {
  if (node.type === "leaf") return node.ref === ref ? null : node;
  const children = node.children
    .map((c) => removeLeaf(c, ref))
    .filter((c): c is ConfigNode => c !== null);
  if (children.length === 0) return null;
  return { ...node, children };
}

/** Flip a series group to parallel (or back) at a path of child indices. */
export function toggleGroupMode(
  doc: ModelDocument,
  indexPath: number[],
): ModelDocument {
  const next = clone(doc);
  if (!next.configuration) return next;
  let node: ConfigNode = next.configuration;
  for (const index of indexPath) {
    if (node.type === "leaf") throw new Error("index path walks through a leaf");
    node = node.children[index];
    if (!node) throw new Error("index path out of range");
  }
  if (node.type === "leaf") throw new Error("cannot toggle a leaf");
  node.type = node.type === "series" ? "parallel" : "series";
  return next;
}

export function describeConfig(node: ConfigNode | undefined): string {
  if (!node) return "(all-series default)";
  if (node.type === "leaf") return node.ref;
  const inner = node.children.map(describeConfig).join(", ");
  return `${node.type}(${inner})`;
}
